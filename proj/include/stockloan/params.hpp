#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stockloan {

/// Black-Scholes market: rates and yields per year, volatility per sqrt-year.
struct MarketParams {
    double r = 0.0;      ///< risk-free rate, r > 0
    double sigma = 0.0;  ///< volatility, sigma > 0
    double delta = 0.0;  ///< dividend yield, delta >= 0
};

/// Contract terms of a (capped) stock loan.
///
/// An absent cap means the loan is uncapped. The service fee c is not used by
/// valuation; it only enters the fair-terms calculus and the no-arbitrage
/// check s0 - q + c > 0.
struct LoanTerms {
    double q = 0.0;      ///< principal
    double gamma = 0.0;  ///< loan rate per year
    double c = 0.0;      ///< service fee
    std::optional<double> cap;
    double s0 = 0.0;     ///< initial stock price
};

enum class RegimeTag { DividendRegime, ZeroDividendRegime };

std::string_view to_string(RegimeTag tag);

struct Regime {
    RegimeTag tag = RegimeTag::DividendRegime;
    double r_tilde = 0.0;  ///< effective rate r - gamma
};

/// Checks sigma > 0, r > 0, delta >= 0 and finiteness. Throws ParameterError.
void validate_market(const MarketParams& market);

/// Classifies (market, gamma) into an admissible regime or throws
/// RegimeViolation naming the failed condition.
///
/// DividendRegime:     delta > 0, gamma - r + delta >= 0 and r - gamma <= 0
/// ZeroDividendRegime: delta == 0 (exactly) and gamma - r > sigma^2/2 (strictly)
Regime classify_regime(const MarketParams& market, double gamma);

/// Validates market, q, gamma and cap and classifies the regime. The initial
/// price s0 and the fee c are not consulted: valuation at an arbitrary price
/// needs only the contract.
Regime validate_contract(const MarketParams& market, const LoanTerms& terms);

/// Full validation of market and contract. Throws ParameterError,
/// RegimeViolation or ArbitrageViolation.
Regime validate(const MarketParams& market, const LoanTerms& terms);

/// Non-fatal findings about the terms (currently: fee outside [0, q]).
std::vector<std::string> soft_warnings(const LoanTerms& terms);

}  // namespace stockloan
