#pragma once

#include "stockloan/closedform.hpp"
#include "stockloan/params.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace stockloan {

/// Where the initial price sits relative to b and the cap.
enum class PriceCase {
    HighPrice,  ///< s0 >= L
    MidPrice,   ///< b <= s0 < L
    LowPrice,   ///< s0 < b (or s0 < L when L < b)
};

std::string_view to_string(PriceCase c);

struct FairTermsReport {
    PriceCase price_case = PriceCase::LowPrice;
    double fair_fee = 0.0;     ///< f(s0) − s0 + q; may be negative
    bool negative_fee = false; ///< the bank pays the client
    std::string optimal_rule;
    double b = 0.0;
    double value_at_s0 = 0.0;
    Shape shape = Shape::Uncapped;
};

/// Fee c that makes the loan fair, i.e. f(s0) = s0 − q + c.
FairTermsReport fair_fee(const MarketParams& market, double q, double gamma,
                         std::optional<double> cap, double s0);

enum class FreeParameter { Principal, LoanRate, Cap };

struct FairInputs {
    MarketParams market;
    double q = 0.0;
    double gamma = 0.0;
    std::optional<double> cap;
    double s0 = 0.0;
};

struct SolveOptions {
    std::size_t scan_points = 400;
    double fee_tol = 1e-8;
    std::size_t max_bisections = 400;
};

/// Finds the value of `free` (others fixed) whose fair fee equals target_fee:
/// scans the admissible range for a sign change, then bisects. The first
/// bracket in scan order is used when several roots exist. Throws NoBracket
/// when the scan finds no sign change.
double solve_parameter(FreeParameter free, double target_fee, const FairInputs& fixed,
                       const SolveOptions& options = {});

}  // namespace stockloan
