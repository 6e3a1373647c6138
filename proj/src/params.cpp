#include "stockloan/params.hpp"

#include "stockloan/errors.hpp"

#include <cmath>
#include <sstream>

namespace stockloan {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw ParameterError(std::string(name) + " must be finite");
    }
}

}  // namespace

std::string_view to_string(RegimeTag tag) {
    return tag == RegimeTag::DividendRegime ? "DividendRegime" : "ZeroDividendRegime";
}

void validate_market(const MarketParams& market) {
    require_finite(market.r, "r");
    require_finite(market.sigma, "sigma");
    require_finite(market.delta, "delta");
    if (!(market.sigma > 0.0)) throw ParameterError("sigma must be > 0");
    if (!(market.r > 0.0)) throw ParameterError("r must be > 0");
    if (!(market.delta >= 0.0)) throw ParameterError("delta must be >= 0");
}

Regime classify_regime(const MarketParams& market, double gamma) {
    validate_market(market);
    require_finite(gamma, "gamma");

    const double excess = gamma - market.r;
    const Regime regime_value{RegimeTag::DividendRegime, market.r - gamma};

    if (market.delta > 0.0) {
        if (!(excess + market.delta >= 0.0)) {
            throw RegimeViolation("delta>0 requires γ−r+δ≥0 (gamma-r+delta>=0)");
        }
        if (!(excess >= 0.0)) {
            throw RegimeViolation("effective rate must satisfy r−γ≤0 (r-gamma<=0)");
        }
        return regime_value;
    }
    const double half_var = 0.5 * market.sigma * market.sigma;
    if (!(excess > half_var)) {
        std::ostringstream msg;
        msg << "delta=0 requires γ−r>σ²/2 (gamma-r>sigma^2/2); got gamma-r=" << excess
            << ", sigma^2/2=" << half_var;
        throw RegimeViolation(msg.str());
    }
    return {RegimeTag::ZeroDividendRegime, market.r - gamma};
}

Regime validate_contract(const MarketParams& market, const LoanTerms& terms) {
    validate_market(market);
    require_finite(terms.q, "q");
    require_finite(terms.gamma, "gamma");
    if (!(terms.q > 0.0)) throw ParameterError("q must be > 0");
    if (terms.cap) {
        require_finite(*terms.cap, "cap");
        if (!(*terms.cap > 0.0)) throw ParameterError("cap must be > 0");
        // (min(x,L)-q)+ vanishes identically for L <= q.
        if (!(*terms.cap > terms.q)) throw ParameterError("cap must be > q");
    }
    return classify_regime(market, terms.gamma);
}

Regime validate(const MarketParams& market, const LoanTerms& terms) {
    require_finite(terms.c, "c");
    require_finite(terms.s0, "s0");
    const Regime regime = validate_contract(market, terms);
    if (!(terms.s0 > 0.0)) throw ParameterError("s0 must be > 0");
    if (!(terms.s0 - terms.q + terms.c > 0.0)) {
        throw ArbitrageViolation("no-arbitrage requires s0-q+c>0");
    }
    return regime;
}

std::vector<std::string> soft_warnings(const LoanTerms& terms) {
    std::vector<std::string> out;
    if (terms.c < 0.0 || terms.c > terms.q) {
        out.emplace_back("service fee c lies outside [0, q]");
    }
    return out;
}

}  // namespace stockloan
