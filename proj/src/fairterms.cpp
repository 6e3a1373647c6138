#include "stockloan/fairterms.hpp"

#include "stockloan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stockloan {

std::string_view to_string(PriceCase c) {
    switch (c) {
    case PriceCase::HighPrice: return "HighPrice";
    case PriceCase::MidPrice: return "MidPrice";
    case PriceCase::LowPrice: return "LowPrice";
    }
    return "?";
}

FairTermsReport fair_fee(const MarketParams& market, double q, double gamma,
                         std::optional<double> cap, double s0) {
    if (!std::isfinite(s0) || !(s0 > 0.0)) throw ParameterError("s0 must be > 0");
    const ValueFunction vf = build_contract(market, q, gamma, cap);

    FairTermsReport rep;
    rep.b = vf.b();
    rep.shape = vf.shape();
    rep.value_at_s0 = value(vf, s0);

    if (cap && s0 >= *cap) {
        rep.price_case = PriceCase::HighPrice;
        const double L = *cap;
        const double ratio = std::exp(vf.exponents().lambda2 * std::log(s0 / L));
        // (L−q)(s0/L)^λ₂ + q − s0, arranged to vanish exactly at s0 = L.
        // The exact value is <= 0; the min only absorbs round-off.
        rep.fair_fee = std::min((L - q) * (ratio - 1.0) - (s0 - L), 0.0);
        rep.optimal_rule = "tau_L: wait until the discounted price falls to the cap L";
    } else if (vf.shape() != Shape::CapBelowB && s0 >= vf.b()) {
        rep.price_case = PriceCase::MidPrice;
        rep.fair_fee = 0.0;
        rep.optimal_rule = "tau_b = 0: redeem immediately";
    } else {
        rep.price_case = PriceCase::LowPrice;
        rep.fair_fee = rep.value_at_s0 - s0 + q;
        rep.optimal_rule = vf.shape() == Shape::CapBelowB
                               ? "tau_L: redeem when the discounted price first reaches the cap L"
                               : "tau_b: redeem when the discounted price first reaches b";
    }
    rep.negative_fee = rep.fair_fee < 0.0;
    return rep;
}

namespace {

struct ScanRange {
    double lo = 0.0;
    double hi = 0.0;
    bool logarithmic = false;
};

ScanRange scan_range(FreeParameter free, const FairInputs& in) {
    const auto& m = in.market;
    switch (free) {
    case FreeParameter::Principal: {
        const double hi = in.cap ? *in.cap * (1.0 - 1e-9) : 10.0 * in.s0;
        return {in.s0 * 1e-3, hi, true};
    }
    case FreeParameter::LoanRate: {
        double lo = m.r;
        if (m.delta == 0.0) {
            lo = m.r + 0.5 * m.sigma * m.sigma + 1e-9;
        }
        return {lo, m.r + 1.0, false};
    }
    case FreeParameter::Cap:
        return {in.q * (1.0 + 1e-9), 1e3 * std::max(in.s0, in.q), true};
    }
    return {};
}

double fee_with(FreeParameter free, double v, const FairInputs& in) {
    FairInputs x = in;
    switch (free) {
    case FreeParameter::Principal: x.q = v; break;
    case FreeParameter::LoanRate: x.gamma = v; break;
    case FreeParameter::Cap: x.cap = v; break;
    }
    return fair_fee(x.market, x.q, x.gamma, x.cap, x.s0).fair_fee;
}

}  // namespace

double solve_parameter(FreeParameter free, double target_fee, const FairInputs& fixed,
                       const SolveOptions& options) {
    if (options.scan_points < 2) throw ConfigError("scan needs at least two points");
    const ScanRange range = scan_range(free, fixed);
    if (!(range.hi > range.lo)) throw NoBracket("empty scan range");

    auto point = [&](std::size_t k) {
        const double t = static_cast<double>(k) / static_cast<double>(options.scan_points - 1);
        if (range.logarithmic) {
            return std::exp(std::log(range.lo) + t * (std::log(range.hi) - std::log(range.lo)));
        }
        return range.lo + t * (range.hi - range.lo);
    };
    auto gap = [&](double v) -> std::optional<double> {
        try {
            return fee_with(free, v, fixed) - target_fee;
        } catch (const RegimeViolation&) {
            return std::nullopt;
        } catch (const ParameterError&) {
            return std::nullopt;
        }
    };

    std::optional<double> prev_v;
    std::optional<double> prev_g;
    for (std::size_t k = 0; k < options.scan_points; ++k) {
        const double v = point(k);
        const auto g = gap(v);
        if (!g) {
            prev_v.reset();
            prev_g.reset();
            continue;
        }
        if (std::abs(*g) <= options.fee_tol) return v;
        if (prev_g && (*prev_g < 0.0) != (*g < 0.0)) {
            double a = *prev_v;
            double b = v;
            double ga = *prev_g;
            double mid = 0.5 * (a + b);
            for (std::size_t it = 0; it < options.max_bisections; ++it) {
                mid = 0.5 * (a + b);
                const auto gm = gap(mid);
                if (!gm) throw RegimeViolation("root left the admissible regime");
                if (std::abs(*gm) <= options.fee_tol || mid == a || mid == b) break;
                if ((ga < 0.0) == (*gm < 0.0)) {
                    a = mid;
                    ga = *gm;
                } else {
                    b = mid;
                }
            }
            fee_with(free, mid, fixed);  // throws if the root is not admissible
            return mid;
        }
        prev_v = v;
        prev_g = g;
    }
    throw NoBracket("fair fee never crosses the target in the scanned range");
}

}  // namespace stockloan
