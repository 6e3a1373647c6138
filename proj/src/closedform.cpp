#include "stockloan/closedform.hpp"

#include "stockloan/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stockloan {

namespace {

/// scale·(x/anchor)^lambda via exp(λ ln(x/anchor)); exact zero at x = 0.
double power_branch(double scale, double x, double anchor, double lambda) {
    if (x == 0.0) return lambda == 0.0 ? scale : 0.0;
    return scale * std::exp(lambda * std::log(x / anchor));
}

void require_price(double x) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("stock price must be finite and >= 0");
    }
}

}  // namespace

std::string_view to_string(Shape shape) {
    switch (shape) {
    case Shape::CapAboveB: return "CapAboveB";
    case Shape::CapBelowB: return "CapBelowB";
    case Shape::Uncapped: return "Uncapped";
    }
    return "?";
}

Exponents exponents(const MarketParams& market, double gamma) {
    const Regime regime = classify_regime(market, gamma);
    const double sigma = market.sigma;
    const double excess = gamma - market.r;  // γ − r
    const double carry = excess + market.delta;

    Exponents out;
    out.regime = regime.tag;
    out.mu = -(0.5 * sigma + carry / sigma);
    if (regime.tag == RegimeTag::ZeroDividendRegime) {
        out.lambda1 = 2.0 * excess / (sigma * sigma);
        out.lambda2 = 1.0;
        return out;
    }
    // μ² − 2(γ−r) = (σ/2 − (γ−r+δ)/σ)² + 2δ, free of cancellation.
    const double shifted = 0.5 * sigma - carry / sigma;
    const double disc = shifted * shifted + 2.0 * market.delta;
    out.lambda1 = (-out.mu + std::sqrt(disc)) / sigma;
    // Vieta: λ₁λ₂ = 2(γ−r)/σ²; avoids cancellation in −μ − √disc.
    out.lambda2 = 2.0 * excess / (sigma * sigma * out.lambda1);
    return out;
}

Exponents exponents(const MarketParams& market, const LoanTerms& terms) {
    validate_contract(market, terms);
    return exponents(market, terms.gamma);
}

double boundary_b(const Exponents& exp, double q) {
    if (!(exp.lambda1 > 1.0)) {
        throw RegimeViolation("free boundary needs lambda1 > 1");
    }
    return q * exp.lambda1 / (exp.lambda1 - 1.0);
}

double ValueFunction::anchor() const noexcept {
    return shape_ == Shape::CapBelowB ? *cap_ : b_;
}

ValueFunction build_contract(const MarketParams& market, double q, double gamma,
                             std::optional<double> cap) {
    if (!std::isfinite(q) || !(q > 0.0)) throw ParameterError("q must be > 0");
    if (cap) {
        if (!std::isfinite(*cap) || !(*cap > 0.0)) throw ParameterError("cap must be > 0");
        if (!(*cap > q)) throw ParameterError("cap must be > q");
    }
    ValueFunction vf;
    vf.exp_ = exponents(market, gamma);
    vf.b_ = boundary_b(vf.exp_, q);
    vf.q_ = q;
    vf.gamma_ = gamma;
    vf.cap_ = cap;
    if (!cap) {
        vf.shape_ = Shape::Uncapped;
    } else {
        vf.shape_ = *cap >= vf.b_ ? Shape::CapAboveB : Shape::CapBelowB;
    }
    return vf;
}

ValueFunction build(const MarketParams& market, const LoanTerms& terms) {
    validate(market, terms);
    return build_contract(market, terms.q, terms.gamma, terms.cap);
}

double branch_value(const ValueFunction& vf, Branch branch, double x) {
    require_price(x);
    switch (branch) {
    case Branch::Continuation:
        return power_branch(vf.anchor_value(), x, vf.anchor(), vf.exponents().lambda1);
    case Branch::Exercise:
        if (vf.shape() == Shape::CapBelowB) throw DomainError("no exercise branch when cap < b");
        return x - vf.q();
    case Branch::Tail:
        if (!vf.cap()) throw DomainError("no tail branch for an uncapped loan");
        return power_branch(*vf.cap() - vf.q(), x, *vf.cap(), vf.exponents().lambda2);
    }
    return 0.0;
}

Branch branch_at(const ValueFunction& vf, double x, Side side) {
    const double b = vf.b();
    switch (vf.shape()) {
    case Shape::Uncapped:
        if (x < b || (x == b && side != Side::Right)) return Branch::Continuation;
        return Branch::Exercise;
    case Shape::CapBelowB: {
        const double cap = *vf.cap();
        if (x < cap || (x == cap && side == Side::Left)) return Branch::Continuation;
        return Branch::Tail;
    }
    case Shape::CapAboveB: {
        const double cap = *vf.cap();
        if (x < b || (x == b && side != Side::Right)) return Branch::Continuation;
        if (x < cap || (x == cap && side == Side::Left)) return Branch::Exercise;
        return Branch::Tail;
    }
    }
    return Branch::Continuation;
}

double value(const ValueFunction& vf, double x) {
    require_price(x);
    if (x == 0.0) return 0.0;
    if (vf.cap() && x == *vf.cap()) return *vf.cap() - vf.q();
    return branch_value(vf, branch_at(vf, x), x);
}

double derivative(const ValueFunction& vf, double x, Side side) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("derivative needs x > 0");
    if (side == Side::Both && vf.cap() && x == *vf.cap()) {
        throw DomainError("h is not differentiable at the cap; request a one-sided slope");
    }
    const Branch branch = branch_at(vf, x, side);
    const auto& e = vf.exponents();
    switch (branch) {
    case Branch::Continuation:
        return e.lambda1 / x * branch_value(vf, branch, x);
    case Branch::Exercise:
        return 1.0;
    case Branch::Tail:
        return e.lambda2 / x * branch_value(vf, branch, x);
    }
    return 0.0;
}

double second_derivative(const ValueFunction& vf, double x, Side side) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("second derivative needs x > 0");
    if (side == Side::Both) {
        const bool at_cap = vf.cap() && x == *vf.cap();
        const bool at_b = vf.shape() != Shape::CapBelowB && x == vf.b();
        if (at_cap || at_b) throw DomainError("h'' jumps here; request a one-sided value");
    }
    const Branch branch = branch_at(vf, x, side);
    const auto& e = vf.exponents();
    switch (branch) {
    case Branch::Continuation:
        return e.lambda1 * (e.lambda1 - 1.0) / (x * x) * branch_value(vf, branch, x);
    case Branch::Exercise:
        return 0.0;
    case Branch::Tail:
        return e.lambda2 * (e.lambda2 - 1.0) / (x * x) * branch_value(vf, branch, x);
    }
    return 0.0;
}

double payoff(const ValueFunction& vf, double x) {
    const double capped = vf.cap() ? std::min(x, *vf.cap()) : x;
    return std::max(capped - vf.q(), 0.0);
}

double value_process(const ValueFunction& vf, double t, double s_t) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("t must be finite and >= 0");
    require_price(s_t);
    const double growth = std::exp(vf.gamma() * t);
    return growth * value(vf, s_t / growth);
}

}  // namespace stockloan
