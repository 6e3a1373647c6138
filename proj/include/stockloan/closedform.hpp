#pragma once

#include "stockloan/params.hpp"

#include <optional>
#include <string_view>

namespace stockloan {

/// Roots of the characteristic quadratic
///   ½σ²λ(λ−1) + (r̃−δ)λ − r̃ = 0,  r̃ = r − γ,
/// written through the drift composite mu = −(σ/2 + (γ−r+δ)/σ).
struct Exponents {
    double mu = 0.0;
    double lambda1 = 0.0;  ///< upper root, > 1
    double lambda2 = 0.0;  ///< lower root, in [0, 1]
    RegimeTag regime = RegimeTag::DividendRegime;
};

/// Validates the contract (market, q, gamma, cap) and returns the exponents.
Exponents exponents(const MarketParams& market, const LoanTerms& terms);

/// Regime-only variant: needs no contract beyond the loan rate.
Exponents exponents(const MarketParams& market, double gamma);

/// Free boundary b = qλ₁/(λ₁−1). Throws RegimeViolation if λ₁ <= 1.
double boundary_b(const Exponents& exp, double q);

enum class Shape { CapAboveB, CapBelowB, Uncapped };
std::string_view to_string(Shape shape);

/// Pieces of the value function. Continuation is the λ₁ power branch below
/// the exercise region, Exercise is x − q, Tail is the λ₂ power branch above
/// the cap.
enum class Branch { Continuation, Exercise, Tail };

/// Direction for derivatives at breakpoints.
enum class Side { Both, Left, Right };

/// Closed-form value of a (capped) stock loan. Immutable after build().
class ValueFunction {
public:
    const Exponents& exponents() const noexcept { return exp_; }
    double b() const noexcept { return b_; }
    Shape shape() const noexcept { return shape_; }
    double q() const noexcept { return q_; }
    double gamma() const noexcept { return gamma_; }
    const std::optional<double>& cap() const noexcept { return cap_; }

    /// Level and coefficient of the continuation branch A·(x/anchor)^λ₁:
    /// (b, b−q) unless the cap lies below b, then (L, L−q).
    double anchor() const noexcept;
    double anchor_value() const noexcept { return anchor() - q_; }

private:
    friend ValueFunction build_contract(const MarketParams&, double, double,
                                        std::optional<double>);
    ValueFunction() = default;

    Exponents exp_;
    double b_ = 0.0;
    Shape shape_ = Shape::Uncapped;
    double q_ = 0.0;
    double gamma_ = 0.0;
    std::optional<double> cap_;
};

/// Validates everything (including no-arbitrage) and builds the value function.
ValueFunction build(const MarketParams& market, const LoanTerms& terms);

/// Builds from the contract alone; s0 and c are not consulted.
ValueFunction build_contract(const MarketParams& market, double q, double gamma,
                             std::optional<double> cap);

/// Value h(x) = f(x) for x >= 0; value(vf, 0) == 0. DomainError for x < 0 or NaN/inf.
double value(const ValueFunction& vf, double x);

/// Evaluates one branch formula at x without checking that x lies in its range.
/// Branches that do not exist for the shape throw DomainError.
double branch_value(const ValueFunction& vf, Branch branch, double x);

/// Branch that value() uses at x, or the adjacent one for one-sided requests.
Branch branch_at(const ValueFunction& vf, double x, Side side = Side::Both);

/// Exact h'(x), x > 0. Two-sided evaluation at the cap throws DomainError.
double derivative(const ValueFunction& vf, double x, Side side = Side::Both);

/// Exact h''(x), x > 0. Two-sided evaluation at b or at the cap throws DomainError.
double second_derivative(const ValueFunction& vf, double x, Side side = Side::Both);

/// Exercise payoff (min(x, L) − q)+.
double payoff(const ValueFunction& vf, double x);

/// Value process V_t = e^{γt} f(e^{−γt} s_t).
double value_process(const ValueFunction& vf, double t, double s_t);

}  // namespace stockloan
