#include "stockloan/closedform.hpp"
#include "stockloan/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace stockloan;

namespace {

// Reference values computed independently with 40-digit arithmetic.
constexpr double kLambda1 = 3.091639072545124949539;
constexpr double kLambda2 = 0.5750275941215417171272;
constexpr double kB = 147.8093956613265568232;
constexpr double kH100 = 14.28419572449336573021;
constexpr double kH60 = 2.944282853789629435002;
constexpr double kH300 = 159.1673432557730193451;
constexpr double kEx2H60 = 2.346139865367471349730;
constexpr double kEx2H100 = 11.38230350076955499222;
constexpr double kEx2H200 = 26.82867029968373202945;
constexpr double kEx2H300 = 33.87321989586170830492;
constexpr double kValueProcess = 24.06195175034732941725;
constexpr double kEx2LeftSlope = 0.5152731787575208249;
constexpr double kEx2RightSlope = 0.09583793235359028619;

const MarketParams kMarket{0.05, 0.15, 0.01};

ValueFunction ex(std::optional<double> cap) { return build_contract(kMarket, 100, 0.07, cap); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(ClosedForm, Exponents) {
    const Exponents e = exponents(kMarket, 0.07);
    EXPECT_DOUBLE_EQ(e.mu, -0.275);
    EXPECT_LT(rel(e.lambda1, kLambda1), 1e-14);
    EXPECT_LT(rel(e.lambda2, kLambda2), 1e-14);
    EXPECT_LT(rel(boundary_b(e, 100), kB), 1e-14);
}

TEST(ClosedForm, ZeroDividendExponents) {
    const Exponents e = exponents(MarketParams{0.05, 0.2, 0.0}, 0.08);
    EXPECT_EQ(e.regime, RegimeTag::ZeroDividendRegime);
    EXPECT_DOUBLE_EQ(e.lambda1, 1.5);
    EXPECT_DOUBLE_EQ(e.lambda2, 1.0);
}

TEST(ClosedForm, ExponentsSolveQuadratic) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.01, 0.1), us(0.05, 0.5), ud(0.001, 0.05),
        usp(0.0, 0.05);
    for (int k = 0; k < 200; ++k) {
        const MarketParams m{ur(rng), us(rng), ud(rng)};
        const double gamma = m.r + usp(rng);
        const Exponents e = exponents(m, gamma);
        const double rt = m.r - gamma;
        auto quad = [&](double l) {
            return 0.5 * m.sigma * m.sigma * l * (l - 1) + (rt - m.delta) * l - rt;
        };
        const double scale = 0.5 * m.sigma * m.sigma * e.lambda1 * e.lambda1 + 1.0;
        EXPECT_LT(std::abs(quad(e.lambda1)) / scale, 1e-13);
        EXPECT_LT(std::abs(quad(e.lambda2)), 1e-13);
        EXPECT_GT(e.lambda1, 1.0);
        EXPECT_GE(e.lambda2, 0.0);
        EXPECT_LE(e.lambda2, 1.0);
        // discriminant identity: mu^2 - 2(gamma - r) == (sigma/2 - (gamma-r+delta)/sigma)^2 + 2 delta
        const double a = m.sigma / 2 - (gamma - m.r + m.delta) / m.sigma;
        EXPECT_NEAR(e.mu * e.mu - 2 * (gamma - m.r), a * a + 2 * m.delta, 1e-12);
    }
}

TEST(ClosedForm, Shapes) {
    EXPECT_EQ(ex(240).shape(), Shape::CapAboveB);
    EXPECT_EQ(ex(120).shape(), Shape::CapBelowB);
    EXPECT_EQ(ex(std::nullopt).shape(), Shape::Uncapped);
    EXPECT_DOUBLE_EQ(ex(240).anchor(), ex(240).b());
    EXPECT_DOUBLE_EQ(ex(120).anchor(), 120.0);
}

TEST(ClosedForm, Example1Values) {
    const auto vf = ex(240);
    EXPECT_LT(rel(value(vf, 100), kH100), 1e-13);
    EXPECT_LT(rel(value(vf, 60), kH60), 1e-13);
    EXPECT_LT(rel(value(vf, 300), kH300), 1e-13);
    EXPECT_DOUBLE_EQ(value(vf, 200), 100.0);
    EXPECT_DOUBLE_EQ(value(vf, 240), 140.0);
    EXPECT_EQ(value(vf, 0), 0.0);
    EXPECT_LT(rel(value_process(vf, 5, 150), kValueProcess), 1e-13);
    EXPECT_EQ(value(ex(std::nullopt), 100), value(vf, 100));
}

TEST(ClosedForm, Example2Values) {
    const auto vf = ex(120);
    EXPECT_LT(rel(value(vf, 60), kEx2H60), 1e-13);
    EXPECT_LT(rel(value(vf, 100), kEx2H100), 1e-13);
    EXPECT_LT(rel(value(vf, 200), kEx2H200), 1e-13);
    EXPECT_LT(rel(value(vf, 300), kEx2H300), 1e-13);
    EXPECT_DOUBLE_EQ(value(vf, 120), 20.0);
    EXPECT_LT(rel(derivative(vf, 120, Side::Left), kEx2LeftSlope), 1e-12);
    EXPECT_LT(rel(derivative(vf, 120, Side::Right), kEx2RightSlope), 1e-12);
    EXPECT_THROW(derivative(vf, 120), DomainError);
}

TEST(ClosedForm, SmoothFit) {
    const auto vf = ex(240);
    EXPECT_NEAR(derivative(vf, vf.b(), Side::Left), 1.0, 1e-12);
    EXPECT_NEAR(derivative(vf, vf.b(), Side::Right), 1.0, 1e-15);
    EXPECT_NEAR(value(vf, vf.b()), vf.b() - 100, 1e-12);
    EXPECT_THROW(second_derivative(vf, vf.b()), DomainError);
    EXPECT_EQ(second_derivative(vf, 200), 0.0);
}

TEST(ClosedForm, Branches) {
    const auto vf = ex(240);
    EXPECT_EQ(branch_at(vf, 100), Branch::Continuation);
    EXPECT_EQ(branch_at(vf, 200), Branch::Exercise);
    EXPECT_EQ(branch_at(vf, 300), Branch::Tail);
    EXPECT_EQ(branch_at(vf, 240, Side::Left), Branch::Exercise);
    EXPECT_EQ(branch_at(vf, 240, Side::Right), Branch::Tail);
    EXPECT_THROW(branch_value(ex(120), Branch::Exercise, 100), DomainError);
    EXPECT_THROW(branch_value(ex(std::nullopt), Branch::Tail, 100), DomainError);
}

TEST(ClosedForm, DomainErrors) {
    const auto vf = ex(240);
    EXPECT_THROW(value(vf, -1), DomainError);
    EXPECT_THROW(value(vf, std::nan("")), DomainError);
    EXPECT_THROW(value(vf, INFINITY), DomainError);
}

TEST(ClosedForm, PayoffAndBounds) {
    for (auto cap : {std::optional<double>(240), std::optional<double>(120),
                     std::optional<double>()}) {
        const auto vf = ex(cap);
        const double L = cap.value_or(INFINITY);
        double prev = 0;
        for (int i = 1; i <= 2000; ++i) {
            const double x = 0.25 * i;
            const double f = value(vf, x);
            EXPECT_GE(f, payoff(vf, x) - 1e-12);
            EXPECT_LE(f, std::min(x, L) + 1e-12);
            EXPECT_GE(f, prev);
            prev = f;
        }
    }
}

TEST(ClosedForm, OdeResidual) {
    // ½σ²x²h'' + (r̃−δ)x h' − r̃h = 0 in the continuation and tail regions
    const auto vf = ex(240);
    const double rt = kMarket.r - 0.07;
    for (double x : {10.0, 60.0, 100.0, 140.0, 250.0, 400.0, 1000.0}) {
        const double t1 = 0.5 * kMarket.sigma * kMarket.sigma * x * x * second_derivative(vf, x);
        const double t2 = (rt - kMarket.delta) * x * derivative(vf, x);
        const double t3 = -rt * value(vf, x);
        EXPECT_LT(std::abs(t1 + t2 + t3) / (std::abs(t1) + std::abs(t2) + std::abs(t3)), 1e-13)
            << x;
    }
}

TEST(ClosedForm, CapMonotonicity) {
    const auto low = ex(120), high = ex(240), none = ex(std::nullopt);
    for (double x = 1; x < 600; x += 7) {
        EXPECT_LE(value(low, x), value(high, x) + 1e-12);
        EXPECT_LE(value(high, x), value(none, x) + 1e-12);
    }
}
