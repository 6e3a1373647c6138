#include "stockloan/closedform.hpp"
#include "stockloan/errors.hpp"
#include "stockloan/lcp.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace stockloan;

namespace {

const MarketParams kMarket{0.05, 0.15, 0.01};

LoanTerms terms(std::optional<double> cap) {
    LoanTerms t;
    t.q = 100;
    t.gamma = 0.07;
    t.cap = cap;
    t.s0 = 100;
    return t;
}

double max_rel_error(const lcp::Solve& s, const ValueFunction& vf) {
    double worst = 0;
    for (std::size_t i = 1; i + 1 < s.grid.n; ++i) {
        const double h = value(vf, s.grid.price(i));
        worst = std::max(worst, std::abs(s.solution.values[i] - h) / h);
    }
    return worst;
}

}  // namespace

TEST(Lcp, GridContainsCapAndBounds) {
    const auto g = lcp::make_grid(kMarket, terms(240), {.n = 512});
    EXPECT_EQ(g.n, 512u);
    EXPECT_LE(g.price(0), 100.0 / 8 * (1 + 1e-12));
    EXPECT_GE(g.price(g.n - 1), 8 * 240.0 * (1 - 1e-12));
    bool on_node = false;
    for (std::size_t i = 0; i < g.n; ++i) on_node |= std::abs(g.price(i) - 240) < 1e-9;
    EXPECT_TRUE(on_node);
    EXPECT_THROW(lcp::make_grid(kMarket, terms(240), {.n = 16}), GridError);
}

TEST(Lcp, StencilProperties) {
    const auto t = terms(240);
    const auto g = lcp::make_grid(kMarket, t, {.n = 512});
    const auto op = lcp::assemble(kMarket, t, g);
    const double rt = kMarket.r - t.gamma;
    // A applied to a constant is −r̃ in the interior
    const std::vector<double> ones(g.n, 1.0);
    const auto a1 = lcp::apply(op, ones);
    for (std::size_t i = 1; i + 1 < g.n; ++i) EXPECT_NEAR(a1[i], -rt, 1e-10);
    // x^λ solves the ODE up to O(dy²)
    const auto e = exponents(kMarket, t.gamma);
    for (double lam : {e.lambda1, e.lambda2}) {
        std::vector<double> h(g.n);
        for (std::size_t i = 0; i < g.n; ++i) h[i] = std::exp(lam * (g.nodes[i] - g.nodes[g.n / 2]));
        const auto ah = lcp::apply(op, h);
        for (std::size_t i = 1; i + 1 < g.n; ++i) {
            EXPECT_LT(std::abs(ah[i]) / h[i], 0.2 * g.dy * g.dy * (1 + lam * lam * lam * lam));
        }
    }
    for (std::size_t i = 0; i < g.n; ++i) EXPECT_LT(op.diag[i], 0.0);
}

TEST(Lcp, RejectsBadOmega) {
    const auto t = terms(240);
    const auto g = lcp::make_grid(kMarket, t, {.n = 128});
    const auto op = lcp::assemble(kMarket, t, g);
    EXPECT_THROW(lcp::psor_solve(op, g.payoff, {.omega = 2.0}), ConfigError);
    EXPECT_THROW(lcp::psor_solve(op, g.payoff, {.omega = 1.0}), ConfigError);
}

TEST(Lcp, NonConvergenceReportsResidual) {
    const auto t = terms(240);
    const auto g = lcp::make_grid(kMarket, t, {.n = 256});
    const auto op = lcp::assemble(kMarket, t, g);
    try {
        lcp::psor_solve(op, g.payoff, {.max_iter = 16});
        FAIL();
    } catch (const NonConvergence& e) {
        EXPECT_GT(e.best_residual(), 1e-8);
    }
}

TEST(Lcp, ZeroPayoffGivesZero) {
    const auto t = terms(240);
    const auto g = lcp::make_grid(kMarket, t, {.n = 128});
    const auto op = lcp::assemble(kMarket, t, g);
    const std::vector<double> zero(g.n, 0.0);
    const auto sol = lcp::psor_solve(op, zero);
    for (double v : sol.values) EXPECT_EQ(v, 0.0);
}

TEST(Lcp, SolutionIsComplementary) {
    const auto t = terms(240);
    const auto s = lcp::solve(kMarket, t, {.n = 512});
    const auto op = lcp::assemble(kMarket, t, s.grid);
    EXPECT_LE(lcp::complementarity_residual(op, s.grid.payoff, s.solution.values), 1e-8);
    for (std::size_t i = 0; i < s.grid.n; ++i) EXPECT_GE(s.solution.values[i], s.grid.payoff[i]);
}

TEST(Lcp, InterpolationAndDomain) {
    const auto s = lcp::solve(kMarket, terms(240), {.n = 256});
    const double x = s.grid.price(100);
    EXPECT_EQ(lcp::solution_value(s.solution, x), s.solution.values[100]);
    const double mid = std::exp(0.5 * (s.grid.nodes[100] + s.grid.nodes[101]));
    EXPECT_NEAR(lcp::solution_value(s.solution, mid),
                0.5 * (s.solution.values[100] + s.solution.values[101]), 1e-12);
    EXPECT_THROW(lcp::solution_value(s.solution, 1.0), DomainError);
}

TEST(Lcp, RefinementReducesError) {
    const auto vf = build_contract(kMarket, 100, 0.07, 240.0);
    const double e256 = max_rel_error(lcp::solve(kMarket, terms(240), {.n = 256}), vf);
    const double e1024 = max_rel_error(lcp::solve(kMarket, terms(240), {.n = 1024}), vf);
    EXPECT_LT(e1024, e256 / 4);
}

TEST(Lcp, AgreesWithClosedForm) {
    for (double cap : {240.0, 120.0}) {
        const auto vf = build_contract(kMarket, 100, 0.07, cap);
        const auto s = lcp::solve(kMarket, terms(cap), {});
        EXPECT_LT(max_rel_error(s, vf), 1e-3) << cap;
        if (cap > vf.b()) {
            const auto cb = lcp::contact_boundary(s.solution, s.grid.payoff, cap, 1e-7);
            ASSERT_TRUE(cb.has_value());
            EXPECT_LT(std::abs(std::log(*cb / vf.b())), 2 * s.grid.dy);
        }
    }
}

TEST(Lcp, WiderDomainChangesLittle) {
    const auto t = terms(240);
    const auto narrow = lcp::solve(kMarket, t, {.n = 1024});
    const auto wide = lcp::solve(kMarket, t, {.n = 1024, .widen = 2.0});
    for (double x : {30.0, 60.0, 100.0, 140.0, 200.0, 300.0, 1000.0}) {
        const double a = lcp::solution_value(narrow.solution, x);
        const double b = lcp::solution_value(wide.solution, x);
        EXPECT_LT(std::abs(a - b) / b, 5e-4) << x;
    }
}

TEST(Lcp, Uncapped) {
    const auto vf = build_contract(kMarket, 100, 0.07, std::nullopt);
    const auto s = lcp::solve(kMarket, terms(std::nullopt), {.n = 1024});
    EXPECT_LT(std::abs(lcp::solution_value(s.solution, 100) - value(vf, 100)) / value(vf, 100), 1e-3);
}
