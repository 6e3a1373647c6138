#include "stockloan/lcp.hpp"

#include "stockloan/closedform.hpp"
#include "stockloan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stockloan::lcp {

double LogGrid::price(std::size_t i) const { return std::exp(nodes.at(i)); }

LogGrid make_grid(const MarketParams& market, const LoanTerms& terms, const GridSpec& spec) {
    if (spec.n < 64) throw GridError("grid needs at least 64 nodes");
    if (!(spec.widen >= 1.0)) throw GridError("widen factor must be >= 1");
    validate_contract(market, terms);
    const double b = boundary_b(exponents(market, terms.gamma), terms.q);

    double lo = std::log(terms.q / 8.0 / spec.widen);
    double hi = std::log(8.0 * std::max(terms.cap.value_or(b), b) * spec.widen);
    if (spec.include) {
        if (!(*spec.include > 0.0)) throw GridError("grid can only include positive prices");
        lo = std::min(lo, std::log(*spec.include));
        hi = std::max(hi, std::log(*spec.include));
    }

    LogGrid grid;
    grid.n = spec.n;
    if (terms.cap) {
        // One spare cell lets the cap land on a node while still covering [lo, hi].
        grid.dy = (hi - lo) / static_cast<double>(spec.n - 2);
        const double y_cap = std::log(*terms.cap);
        const double k = std::ceil((y_cap - lo) / grid.dy);
        grid.y_min = y_cap - k * grid.dy;
    } else {
        grid.dy = (hi - lo) / static_cast<double>(spec.n - 1);
        grid.y_min = lo;
    }
    grid.y_max = grid.y_min + static_cast<double>(spec.n - 1) * grid.dy;

    grid.nodes.resize(spec.n);
    grid.payoff.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        grid.nodes[i] = grid.y_min + static_cast<double>(i) * grid.dy;
        double x = std::exp(grid.nodes[i]);
        if (terms.cap) x = std::min(x, *terms.cap);
        grid.payoff[i] = std::max(x - terms.q, 0.0);
    }
    return grid;
}

TridiagonalOperator assemble(const MarketParams& market, const LoanTerms& terms,
                             const LogGrid& grid) {
    const Exponents e = exponents(market, terms);
    const std::size_t n = grid.n;
    if (n < 3 || grid.nodes.size() != n || !(grid.dy > 0.0)) {
        throw GridError("malformed grid");
    }
    const double r_tilde = market.r - terms.gamma;
    const double var = market.sigma * market.sigma;
    const double drift = r_tilde - market.delta - 0.5 * var;
    const double dy = grid.dy;

    const double diffusion = 0.5 * var / (dy * dy);
    const double advection = 0.5 * drift / dy;
    const double a = diffusion - advection;
    const double c = diffusion + advection;
    const double d = -2.0 * diffusion - r_tilde;
    if (a < 0.0 || c < 0.0) {
        std::ostringstream msg;
        msg << "spacing dy=" << dy << " exceeds sigma^2/|drift|=" << var / std::abs(drift)
            << "; refine the grid";
        throw GridError(msg.str());
    }

    TridiagonalOperator op;
    op.y_min = grid.y_min;
    op.dy = dy;
    op.lower.assign(n, a);
    op.diag.assign(n, d);
    op.upper.assign(n, c);
    op.lower[0] = 0.0;
    op.upper[n - 1] = 0.0;
    // Ghost nodes: h_{-1} = h_1 − 2dy·λ₁·h_0 and h_n = h_{n−2} + 2dy·λ₂·h_{n−1}.
    op.diag[0] = d - 2.0 * dy * e.lambda1 * a;
    op.upper[0] = a + c;
    op.diag[n - 1] = d + 2.0 * dy * e.lambda2 * c;
    op.lower[n - 1] = a + c;

    for (std::size_t i = 0; i < n; ++i) {
        if (!(op.diag[i] < 0.0)) throw GridError("diagonal safeguard failed; refine the grid");
    }
    return op;
}

std::vector<double> apply(const TridiagonalOperator& op, std::span<const double> h) {
    const std::size_t n = op.size();
    if (h.size() != n) throw GridError("vector length does not match operator");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = op.diag[i] * h[i];
        if (i > 0) s += op.lower[i] * h[i - 1];
        if (i + 1 < n) s += op.upper[i] * h[i + 1];
        out[i] = s;
    }
    return out;
}

double complementarity_residual(const TridiagonalOperator& op, std::span<const double> payoff,
                                std::span<const double> h) {
    const auto ah = apply(op, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < ah.size(); ++i) {
        worst = std::max(worst, std::abs(std::min(-ah[i], h[i] - payoff[i])));
    }
    return worst;
}

LcpSolution psor_solve(const TridiagonalOperator& op, std::span<const double> payoff,
                       const PsorOptions& options, std::span<const double> initial) {
    const std::size_t n = op.size();
    if (payoff.size() != n) throw GridError("payoff length does not match operator");
    if (!(options.omega > 1.0 && options.omega < 2.0)) {
        throw ConfigError("PSOR relaxation must lie in (1, 2)");
    }
    if (!initial.empty() && initial.size() != n) {
        throw GridError("initial guess length does not match operator");
    }
    const std::size_t max_iter = options.max_iter == 0 ? 200 * n : options.max_iter;
    const std::size_t check_every = std::max<std::size_t>(options.check_every, 1);

    LcpSolution sol;
    sol.omega = options.omega;
    sol.y_min = op.y_min;
    sol.dy = op.dy;
    sol.values.assign(payoff.begin(), payoff.end());
    if (!initial.empty()) {
        for (std::size_t i = 0; i < n; ++i) sol.values[i] = std::max(initial[i], payoff[i]);
    }

    auto& h = sol.values;
    const double omega = options.omega;
    std::vector<double> step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = omega / op.diag[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= max_iter; ++it) {
        {
            const double s = op.diag[0] * h[0] + op.upper[0] * h[1];
            h[0] = std::max(payoff[0], h[0] - step[0] * s);
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double s = op.lower[i] * h[i - 1] + op.diag[i] * h[i] + op.upper[i] * h[i + 1];
            h[i] = std::max(payoff[i], h[i] - step[i] * s);
        }
        {
            const double s = op.lower[n - 1] * h[n - 2] + op.diag[n - 1] * h[n - 1];
            h[n - 1] = std::max(payoff[n - 1], h[n - 1] - step[n - 1] * s);
        }
        if (it % check_every == 0 || it == max_iter) {
            const double res = complementarity_residual(op, payoff, h);
            best = std::min(best, res);
            if (res <= options.tol) {
                sol.iterations = it;
                sol.residual = res;
                return sol;
            }
        }
    }
    std::ostringstream msg;
    msg << "PSOR did not reach tol=" << options.tol << " in " << max_iter
        << " iterations (best residual " << best << ")";
    throw NonConvergence(msg.str(), best);
}

double solution_value(const LcpSolution& sol, double x) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("price must be positive");
    const std::size_t n = sol.values.size();
    const double pos = (std::log(x) - sol.y_min) / sol.dy;
    const double last = static_cast<double>(n - 1);
    // Tolerate round-off at the edges of the span.
    if (pos < -1e-9 || pos > last + 1e-9) throw DomainError("price outside the grid span");
    const double clamped = std::clamp(pos, 0.0, last);
    const double nearest = std::round(clamped);
    if (std::abs(clamped - nearest) < 1e-9) return sol.values[static_cast<std::size_t>(nearest)];
    const auto i = std::min(static_cast<std::size_t>(clamped), n - 2);
    const double w = clamped - static_cast<double>(i);
    return (1.0 - w) * sol.values[i] + w * sol.values[i + 1];
}

std::optional<double> contact_boundary(const LcpSolution& sol, std::span<const double> payoff,
                                       double below, double tol) {
    for (std::size_t i = 0; i < sol.values.size(); ++i) {
        const double price = std::exp(sol.y_min + static_cast<double>(i) * sol.dy);
        if (!(price < below)) break;
        if (payoff[i] > 0.0 && sol.values[i] - payoff[i] <= tol) return price;
    }
    return std::nullopt;
}

namespace {

/// Linear-in-y interpolation that clamps to the edge nodes instead of throwing.
double interpolate_clamped(const LcpSolution& sol, double y) {
    const std::size_t n = sol.values.size();
    const double pos = std::clamp((y - sol.y_min) / sol.dy, 0.0, static_cast<double>(n - 1));
    const auto i = std::min(static_cast<std::size_t>(pos), n - 2);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * sol.values[i] + w * sol.values[i + 1];
}

}  // namespace

Solve solve(const MarketParams& market, const LoanTerms& terms, const GridSpec& grid_spec,
            const PsorOptions& options) {
    Solve out;
    out.grid = make_grid(market, terms, grid_spec);
    const auto op = assemble(market, terms, out.grid);

    // Nested iteration: the half-resolution solution seeds the fine sweep.
    std::vector<double> seed;
    if (grid_spec.n / 2 >= 64) {
        GridSpec coarse = grid_spec;
        coarse.n = grid_spec.n / 2;
        const Solve coarse_solve = solve(market, terms, coarse, options);
        seed.resize(out.grid.n);
        for (std::size_t i = 0; i < out.grid.n; ++i) {
            seed[i] = interpolate_clamped(coarse_solve.solution, out.grid.nodes[i]);
        }
    }
    out.solution = psor_solve(op, out.grid.payoff, options, seed);
    return out;
}

}  // namespace stockloan::lcp
