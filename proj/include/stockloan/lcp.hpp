#pragma once

#include "stockloan/params.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace stockloan::lcp {

/// Uniform grid in y = ln(price) with the obstacle sampled at every node.
struct LogGrid {
    std::size_t n = 0;
    double y_min = 0.0;
    double y_max = 0.0;
    double dy = 0.0;
    std::vector<double> nodes;   ///< y_i, strictly increasing
    std::vector<double> payoff;  ///< (min(e^{y_i}, L) − q)+

    double price(std::size_t i) const;
};

struct GridSpec {
    std::size_t n = 2048;
    /// Multiplies the outer price bound and divides the inner one.
    double widen = 1.0;
    /// Price that must lie inside the grid (e.g. a query point).
    std::optional<double> include;
};

/// Builds a grid spanning at least [q/8, 8·max(L, b)] with b = qλ₁/(λ₁−1).
/// When the loan is capped the cap sits exactly on a node.
LogGrid make_grid(const MarketParams& market, const LoanTerms& terms, const GridSpec& spec = {});

/// Three-band discretization of
///   (A h) = ½σ² h_yy + (r̃ − δ − σ²/2) h_y − r̃ h
/// with (A h)_i = lower[i]·h[i−1] + diag[i]·h[i] + upper[i]·h[i+1].
/// lower[0] and upper[n−1] are zero; the edge rows fold in the Robin
/// conditions h_y = λ₁h (bottom) and h_y = λ₂h (top) via ghost nodes.
struct TridiagonalOperator {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    double y_min = 0.0;
    double dy = 0.0;

    std::size_t size() const noexcept { return diag.size(); }
};

/// Throws GridError when −A would not be an M-matrix (grid too coarse).
TridiagonalOperator assemble(const MarketParams& market, const LoanTerms& terms,
                             const LogGrid& grid);

/// (A h) for all nodes.
std::vector<double> apply(const TridiagonalOperator& op, std::span<const double> h);

struct PsorOptions {
    double omega = 1.5;
    double tol = 1e-8;
    std::size_t max_iter = 0;  ///< 0 means 200·n
    std::size_t check_every = 8;
};

struct LcpSolution {
    std::vector<double> values;
    std::size_t iterations = 0;
    double residual = 0.0;  ///< max_i |min(−(Ah)_i, h_i − payoff_i)|
    double omega = 0.0;
    double y_min = 0.0;
    double dy = 0.0;
};

/// max_i |min(−(Ah)_i, h_i − payoff_i)|.
double complementarity_residual(const TridiagonalOperator& op, std::span<const double> payoff,
                                std::span<const double> h);

/// Projected SOR for: h >= payoff, A h <= 0, (h − payoff)·(A h) = 0.
/// Starts from `initial` when given (projected onto the obstacle), else from
/// the obstacle itself. Throws NonConvergence when max_iter is exhausted.
LcpSolution psor_solve(const TridiagonalOperator& op, std::span<const double> payoff,
                       const PsorOptions& options = {}, std::span<const double> initial = {});

/// Piecewise-linear interpolation in log price. DomainError outside the grid.
double solution_value(const LcpSolution& sol, double x);

/// Price of the lowest node with payoff > 0 where the solution sits on the
/// obstacle (h − payoff <= tol), restricted to prices strictly below `below`.
std::optional<double> contact_boundary(const LcpSolution& sol, std::span<const double> payoff,
                                       double below, double tol);

/// Convenience driver: grid, operator and PSOR in one call.
struct Solve {
    LogGrid grid;
    LcpSolution solution;
};
Solve solve(const MarketParams& market, const LoanTerms& terms, const GridSpec& grid = {},
            const PsorOptions& options = {});

}  // namespace stockloan::lcp
