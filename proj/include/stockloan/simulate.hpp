#pragma once

#include "stockloan/params.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace stockloan::sim {

/// How a continuous barrier is monitored on the time grid.
enum class Monitoring {
    BrownianBridge,  ///< per-step crossing probability of the bridge between grid points
    Discrete,        ///< grid points only (biases hits late)
};

struct PathConfig {
    double dt = 1.0 / 252.0;      ///< years
    double horizon = 200.0;       ///< truncation time, years
    std::size_t n_paths = 100000;
    std::uint64_t seed = 20090302;
    Monitoring monitoring = Monitoring::BrownianBridge;
    unsigned workers = 0;         ///< 0: one per hardware thread
    /// Advance paths far from the barrier in exact multi-step blocks
    /// (crossing probability inside a block < 1e-15). Off: every step is drawn.
    bool skip_far_blocks = true;
};

/// Log-drift of the discounted price: r − γ − δ − σ²/2.
double log_drift(const MarketParams& market, double gamma);

/// Defaults with horizon = max(200, 10·max(1, 1/|r − γ − δ − σ²/2|)).
PathConfig default_config(const MarketParams& market, const LoanTerms& terms);

/// dt > 0, horizon > 0, n_paths >= 1000 and dt <= horizon/100; ConfigError otherwise.
void validate_config(const PathConfig& cfg);

/// Exact log-normal stepping of the discounted price S̃_t = e^{−γt}S_t from S̃₀ = x.
class PathSimulator {
public:
    PathSimulator(const MarketParams& market, const LoanTerms& terms, double x,
                  const PathConfig& cfg);

    std::size_t steps() const noexcept { return steps_; }

    /// Path `index` of the configured seed: S̃ at t = 0, dt, …, steps·dt.
    std::vector<double> path(std::uint64_t index) const;

    /// Same stepping driven by a caller-supplied standard normal source.
    std::vector<double> path_with(const std::function<double()>& normals) const;

private:
    double s0_;
    double drift_step_;
    double vol_step_;
    std::size_t steps_;
    std::uint64_t seed_;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;           ///< sample standard deviation / sqrt(n)
    std::size_t n = 0;
    double truncated_fraction = 0.0;  ///< share of paths not stopped by the horizon
};

/// E[e^{−r̃τ}·1{τ <= horizon}] for τ the first time S̃ reaches `level`,
/// starting from S̃₀ = x on either side of it.
///
/// Only the contract part of `terms` is used here and below (s0 and c are
/// ignored); the starting price is always the explicit x.
McEstimate hitting_transform_mc(const MarketParams& market, const LoanTerms& terms, double x,
                                double level, const PathConfig& cfg);

/// Value of stopping when S̃ first enters [min(threshold, L), L]
/// ([threshold, ∞) when uncapped), paying (S̃ ∧ L − q)+ there:
/// E[e^{−r̃τ}(S̃_τ ∧ L − q)+·1{τ <= horizon}]. Requires threshold >= q.
McEstimate threshold_strategy_value(const MarketParams& market, const LoanTerms& terms, double x,
                                    double threshold, const PathConfig& cfg);

struct LatticeResult {
    double value = 0.0;
    std::size_t steps = 0;
    double horizon = 0.0;
    double up_probability = 0.0;
    /// Per time slice 0..steps: lowest node price where exercising is optimal.
    std::vector<std::optional<double>> exercise_boundary;
};

/// Binomial optimal stopping of (S̃ ∧ L − q)+ on the discounted process with
/// rate r̃ and dividend δ, started at x. ConfigError if the
/// up-probability leaves (0, 1).
LatticeResult lattice_value(const MarketParams& market, const LoanTerms& terms, double x,
                            std::size_t steps, double horizon);

}  // namespace stockloan::sim
