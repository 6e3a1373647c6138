#include "stockloan/simulate.hpp"

#include "stockloan/errors.hpp"
#include "stockloan/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace stockloan::sim {

namespace {

// Paths farther than kSkipSigmas standard deviations (plus adverse drift)
// from the barrier advance in one exact multi-step draw; the probability of
// a crossing inside such a block is below 2Φ(−8) ≈ 1e-15.
constexpr double kSkipSigmas = 8.0;
// Bridge crossing probabilities below e^{-40} are treated as zero.
constexpr double kBridgeCutoff = 40.0;
constexpr std::size_t kChunk = 1024;

std::size_t step_count(const PathConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));
}

struct HitProblem {
    double y0 = 0.0;       ///< log start
    double barrier = 0.0;  ///< log barrier
    bool upward = true;
    double drift = 0.0;    ///< log drift per year
    double sigma = 0.0;
    double r_tilde = 0.0;
    double weight = 1.0;   ///< payoff collected at the barrier
};

/// Hitting time of one path, or a negative value if the horizon came first.
double hitting_time(const HitProblem& pb, const PathConfig& cfg, std::size_t steps,
                    std::mt19937_64& engine) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    const double dt = cfg.dt;
    const double sd1 = pb.sigma * std::sqrt(dt);
    const double mu1 = pb.drift * dt;
    const double toward = std::max(0.0, pb.upward ? pb.drift : -pb.drift);
    const double ks = kSkipSigmas * pb.sigma;
    const double two_over_var_dt = 2.0 / (pb.sigma * pb.sigma * dt);
    const bool bridge = cfg.monitoring == Monitoring::BrownianBridge;

    double y = pb.y0;
    std::size_t i = 0;
    while (i < steps) {
        const double dist = pb.upward ? pb.barrier - y : y - pb.barrier;
        if (cfg.skip_far_blocks && dist > ks * std::sqrt(2.0 * dt) + toward * 2.0 * dt) {
            // Largest block length s² with ks·s + toward·s² < dist.
            double s = 0.0;
            if (toward > 0.0) {
                s = (-ks + std::sqrt(ks * ks + 4.0 * toward * dist)) / (2.0 * toward);
            } else {
                s = dist / ks;
            }
            auto m = static_cast<std::size_t>(s * s / dt);
            m = std::min(m, steps - i);
            if (m >= 2) {
                const double span = static_cast<double>(m) * dt;
                y += pb.drift * span + pb.sigma * std::sqrt(span) * normal(engine);
                i += m;
                continue;
            }
        }
        const double y1 = y + mu1 + sd1 * normal(engine);
        ++i;
        const double d0 = pb.upward ? pb.barrier - y : y - pb.barrier;
        const double d1 = pb.upward ? pb.barrier - y1 : y1 - pb.barrier;
        if (d1 <= 0.0) return static_cast<double>(i) * dt;
        if (bridge) {
            const double exponent = two_over_var_dt * d0 * d1;
            if (exponent < kBridgeCutoff && uniform(engine) < std::exp(-exponent)) {
                return static_cast<double>(i) * dt;
            }
        }
        y = y1;
    }
    return -1.0;
}

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t misses = 0;
};

McEstimate estimate(const HitProblem& pb, const PathConfig& cfg) {
    const std::size_t steps = step_count(cfg);
    const std::size_t n = cfg.n_paths;
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<ChunkSums> chunks(n_chunks);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) {
            ChunkSums acc;
            const std::size_t end = std::min(n, (c + 1) * kChunk);
            for (std::size_t p = c * kChunk; p < end; ++p) {
                auto engine = path_engine(cfg.seed, p);
                const double tau = hitting_time(pb, cfg, steps, engine);
                if (tau < 0.0) {
                    ++acc.misses;
                    continue;
                }
                const double sample = pb.weight * std::exp(-pb.r_tilde * tau);
                acc.sum += sample;
                acc.sum_sq += sample * sample;
            }
            chunks[c] = acc;
        }
    };

    unsigned workers = cfg.workers != 0 ? cfg.workers : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(n_chunks));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    // Reduce in chunk order so the result is independent of the worker count.
    ChunkSums total;
    for (const auto& c : chunks) {
        total.sum += c.sum;
        total.sum_sq += c.sum_sq;
        total.misses += c.misses;
    }
    const double count = static_cast<double>(n);
    McEstimate out;
    out.n = n;
    out.mean = total.sum / count;
    const double var = std::max(0.0, (total.sum_sq - count * out.mean * out.mean) / (count - 1.0));
    out.std_error = std::sqrt(var / count);
    out.truncated_fraction = static_cast<double>(total.misses) / count;
    return out;
}

void require_start(double x) {
    if (!std::isfinite(x) || !(x > 0.0)) throw ParameterError("start price must be > 0");
}

McEstimate exact(double value, std::size_t n) {
    return McEstimate{value, 0.0, n, 0.0};
}

HitProblem make_problem(const MarketParams& market, const LoanTerms& terms, double x,
                        double level) {
    HitProblem pb;
    pb.y0 = std::log(x);
    pb.barrier = std::log(level);
    pb.upward = level > x;
    pb.drift = log_drift(market, terms.gamma);
    pb.sigma = market.sigma;
    pb.r_tilde = market.r - terms.gamma;
    return pb;
}

}  // namespace

double log_drift(const MarketParams& market, double gamma) {
    return market.r - gamma - market.delta - 0.5 * market.sigma * market.sigma;
}

PathConfig default_config(const MarketParams& market, const LoanTerms& terms) {
    PathConfig cfg;
    const double drift = std::abs(log_drift(market, terms.gamma));
    const double scale = drift > 0.0 ? std::max(1.0, 1.0 / drift)
                                     : std::numeric_limits<double>::infinity();
    cfg.horizon = std::max(cfg.horizon, 10.0 * scale);
    if (!std::isfinite(cfg.horizon)) cfg.horizon = 1000.0;
    return cfg;
}

void validate_config(const PathConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be > 0");
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
        throw ConfigError("horizon must be > 0");
    }
    if (cfg.dt > cfg.horizon / 100.0) throw ConfigError("dt too coarse: need dt <= horizon/100");
    if (cfg.n_paths < 1000) throw ConfigError("n_paths must be >= 1000");
}

PathSimulator::PathSimulator(const MarketParams& market, const LoanTerms& terms, double x,
                             const PathConfig& cfg)
    : s0_(x),
      drift_step_(log_drift(market, terms.gamma) * cfg.dt),
      vol_step_(market.sigma * std::sqrt(cfg.dt)),
      steps_(0),
      seed_(cfg.seed) {
    validate_contract(market, terms);
    validate_config(cfg);
    require_start(x);
    steps_ = step_count(cfg);
}

std::vector<double> PathSimulator::path_with(const std::function<double()>& normals) const {
    std::vector<double> out(steps_ + 1);
    double y = std::log(s0_);
    out[0] = s0_;
    for (std::size_t i = 1; i <= steps_; ++i) {
        y += drift_step_ + vol_step_ * normals();
        out[i] = std::exp(y);
    }
    return out;
}

std::vector<double> PathSimulator::path(std::uint64_t index) const {
    auto engine = path_engine(seed_, index);
    std::normal_distribution<double> normal;
    return path_with([&] { return normal(engine); });
}

McEstimate hitting_transform_mc(const MarketParams& market, const LoanTerms& terms, double x,
                                double level, const PathConfig& cfg) {
    validate_contract(market, terms);
    validate_config(cfg);
    require_start(x);
    if (!std::isfinite(level) || !(level > 0.0)) throw ParameterError("level must be > 0");
    if (level == x) return exact(1.0, cfg.n_paths);
    return estimate(make_problem(market, terms, x, level), cfg);
}

McEstimate threshold_strategy_value(const MarketParams& market, const LoanTerms& terms, double x,
                                    double threshold, const PathConfig& cfg) {
    validate_contract(market, terms);
    validate_config(cfg);
    require_start(x);
    if (!std::isfinite(threshold) || !(threshold >= terms.q)) {
        throw ParameterError("threshold must be >= q");
    }
    const double hi = terms.cap.value_or(std::numeric_limits<double>::infinity());
    const double lo = std::min(threshold, hi);
    if (x >= lo && x <= hi) return exact(std::min(x, hi) - terms.q, cfg.n_paths);

    const double level = x < lo ? lo : hi;
    HitProblem pb = make_problem(market, terms, x, level);
    pb.weight = std::max(level - terms.q, 0.0);
    return estimate(pb, cfg);
}

}  // namespace stockloan::sim
