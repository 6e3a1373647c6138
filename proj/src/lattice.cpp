#include "stockloan/errors.hpp"
#include "stockloan/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stockloan::sim {

LatticeResult lattice_value(const MarketParams& market, const LoanTerms& terms, double x,
                            std::size_t steps, double horizon) {
    validate_contract(market, terms);
    if (!std::isfinite(x) || !(x > 0.0)) throw ParameterError("start price must be > 0");
    if (steps < 1) throw ConfigError("lattice needs at least one step");
    if (!std::isfinite(horizon) || !(horizon > 0.0)) throw ConfigError("horizon must be > 0");

    const double dt = horizon / static_cast<double>(steps);
    const double r_tilde = market.r - terms.gamma;
    const double jump = market.sigma * std::sqrt(dt);
    const double u = std::exp(jump);
    const double d = 1.0 / u;
    const double p = (std::exp((r_tilde - market.delta) * dt) - d) / (u - d);
    if (!(p > 0.0 && p < 1.0)) {
        throw ConfigError("lattice up-probability outside (0,1); increase steps");
    }
    const double disc = std::exp(-r_tilde * dt);
    const double pu = disc * p;
    const double pd = disc * (1.0 - p);
    const double cap = terms.cap.value_or(std::numeric_limits<double>::infinity());
    const double q = terms.q;

    // price(i, k) = x·u^(2k − i), k = 0..i
    const std::size_t n = steps;
    std::vector<double> level(2 * n + 1);
    for (std::size_t j = 0; j <= 2 * n; ++j) {
        level[j] = x * std::exp(jump * (static_cast<double>(j) - static_cast<double>(n)));
    }
    auto price = [&](std::size_t i, std::size_t k) { return level[2 * k + n - i]; };
    auto exercise = [&](double s) { return std::max(std::min(s, cap) - q, 0.0); };

    LatticeResult out;
    out.steps = steps;
    out.horizon = horizon;
    out.up_probability = p;
    out.exercise_boundary.assign(n + 1, std::nullopt);

    std::vector<double> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        v[k] = exercise(price(n, k));
        if (!out.exercise_boundary[n] && v[k] > 0.0) out.exercise_boundary[n] = price(n, k);
    }
    for (std::size_t i = n; i-- > 0;) {
        std::optional<double> lowest;
        for (std::size_t k = 0; k <= i; ++k) {
            const double cont = pu * v[k + 1] + pd * v[k];
            const double s = price(i, k);
            const double pay = exercise(s);
            if (pay > 0.0 && pay >= cont) {
                v[k] = pay;
                if (!lowest) lowest = s;
            } else {
                v[k] = cont;
            }
        }
        out.exercise_boundary[i] = lowest;
    }
    out.value = v[0];
    return out;
}

}  // namespace stockloan::sim
