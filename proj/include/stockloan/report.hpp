#pragma once

#include "stockloan/closedform.hpp"
#include "stockloan/fairterms.hpp"
#include "stockloan/simulate.hpp"

#include <json.hpp>

#include <string>

namespace stockloan {

/// {regime, mu, lambda1, lambda2, b, shape, q, cap}; cap is null when uncapped.
nlohmann::json to_json(const ValueFunction& vf);

/// {case, fair_fee, negative_fee, optimal_rule, b, value_at_s0, shape}
nlohmann::json to_json(const FairTermsReport& rep);

/// {mean, stderr, n, truncated_fraction}
nlohmann::json to_json(const sim::McEstimate& est);

/// Cross-oracle comparison at one price.
struct VerifyReport {
    double closed_form = 0.0;
    double lcp = 0.0;
    sim::McEstimate mc;
    double lattice = 0.0;
    double max_abs_disagreement = 0.0;
};

/// {closed_form, lcp, mc: {mean, stderr, truncated_fraction}, lattice, max_abs_disagreement}
nlohmann::json to_json(const VerifyReport& rep);

/// %.12g formatting used for every number written to CSV and tables.
std::string format_number(double v);

}  // namespace stockloan
