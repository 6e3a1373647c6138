#include "stockloan/report.hpp"

#include <cstdio>

namespace stockloan {

nlohmann::json to_json(const ValueFunction& vf) {
    const auto& e = vf.exponents();
    nlohmann::json j;
    j["regime"] = std::string(to_string(e.regime));
    j["mu"] = e.mu;
    j["lambda1"] = e.lambda1;
    j["lambda2"] = e.lambda2;
    j["b"] = vf.b();
    j["shape"] = std::string(to_string(vf.shape()));
    j["q"] = vf.q();
    j["cap"] = vf.cap() ? nlohmann::json(*vf.cap()) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const FairTermsReport& rep) {
    return {
        {"case", std::string(to_string(rep.price_case))},
        {"fair_fee", rep.fair_fee},
        {"negative_fee", rep.negative_fee},
        {"optimal_rule", rep.optimal_rule},
        {"b", rep.b},
        {"value_at_s0", rep.value_at_s0},
        {"shape", std::string(to_string(rep.shape))},
    };
}

nlohmann::json to_json(const sim::McEstimate& est) {
    return {
        {"mean", est.mean},
        {"stderr", est.std_error},
        {"n", est.n},
        {"truncated_fraction", est.truncated_fraction},
    };
}

nlohmann::json to_json(const VerifyReport& rep) {
    return {
        {"closed_form", rep.closed_form},
        {"lcp", rep.lcp},
        {"mc",
         {{"mean", rep.mc.mean},
          {"stderr", rep.mc.std_error},
          {"truncated_fraction", rep.mc.truncated_fraction}}},
        {"lattice", rep.lattice},
        {"max_abs_disagreement", rep.max_abs_disagreement},
    };
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace stockloan
