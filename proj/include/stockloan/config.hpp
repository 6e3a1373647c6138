#pragma once

#include "stockloan/params.hpp"

#include <filesystem>
#include <string_view>

namespace stockloan {

struct LoanConfig {
    MarketParams market;
    LoanTerms terms;
};

/// Parses flat `key = value` text. Blank lines and `#` comments are ignored.
/// Required keys: r, sigma, delta, gamma, q, c, s0; optional: cap.
/// Errors are ParseError and name the offending key (or line).
LoanConfig parse_config(std::string_view text);

/// Reads and parses a config file; IoError names the path.
LoanConfig load_config(const std::filesystem::path& path);

}  // namespace stockloan
