#include "stockloan/config.hpp"

#include "stockloan/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace stockloan {

namespace {

constexpr std::array<std::string_view, 8> kKnownKeys = {"r", "sigma", "delta", "gamma",
                                                        "q", "c",     "cap",   "s0"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view key, std::string_view text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || text.empty() || !std::isfinite(value)) {
        throw ParseError("key '" + std::string(key) + "': invalid number '" + std::string(text) +
                         "'");
    }
    return value;
}

}  // namespace

LoanConfig parse_config(std::string_view text) {
    std::map<std::string, double, std::less<>> values;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view raw = trim(line.substr(eq + 1));
        bool known = false;
        for (auto k : kKnownKeys) known = known || k == key;
        if (!known) throw ParseError("key '" + std::string(key) + "': unknown key");
        if (values.count(key) != 0) {
            throw ParseError("key '" + std::string(key) + "': duplicate key");
        }
        values.emplace(std::string(key), parse_number(key, raw));
    }

    auto required = [&](std::string_view key) {
        const auto it = values.find(key);
        if (it == values.end()) throw ParseError("key '" + std::string(key) + "': missing");
        return it->second;
    };

    LoanConfig cfg;
    cfg.market.r = required("r");
    cfg.market.sigma = required("sigma");
    cfg.market.delta = required("delta");
    cfg.terms.gamma = required("gamma");
    cfg.terms.q = required("q");
    cfg.terms.c = required("c");
    cfg.terms.s0 = required("s0");
    if (const auto it = values.find("cap"); it != values.end()) cfg.terms.cap = it->second;
    return cfg;
}

LoanConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace stockloan
