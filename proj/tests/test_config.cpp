#include "stockloan/config.hpp"
#include "stockloan/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace stockloan;

namespace {

const char* kExample1 = R"(# example
r = 0.05
sigma = 0.15
delta = 0.01
gamma = 0.07
q = 100
c = 1
cap = 240   # trailing comment
s0 = 150
)";

std::string expect_parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    ADD_FAILURE() << "no ParseError for:\n" << text;
    return {};
}

}  // namespace

TEST(Config, ParsesAllKeys) {
    const LoanConfig cfg = parse_config(kExample1);
    EXPECT_DOUBLE_EQ(cfg.market.r, 0.05);
    EXPECT_DOUBLE_EQ(cfg.market.sigma, 0.15);
    EXPECT_DOUBLE_EQ(cfg.market.delta, 0.01);
    EXPECT_DOUBLE_EQ(cfg.terms.gamma, 0.07);
    EXPECT_DOUBLE_EQ(cfg.terms.q, 100);
    EXPECT_DOUBLE_EQ(cfg.terms.c, 1);
    ASSERT_TRUE(cfg.terms.cap.has_value());
    EXPECT_DOUBLE_EQ(*cfg.terms.cap, 240);
    EXPECT_DOUBLE_EQ(cfg.terms.s0, 150);
}

TEST(Config, CapIsOptional) {
    std::string text = kExample1;
    text.erase(text.find("cap"), text.find("s0") - text.find("cap"));
    EXPECT_FALSE(parse_config(text).terms.cap.has_value());
}

TEST(Config, Errors) {
    EXPECT_NE(expect_parse_error(std::string(kExample1) + "foo = 1\n").find("foo"),
              std::string::npos);
    EXPECT_NE(expect_parse_error(std::string(kExample1) + "r = 0.1\n").find("r"),
              std::string::npos);
    std::string missing = kExample1;
    missing.erase(missing.find("sigma"), missing.find("delta") - missing.find("sigma"));
    EXPECT_NE(expect_parse_error(missing).find("sigma"), std::string::npos);
    std::string bad = kExample1;
    bad.replace(bad.find("100"), 3, "1e0x");
    EXPECT_NE(expect_parse_error(bad).find("q"), std::string::npos);
    expect_parse_error(std::string(kExample1) + "no equals sign\n");
}

TEST(Config, LoadFile) {
    const auto path = std::filesystem::temp_directory_path() / "stockloan_config_test.cfg";
    {
        std::ofstream f(path);
        f << kExample1;
    }
    EXPECT_DOUBLE_EQ(load_config(path).terms.s0, 150);
    std::filesystem::remove(path);
    try {
        load_config(path);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
    }
}
