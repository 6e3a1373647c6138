#include "cli.hpp"

#include "stockloan/closedform.hpp"
#include "stockloan/config.hpp"
#include "stockloan/errors.hpp"
#include "stockloan/fairterms.hpp"
#include "stockloan/lcp.hpp"
#include "stockloan/report.hpp"
#include "stockloan/simulate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace stockloan::cli {

namespace {

constexpr double kLcpRelTol = 1e-3;
constexpr double kMcSigmas = 3.0;
constexpr double kLatticeRelTol = 1e-2;

struct Options {
    std::string config;
    std::optional<double> x;
    bool json = false;
    // curve
    double x_max = 0.0;
    std::size_t points = 0;
    std::string out_path;
    // verify
    std::size_t mc_paths = 100000;
    std::size_t lattice_steps = 20000;
    std::uint64_t seed = sim::PathConfig{}.seed;
    std::size_t lcp_nodes = 2048;
    std::string lcp_dump;
};

void print_warnings(const LoanTerms& terms, std::ostream& err) {
    for (const auto& w : soft_warnings(terms)) err << "warning: " << w << '\n';
}

void table_row(std::ostream& out, const std::string& key, const std::string& value) {
    out << std::left << std::setw(14) << key << value << '\n';
}

int cmd_regime_check(const Options& opt, std::ostream& out, std::ostream& err) {
    const LoanConfig cfg = load_config(opt.config);
    const Regime regime = validate(cfg.market, cfg.terms);
    print_warnings(cfg.terms, err);
    table_row(out, "regime", std::string(to_string(regime.tag)));
    table_row(out, "r_tilde", format_number(regime.r_tilde));
    return kOk;
}

int cmd_price(const Options& opt, std::ostream& out, std::ostream& err) {
    const LoanConfig cfg = load_config(opt.config);
    const ValueFunction vf = build(cfg.market, cfg.terms);
    print_warnings(cfg.terms, err);
    const double x = opt.x.value_or(cfg.terms.s0);
    const double f = value(vf, x);
    if (opt.json) {
        auto j = to_json(vf);
        j["x"] = x;
        j["value"] = f;
        out << j.dump(2) << '\n';
        return kOk;
    }
    table_row(out, "x", format_number(x));
    table_row(out, "value", format_number(f));
    table_row(out, "b", format_number(vf.b()));
    table_row(out, "lambda1", format_number(vf.exponents().lambda1));
    table_row(out, "lambda2", format_number(vf.exponents().lambda2));
    table_row(out, "regime", std::string(to_string(vf.exponents().regime)));
    table_row(out, "shape", std::string(to_string(vf.shape())));
    return kOk;
}

int cmd_curve(const Options& opt, std::ostream& out, std::ostream& err) {
    if (!(opt.x_max > 0.0)) throw ParameterError("--x-max must be > 0");
    if (opt.points < 2) throw ParameterError("--points must be >= 2");
    const LoanConfig cfg = load_config(opt.config);
    const ValueFunction vf = build(cfg.market, cfg.terms);
    const ValueFunction uncapped =
        build_contract(cfg.market, cfg.terms.q, cfg.terms.gamma, std::nullopt);
    print_warnings(cfg.terms, err);

    std::ostringstream csv;
    csv << "x,value,payoff,uncapped_value\n";
    const double last = static_cast<double>(opt.points - 1);
    for (std::size_t i = 0; i < opt.points; ++i) {
        const double x = i + 1 == opt.points ? opt.x_max : opt.x_max * static_cast<double>(i) / last;
        csv << format_number(x) << ',' << format_number(value(vf, x)) << ','
            << format_number(payoff(vf, x)) << ',' << format_number(value(uncapped, x)) << '\n';
    }
    if (opt.out_path.empty()) {
        out << csv.str();
        return kOk;
    }
    std::ofstream file(opt.out_path, std::ios::binary);
    file << csv.str();
    file.close();
    if (!file) throw IoError("cannot write '" + opt.out_path + "'");
    return kOk;
}

int cmd_fair(const Options& opt, std::ostream& out, std::ostream& err) {
    const LoanConfig cfg = load_config(opt.config);
    const auto& t = cfg.terms;
    print_warnings(t, err);
    const FairTermsReport rep = fair_fee(cfg.market, t.q, t.gamma, t.cap, t.s0);
    const auto j = to_json(rep);
    if (!opt.json) {
        table_row(out, "case", std::string(to_string(rep.price_case)));
        table_row(out, "fair_fee", format_number(rep.fair_fee));
        table_row(out, "negative_fee", rep.negative_fee ? "yes" : "no");
        table_row(out, "value_at_s0", format_number(rep.value_at_s0));
        table_row(out, "b", format_number(rep.b));
        table_row(out, "shape", std::string(to_string(rep.shape)));
        table_row(out, "optimal_rule", rep.optimal_rule);
        out << '\n';
    }
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
    const LoanConfig cfg = load_config(opt.config);
    const ValueFunction vf = build(cfg.market, cfg.terms);
    print_warnings(cfg.terms, err);
    const double x = opt.x.value_or(cfg.terms.s0);
    if (!(x > 0.0)) throw ParameterError("--x must be > 0 for verification");

    VerifyReport rep;
    rep.closed_form = value(vf, x);

    std::vector<std::string> failures;

    lcp::GridSpec grid;
    grid.n = opt.lcp_nodes;
    grid.include = x;
    std::optional<lcp::Solve> lcp_run;
    try {
        lcp_run = lcp::solve(cfg.market, cfg.terms, grid);
        rep.lcp = lcp::solution_value(lcp_run->solution, x);
    } catch (const NonConvergence& e) {
        rep.lcp = std::nan("");
        failures.push_back(std::string("lcp: ") + e.what());
    }

    sim::PathConfig pc = sim::default_config(cfg.market, cfg.terms);
    pc.n_paths = opt.mc_paths;
    pc.seed = opt.seed;
    rep.mc = sim::threshold_strategy_value(cfg.market, cfg.terms, x, vf.b(), pc);

    rep.lattice = sim::lattice_value(cfg.market, cfg.terms, x, opt.lattice_steps, pc.horizon).value;

    const double cf = rep.closed_form;
    rep.max_abs_disagreement = std::max({std::abs(rep.lcp - cf), std::abs(rep.mc.mean - cf),
                                         std::abs(rep.lattice - cf)});

    if (lcp_run && !(std::abs(rep.lcp - cf) <= kLcpRelTol * std::abs(cf))) {
        failures.push_back("lcp: relative deviation above 1e-3");
    }
    const double mc_band = std::max(kMcSigmas * rep.mc.std_error, 1e-12 * std::abs(cf));
    if (!(std::abs(rep.mc.mean - cf) <= mc_band)) {
        failures.push_back("mc: deviation above 3 standard errors");
    }
    if (!(std::abs(rep.lattice - cf) <= kLatticeRelTol * std::abs(cf))) {
        failures.push_back("lattice: relative deviation above 1%");
    }

    if (!opt.lcp_dump.empty() && lcp_run) {
        std::ostringstream csv;
        csv << "x,h_lcp,h_closed,payoff\n";
        const auto& g = lcp_run->grid;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double xi = g.price(i);
            csv << format_number(xi) << ',' << format_number(lcp_run->solution.values[i]) << ','
                << format_number(value(vf, xi)) << ',' << format_number(g.payoff[i]) << '\n';
        }
        std::ofstream file(opt.lcp_dump, std::ios::binary);
        file << csv.str();
        file.close();
        if (!file) throw IoError("cannot write '" + opt.lcp_dump + "'");
    }

    out << to_json(rep).dump(2) << '\n';
    if (!failures.empty()) {
        std::string joined;
        for (const auto& f : failures) joined += (joined.empty() ? "" : "; ") + f;
        err << "GateFailure: " << joined << '\n';
        return kGateFailure;
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Valuation and verification of stock loans and capped stock loans",
                 "stockloan-cli"};
    app.require_subcommand(1, 1);
    Options opt;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "key=value parameter file")->required();
    };

    auto* price = app.add_subcommand("price", "closed-form value at a price");
    add_config(price);
    price->add_option("--x", opt.x, "stock price (default: s0)");
    price->add_flag("--json", opt.json, "print JSON instead of a table");

    auto* curve = app.add_subcommand("curve", "value curve as CSV");
    add_config(curve);
    curve->add_option("--x-max", opt.x_max, "right end of the price grid")->required();
    curve->add_option("--points", opt.points, "number of grid points (>= 2)")->required();
    curve->add_option("--out", opt.out_path, "output CSV path (default: stdout)");

    auto* verify = app.add_subcommand("verify", "cross-check the closed form with three oracles");
    add_config(verify);
    verify->add_option("--x", opt.x, "stock price (default: s0)");
    verify->add_option("--mc-paths", opt.mc_paths, "Monte Carlo paths");
    verify->add_option("--lattice-steps", opt.lattice_steps, "binomial steps");
    verify->add_option("--seed", opt.seed, "random seed");
    verify->add_option("--lcp-nodes", opt.lcp_nodes, "LCP grid nodes");
    verify->add_option("--lcp-dump", opt.lcp_dump, "write x,h_lcp,h_closed,payoff CSV");

    auto* fair = app.add_subcommand("fair", "fair service fee and negotiation case");
    add_config(fair);
    fair->add_flag("--json", opt.json, "print JSON only");

    auto* regime = app.add_subcommand("regime-check", "validate parameters and print the regime");
    add_config(regime);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "UsageError: " << msg << '\n';
        return kInputError;
    }

    try {
        if (price->parsed()) return cmd_price(opt, out, err);
        if (curve->parsed()) return cmd_curve(opt, out, err);
        if (verify->parsed()) return cmd_verify(opt, out, err);
        if (fair->parsed()) return cmd_fair(opt, out, err);
        return cmd_regime_check(opt, out, err);
    } catch (const IoError& e) {
        err << kind_name(e.kind()) << ": " << e.what() << '\n';
        // Reading the config is an input problem; writing results is not.
        const bool reading = std::string_view(e.what()).starts_with("cannot read");
        return reading ? kInputError : kIoFailure;
    } catch (const NonConvergence& e) {
        err << kind_name(e.kind()) << ": " << e.what() << '\n';
        return kGateFailure;
    } catch (const Error& e) {
        err << kind_name(e.kind()) << ": " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace stockloan::cli
