#include "fairfaucet/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fairfaucet/chain_sim.hpp"
#include "fairfaucet/csv.hpp"
#include "fairfaucet/golden.hpp"
#include "fairfaucet/scenario.hpp"
#include "fairfaucet/verify.hpp"

namespace fairfaucet::cli {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<spdlog::logger> logger() {
    static std::shared_ptr<spdlog::logger> log = [] {
        auto l = spdlog::stderr_color_mt("fairfaucet");
        l->set_pattern("[%l] %v");
        spdlog::level::level_enum level = spdlog::level::warn;
        if (const char* env = std::getenv("FAIRFAUCET_LOG")) level = spdlog::level::from_str(env);
        l->set_level(level);
        return l;
    }();
    return log;
}

struct Options {
    std::string scenario;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string sweep;
    bool inject = false;
    bool force = false;
    bool parallel = false;
};

Scenario load(const Options& opt) {
    Scenario sc = load_scenario(opt.scenario);
    if (opt.seed) sc.seed = *opt.seed;
    logger()->info("loaded {} scenario: n={} epochs={} seed={}", to_string(sc.variant), sc.users, sc.epochs, sc.seed);
    return sc;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw FaucetError("cannot write " + path.string());
    file << content;
}

/// Writes the standard output set for one simulation into `dir`.
void write_outputs(const fs::path& dir, const SimulationResult& result) {
    fs::create_directories(dir);
    std::ostringstream trace, receipts, balances;
    csv::write_trace(trace, result.receipts);
    csv::write_receipts(receipts, result.receipts);
    csv::write_balances(balances, result.balances);
    write_file(dir / "trace.csv", trace.str());
    write_file(dir / "receipts.csv", receipts.str());
    write_file(dir / "balances.csv", balances.str());
    if (result.scenario.variant == Variant::cmf) {
        std::ostringstream dist;
        csv::write_distributions(dist, result.distributions);
        write_file(dir / "distributions.csv", dist.str());
    }
}

std::vector<std::uint32_t> parse_sweep(const std::string& text) {
    std::string body = text;
    if (body.rfind("n=", 0) == 0) body = body.substr(2);
    std::vector<std::uint32_t> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            throw ScenarioError("bad --sweep value '" + text + "', expected n=10,50,...");
        }
        out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    if (out.empty()) throw ScenarioError("empty --sweep");
    return out;
}

int cmd_run(const Options& opt, std::ostream& out) {
    const Scenario sc = load(opt);
    const SimulationResult result = run_scenario(sc);
    write_outputs(opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir), result);
    Amount distributed = 0;
    for (const auto& [user, balance] : result.balances) distributed += balance;
    out << to_string(sc.variant) << " n=" << sc.users << " epochs=" << sc.epochs << " txs=" << result.receipts.size()
        << " distributed=" << distributed << " capacity_left=" << result.final_capacity << '\n';
    if (const auto over = result.over_budget_count(); over > 0) {
        out << "warning: " << over << " transaction(s) exceeded the block budget of "
            << sc.cost_model.block_budget << '\n';
    }
    if (result.floor_guard_count > 0) {
        out << "note: " << result.floor_guard_count << " claim(s) raised a zero user share to 1\n";
    }
    return kExitOk;
}

int cmd_verify(const Options& opt, std::ostream& out) {
    const Scenario sc = load(opt);
    SimulationResult result = run_scenario(sc);
    if (opt.inject) {
        logger()->warn("injecting a fault into the simulation result");
        inject_fault(result);
    }
    const VerifyReport report = verify(result);
    out << report.summary() << '\n';
    for (const auto& check : report.epochs) {
        if (check.exact) continue;
        out << "epoch " << check.epoch << ": ";
        if (!check.explained) {
            out << "MISMATCH";
        } else {
            std::vector<std::string> why;
            if (check.exceptions.fcfs_depletion) why.emplace_back("first-come-first-served depletion");
            if (check.exceptions.round_limit) {
                why.emplace_back("oracle needs " + std::to_string(check.oracle_iterations) + " iterations, " +
                                 std::to_string(sc.claim_rounds()) + " claim rounds available (finding)");
            }
            if (check.exceptions.fixed_point) why.emplace_back("fixed-point rounding");
            for (std::size_t i = 0; i < why.size(); ++i) out << (i ? "; " : "") << why[i];
        }
        out << " granted=" << check.granted_total << " oracle=" << check.oracle_total << '\n';
    }
    return report.passed ? kExitOk : kExitMismatch;
}

int cmd_cost_report(const Options& opt, std::ostream& out) {
    const Scenario sc = load(opt);
    const std::vector<std::uint32_t> sizes = opt.sweep.empty() ? std::vector<std::uint32_t>{sc.users}
                                                               : parse_sweep(opt.sweep);
    std::vector<Scenario> jobs;
    for (std::uint32_t n : sizes) {
        const Scenario sized = n == sc.users ? sc : sc.rescaled(n);
        for (Variant v : {Variant::cmf, Variant::amf, Variant::wamf}) {
            Scenario job = sized;
            job.variant = v;
            jobs.push_back(job);
        }
    }

    std::vector<SimulationResult> runs(jobs.size());
    if (opt.parallel) {
        std::vector<std::future<SimulationResult>> futures;
        for (const auto& job : jobs) futures.push_back(std::async(std::launch::async, [job] { return run_scenario(job); }));
        for (std::size_t i = 0; i < futures.size(); ++i) runs[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < jobs.size(); ++i) runs[i] = run_scenario(jobs[i]);
    }

    std::vector<SimulationResult> selected;
    for (auto& run : runs) {
        if (run.scenario.variant == sc.variant) selected.push_back(run);
    }
    const auto rows = cost_report(selected);
    csv::write_cost_report(out, rows);
    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        std::ostringstream file;
        csv::write_cost_report(file, cost_report(runs));
        write_file(fs::path(opt.out_dir) / "cost_report.csv", file.str());
    }

    // CMF distribute vs autonomous claim/demand, per n.
    const auto all_rows = cost_report(runs);
    auto mean_of = [&](Variant v, Action a, std::uint32_t n) -> std::string {
        for (const auto& row : all_rows) {
            if (row.variant == v && row.action == a && row.users == n && !row.round) return std::to_string(row.mean);
        }
        return "-";
    };
    out << "\nscaling: n,cmf_distribute,amf_claim,amf_demand,wamf_claim,wamf_demand\n";
    for (std::uint32_t n : sizes) {
        out << n << ',' << mean_of(Variant::cmf, Action::distribute, n) << ','
            << mean_of(Variant::amf, Action::claim, n) << ',' << mean_of(Variant::amf, Action::demand, n) << ','
            << mean_of(Variant::wamf, Action::claim, n) << ',' << mean_of(Variant::wamf, Action::demand, n) << '\n';
    }

    if (sc.epochs > 1 && !sc.scripted_demands) {
        const std::uint32_t limit = std::max<std::uint32_t>(1000, *std::max_element(sizes.begin(), sizes.end()));
        if (const auto threshold = find_budget_threshold(sc, limit)) {
            out << "block budget " << sc.cost_model.block_budget << " first exceeded by CMF distribute at n="
                << threshold->users << " (cost " << threshold->distribute_cost << "); worst autonomous tx at that n: "
                << threshold->max_autonomous_cost << (threshold->autonomous_within_budget ? " (within budget)" : " (OVER budget)")
                << '\n';
        } else {
            out << "CMF distribute stays within the block budget up to n=" << limit << '\n';
        }
    }
    return kExitOk;
}

int cmd_golden(const Options& opt, std::ostream& out, std::ostream& err) {
    const fs::path root = opt.out_dir.empty() ? fs::path("golden") : fs::path(opt.out_dir);
    const std::vector<std::pair<std::string, Scenario>> fixtures = {
        {"cmf_table", cmf_table_scenario()},
        {"amf_table", amf_table_scenario()},
    };
    for (const auto& [name, sc] : fixtures) {
        if (fs::exists(root / name) && !opt.force) {
            err << "refusing to overwrite " << (root / name).string() << " (use --force)\n";
            return kExitUsage;
        }
    }
    for (const auto& [name, sc] : fixtures) {
        const fs::path dir = root / name;
        fs::create_directories(dir);
        write_file(dir / "scenario.json", scenario_to_json(sc));
        write_outputs(dir, run_scenario(sc));
        out << "wrote " << dir.string() << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Max-min fairness faucet simulator"};
    app.name("fairfaucet");
    app.require_subcommand(1);
    Options opt;

    auto add_scenario = [&opt](CLI::App* sub) {
        sub->add_option("--scenario", opt.scenario, "Scenario JSON file")->required();
        sub->add_option("--seed", opt.seed, "Override the scenario seed");
    };

    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write trace, receipts and balances");
    add_scenario(run_cmd);
    run_cmd->add_option("--out", opt.out_dir, "Output directory");

    auto* verify_cmd = app.add_subcommand("verify", "Check a scenario against the water-filling oracle");
    add_scenario(verify_cmd);
    verify_cmd->add_flag("--inject-fault", opt.inject, "Corrupt one grant before checking");

    auto* cost_cmd = app.add_subcommand("cost-report", "Mean and total transaction costs");
    add_scenario(cost_cmd);
    cost_cmd->add_option("--sweep", opt.sweep, "Run for several n, e.g. n=10,50,100,500");
    cost_cmd->add_option("--out", opt.out_dir, "Also write cost_report.csv here");
    cost_cmd->add_flag("--parallel", opt.parallel, "Run sweep points concurrently");

    auto* golden_cmd = app.add_subcommand("golden", "Regenerate the worked-example fixtures");
    golden_cmd->add_option("--out", opt.out_dir, "Fixture directory");
    golden_cmd->add_flag("--force", opt.force, "Overwrite existing fixtures");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(opt, out);
        if (verify_cmd->parsed()) return cmd_verify(opt, out);
        if (cost_cmd->parsed()) return cmd_cost_report(opt, out);
        if (golden_cmd->parsed()) return cmd_golden(opt, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace fairfaucet::cli
