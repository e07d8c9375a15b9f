#include "fairdiv/error.hpp"
#include "fairdiv/generate.hpp"
#include "fairdiv/gmref.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/realloc.hpp"
#include "fairdiv/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using nlohmann::json;
using namespace fairdiv;

namespace {

// Exit contract: 0 pass, 1 verification fail, 2 input error, 3 internal
// invariant violation, 4 budget.
int exit_code_for(Errc c) {
    switch (c) {
    case Errc::parse_error:
    case Errc::non_bivalued:
    case Errc::non_positive_weight:
    case Errc::non_positive_value:
    case Errc::degenerate_k:
        return 2;
    case Errc::budget_exceeded:
    case Errc::lp_size_exceeded:
        return 4;
    default:
        return 3;
    }
}

std::optional<bool> check_override(bool flag_on) {
    if (flag_on) return true;
    if (const char* env = std::getenv("FAIRDIV_CHECK_INVARIANTS")) {
        if (std::string(env) == "1") return true;
        if (std::string(env) == "0") return false;
    }
    return std::nullopt;
}

Metric metric_from_mode(const std::string& mode) {
    if (mode == "wefx") return Metric::spending;
    if (mode == "weqx") return Metric::value;
    fail(Errc::parse_error, "mode must be wefx or weqx");
}

std::map<int, int> parse_assignments(const Instance& inst, const std::vector<std::string>& assigns) {
    std::map<int, int> overrides;
    for (const auto& a : assigns) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) fail(Errc::parse_error, "--assign wants good=agent");
        const std::string good = a.substr(0, eq), agent = a.substr(eq + 1);
        int gi = -1, ai = -1;
        for (int e = 0; e < inst.m; ++e)
            if (inst.good_ids[e] == good) gi = e;
        for (int i = 0; i < inst.n; ++i)
            if (inst.agent_ids[i] == agent) ai = i;
        if (gi < 0 || ai < 0) fail(Errc::parse_error, "unknown id in --assign " + a);
        overrides[gi] = ai;
    }
    return overrides;
}

VerifyReport solve_certificates(const Instance& inst, const SolveResult& result, Metric metric) {
    VerifyReport report;
    report.add(metric == Metric::spending ? check_wefx(inst, result.state.alloc)
                                          : check_weqx(inst, result.state.alloc));
    report.add(criterion_equilibrium(result.state));
    report.add(certify_fpo(result.state));
    return report;
}

struct GenArgs {
    int agents = 2;
    int goods = 5;
    std::string k = "2";
    std::string weights = "equal";
    std::optional<std::uint64_t> seed;
    std::string out;
};

int run_gen(const GenArgs& args) {
    const Rational k = Rational::parse(args.k);
    if (args.weights != "equal" && args.weights != "random")
        fail(Errc::parse_error, "--weights must be equal or random");
    std::uint64_t seed = args.seed ? *args.seed : std::random_device{}();
    const RawInstance raw =
        random_raw_instance(seed, args.agents, args.goods, k,
                            args.weights == "equal" ? WeightMode::equal : WeightMode::random_ints);
    validate_instance(raw); // generated files must load back cleanly
    write_json_file(args.out, raw_instance_to_json(raw));
    std::cout << "seed: " << seed << "\nwrote " << args.out << "\n";
    return 0;
}

struct SolveArgs {
    std::string input;
    std::string mode = "wefx";
    bool check = false;
    bool trace = false;
    std::string out;
    std::vector<std::string> assigns;
};

int run_solve(const SolveArgs& args) {
    const Instance inst = validate_instance(load_instance_file(args.input));
    SolveOptions opts;
    opts.metric = metric_from_mode(args.mode);
    opts.check_invariants = check_override(args.check);
    opts.owner_override = parse_assignments(inst, args.assigns);

    const SolveResult result = solve(inst, opts);
    const VerifyReport report = solve_certificates(inst, result, opts.metric);

    const json out = result_to_json(inst, result, args.mode, report, args.trace, opts.owner_override);
    if (!args.out.empty()) write_json_file(args.out, out);
    json summary = report_to_json(report);
    summary["terminated_at"] = out["terminated_at"];
    summary["round_counts"] = out["round_counts"];
    std::cout << summary.dump(2) << "\n";

    if (!report.all_pass()) {
        std::cerr << "solver output failed its own certificates\n";
        return 3;
    }
    return 0;
}

struct VerifyArgs {
    std::string input;
    std::string result;
    std::string criteria = "wefx,equilibrium,fpo-cert";
};

int run_verify(const VerifyArgs& args) {
    const Instance inst = validate_instance(load_instance_file(args.input));
    std::ifstream in(args.result);
    if (!in) fail(Errc::parse_error, "cannot open '" + args.result + "'");
    json rj;
    try {
        in >> rj;
    } catch (const json::exception& e) {
        fail(Errc::parse_error, std::string("invalid JSON in result file: ") + e.what());
    }
    const LoadedResult loaded = result_from_json(inst, rj);
    const MarketState state = MarketState::make(inst, loaded.alloc, loaded.price);

    VerifyReport report;
    std::stringstream ss(args.criteria);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name == "wefx") report.add(check_wefx(inst, loaded.alloc));
        else if (name == "weqx") report.add(check_weqx(inst, loaded.alloc));
        else if (name == "pwefx") report.add(check_pwefx(inst, loaded.alloc, loaded.price));
        else if (name == "equilibrium") report.add(criterion_equilibrium(state));
        else if (name == "fpo-cert") report.add(certify_fpo(state));
        else if (name == "efx") report.add(check_efx(inst, loaded.alloc));
        else if (name == "ef1") report.add(check_ef1(inst, loaded.alloc));
        else if (name == "eqx") report.add(check_eqx(inst, loaded.alloc));
        else fail(Errc::parse_error, "unknown criterion '" + name + "'");
    }
    std::cout << report_to_json(report).dump(2) << "\n";
    return report.all_pass() ? 0 : 1;
}

struct OracleArgs {
    std::string input;
    std::string list;
    std::string check_po;
    std::string check_fpo;
    long long budget = 10'000'000;
};

Allocation load_result_allocation(const Instance& inst, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
    json rj;
    try {
        in >> rj;
    } catch (const json::exception& e) {
        fail(Errc::parse_error, std::string("invalid JSON in result file: ") + e.what());
    }
    return result_from_json(inst, rj).alloc;
}

int run_oracle(const OracleArgs& args) {
    const Instance inst = validate_instance(load_instance_file(args.input));
    OracleBudget budget{args.budget};
    json out;
    bool pass = true;

    if (!args.list.empty()) {
        const auto set = args.list == "wefx"   ? wefx_set(inst, budget)
                         : args.list == "weqx" ? weqx_set(inst, budget)
                                               : (fail(Errc::parse_error,
                                                       "--list wants wefx or weqx"),
                                                  std::vector<Allocation>{});
        json allocations = json::array();
        for (const auto& a : set) {
            json ja = json::object();
            for (int i = 0; i < inst.n; ++i) ja[inst.agent_ids[i]] = json::array();
            for (int e = 0; e < inst.m; ++e)
                ja[inst.agent_ids[a.owner[e]]].push_back(inst.good_ids[e]);
            allocations.push_back(std::move(ja));
        }
        out["list"] = args.list;
        out["count"] = set.size();
        out["allocations"] = std::move(allocations);
    }
    if (!args.check_po.empty()) {
        const auto v = is_po_bruteforce(inst, load_result_allocation(inst, args.check_po), budget);
        out["po"] = v.pass ? "pass" : "fail";
        pass = pass && v.pass;
    }
    if (!args.check_fpo.empty()) {
        const auto v = is_fpo_lp(inst, load_result_allocation(inst, args.check_fpo));
        out["fpo"] = v.pass ? "pass" : "fail";
        out["fpo_optimum"] = v.optimum.str();
        out["fpo_current"] = v.current.str();
        pass = pass && v.pass;
    }
    std::cout << out.dump(2) << "\n";
    return pass ? 0 : 1;
}

struct CounterexampleArgs {
    long max_rounds = 10;
    std::string out;
};

int run_counterexample(const CounterexampleArgs& args) {
    const Instance inst = table1_instance();
    const GmRun run = run_gm(inst, args.max_rounds, table1_trace_override());
    const json j = gm_run_to_json(inst, run);
    if (!args.out.empty()) write_json_file(args.out, j);
    json summary;
    summary["outcome"] = j["outcome"];
    summary["steps"] = j["steps"];
    if (run.cycle) summary["cycle"] = j["cycle"];
    std::cout << summary.dump(2) << "\n";
    switch (run.outcome) {
    case GmRun::Outcome::cycle_detected: return 0;
    case GmRun::Outcome::terminated: return 1; // would contradict the counterexample
    case GmRun::Outcome::budget_exhausted: return 4;
    }
    return 3;
}

struct BenchArgs {
    long trials = 100;
    std::string n_range = "1:6";
    std::string m_range = "1:12";
    std::string k_set = "2,3,5,7/2";
    std::uint64_t seed = 1;
    std::string csv;
};

std::pair<int, int> parse_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) fail(Errc::parse_error, "range wants lo:hi");
    const int lo = std::stoi(s.substr(0, colon)), hi = std::stoi(s.substr(colon + 1));
    if (lo < 1 || hi < lo) fail(Errc::parse_error, "bad range " + s);
    return {lo, hi};
}

int run_bench(const BenchArgs& args) {
    const auto [n_lo, n_hi] = parse_range(args.n_range);
    const auto [m_lo, m_hi] = parse_range(args.m_range);
    std::vector<Rational> ks;
    std::stringstream ss(args.k_set);
    std::string tok;
    while (std::getline(ss, tok, ',')) ks.push_back(Rational::parse(tok));
    if (ks.empty()) fail(Errc::parse_error, "empty --k-set");

    std::ofstream csv(args.csv);
    if (!csv) fail(Errc::parse_error, "cannot write '" + args.csv + "'");
    csv << "seed,n,m,k,mode,init_rounds,realloc_rounds,bound_init,bound_realloc,wallclock\n";

    std::mt19937_64 rng(args.seed);
    for (long trial = 0; trial < args.trials; ++trial) {
        const int n = n_lo + static_cast<int>(rng() % (n_hi - n_lo + 1));
        const int m = m_lo + static_cast<int>(rng() % (m_hi - m_lo + 1));
        const Rational k = ks[rng() % ks.size()];
        const WeightMode wm = (rng() & 1) ? WeightMode::random_ints : WeightMode::equal;
        const std::uint64_t inst_seed = rng();
        const Instance inst = random_instance(inst_seed, n, m, k, wm);

        for (const Metric metric : {Metric::spending, Metric::value}) {
            SolveOptions opts;
            opts.metric = metric;
            opts.check_invariants = check_override(false);
            const auto start = std::chrono::steady_clock::now();
            const SolveResult result = solve(inst, opts);
            const auto secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            csv << inst_seed << ',' << n << ',' << m << ',' << k.str() << ','
                << (metric == Metric::spending ? "wefx" : "weqx") << ','
                << result.init_transfer_rounds << ',' << result.transfer_rounds << ','
                << init_round_budget(inst) << ',' << realloc_round_budget(inst) << ',' << secs
                << "\n";
            if (result.init_transfer_rounds > init_round_budget(inst) ||
                result.transfer_rounds > realloc_round_budget(inst))
                fail(Errc::round_budget_exceeded, "bench trial exceeded a proven bound");
        }
    }
    std::cout << "wrote " << args.csv << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic weighted fair division of bivalued goods: "
                 "market-based solver, verifiers, oracles and the non-termination reproduction"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "Generate a random bivalued instance");
    cmd_gen->add_option("--agents", gen.agents)->required();
    cmd_gen->add_option("--goods", gen.goods)->required();
    cmd_gen->add_option("--k", gen.k, "value ratio, rational > 1");
    cmd_gen->add_option("--weights", gen.weights, "equal|random");
    cmd_gen->add_option("--seed", gen.seed);
    cmd_gen->add_option("--out", gen.out)->required();

    SolveArgs solve_args;
    auto* cmd_solve = app.add_subcommand("solve", "Compute a fair and efficient allocation");
    cmd_solve->add_option("--input", solve_args.input)->required();
    cmd_solve->add_option("--mode", solve_args.mode, "wefx|weqx");
    cmd_solve->add_flag("--check-invariants", solve_args.check);
    cmd_solve->add_flag("--trace", solve_args.trace);
    cmd_solve->add_option("--out", solve_args.out);
    cmd_solve->add_option("--assign", solve_args.assigns,
                          "good=agent owner override for the welfare-maximizing start");

    VerifyArgs verify_args;
    auto* cmd_verify = app.add_subcommand("verify", "Re-check a result file");
    cmd_verify->add_option("--input", verify_args.input)->required();
    cmd_verify->add_option("--result", verify_args.result)->required();
    cmd_verify->add_option("--criteria", verify_args.criteria);

    OracleArgs oracle_args;
    auto* cmd_oracle = app.add_subcommand("oracle", "Brute-force ground truth at desk scale");
    cmd_oracle->add_option("--input", oracle_args.input)->required();
    cmd_oracle->add_option("--list", oracle_args.list, "wefx|weqx");
    cmd_oracle->add_option("--check-po", oracle_args.check_po, "result file");
    cmd_oracle->add_option("--check-fpo", oracle_args.check_fpo, "result file");
    cmd_oracle->add_option("--budget", oracle_args.budget);

    CounterexampleArgs ce_args;
    auto* cmd_ce = app.add_subcommand("counterexample",
                                      "Reproduce the reference algorithm's non-termination");
    cmd_ce->add_option("--max-rounds", ce_args.max_rounds);
    cmd_ce->add_option("--out", ce_args.out);

    BenchArgs bench_args;
    auto* cmd_bench = app.add_subcommand("bench", "Round counts against the proven bounds");
    cmd_bench->add_option("--trials", bench_args.trials);
    cmd_bench->add_option("--n-range", bench_args.n_range);
    cmd_bench->add_option("--m-range", bench_args.m_range);
    cmd_bench->add_option("--k-set", bench_args.k_set);
    cmd_bench->add_option("--seed", bench_args.seed);
    cmd_bench->add_option("--csv", bench_args.csv)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_gen) return run_gen(gen);
        if (*cmd_solve) return run_solve(solve_args);
        if (*cmd_verify) return run_verify(verify_args);
        if (*cmd_oracle) return run_oracle(oracle_args);
        if (*cmd_ce) return run_counterexample(ce_args);
        if (*cmd_bench) return run_bench(bench_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
