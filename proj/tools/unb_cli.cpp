#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unb/emit.hpp"
#include "unb/montecarlo.hpp"
#include "unb/scenario_json.hpp"

namespace {

using namespace unb;

std::vector<double> parse_fraction_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stod(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

SpendingFunction make_spending(const std::string& family, double alpha, double param) {
    SpendingFunction s;
    s.family = SpendingFunction::family_from_name(family);
    s.alpha = alpha;
    s.param = param;
    return s;
}

void print_boundary_table(std::ostream& out, const std::vector<double>& fractions,
                          const SpendingFunction& spending, const BoundaryResult& bounds) {
    out << "look,fraction,cum_spend,delta_alpha,boundary\n";
    double prev = 0.0;
    for (std::size_t k = 0; k < fractions.size(); ++k) {
        double spend = spending.value(fractions[k]);
        out << k + 1 << "," << format_number(fractions[k]) << "," << format_number(spend) << ","
            << format_number(spend - prev) << ","
            << (bounds.skipped[k] ? "inf" : format_number(bounds.boundaries[k])) << "\n";
        prev = spend;
    }
}

int run_simulate(const std::vector<std::string>& files, std::optional<std::uint64_t> seed,
                 std::optional<long> reps, const std::string& out_dir, int threads, bool trace) {
    std::filesystem::create_directories(out_dir);
    std::vector<ScenarioMetrics> rows;
    bool any_naive = false;
    for (const std::string& file : files) {
        Scenario scenario = scenario_from_file(file);
        if (seed) scenario.seed = *seed;
        if (reps) scenario.reps = *reps;
        if (scenario.sequential && scenario.policy != PolicyKind::unb && scenario.rewards.rho > 0.0) {
            std::cerr << "warning: " << scenario.id << ": " << policy_name(scenario.policy)
                      << " is excluded from correlated-arm sequential runs; skipping\n";
            continue;
        }
        if (trace) {
            // Per-round trace of replication 0, for debugging.
            Environment env(scenario.rewards, scenario.budget);
            RngStream stream(scenario.seed, 0);
            std::ofstream tr(out_dir + "/trace_" + scenario.id + ".csv");
            if (!tr) throw std::runtime_error("cannot write trace file");
            if (scenario.sequential) {
                SequentialDesign design = SequentialDesign::plan(
                    scenario.alpha, 1.0 - scenario.power_target, scenario.delta_design,
                    scenario.looks, scenario.spending, scenario.t_min);
                run_sequential_trial(scenario, env, design, stream, &tr);
            } else {
                run_fixed_trial(scenario, env, stream, &tr);
            }
        }
        Metrics metrics = monte_carlo(scenario, threads);
        any_naive = any_naive || scenario.naive_statistic || scenario.null_is_true();
        rows.push_back(ScenarioMetrics{std::move(scenario), metrics});
    }
    if (rows.empty()) {
        std::cerr << "error: no scenarios produced results\n";
        return 2;
    }
    write_metrics_csv(out_dir + "/metrics.csv", rows);
    if (any_naive) write_size_inflation_csv(out_dir + "/size_inflation.csv", rows);
    write_power_curve_csv(out_dir + "/power_curve.csv", rows);
    write_asn_sinf_csv(out_dir + "/asn_sinf.csv", rows);
    write_loss_csv(out_dir + "/loss_index.csv", rows);
    std::cout << "wrote " << rows.size() << " scenario row(s) to " << out_dir << "/metrics.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Urn-reinforced bandit simulator with group sequential testing"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo scenarios and emit CSVs");
    std::vector<std::string> scenario_files;
    simulate->add_option("scenarios", scenario_files, "Scenario JSON file(s)")
        ->required()
        ->check(CLI::ExistingFile);
    std::optional<std::uint64_t> seed_override;
    std::optional<long> reps_override;
    std::string out_dir = ".";
    int threads = 0;
    bool trace = false;
    simulate->add_option("--seed", seed_override, "Override the scenario master seed");
    simulate->add_option("--reps", reps_override, "Override the replication count");
    simulate->add_option("--out-dir", out_dir, "Output directory for CSVs");
    simulate->add_option("--threads", threads, "Worker threads (0 = auto; UNB_THREADS overrides)");
    simulate->add_flag("--trace", trace, "Emit a per-round trace of replication 0");

    // plan
    auto* plan = app.add_subcommand("plan", "Print a sequential design as CSV");
    double plan_alpha = 0.05, plan_power = 0.9, plan_delta = 0.2, plan_param = 1.0;
    int plan_looks = 10;
    std::string plan_spending = "obf";
    plan->add_option("--alpha", plan_alpha, "One-sided significance level");
    plan->add_option("--power", plan_power, "Target power");
    plan->add_option("--delta", plan_delta, "Design effect")->required();
    plan->add_option("--looks", plan_looks, "Number of interim looks");
    plan->add_option("--spending", plan_spending, "Spending family: pocock|obf|power|hsd");
    plan->add_option("--spending-param", plan_param, "q for power, gamma for hsd");

    // boundaries
    auto* boundaries = app.add_subcommand("boundaries", "Print a boundary table as CSV");
    double b_alpha = 0.05, b_param = 1.0;
    std::string b_spending = "obf";
    std::string b_fractions = "0.25,0.5,0.75,1";
    boundaries->add_option("--alpha", b_alpha, "One-sided significance level");
    boundaries->add_option("--spending", b_spending, "Spending family: pocock|obf|power|hsd");
    boundaries->add_option("--spending-param", b_param, "q for power, gamma for hsd");
    boundaries->add_option("--fractions", b_fractions, "Comma-separated information fractions");

    // validate
    auto* validate = app.add_subcommand("validate", "Schema-check scenario file(s)");
    std::vector<std::string> validate_files;
    validate->add_option("scenarios", validate_files, "Scenario JSON file(s)")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (simulate->parsed())
            return run_simulate(scenario_files, seed_override, reps_override, out_dir,
                                resolve_threads(threads), trace);
        if (plan->parsed()) {
            SequentialDesign design = SequentialDesign::plan(
                plan_alpha, 1.0 - plan_power, plan_delta,
                plan_looks, make_spending(plan_spending, plan_alpha, plan_param));
            std::cout << "# alpha=" << format_number(design.alpha)
                      << " power_target=" << format_number(plan_power)
                      << " delta=" << format_number(design.delta)
                      << " spending=" << design.spending.name() << "\n"
                      << "# i_max=" << format_number(design.info_target)
                      << " inflation=" << format_number(design.inflation)
                      << " i_max_inflated=" << format_number(design.info_inflated) << "\n";
            BoundaryResult b{design.boundaries, design.exit_probs, {}};
            b.skipped.resize(design.boundaries.size());
            for (std::size_t k = 0; k < design.boundaries.size(); ++k)
                b.skipped[k] = !std::isfinite(design.boundaries[k]);
            print_boundary_table(std::cout, design.fractions, design.spending, b);
            return 0;
        }
        if (boundaries->parsed()) {
            std::vector<double> fractions = parse_fraction_list(b_fractions);
            SpendingFunction spending = make_spending(b_spending, b_alpha, b_param);
            BoundaryResult result = compute_boundaries(fractions, spending);
            print_boundary_table(std::cout, fractions, spending, result);
            return 0;
        }
        if (validate->parsed()) {
            for (const std::string& file : validate_files) {
                scenario_from_file(file);
                std::cout << file << ": ok\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
