#include "unb/scenario_json.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace unb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = object.begin(); it != object.end(); ++it)
        if (!allowed.count(it.key())) fail("unknown key \"" + it.key() + "\" in " + where);
}

Hypothesis parse_hypothesis(const json& j) {
    if (!j.is_object()) fail("hypothesis must be an object");
    check_keys(j, {"type", "arms", "arm", "bound"}, "hypothesis");
    std::string type = j.value("type", "difference");
    auto arm_pair = [&](std::size_t def_i, std::size_t def_j) {
        std::size_t i = def_i, jj = def_j;
        if (j.contains("arms")) {
            auto arr = j.at("arms");
            if (!arr.is_array() || arr.size() != 2) fail("hypothesis arms must list two arms");
            i = arr[0].get<std::size_t>();
            jj = arr[1].get<std::size_t>();
            if (i < 1 || jj < 1) fail("hypothesis arms are 1-based");
            --i;
            --jj;
        }
        return std::pair<std::size_t, std::size_t>(i, jj);
    };
    if (type == "difference") {
        auto [i, jj] = arm_pair(0, 1);
        return Hypothesis::difference(i, jj);
    }
    if (type == "threshold") {
        if (!j.contains("arm") || !j.contains("bound"))
            fail("threshold hypothesis needs \"arm\" and \"bound\"");
        std::size_t k = j.at("arm").get<std::size_t>();
        if (k < 1) fail("hypothesis arm is 1-based");
        return Hypothesis::threshold(k - 1, j.at("bound").get<double>());
    }
    if (type == "control_average") return Hypothesis::control_average();
    if (type == "ratio") {
        auto [i, jj] = arm_pair(0, 1);
        return Hypothesis::ratio(i, jj, j.value("bound", 1.0));
    }
    fail("unknown hypothesis type \"" + type + "\"");
}

BudgetSpec parse_budget(const json& j) {
    if (j.is_number_integer()) return BudgetSpec::constant(j.get<long>());
    if (!j.is_object()) fail("budget must be an integer or an object");
    check_keys(j, {"type", "value", "support"}, "budget");
    std::string type = j.value("type", "constant");
    if (type == "constant") {
        if (!j.contains("value")) fail("constant budget needs \"value\"");
        return BudgetSpec::constant(j.at("value").get<long>());
    }
    if (type == "uniform") {
        if (!j.contains("support")) fail("uniform budget needs \"support\"");
        std::vector<long> support = j.at("support").get<std::vector<long>>();
        return BudgetSpec::uniform(std::move(support));
    }
    fail("unknown budget type \"" + type + "\"");
}

SpendingFunction parse_spending(const json& j, double alpha) {
    SpendingFunction s;
    s.alpha = alpha;
    if (j.is_string()) {
        s.family = SpendingFunction::family_from_name(j.get<std::string>());
        return s;
    }
    if (!j.is_object()) fail("spending must be a string or an object");
    check_keys(j, {"family", "q", "gamma"}, "spending");
    s.family = SpendingFunction::family_from_name(j.value("family", "obf"));
    if (s.family == SpendingFunction::Family::power) {
        if (!j.contains("q")) fail("power spending needs \"q\"");
        s.param = j.at("q").get<double>();
    } else if (s.family == SpendingFunction::Family::hsd) {
        if (!j.contains("gamma")) fail("hsd spending needs \"gamma\"");
        s.param = j.at("gamma").get<double>();
    }
    return s;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text, const std::string& id) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("scenario must be a JSON object");
    check_keys(j,
               {"distribution", "arms", "rho", "budget", "policy", "hypothesis", "mode", "alpha",
                "power_target", "delta_design", "looks", "spending", "reps", "seed", "burn_in",
                "urn_floor", "t_min", "naive_statistic"},
               "scenario");

    Scenario s;
    s.id = id;
    if (!j.contains("distribution")) fail("scenario needs \"distribution\"");
    if (!j.contains("arms")) fail("scenario needs \"arms\"");
    Family family = family_from_name(j.at("distribution").get<std::string>());
    for (double mean : j.at("arms").get<std::vector<double>>())
        s.rewards.arms.push_back(ArmSpec{family, mean});
    s.rewards.rho = j.value("rho", 0.0);

    if (j.contains("budget")) s.budget = parse_budget(j.at("budget"));
    if (j.contains("policy")) s.policy = policy_from_name(j.at("policy").get<std::string>());
    if (j.contains("hypothesis")) s.hypothesis = parse_hypothesis(j.at("hypothesis"));

    if (!j.contains("mode")) fail("scenario needs \"mode\"");
    const json& mode = j.at("mode");
    if (!mode.is_object()) fail("mode must be an object");
    check_keys(mode, {"type", "samples"}, "mode");
    std::string mode_type = mode.value("type", "fixed");
    if (mode_type == "fixed") {
        if (!mode.contains("samples")) fail("fixed mode needs \"samples\"");
        s.sequential = false;
        s.fixed_samples = mode.at("samples").get<long>();
    } else if (mode_type == "sequential") {
        s.sequential = true;
    } else {
        fail("unknown mode \"" + mode_type + "\"");
    }

    s.alpha = j.value("alpha", 0.05);
    s.power_target = j.value("power_target", 0.9);
    s.delta_design = j.value("delta_design", 0.0);
    s.looks = j.value("looks", 10);
    s.spending = j.contains("spending") ? parse_spending(j.at("spending"), s.alpha)
                                        : SpendingFunction{SpendingFunction::Family::obf, s.alpha};
    s.reps = j.value("reps", 2000L);
    s.seed = j.value("seed", 1ULL);
    s.burn_in = j.value("burn_in", 20L);
    s.urn_floor = j.value("urn_floor", 1.0);
    s.t_min = j.value("t_min", 50L);
    s.naive_statistic = j.value("naive_statistic", false);

    s.validate();
    return s;
}

Scenario scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str(), std::filesystem::path(path).stem().string());
}

}  // namespace unb
