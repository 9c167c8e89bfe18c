#include "unb/emit.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace unb {

namespace {

std::ofstream open_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows) {
    if (rows.empty()) throw std::invalid_argument("emit: no results to write");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit: cannot write " + path);
    return out;
}

std::string arms_field(const Scenario& s) {
    std::string v;
    for (std::size_t k = 0; k < s.rewards.size(); ++k) {
        if (k) v += ";";
        v += format_number(s.rewards.arms[k].mean);
    }
    return v;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_metrics_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows) {
    std::ofstream out = open_csv(path, rows);
    out << "scenario,distribution,arms,rho,budget_max,policy,mode,hypothesis,naive,reps,seed,"
           "rejection_rate,rejection_se,asn,asn_se,mean_s_inf,s_inf_se,mean_look,"
           "loss_lambda2,loss_lambda5,safety_stops,unestimable\n";
    for (const auto& row : rows) {
        const Scenario& s = row.scenario;
        const Metrics& m = row.metrics;
        out << s.id << "," << family_name(s.rewards.arms[0].family) << "," << arms_field(s) << ","
            << format_number(s.rewards.rho) << "," << s.budget.max_value() << ","
            << policy_name(s.policy) << "," << (s.sequential ? "sequential" : "fixed") << ","
            << s.hypothesis.name() << "," << (s.naive_statistic ? 1 : 0) << "," << m.reps << ","
            << s.seed << "," << format_number(m.rejection_rate) << ","
            << format_number(m.rejection_se) << "," << format_number(m.asn) << ","
            << format_number(m.asn_se) << "," << format_number(m.mean_inferior) << ","
            << format_number(m.inferior_se) << "," << format_number(m.mean_look) << ","
            << format_number(m.loss(2.0)) << "," << format_number(m.loss(5.0)) << ","
            << m.safety_stops << "," << m.unestimable << "\n";
    }
}

void write_size_inflation_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows) {
    std::ofstream out = open_csv(path, rows);
    out << "scenario,distribution,rho,statistic,emp_size,se\n";
    for (const auto& row : rows) {
        const Scenario& s = row.scenario;
        out << s.id << "," << family_name(s.rewards.arms[0].family) << ","
            << format_number(s.rewards.rho) << "," << (s.naive_statistic ? "naive" : "corrected")
            << "," << format_number(row.metrics.rejection_rate) << ","
            << format_number(row.metrics.rejection_se) << "\n";
    }
}

void write_power_curve_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows) {
    std::ofstream out = open_csv(path, rows);
    out << "scenario,policy,mode,delta,samples,rejection_rate,se\n";
    for (const auto& row : rows) {
        const Scenario& s = row.scenario;
        out << s.id << "," << policy_name(s.policy) << ","
            << (s.sequential ? "sequential" : "fixed") << "," << format_number(s.true_effect())
            << "," << (s.sequential ? format_number(row.metrics.asn) : std::to_string(s.fixed_samples))
            << "," << format_number(row.metrics.rejection_rate) << ","
            << format_number(row.metrics.rejection_se) << "\n";
    }
}

void write_asn_sinf_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows) {
    std::ofstream out = open_csv(path, rows);
    out << "scenario,policy,distribution,delta,asn,asn_se,mean_s_inf,s_inf_se\n";
    for (const auto& row : rows) {
        const Scenario& s = row.scenario;
        out << s.id << "," << policy_name(s.policy) << ","
            << family_name(s.rewards.arms[0].family) << "," << format_number(s.true_effect())
            << "," << format_number(row.metrics.asn) << "," << format_number(row.metrics.asn_se)
            << "," << format_number(row.metrics.mean_inferior) << ","
            << format_number(row.metrics.inferior_se) << "\n";
    }
}

void write_loss_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows,
                    const std::vector<double>& lambdas) {
    std::ofstream out = open_csv(path, rows);
    out << "scenario,policy,distribution,delta,lambda,loss\n";
    for (const auto& row : rows) {
        const Scenario& s = row.scenario;
        for (double lambda : lambdas)
            out << s.id << "," << policy_name(s.policy) << ","
                << family_name(s.rewards.arms[0].family) << "," << format_number(s.true_effect())
                << "," << format_number(lambda) << "," << format_number(row.metrics.loss(lambda))
                << "\n";
    }
}

}  // namespace unb
