#pragma once

#include <string>
#include <vector>

#include "unb/montecarlo.hpp"

namespace unb {

/// One simulated scenario with its aggregated metrics.
struct ScenarioMetrics {
    Scenario scenario;
    Metrics metrics;
};

/// Floating values in all emitters are printed with 6 significant digits.
std::string format_number(double v);

/// The master results table: one row per scenario.
void write_metrics_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows);

/// Plot-data views derived from the same rows.
void write_size_inflation_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows);
void write_power_curve_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows);
void write_asn_sinf_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows);
void write_loss_csv(const std::string& path, const std::vector<ScenarioMetrics>& rows,
                    const std::vector<double>& lambdas = {2.0, 5.0});

}  // namespace unb
