// Mach sweep: one incompressible reference run plus one compressible run per
// epsilon, difference norms at aligned output times, rate fits and reports.
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "machslab/config.hpp"
#include "machslab/run.hpp"

namespace machslab {

struct SweepConfig {
    RunConfig base;  // grid, data, t_final, output_every, eos.gamma / c_v; kind and epsilon are overridden
    std::vector<double> epsilons{0.4, 0.2, 0.1, 0.05};
    std::vector<int> norm_orders{0, 2, 3};
    int threads = 0;  // 0: thread_limit()

    void validate() const;
};

/// Either {"run": <run config>, "epsilons": [...], "norm_orders": [...]} or a
/// flat run config with optional "epsilons" / "norm_orders" keys.
SweepConfig sweep_config_from_json(const nlohmann::json& j);

/// MACHSLAB_THREADS if set and positive, else the hardware concurrency (>= 1).
int thread_limit();

struct SweepRow {
    double epsilon = 0.0;
    double t = 0.0;
    std::vector<double> values;  // aligned with SweepResult::norm_names
};

struct SweepMember {
    double epsilon = 0.0;
    bool ok = false;
    std::string error;
    std::vector<MonitorRow> monitors;
    std::vector<SweepRow> rows;
    std::vector<double> energy_total;  // E(t) at the output times (empty when diagnostics are off)
};

struct RateFit {
    double slope = 0.0;
    double r2 = 0.0;
};

struct SweepResult {
    SweepConfig config;
    double dt = 0.0;
    std::vector<std::string> norm_names;
    std::vector<SweepMember> members;  // same order as config.epsilons
    bool reference_ok = false;
    std::string reference_error;
    std::vector<MonitorRow> reference_monitors;
    std::map<std::string, RateFit> fits;  // "<norm>" at t_final, "divU_sup" over time

    /// Value of a norm for one member at its last output, NaN when absent.
    double final_value(std::size_t member, const std::string& norm) const;
};

SweepResult run_sweep(const SweepConfig& cfg);

/// Least-squares slope of log(values) against log(epsilons), with R^2.
/// Needs >= 3 points, all positive.
RateFit fit_rate(const std::vector<double>& epsilons, const std::vector<double>& values);

struct AcceptanceLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Sweep-level checks: divergence scaling, limit convergence, energy bound,
/// constraint propagation and L^2 balance drift.
std::vector<AcceptanceLine> sweep_acceptance(const SweepResult& r);

/// Monitor checks for a single run: div B growth, wall traces, L^2 balance
/// drift and, when energies were recorded, E(t) <= 10 E(0).
std::vector<AcceptanceLine> run_checks(const std::vector<MonitorRow>& rows);

/// sweep.csv (epsilon, t, norms), monitors_eps<e>.csv per member,
/// monitors_reference.csv, summary.json, convergence.svg.
void emit_report(const SweepResult& r, const std::string& out_dir);

/// Energy drift of a compressible run at the configured step and at half of it.
struct DriftPair {
    double dt = 0.0;
    double drift = 0.0;
    double drift_half = 0.0;
};
DriftPair drift_under_halving(const RunConfig& cfg);

/// Transverse Alfven wave from "alfven" data: the projection of u_2 onto
/// sin(k x_1) is tracked over the run and its zero crossings give the
/// frequency, compared with k b0 / sqrt(rho).
struct AlfvenMeasurement {
    double measured = 0.0;
    double predicted = 0.0;
    double relative_error() const { return std::abs(measured - predicted) / predicted; }
};
AlfvenMeasurement measure_alfven(const RunConfig& cfg);

/// Self-contained log-log plot, one polyline per series.
std::string loglog_svg(const std::vector<double>& x, const std::vector<std::pair<std::string, std::vector<double>>>& series,
                       const std::string& xlabel);

}  // namespace machslab
