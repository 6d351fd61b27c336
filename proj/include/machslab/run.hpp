// Time-integration driver: fixed step aligned to output times, filter once per
// output interval, monitors, checkpoints.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "machslab/config.hpp"
#include "machslab/energy.hpp"
#include "machslab/incompressible.hpp"
#include "machslab/state.hpp"

namespace machslab {

struct MonitorRow {
    double t = 0.0;
    std::array<double, 5> E{};  // E4..E8; NaN when not computed
    double divB_L2 = 0.0;
    double divU_L2 = 0.0;
    double wall_trace_max = 0.0;
    double energy_drift = 0.0;
};

struct RunOptions {
    std::string out_dir;      // monitors.csv, energy.json, checkpoint.mslb; empty writes nothing
    std::string resume_from;  // MSLB1 checkpoint written by a previous run of the same config
    bool store_states = true;
    std::function<void(const MonitorRow&)> on_output;
};

struct RunResult {
    RunConfig config;
    double dt = 0.0;
    long steps_per_output = 0;
    std::vector<MonitorRow> monitors;
    std::vector<MhdState> states;       // compressible runs
    std::vector<IncState> inc_states;   // incompressible runs (pi evaluated)
    std::vector<EnergyReport> energies;
    double physical_energy0 = 0.0;
    double filter_tally = 0.0;  // sum of energy changes caused by the filter
};

/// Step size the driver would use for this config.
double driver_dt(const RunConfig& cfg);

RunResult run(const RunConfig& cfg, const RunOptions& opt = {});

void write_monitors_csv(const std::string& path, const std::vector<MonitorRow>& rows);
nlohmann::json energy_report_json(const EnergyReport& rep);

}  // namespace machslab
