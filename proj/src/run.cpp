#include "machslab/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "machslab/calculus.hpp"
#include "machslab/checkpoint.hpp"
#include "machslab/compressible.hpp"
#include "machslab/initial_data.hpp"

namespace machslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wall_trace(const VecField& u, const VecField& B) {
    return std::max(u.normal().wall_max_abs(), B.normal().wall_max_abs());
}

long output_count(const RunConfig& cfg) {
    const double r = cfg.t_final / cfg.output_every;
    const long n = std::lround(r);
    if (std::abs(r - static_cast<double>(n)) > 1e-9 * std::max(1.0, r))
        throw InvalidArgument("t_final must be a multiple of output_every");
    return n;
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace

double driver_dt(const RunConfig& cfg) {
    cfg.validate();
    double dt0 = cfg.dt;
    if (dt0 <= 0.0) {
        const auto grid = cfg.make_grid();
        if (cfg.kind == "compressible")
            dt0 = cfl_dt(make_compressible_state(grid, cfg.data_kind, cfg.data_params, cfg.eos), cfg.eos, cfg.dt_cfl);
        else
            dt0 = std::min(inc_cfl_dt(make_incompressible_state(grid, cfg.data_kind, cfg.data_params, cfg.eos), cfg.dt_cfl),
                           cfg.output_every);
    }
    const long n = std::max(1L, static_cast<long>(std::ceil(cfg.output_every / dt0 - 1e-9)));
    return cfg.output_every / static_cast<double>(n);
}

void write_monitors_csv(const std::string& path, const std::vector<MonitorRow>& rows) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot write monitors to '" + path + "'");
    os << "t,E4,E5,E6,E7,E8,divB_L2,divU_L2,wall_trace_max,energy_drift\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.t;
        for (double e : r.E) os << ',' << e;
        os << ',' << r.divB_L2 << ',' << r.divU_L2 << ',' << r.wall_trace_max << ',' << r.energy_drift << '\n';
    }
    if (!os) throw IoError("write failed for '" + path + "'");
}

nlohmann::json energy_report_json(const EnergyReport& rep) {
    nlohmann::json j;
    for (std::size_t l = 0; l < rep.levels.size(); ++l) j["e" + std::to_string(rep.base + static_cast<int>(l))] = rep.levels[l];
    j["total"] = rep.total;
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [k, v] : rep.constituents) c[k] = v;
    j["constituents"] = c;
    return j;
}

RunResult run(const RunConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    const auto grid = cfg.make_grid();
    const long n_out = output_count(cfg);
    const bool compressible = cfg.kind == "compressible";
    if (!opt.out_dir.empty()) std::filesystem::create_directories(opt.out_dir);
    const std::string ckpt_path = opt.out_dir.empty() ? std::string() : join(opt.out_dir, "checkpoint.mslb");

    RunResult res;
    res.config = cfg;
    res.dt = driver_dt(cfg);
    res.steps_per_output = std::lround(cfg.output_every / res.dt);
    const double dt = res.dt;
    const StepOptions sopt{2.0 * cfg.dt_cfl, true, cfg.impose_b_normal};

    MhdState cs;
    IncState is;
    double rate_integral = 0.0;
    long first_out = 0;
    if (compressible)
        cs = make_compressible_state(grid, cfg.data_kind, cfg.data_params, cfg.eos);
    else
        is = make_incompressible_state(grid, cfg.data_kind, cfg.data_params, cfg.eos);
    res.physical_energy0 = compressible ? physical_energy(cs, cfg.eos) : inc_energy(is);

    if (!opt.resume_from.empty()) {
        Checkpoint cp = read_checkpoint(opt.resume_from);
        if (!cp.grid->same_shape(*grid)) throw IoError("checkpoint grid does not match config");
        if (cp.aux.size() < 6) throw IoError("checkpoint is missing driver state");
        if (cp.aux[1] != dt) throw IoError("checkpoint step size does not match config");
        const int d = grid->dim();
        const auto expected = static_cast<std::size_t>(2 * d + 2);
        if (cp.fields.size() != expected) throw IoError("checkpoint field count does not match config");
        std::vector<Field> u(cp.fields.begin(), cp.fields.begin() + d);
        std::vector<Field> B(cp.fields.begin() + d, cp.fields.begin() + 2 * d);
        if (compressible) {
            cs = MhdState(VecField(u), VecField(B), cp.fields[static_cast<std::size_t>(2 * d)],
                          cp.fields[static_cast<std::size_t>(2 * d + 1)], cp.aux[0]);
        } else {
            is.u = VecField(u);
            is.B = VecField(B);
            is.varrho = cp.fields[static_cast<std::size_t>(2 * d)];
            is.S = cp.fields[static_cast<std::size_t>(2 * d + 1)];
            is.t = cp.aux[0];
        }
        res.physical_energy0 = cp.aux[2];
        rate_integral = cp.aux[3];
        res.filter_tally = cp.aux[4];
        first_out = std::lround(cp.aux[5]);
    }

    auto record = [&](long k) {
        MonitorRow row;
        row.E.fill(kNaN);
        if (compressible) {
            row.t = cs.t;
            row.divB_L2 = l2_norm(divergence(cs.B));
            row.divU_L2 = l2_norm(divergence(cs.u));
            row.wall_trace_max = wall_trace(cs.u, cs.B);
            const double q = physical_energy(cs, cfg.eos);
            row.energy_drift =
                std::abs(q - res.physical_energy0 - rate_integral - res.filter_tally) / res.physical_energy0;
            if (cfg.energy_diagnostics) {
                EnergyReport rep = energy(bootstrap(band_limit_state(cs), cfg.eos, 8), cfg.eos);
                for (int l = 0; l < 5; ++l) row.E[static_cast<std::size_t>(l)] = rep.levels[static_cast<std::size_t>(l)];
                res.energies.push_back(std::move(rep));
            }
            if (opt.store_states) res.states.push_back(cs);
        } else {
            row.t = is.t;
            row.divB_L2 = l2_norm(divergence(is.B));
            row.divU_L2 = l2_norm(divergence(is.u));
            row.wall_trace_max = wall_trace(is.u, is.B);
            const double q = inc_energy(is);
            row.energy_drift =
                res.physical_energy0 > 0.0 ? std::abs(q - res.physical_energy0 - res.filter_tally) / res.physical_energy0 : 0.0;
            if (opt.store_states) {
                IncState copy = is;
                copy.pi = inc_pressure(is);
                res.inc_states.push_back(std::move(copy));
            }
        }
        res.monitors.push_back(row);
        if (opt.on_output) opt.on_output(row);
        if (!ckpt_path.empty()) {
            Checkpoint cp;
            cp.grid = grid;
            if (compressible)
                for (const auto* f : cs.fields()) cp.fields.push_back(*f);
            else
                for (const auto* f : is.evolved()) cp.fields.push_back(*f);
            cp.aux = {compressible ? cs.t : is.t, dt, res.physical_energy0, rate_integral, res.filter_tally,
                      static_cast<double>(k)};
            write_checkpoint(ckpt_path, cp);
        }
    };

    record(first_out);
    for (long k = first_out + 1; k <= n_out; ++k) {
        try {
            for (long s = 0; s < res.steps_per_output; ++s) {
                if (compressible) {
                    StepResult sr = step_full(cs, cfg.eos, dt, sopt);
                    cs = std::move(sr.state);
                    rate_integral += sr.rate_integral;
                } else {
                    is = inc_step(is, dt, 2.0 * cfg.dt_cfl);
                }
            }
            // pin the clock to the output grid
            if (compressible) cs.t = static_cast<double>(k) * cfg.output_every;
            else is.t = static_cast<double>(k) * cfg.output_every;
            if (cfg.filter_strength > 0.0) {
                if (compressible) {
                    const double before = physical_energy(cs, cfg.eos);
                    cs = filter_state(cs, cfg.filter_order, cfg.filter_strength);
                    res.filter_tally += physical_energy(cs, cfg.eos) - before;
                } else {
                    const double before = inc_energy(is);
                    is = inc_filter(is, cfg.filter_order, cfg.filter_strength);
                    res.filter_tally += inc_energy(is) - before;
                }
            }
        } catch (const SolverError& e) {
            std::ostringstream os;
            os << e.what();
            if (!ckpt_path.empty()) os << " (last good state in " << ckpt_path << ")";
            throw SolverError(os.str());
        }
        record(k);
    }
    if (!opt.out_dir.empty()) {
        write_monitors_csv(join(opt.out_dir, "monitors.csv"), res.monitors);
        if (!res.energies.empty()) {
            nlohmann::json j = nlohmann::json::array();
            for (std::size_t i = 0; i < res.energies.size(); ++i) {
                nlohmann::json e = energy_report_json(res.energies[i]);
                e["t"] = res.monitors[i].t;
                j.push_back(e);
            }
            std::ofstream os(join(opt.out_dir, "energy.json"));
            if (!os) throw IoError("cannot write '" + join(opt.out_dir, "energy.json") + "'");
            os << j.dump(1) << '\n';
        }
    }
    return res;
}

}  // namespace machslab
