// machslab command line: run, sweep, picard, identities, norms.
// Exit codes: 0 all monitors within tolerance, 2 monitor violation, 1 error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "machslab/checkpoint.hpp"
#include "machslab/compressible.hpp"
#include "machslab/config.hpp"
#include "machslab/energy.hpp"
#include "machslab/error.hpp"
#include "machslab/harness.hpp"
#include "machslab/identities.hpp"
#include "machslab/initial_data.hpp"
#include "machslab/norms.hpp"
#include "machslab/picard.hpp"
#include "machslab/run.hpp"

namespace fs = std::filesystem;
using namespace machslab;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> dim;
};

json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "'");
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream os(path, std::ios::trunc);
    os << std::setprecision(17) << j.dump(2) << '\n';
    if (!os) throw IoError("cannot write '" + path + "'");
}

// --dim reshapes the grid: every tangential extent takes the first one's value.
void apply_overrides(RunConfig& c, const Common& o) {
    if (o.seed) c.seed = *o.seed;
    if (o.dim && *o.dim != c.dim) {
        const int n = c.n_tangential.empty() ? 32 : c.n_tangential.front();
        c.dim = *o.dim;
        c.n_tangential.assign(static_cast<std::size_t>(c.dim - 1), n);
    }
    c.validate();
}

RunConfig run_config(const Common& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : config_from_json(read_json(o.config));
    apply_overrides(c, o);
    return c;
}

std::string sci(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
}

int report(const std::vector<AcceptanceLine>& lines) {
    bool ok = true;
    for (const auto& l : lines) {
        std::cout << (l.passed ? "PASS " : "FAIL ") << l.name << ": " << l.detail << '\n';
        ok = ok && l.passed;
    }
    return ok ? 0 : 2;
}

int cmd_run(const Common& o, const std::string& resume) {
    const RunConfig c = run_config(o);
    RunOptions ro;
    ro.out_dir = o.out;
    ro.resume_from = resume;
    ro.store_states = false;
    const RunResult r = run(c, ro);
    std::cout << "dt " << r.dt << ", " << r.monitors.size() << " outputs written to " << o.out << '\n';
    return report(run_checks(r.monitors));
}

int cmd_sweep(const Common& o) {
    SweepConfig sc = o.config.empty() ? SweepConfig{} : sweep_config_from_json(read_json(o.config));
    apply_overrides(sc.base, o);
    const SweepResult r = run_sweep(sc);
    emit_report(r, o.out);
    for (const auto& m : r.members)
        if (!m.ok) std::cerr << "member eps=" << m.epsilon << " failed: " << m.error << '\n';
    if (!r.reference_ok) std::cerr << "reference run failed: " << r.reference_error << '\n';
    return report(sweep_acceptance(r));
}

int cmd_picard(const Common& o) {
    json j = o.config.empty() ? json::object() : read_json(o.config);
    RunConfig c = config_from_json(j.contains("run") ? j.at("run") : j);
    apply_overrides(c, o);
    PicardOptions po;
    po.t_final = c.t_final;
    if (j.contains("picard")) {
        const json& p = j.at("picard");
        po.t_final = p.value("t_final", po.t_final);
        po.dt = p.value("dt", po.dt);
        po.cfl = p.value("cfl", po.cfl);
        po.n_max = p.value("n_max", po.n_max);
        po.samples = p.value("samples", po.samples);
        po.floor_ratio = p.value("floor_ratio", po.floor_ratio);
    }
    const MhdState s0 = make_compressible_state(c.make_grid(), c.data_kind, c.data_params, c.eos);
    const PicardResult r = picard_iterate(s0, c.eos, po);
    fs::create_directories(o.out);
    write_picard_csv((fs::path(o.out) / "picard.csv").string(), r);
    write_json((fs::path(o.out) / "picard.json").string(),
               {{"dt", r.dt},
                {"steps", r.steps},
                {"diverged", r.diverged},
                {"message", r.message},
                {"l2_vs_nonlinear", r.l2_vs_nonlinear},
                {"wall_u_max", r.wall_u_max},
                {"wall_b_max", r.wall_b_max}});
    double worst = 0.0;
    for (std::size_t n = 3; n < r.ratio.size(); ++n)
        if (std::isfinite(r.ratio[n])) worst = std::max(worst, r.ratio[n]);
    std::vector<AcceptanceLine> lines;
    lines.push_back({"contraction", !r.diverged && worst <= 0.5,
                     "max ratio for n >= 3: " + sci(worst) + (r.message.empty() ? "" : "; " + r.message)});
    lines.push_back({"matches nonlinear solver", r.l2_vs_nonlinear <= 1e-6, "L2 " + sci(r.l2_vs_nonlinear)});
    return report(lines);
}

int cmd_identities(const Common& o) {
    RunConfig c;
    if (!o.config.empty()) {
        c = config_from_json(read_json(o.config));
    } else {
        c.dim = o.dim.value_or(2);
        c.n_tangential.assign(static_cast<std::size_t>(c.dim - 1), c.dim == 2 ? 32 : 16);
        c.n_normal = c.dim == 2 ? 33 : 17;
    }
    apply_overrides(c, o);
    const auto reps = run_identity_suite(c.make_grid(), c.eos, c.seed);
    fs::create_directories(o.out);
    write_json((fs::path(o.out) / "identities.json").string(), identity_reports_json(reps));
    std::vector<AcceptanceLine> lines;
    for (const auto& r : reps)
        lines.push_back({r.check_name + " seed " + std::to_string(r.seed), r.passed(),
                         "residual " + sci(r.residual)});
    return report(lines);
}

// Energy report and Sobolev norms of the initial state or of a checkpoint.
int cmd_norms(const Common& o, const std::string& checkpoint) {
    const RunConfig c = run_config(o);
    const GridPtr grid = c.make_grid();
    MhdState s;
    if (checkpoint.empty()) {
        s = make_compressible_state(grid, c.data_kind, c.data_params, c.eos);
    } else {
        const Checkpoint cp = read_checkpoint(checkpoint);
        const int d = cp.grid->dim();
        if (cp.fields.size() != static_cast<std::size_t>(2 * d + 2) || cp.aux.empty())
            throw IoError("'" + checkpoint + "' is not a compressible checkpoint");
        s = MhdState(VecField(std::vector<Field>(cp.fields.begin(), cp.fields.begin() + d)),
                     VecField(std::vector<Field>(cp.fields.begin() + d, cp.fields.begin() + 2 * d)),
                     cp.fields[static_cast<std::size_t>(2 * d)], cp.fields[static_cast<std::size_t>(2 * d + 1)],
                     cp.aux[0]);
    }
    const EnergyReport rep = energy(bootstrap(band_limit_state(s), c.eos, 8), c.eos);
    json j;
    j["t"] = s.t;
    j["energy"] = energy_report_json(rep);
    json sob = json::object();
    for (int k = 0; k <= 4; ++k) {
        const std::string key = "s=" + std::to_string(k);
        sob["u"][key] = sobolev_norm(s.u, k);
        sob["B"][key] = sobolev_norm(s.B, k);
        sob["p"][key] = sobolev_norm(s.p, k);
        sob["S"][key] = sobolev_norm(s.S, k);
    }
    j["sobolev"] = sob;
    fs::create_directories(o.out);
    write_json((fs::path(o.out) / "norms.json").string(), j);

    std::vector<AcceptanceLine> lines;
    bool counts = true;
    for (int m = 0; m <= 8; ++m)
        counts = counts && static_cast<long long>(enumerate_multi_indices(grid->dim(), m).size()) ==
                               lattice_count(grid->dim(), m);
    lines.push_back({"multi-index enumeration", counts, "m <= 8"});
    bool finite = std::isfinite(rep.total) && rep.total >= 0.0;
    lines.push_back({"energy finite", finite, "total " + sci(rep.total)});
    return report(lines);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"machslab: low Mach number MHD slab laboratory"};
    app.require_subcommand(1);
    Common o;
    std::string resume, checkpoint;
    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", o.config, "JSON configuration")->check(CLI::ExistingFile);
        if (need_config) opt->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "seed override");
        sub->add_option("--dim", o.dim, "spatial dimension")->check(CLI::IsMember({2, 3}));
    };
    auto* run_cmd = app.add_subcommand("run", "single compressible or incompressible run");
    add_common(run_cmd, true);
    run_cmd->add_option("--resume", resume, "MSLB1 checkpoint to continue from")->check(CLI::ExistingFile);
    auto* sweep_cmd = app.add_subcommand("sweep", "Mach sweep against the incompressible limit");
    add_common(sweep_cmd, false);
    auto* picard_cmd = app.add_subcommand("picard", "Picard iteration with contraction ratios");
    add_common(picard_cmd, false);
    auto* id_cmd = app.add_subcommand("identities", "algebraic identity suite on manufactured fields");
    add_common(id_cmd, false);
    auto* norms_cmd = app.add_subcommand("norms", "energy report and Sobolev norms of a state");
    add_common(norms_cmd, false);
    norms_cmd->add_option("--checkpoint", checkpoint, "MSLB1 checkpoint of a compressible run")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    try {
        if (*run_cmd) return cmd_run(o, resume);
        if (*sweep_cmd) return cmd_sweep(o);
        if (*picard_cmd) return cmd_picard(o);
        if (*id_cmd) return cmd_identities(o);
        if (*norms_cmd) return cmd_norms(o, checkpoint);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
