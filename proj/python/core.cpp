// Python bindings. Configs and reports cross the boundary as JSON text; the
// package __init__ turns them into dicts.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <cmath>
#include <numbers>

#include "machslab/compressible.hpp"
#include "machslab/energy.hpp"
#include "machslab/error.hpp"
#include "machslab/harness.hpp"
#include "machslab/identities.hpp"
#include "machslab/initial_data.hpp"
#include "machslab/norms.hpp"
#include "machslab/picard.hpp"
#include "machslab/run.hpp"

namespace py = pybind11;
using namespace machslab;
using nlohmann::json;

namespace {

json nan_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json monitors_json(const std::vector<MonitorRow>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"t", r.t},
                     {"E", json::array({nan_null(r.E[0]), nan_null(r.E[1]), nan_null(r.E[2]), nan_null(r.E[3]), nan_null(r.E[4])})},
                     {"divB_L2", r.divB_L2},
                     {"divU_L2", r.divU_L2},
                     {"wall_trace_max", r.wall_trace_max},
                     {"energy_drift", r.energy_drift}});
    return a;
}

json lines_json(const std::vector<AcceptanceLine>& lines) {
    json a = json::array();
    for (const auto& l : lines) a.push_back({{"name", l.name}, {"passed", l.passed}, {"detail", l.detail}});
    return a;
}

std::string run_json(const std::string& cfg_text, const std::string& out_dir) {
    const RunConfig cfg = config_from_json(json::parse(cfg_text));
    RunResult r;
    {
        py::gil_scoped_release nogil;
        RunOptions o;
        o.out_dir = out_dir;
        o.store_states = false;
        r = run(cfg, o);
    }
    return json{{"dt", r.dt}, {"monitors", monitors_json(r.monitors)}, {"checks", lines_json(run_checks(r.monitors))}}
        .dump();
}

std::string sweep_json(const std::string& cfg_text, const std::string& out_dir) {
    const SweepConfig cfg = sweep_config_from_json(json::parse(cfg_text));
    SweepResult r;
    {
        py::gil_scoped_release nogil;
        r = run_sweep(cfg);
        if (!out_dir.empty()) emit_report(r, out_dir);
    }
    json fits = json::object();
    for (const auto& [k, f] : r.fits) fits[k] = {{"slope", f.slope}, {"r2", f.r2}};
    json members = json::array();
    for (std::size_t i = 0; i < r.members.size(); ++i) {
        const auto& m = r.members[i];
        json fin = json::object();
        for (const auto& n : r.norm_names) {
            const double v = r.final_value(i, n);
            fin[n] = std::isfinite(v) ? json(v) : json(nullptr);
        }
        members.push_back({{"epsilon", m.epsilon}, {"ok", m.ok}, {"error", m.error}, {"final", fin}});
    }
    return json{{"dt", r.dt}, {"members", members}, {"fits", fits}, {"acceptance", lines_json(sweep_acceptance(r))}}
        .dump();
}

std::string picard_json(const std::string& cfg_text, double t_final, int n_max) {
    const RunConfig cfg = config_from_json(json::parse(cfg_text));
    PicardOptions o;
    o.t_final = t_final;
    o.n_max = n_max;
    PicardResult r;
    {
        py::gil_scoped_release nogil;
        const MhdState s = make_compressible_state(cfg.make_grid(), cfg.data_kind, cfg.data_params, cfg.eos);
        r = picard_iterate(s, cfg.eos, o);
    }
    json ratio = json::array();
    for (double x : r.ratio) ratio.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return json{{"dt", r.dt},
                {"sup_diff_energy", r.sup_diff_energy},
                {"ratio", ratio},
                {"diverged", r.diverged},
                {"message", r.message},
                {"l2_vs_nonlinear", r.l2_vs_nonlinear}}
        .dump();
}

std::string identities_json(int dim, std::uint64_t seed, int seeds, double epsilon) {
    const GridPtr g = dim == 2 ? SlabGrid::build(2, {32}, 33) : SlabGrid::build(3, {16, 16}, 17);
    EosParams e;
    e.epsilon = epsilon;
    std::vector<IdentityReport> reps;
    {
        py::gil_scoped_release nogil;
        reps = run_identity_suite(g, e, seed, seeds);
    }
    return identity_reports_json(reps).dump();
}

std::string energy_json(const std::string& cfg_text) {
    const RunConfig cfg = config_from_json(json::parse(cfg_text));
    const MhdState s = make_compressible_state(cfg.make_grid(), cfg.data_kind, cfg.data_params, cfg.eos);
    return energy_report_json(energy(bootstrap(band_limit_state(s), cfg.eos, 8), cfg.eos)).dump();
}

GridPtr grid_of(int dim, const std::vector<int>& n_tangential, int n_normal, double period) {
    return SlabGrid::build(dim, n_tangential, n_normal, period);
}

py::array_t<double> grid_points(int dim, const std::vector<int>& n_tangential, int n_normal, double period) {
    const GridPtr g = grid_of(dim, n_tangential, n_normal, period);
    py::array_t<double> out({static_cast<py::ssize_t>(g->size()), static_cast<py::ssize_t>(dim)});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < g->size(); ++i) {
        const Point p = g->point(i);
        for (int k = 0; k < dim; ++k) a(static_cast<py::ssize_t>(i), k) = p[static_cast<std::size_t>(k)];
    }
    return out;
}

double sobolev(py::array_t<double, py::array::c_style | py::array::forcecast> values, int dim,
               const std::vector<int>& n_tangential, int n_normal, double period, int s) {
    const GridPtr g = grid_of(dim, n_tangential, n_normal, period);
    if (static_cast<std::size_t>(values.size()) != g->size())
        throw InvalidArgument("sobolev_norm: expected " + std::to_string(g->size()) + " values");
    Eigen::ArrayXd v(values.size());
    std::copy(values.data(), values.data() + values.size(), v.data());
    return sobolev_norm(Field(g, std::move(v)), s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "machslab core bindings";
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("run_json", &run_json, py::arg("config"), py::arg("out_dir") = "");
    m.def("sweep_json", &sweep_json, py::arg("config"), py::arg("out_dir") = "");
    m.def("picard_json", &picard_json, py::arg("config"), py::arg("t_final") = 0.125, py::arg("n_max") = 16);
    m.def("identities_json", &identities_json, py::arg("dim") = 2, py::arg("seed") = 0, py::arg("seeds") = 10,
          py::arg("epsilon") = 0.1);
    m.def("energy_json", &energy_json, py::arg("config"));
    m.def("fit_rate",
          [](const std::vector<double>& e, const std::vector<double>& v) {
              const RateFit f = fit_rate(e, v);
              return py::make_tuple(f.slope, f.r2);
          },
          py::arg("epsilons"), py::arg("values"));
    m.def("lattice_count", &lattice_count, py::arg("dim"), py::arg("m"));
    m.def("enumerate_count", [](int d, int mm) { return enumerate_multi_indices(d, mm).size(); }, py::arg("dim"),
          py::arg("m"));
    m.def("grid_points", &grid_points, py::arg("dim"), py::arg("n_tangential"), py::arg("n_normal"),
          py::arg("period") = 2.0 * std::numbers::pi);
    m.def("sobolev_norm", &sobolev, py::arg("values"), py::arg("dim"), py::arg("n_tangential"), py::arg("n_normal"),
          py::arg("period") = 2.0 * std::numbers::pi, py::arg("s") = 0);
    m.def("thread_limit", &thread_limit);
}
