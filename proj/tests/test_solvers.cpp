#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "machslab/checkpoint.hpp"
#include "machslab/compressible.hpp"
#include "machslab/config.hpp"
#include "machslab/error.hpp"
#include "machslab/incompressible.hpp"
#include "machslab/initial_data.hpp"
#include "machslab/poisson.hpp"
#include "machslab/run.hpp"

using namespace machslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("machslab_unit_" + name);
    fs::remove_all(p);
    return p;
}

nlohmann::json vortex_params(double a) { return {{"amplitude", a}, {"b_amplitude", a / 2}, {"b0", 1.0}}; }

}  // namespace

TEST_CASE("equilibrium is a steady state of both systems") {
    auto g = SlabGrid::build(2, {12}, 9);
    EosParams e{0.1, 1.4, 1.0};
    const MhdState s = make_compressible_state(g, "equilibrium", {{"p0", 0.2}, {"s0", 0.1}}, e);
    const MhdState r = rhs(s, e);
    for (const Field* f : r.fields()) CHECK(f->max_abs() < 1e-12);
    const IncState is = make_incompressible_state(g, "equilibrium", {}, e);
    const IncRhs ir = inc_rhs(is);
    CHECK(ir.du.max_abs() < 1e-12);
    CHECK(ir.dB.max_abs() < 1e-12);
}

TEST_CASE("vortex data are divergence free with zero normal traces") {
    for (int d : {2, 3}) {
        auto g = d == 2 ? SlabGrid::build(2, {16}, 17) : SlabGrid::build(3, {12, 12}, 13);
        const IncDatum dat = make_datum(g, "vortex", vortex_params(0.3));
        CHECK(divergence(dat.u).max_abs() < 1e-10);
        CHECK(divergence(dat.B).max_abs() < 1e-10);
        CHECK(dat.u.normal().wall_max_abs() < 1e-14);
        CHECK(dat.B.normal().wall_max_abs() < 1e-14);
    }
}

TEST_CASE("well-prepared data have a small initial time derivative") {
    auto g = SlabGrid::build(2, {16}, 17);
    for (double eps : {0.2, 0.05}) {
        EosParams e{eps, 1.4, 1.0};
        const MhdState s = make_compressible_state(g, "vortex", vortex_params(0.2), e);
        const MhdState r = rhs(s, e);
        // d_t u and d_t p are O(1), not O(1/eps)
        CHECK(l2_norm(r.u) < 2.0);
        CHECK(l2_norm(r.p) < 5.0);
    }
}

TEST_CASE("bootstrap level 1 equals the right-hand side") {
    auto g = SlabGrid::build(2, {16}, 13);
    EosParams e{0.3, 1.4, 1.0};
    const MhdState s = band_limit_state(make_compressible_state(g, "vortex", vortex_params(0.2), e));
    const TimeStack st = bootstrap(s, e, 3);
    CHECK(st.depth() == 3);
    const MhdState r = rhs(s, e);
    const auto a = st[1].fields();
    const auto b = r.fields();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((*a[i] - *b[i]).max_abs() < 1e-9 * (1.0 + b[i]->max_abs()));
    CHECK_THROWS_AS(bootstrap(s, e, 9), InvalidArgument);
}

TEST_CASE("RK4 step keeps the wall condition and detects CFL violations") {
    auto g = SlabGrid::build(2, {16}, 13);
    EosParams e{0.2, 1.4, 1.0};
    const MhdState s = make_compressible_state(g, "vortex", vortex_params(0.2), e);
    const double dt = cfl_dt(s, e, 0.5);
    const MhdState n = step(s, e, dt);
    CHECK(n.u.normal().wall_max_abs() < 1e-12);
    CHECK(n.t == doctest::Approx(dt));
    StepOptions o;
    o.cfl_limit = 1.0;
    CHECK_THROWS_AS(step(s, e, 100.0 * dt, o), SolverError);
}

TEST_CASE("projection gives discretely solenoidal fields") {
    auto g = SlabGrid::build(2, {16}, 13);
    VecField X(g);
    X[0] = Field::sample(g, [](const Point& x) { return std::sin(x[0]) * x[1]; });
    X[1] = Field::sample(g, [](const Point& x) { return std::cos(x[0]) + x[1] * x[1]; });
    const VecField P = project(X);
    CHECK(P.normal().wall_max_abs() < 1e-13);
    CHECK(wall_divergence(P).max_abs() < 1e-10);
    // idempotent
    CHECK(l2_norm(project(P) - P) < 1e-10);

    const Field rho = Field::sample(g, [](const Point& x) { return 1.0 + 0.2 * std::cos(x[0]) * (1 - x[1] * x[1]); });
    const ProjectionResult pr = project_full(X, rho);
    CHECK(wall_divergence(pr.u).max_abs() < 1e-8);
    CHECK(pr.residual <= 1e-10);
}

TEST_CASE("incompressible step conserves energy closely on smooth data") {
    auto g = SlabGrid::build(2, {16}, 13);
    EosParams e;
    IncState s = make_incompressible_state(g, "vortex", vortex_params(0.2), e);
    const double e0 = inc_energy(s);
    const double dt = inc_cfl_dt(s, 0.5);
    for (int i = 0; i < 10; ++i) s = inc_step(s, dt);
    CHECK(std::abs(inc_energy(s) - e0) / e0 < 1e-6);
    CHECK(divergence(s.u).max_abs() < 1e-8);
}

TEST_CASE("checkpoint round trip is bit exact") {
    auto g = SlabGrid::build(3, {8, 10}, 9, 3.0);
    Checkpoint cp;
    cp.grid = g;
    cp.fields.push_back(Field::sample(g, [](const Point& x) { return std::sin(x[0]) + x[2] / 3.0; }));
    cp.fields.push_back(Field(g, -0.1));
    cp.aux = {0.25, 1.0 / 3.0};
    const auto path = scratch("ckpt.mslb");
    write_checkpoint(path.string(), cp);
    const Checkpoint back = read_checkpoint(path.string());
    CHECK(back.grid->same_shape(*g));
    CHECK(back.grid->period() == 3.0);
    REQUIRE(back.fields.size() == 2);
    CHECK((back.fields[0].array() == cp.fields[0].array()).all());
    CHECK(back.aux == cp.aux);
    {
        std::ifstream is(path, std::ios::binary);
        char magic[5];
        is.read(magic, 5);
        CHECK(std::string(magic, 5) == "MSLB1");
    }
    std::ofstream(path, std::ios::trunc) << "garbage";
    CHECK_THROWS_AS(read_checkpoint(path.string()), IoError);
    CHECK_THROWS_AS(read_checkpoint((path.string() + ".missing")), IoError);
}

TEST_CASE("config round trip and validation") {
    RunConfig c;
    c.kind = "incompressible";
    c.dim = 3;
    c.n_tangential = {8, 10};
    c.n_normal = 11;
    c.eos.epsilon = 0.25;
    c.data_kind = "alfven";
    c.data_params = {{"amplitude", 1e-3}};
    c.filter_strength = 2.0;
    const RunConfig d = config_from_json(config_to_json(c));
    CHECK(config_to_json(d) == config_to_json(c));

    nlohmann::json bad = config_to_json(c);
    bad["kind"] = "plasma";
    CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
    bad = config_to_json(c);
    bad["grid"]["n_tangential"] = {8};
    CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
    bad = config_to_json(c);
    bad["eos"]["epsilon"] = "small";
    CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
}

TEST_CASE("run writes monitors and resumes from a checkpoint identically") {
    RunConfig c;
    c.n_tangential = {16};
    c.n_normal = 13;
    c.eos.epsilon = 0.3;
    c.t_final = 0.1;
    c.output_every = 0.05;
    c.data_params = vortex_params(0.2);
    c.energy_diagnostics = false;
    const auto dir = scratch("run");
    RunOptions o;
    o.out_dir = dir.string();
    const RunResult full = run(c, o);
    CHECK(full.monitors.size() == 3);
    CHECK(fs::exists(dir / "monitors.csv"));
    CHECK(fs::exists(dir / "checkpoint.mslb"));
    {
        std::ifstream is(dir / "monitors.csv");
        std::string header;
        std::getline(is, header);
        CHECK(header == "t,E4,E5,E6,E7,E8,divB_L2,divU_L2,wall_trace_max,energy_drift");
    }

    // stop half way, then resume
    RunConfig half = c;
    half.t_final = 0.05;
    const auto dir2 = scratch("run_half");
    RunOptions oh;
    oh.out_dir = dir2.string();
    run(half, oh);
    RunOptions orr;
    orr.resume_from = (dir2 / "checkpoint.mslb").string();
    const RunResult resumed = run(c, orr);
    const MhdState& a = full.states.back();
    const MhdState& b = resumed.states.back();
    for (std::size_t i = 0; i < a.fields().size(); ++i)
        CHECK((a.fields()[i]->array() == b.fields()[i]->array()).all());
    CHECK(resumed.monitors.back().energy_drift == full.monitors.back().energy_drift);
}

TEST_CASE("run fails loudly on invalid data") {
    RunConfig c;
    c.data_kind = "nonsense";
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c.data_kind = "alfven";  // needs 3D
    CHECK_THROWS_AS(run(c), InvalidArgument);
}
