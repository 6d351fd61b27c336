#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "machslab/error.hpp"
#include "machslab/harness.hpp"

using namespace machslab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("machslab_harness_" + name);
    fs::remove_all(p);
    return p;
}

SweepConfig small_sweep() {
    SweepConfig c;
    c.base.n_tangential = {16};
    c.base.n_normal = 13;
    c.base.t_final = 0.1;
    c.base.output_every = 0.05;
    c.base.dt_cfl = 1.0;
    c.base.data_params = {{"amplitude", 0.2}, {"b_amplitude", 0.1}};
    c.base.energy_diagnostics = false;
    c.epsilons = {0.4, 0.2, 0.1};
    return c;
}

}  // namespace

TEST_CASE("fit_rate recovers synthetic slopes") {
    const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
    std::vector<double> sq, lin;
    for (double e : eps) {
        sq.push_back(e * e);
        lin.push_back(3.7 * e);
    }
    const RateFit a = fit_rate(eps, sq), b = fit_rate(eps, lin);
    CHECK(std::abs(a.slope - 2.0) <= 1e-6);
    CHECK(std::abs(b.slope - 1.0) <= 1e-6);
    CHECK(a.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_rate(eps, {1.0, 0.0, 1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(fit_rate({0.4, 0.2}, {1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(fit_rate(eps, {1.0, 2.0}), InvalidArgument);
}

TEST_CASE("sweep config validation") {
    SweepConfig c = small_sweep();
    CHECK_NOTHROW(c.validate());
    c.epsilons = {0.1, 0.2};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.epsilons = {1.5, 0.2};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.epsilons = {};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);

    const auto j = nlohmann::json{{"run", config_to_json(small_sweep().base)}, {"epsilons", {0.3, 0.1, 0.01}}};
    CHECK(sweep_config_from_json(j).epsilons == std::vector<double>{0.3, 0.1, 0.01});
}

TEST_CASE("thread limit honours the environment") {
    ::setenv("MACHSLAB_THREADS", "3", 1);
    CHECK(thread_limit() == 3);
    ::setenv("MACHSLAB_THREADS", "zero", 1);
    CHECK(thread_limit() >= 1);
    ::unsetenv("MACHSLAB_THREADS");
    CHECK(thread_limit() >= 1);
}

TEST_CASE("empty sweep gives a header-only CSV") {
    SweepResult r;
    r.norm_names = {"u_H0", "B_H0"};
    const auto dir = scratch("empty");
    emit_report(r, dir.string());
    CHECK(slurp(dir / "sweep.csv") == "epsilon,t,u_H0,B_H0\n");
    CHECK(count(slurp(dir / "convergence.svg"), "<polyline") == 2);
}

TEST_CASE("report to an unwritable place fails with the path") {
    SweepResult r;
    try {
        emit_report(r, "/proc/machslab_cannot_write");
        CHECK(false);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/proc/machslab_cannot_write") != std::string::npos);
    }
}

TEST_CASE("equilibrium sweep has vanishing differences") {
    SweepConfig c = small_sweep();
    c.base.data_kind = "equilibrium";
    c.base.data_params = nlohmann::json::object();
    const SweepResult r = run_sweep(c);
    REQUIRE(r.reference_ok);
    for (const auto& m : r.members) {
        REQUIRE(m.ok);
        for (const auto& row : m.rows)
            for (double v : row.values) CHECK(v <= 1e-10);
    }
}

TEST_CASE("small sweep: cardinality, plot and determinism across thread counts") {
    SweepConfig c = small_sweep();
    c.threads = 1;
    const SweepResult a = run_sweep(c);
    c.threads = 4;
    const SweepResult b = run_sweep(c);
    REQUIRE(a.reference_ok);
    for (const auto& m : a.members) REQUIRE(m.ok);
    CHECK(a.norm_names.size() == 9);
    CHECK(a.fits.count("divU_sup") == 1);

    const auto da = scratch("det_a"), db = scratch("det_b");
    emit_report(a, da.string());
    emit_report(b, db.string());
    const std::string csv = slurp(da / "sweep.csv");
    // header + 3 epsilons x 3 output times
    CHECK(count(csv, "\n") == 1 + 3 * 3);
    for (const char* f : {"sweep.csv", "summary.json", "monitors_eps0.1.csv", "monitors_reference.csv", "convergence.svg"})
        CHECK(slurp(da / f) == slurp(db / f));
    CHECK(count(slurp(da / "convergence.svg"), "<polyline") == a.norm_names.size());

    const auto j = nlohmann::json::parse(slurp(da / "summary.json"));
    CHECK(j.at("members").size() == 3);
    CHECK(j.at("fits").contains("divU_sup"));
    for (const auto& m : a.members)
        for (const auto& row : m.rows)
            for (double v : row.values) CHECK(v >= 0.0);
}

TEST_CASE("member failures are recorded and the sweep continues") {
    SweepConfig c = small_sweep();
    RunConfig big = c.base;
    big.eos.epsilon = 0.4;
    big.dt_cfl = 0.5;
    // this step is fine at eps = 0.4 and violates the CFL limit at eps = 0.1
    c.base.dt = driver_dt(big);
    c.base.dt_cfl = 0.5;
    const SweepResult r = run_sweep(c);
    CHECK(r.members[0].ok);
    CHECK_FALSE(r.members[2].ok);
    CHECK(r.members[2].error.find("CFL") != std::string::npos);
    const auto lines = sweep_acceptance(r);
    CHECK_FALSE(lines.front().passed);
}

TEST_CASE("drift under step halving") {
    RunConfig c;
    c.n_tangential = {16};
    c.n_normal = 13;
    c.eos.epsilon = 0.2;
    c.dt_cfl = 1.0;
    c.t_final = 0.1;
    c.output_every = 0.05;
    c.data_params = {{"amplitude", 0.2}, {"pressure_perturbation", 0.1}};
    const DriftPair p = drift_under_halving(c);
    CHECK(p.dt > 0.0);
    CHECK(p.drift >= 0.0);
    CHECK(p.drift_half <= p.drift);
}

TEST_CASE("Alfven frequency on a coarse grid") {
    RunConfig c;
    c.dim = 3;
    c.n_tangential = {16, 16};
    c.n_normal = 9;
    c.dt_cfl = 1.0;
    c.t_final = 2.0;
    c.output_every = 0.05;
    c.data_kind = "alfven";
    c.data_params = {{"amplitude", 1e-3}, {"mode", 1}, {"b0", 1.0}};
    const AlfvenMeasurement m = measure_alfven(c);
    CHECK(m.predicted == doctest::Approx(1.0));
    CHECK(m.relative_error() < 1e-2);
}

TEST_CASE("log-log plot has one polyline per series") {
    const std::string svg = loglog_svg({0.4, 0.2, 0.1}, {{"a", {1, 0.5, 0.25}}, {"b", {1e-3, 1e-4, 0.0}}, {"c", {}}}, "eps");
    CHECK(count(svg, "<polyline") == 3);
    CHECK(svg.rfind("<svg", 0) == 0);
}
