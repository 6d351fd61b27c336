#include "machslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "machslab/calculus.hpp"
#include "machslab/compressible.hpp"
#include "machslab/norms.hpp"

namespace machslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << std::setprecision(17);
    return os;
}

void finish(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw IoError("write failed for '" + path + "'");
}

// Runs tasks on up to `threads` workers; each task owns its own output slot.
void run_parallel(std::vector<std::function<void()>>& tasks, int threads) {
    const auto n = static_cast<int>(tasks.size());
    const int workers = std::max(1, std::min(threads, n));
    if (workers == 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) tasks[static_cast<std::size_t>(i)]();
        });
    }
    for (auto& t : pool) t.join();
}

double energy_sum(const MonitorRow& r) {
    double s = 0.0;
    for (double e : r.E) s += e;
    return s;
}

}  // namespace

void SweepConfig::validate() const {
    base.validate();
    require(!epsilons.empty(), "sweep: epsilons must not be empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        require(epsilons[i] > 0.0 && epsilons[i] < 1.0, "sweep: epsilons must lie in (0, 1)");
        if (i > 0) require(epsilons[i] < epsilons[i - 1], "sweep: epsilons must be strictly decreasing");
    }
    for (int s : norm_orders) require(s >= 0 && s <= 4, "sweep: norm orders must be in 0..4");
    require(threads >= 0, "sweep: threads must be nonnegative");
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig c;
    try {
        c.base = config_from_json(j.contains("run") ? j.at("run") : j);
        if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
        if (j.contains("norm_orders")) c.norm_orders = j.at("norm_orders").get<std::vector<int>>();
        c.threads = j.value("threads", 0);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("sweep config: ") + e.what());
    }
    c.validate();
    return c;
}

int thread_limit() {
    if (const char* env = std::getenv("MACHSLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double SweepResult::final_value(std::size_t member, const std::string& norm) const {
    const auto it = std::find(norm_names.begin(), norm_names.end(), norm);
    if (it == norm_names.end() || member >= members.size()) return kNaN;
    const auto& m = members[member];
    if (!m.ok || m.rows.empty()) return kNaN;
    return m.rows.back().values[static_cast<std::size_t>(it - norm_names.begin())];
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values) {
    require(eps.size() == values.size(), "fit_rate: size mismatch");
    require(eps.size() >= 3, "fit_rate: need at least three points");
    const auto n = static_cast<double>(eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        require(eps[i] > 0.0 && values[i] > 0.0 && std::isfinite(values[i]), "fit_rate: values must be positive");
        const double x = std::log(eps[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
    require(vx > 0.0, "fit_rate: epsilons must not all be equal");
    RateFit f;
    f.slope = cxy / vx;
    f.r2 = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
    return f;
}

SweepResult run_sweep(const SweepConfig& cfg_in) {
    cfg_in.validate();
    SweepResult res;
    res.config = cfg_in;
    const SweepConfig& cfg = res.config;
    for (int s : cfg.norm_orders) res.norm_names.push_back("u_H" + std::to_string(s));
    for (int s : cfg.norm_orders) res.norm_names.push_back("B_H" + std::to_string(s));
    res.norm_names.push_back("gradp_L2");
    res.norm_names.push_back("divU_L2");
    res.norm_names.push_back("divU_over_eps2");

    // common step: the CFL step of the smallest epsilon, unless one is given
    RunConfig base = cfg.base;
    base.kind = "compressible";
    if (base.dt <= 0.0) {
        RunConfig small = base;
        small.eos.epsilon = cfg.epsilons.back();
        base.dt = driver_dt(small);
    }
    res.dt = base.dt;

    RunResult reference;
    std::vector<RunResult> runs(cfg.epsilons.size());
    res.members.resize(cfg.epsilons.size());
    std::vector<std::function<void()>> tasks;
    tasks.emplace_back([&] {
        RunConfig c = base;
        c.kind = "incompressible";
        try {
            reference = run(c, RunOptions{});
            res.reference_ok = true;
        } catch (const std::exception& e) {
            res.reference_error = e.what();
        }
    });
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        tasks.emplace_back([&, i] {
            RunConfig c = base;
            c.eos.epsilon = cfg.epsilons[i];
            auto& m = res.members[i];
            m.epsilon = cfg.epsilons[i];
            try {
                runs[i] = run(c, RunOptions{});
                m.ok = true;
            } catch (const std::exception& e) {
                m.error = e.what();
            }
        });
    }
    run_parallel(tasks, cfg.threads > 0 ? cfg.threads : thread_limit());

    res.reference_monitors = reference.monitors;
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        auto& m = res.members[i];
        if (!m.ok) continue;
        const RunResult& r = runs[i];
        const double eps = cfg.epsilons[i];
        m.monitors = r.monitors;
        if (base.energy_diagnostics)
            for (const auto& row : r.monitors) m.energy_total.push_back(energy_sum(row));
        for (std::size_t k = 0; k < r.states.size(); ++k) {
            const MhdState& s = r.states[k];
            SweepRow row;
            row.epsilon = eps;
            row.t = s.t;
            const bool have_ref = res.reference_ok && k < reference.inc_states.size();
            for (int order : cfg.norm_orders)
                row.values.push_back(have_ref ? sobolev_norm(s.u - reference.inc_states[k].u, order) : kNaN);
            for (int order : cfg.norm_orders)
                row.values.push_back(have_ref ? sobolev_norm(s.B - reference.inc_states[k].B, order) : kNaN);
            if (have_ref) {
                const IncState& ref = reference.inc_states[k];
                EosParams e = base.eos;
                e.epsilon = eps;
                const Field rho_e = density(e, s.p, s.S);
                const Field rinv(rho_e.grid_ptr(), rho_e.array().inverse());
                const Field vinv(ref.varrho.grid_ptr(), ref.varrho.array().inverse());
                row.values.push_back(l2_norm(rinv * gradient(s.p) - vinv * gradient(ref.pi)));
            } else {
                row.values.push_back(kNaN);
            }
            const double dv = l2_norm(divergence(s.u));
            row.values.push_back(dv);
            row.values.push_back(dv / (eps * eps));
            m.rows.push_back(std::move(row));
        }
    }

    // fits over the members that finished
    std::vector<double> eps_ok;
    std::vector<std::size_t> idx_ok;
    for (std::size_t i = 0; i < res.members.size(); ++i)
        if (res.members[i].ok) {
            eps_ok.push_back(res.members[i].epsilon);
            idx_ok.push_back(i);
        }
    if (eps_ok.size() >= 3) {
        for (const auto& name : res.norm_names) {
            std::vector<double> v;
            for (auto i : idx_ok) v.push_back(res.final_value(i, name));
            if (std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; }))
                res.fits[name] = fit_rate(eps_ok, v);
        }
        std::vector<double> sup;
        for (auto i : idx_ok) {
            double m = 0.0;
            for (const auto& row : res.members[i].monitors) m = std::max(m, row.divU_L2);
            sup.push_back(m);
        }
        if (std::all_of(sup.begin(), sup.end(), [](double x) { return x > 0.0; })) res.fits["divU_sup"] = fit_rate(eps_ok, sup);
    }
    return res;
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
}

}  // namespace

std::vector<AcceptanceLine> sweep_acceptance(const SweepResult& r) {
    std::vector<AcceptanceLine> out;
    const auto& mem = r.members;
    const bool all_ok = r.reference_ok && std::all_of(mem.begin(), mem.end(), [](const SweepMember& m) { return m.ok; });
    std::string failed;
    if (!r.reference_ok) failed = "reference: " + r.reference_error;
    for (const auto& m : mem)
        if (!m.ok) failed += (failed.empty() ? "" : "; ") + ("eps=" + num(m.epsilon) + ": " + m.error);

    {
        AcceptanceLine l{"divergence scaling", false, ""};
        const auto it = r.fits.find("divU_sup");
        if (!all_ok) {
            l.detail = failed;
        } else if (it == r.fits.end()) {
            l.detail = "no fit";
        } else {
            l.passed = it->second.slope >= 1.8 && it->second.r2 >= 0.98;
            l.detail = "slope " + fmt(it->second.slope) + " (>= 1.8), R^2 " + fmt(it->second.r2) + " (>= 0.98)";
        }
        out.push_back(l);
    }
    {
        AcceptanceLine l{"incompressible limit", false, ""};
        if (!all_ok || mem.size() < 2) {
            l.detail = all_ok ? "need >= 2 members" : failed;
        } else {
            bool ok = true;
            std::string d;
            for (const std::string name : {"u_H0", "B_H0", "gradp_L2"}) {
                std::vector<double> v;
                for (std::size_t i = 0; i < mem.size(); ++i) v.push_back(r.final_value(i, name));
                bool dec = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
                for (std::size_t i = 1; dec && i < v.size(); ++i) dec = v[i] < v[i - 1];
                const bool quarter = dec && v.back() <= 0.25 * v.front();
                ok = ok && dec && quarter;
                d += (d.empty() ? "" : ", ") + name + " " + fmt(v.front()) + " -> " + fmt(v.back()) +
                     (dec ? "" : " (not decreasing)") + (dec && !quarter ? " (ratio > 1/4)" : "");
            }
            l.passed = ok;
            l.detail = d;
        }
        out.push_back(l);
    }
    {
        AcceptanceLine l{"uniform energy bound", false, ""};
        if (!all_ok) {
            l.detail = failed;
        } else if (std::any_of(mem.begin(), mem.end(), [](const SweepMember& m) { return m.energy_total.empty(); })) {
            l.detail = "energy diagnostics disabled";
        } else {
            double worst = 0.0;
            bool monotone = true;
            double prev_hi = std::numeric_limits<double>::infinity();
            std::string his;
            for (const auto& m : mem) {
                const double e0 = m.energy_total.front();
                for (double e : m.energy_total) worst = std::max(worst, std::isfinite(e) ? e / e0 : kNaN);
                if (!std::isfinite(worst)) worst = std::numeric_limits<double>::infinity();
                const auto& E = m.monitors.front().E;
                const double hi = E[1] + E[2] + E[3] + E[4];
                monotone = monotone && hi <= prev_hi;
                prev_hi = hi;
                his += (his.empty() ? "" : " ") + fmt(hi);
            }
            l.passed = worst <= 10.0 && monotone;
            l.detail = "max E(t)/E(0) " + fmt(worst) + " (<= 10); E5..E8 at t=0 by eps: " + his +
                       (monotone ? "" : " (not monotone)");
        }
        out.push_back(l);
    }
    {
        AcceptanceLine l{"constraint propagation", false, ""};
        double growth = 0.0, wall = 0.0;
        bool any = false;
        auto scan = [&](const std::vector<MonitorRow>& rows) {
            if (rows.empty()) return;
            any = true;
            const double d0 = rows.front().divB_L2;
            for (const auto& row : rows) {
                growth = std::max(growth, row.divB_L2 - d0 - 1e-8 * row.t);
                wall = std::max(wall, row.wall_trace_max);
            }
        };
        for (const auto& m : mem) scan(m.monitors);
        scan(r.reference_monitors);
        if (!all_ok) {
            l.detail = failed;
        } else {
            l.passed = any && growth <= 0.0 && wall <= 1e-10;
            l.detail = "max div B excess " + fmt(std::max(growth, 0.0)) + " (<= 0), wall trace " + fmt(wall) + " (<= 1e-10)";
        }
        out.push_back(l);
    }
    {
        AcceptanceLine l{"energy balance drift", false, ""};
        if (!all_ok) {
            l.detail = failed;
        } else {
            double worst = 0.0;
            for (const auto& m : mem)
                for (const auto& row : m.monitors) worst = std::max(worst, std::abs(row.energy_drift));
            l.passed = worst <= 1e-4;
            l.detail = "max |drift| " + fmt(worst) + " (<= 1e-4)";
        }
        out.push_back(l);
    }
    return out;
}

std::vector<AcceptanceLine> run_checks(const std::vector<MonitorRow>& rows) {
    std::vector<AcceptanceLine> out;
    if (rows.empty()) return out;
    const MonitorRow& r0 = rows.front();
    double growth = 0.0, wall = 0.0, drift = 0.0, eratio = 0.0;
    bool have_e = true;
    auto etot = [](const MonitorRow& r) { return r.E[0] + r.E[1] + r.E[2] + r.E[3] + r.E[4]; };
    for (const auto& row : rows) {
        growth = std::max(growth, row.divB_L2 - r0.divB_L2 - 1e-8 * row.t);
        wall = std::max(wall, row.wall_trace_max);
        drift = std::max(drift, std::abs(row.energy_drift));
        const double e = etot(row);
        if (std::isnan(e)) have_e = false;
        else eratio = std::max(eratio, e / etot(r0));
    }
    out.push_back({"div B growth", growth <= 0.0, "excess " + fmt(growth)});
    out.push_back({"wall traces", wall <= 1e-10, "max " + fmt(wall) + " (<= 1e-10)"});
    out.push_back({"energy balance drift", drift <= 1e-4, "max " + fmt(drift) + " (<= 1e-4)"});
    if (have_e) out.push_back({"energy bound", eratio <= 10.0, "max E(t)/E(0) " + fmt(eratio) + " (<= 10)"});
    return out;
}

std::string loglog_svg(const std::vector<double>& x, const std::vector<std::pair<std::string, std::vector<double>>>& series,
                       const std::string& xlabel) {
    constexpr double W = 640, H = 420, L = 70, R = 170, T = 20, B = 50;
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (double v : x)
        if (v > 0.0) {
            xlo = std::min(xlo, std::log10(v));
            xhi = std::max(xhi, std::log10(v));
        }
    for (const auto& [name, ys] : series)
        for (std::size_t i = 0; i < ys.size() && i < x.size(); ++i)
            if (ys[i] > 0.0 && std::isfinite(ys[i]) && x[i] > 0.0) {
                ylo = std::min(ylo, std::log10(ys[i]));
                yhi = std::max(yhi, std::log10(ys[i]));
            }
    if (!(xlo <= xhi)) xlo = 0.0, xhi = 1.0;
    if (!(ylo <= yhi)) ylo = 0.0, yhi = 1.0;
    xlo = std::floor(xlo * 10) / 10;
    xhi = std::ceil(xhi * 10) / 10;
    ylo = std::floor(ylo);
    yhi = std::ceil(yhi);
    if (xhi - xlo < 1e-12) xlo -= 0.5, xhi += 0.5;
    if (yhi - ylo < 1e-12) ylo -= 1, yhi += 1;
    auto px = [&](double lx) { return L + (lx - xlo) / (xhi - xlo) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ylo) / (yhi - ylo) * (H - T - B); };

    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(ylo); e <= static_cast<int>(yhi); ++e) {
        os << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(e) << "\" y2=\"" << py(e)
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << py(e) + 4 << "\" font-size=\"11\" text-anchor=\"end\">1e" << e
           << "</text>\n";
    }
    for (double v : x)
        if (v > 0.0)
            os << "<text x=\"" << px(std::log10(v)) << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
               << num(v) << "</text>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel
       << "</text>\n";
    std::size_t k = 0;
    for (const auto& [name, ys] : series) {
        const char* c = colours[k % std::size(colours)];
        os << "<polyline data-series=\"" << name << "\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < ys.size() && i < x.size(); ++i) {
            if (!(ys[i] > 0.0 && std::isfinite(ys[i]) && x[i] > 0.0)) continue;
            os << (first ? "" : " ") << px(std::log10(x[i])) << ',' << py(std::log10(ys[i]));
            first = false;
        }
        os << "\"/>\n";
        const double ly = T + 14 + 16 * static_cast<double>(k);
        os << "<line x1=\"" << W - R + 12 << "\" x2=\"" << W - R + 32 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
           << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R + 38 << "\" y=\"" << ly << "\" font-size=\"11\">" << name << "</text>\n";
        ++k;
    }
    os << "</svg>\n";
    return os.str();
}

void emit_report(const SweepResult& r, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

    {
        const std::string path = join(out_dir, "sweep.csv");
        auto os = open_out(path);
        os << "epsilon,t";
        for (const auto& n : r.norm_names) os << ',' << n;
        os << '\n';
        for (const auto& m : r.members)
            for (const auto& row : m.rows) {
                os << row.epsilon << ',' << row.t;
                for (double v : row.values) os << ',' << v;
                os << '\n';
            }
        finish(os, path);
    }
    for (const auto& m : r.members)
        if (m.ok) write_monitors_csv(join(out_dir, "monitors_eps" + num(m.epsilon) + ".csv"), m.monitors);
    if (r.reference_ok) write_monitors_csv(join(out_dir, "monitors_reference.csv"), r.reference_monitors);

    nlohmann::json j;
    j["config"] = config_to_json(r.config.base);
    j["epsilons"] = r.config.epsilons;
    j["norm_orders"] = r.config.norm_orders;
    j["dt"] = r.dt;
    j["norm_names"] = r.norm_names;
    j["reference"] = {{"ok", r.reference_ok}, {"error", r.reference_error}};
    j["members"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.members.size(); ++i) {
        const auto& m = r.members[i];
        nlohmann::json jm{{"epsilon", m.epsilon}, {"ok", m.ok}, {"error", m.error}};
        nlohmann::json fin = nlohmann::json::object();
        for (const auto& n : r.norm_names) {
            const double v = r.final_value(i, n);
            fin[n] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
        }
        jm["final"] = fin;
        double sup = 0.0;
        for (const auto& row : m.monitors) sup = std::max(sup, row.divU_L2);
        jm["sup_divU_L2"] = sup;
        if (!m.energy_total.empty()) {
            double worst = 0.0;
            for (double e : m.energy_total) worst = std::max(worst, e / m.energy_total.front());
            jm["max_energy_ratio"] = worst;
        }
        j["members"].push_back(jm);
    }
    nlohmann::json fits = nlohmann::json::object();
    for (const auto& [name, f] : r.fits) fits[name] = {{"slope", f.slope}, {"r2", f.r2}};
    j["fits"] = fits;
    j["acceptance"] = nlohmann::json::array();
    for (const auto& l : sweep_acceptance(r))
        j["acceptance"].push_back({{"name", l.name}, {"passed", l.passed}, {"detail", l.detail}});
    {
        const std::string path = join(out_dir, "summary.json");
        auto os = open_out(path);
        os << j.dump(2) << '\n';
        finish(os, path);
    }

    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (const auto& n : r.norm_names) {
        std::vector<double> v;
        for (std::size_t i = 0; i < r.members.size(); ++i) v.push_back(r.final_value(i, n));
        series.emplace_back(n, std::move(v));
    }
    {
        const std::string path = join(out_dir, "convergence.svg");
        auto os = open_out(path);
        os << loglog_svg(r.config.epsilons, series, "epsilon");
        finish(os, path);
    }
}

DriftPair drift_under_halving(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    cfg.kind = "compressible";
    cfg.energy_diagnostics = false;
    if (cfg.dt <= 0.0) cfg.dt = driver_dt(cfg);
    auto max_drift = [](const RunResult& rr) {
        double d = 0.0;
        for (const auto& row : rr.monitors) d = std::max(d, std::abs(row.energy_drift));
        return d;
    };
    RunOptions o;
    o.store_states = false;
    DriftPair p;
    p.dt = cfg.dt;
    p.drift = max_drift(run(cfg, o));
    cfg.dt *= 0.5;
    p.drift_half = max_drift(run(cfg, o));
    return p;
}

AlfvenMeasurement measure_alfven(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    require(cfg.data_kind == "alfven", "measure_alfven: needs alfven data");
    cfg.kind = "compressible";
    cfg.energy_diagnostics = false;
    const GridPtr grid = cfg.make_grid();
    const int mode = cfg.data_params.value("mode", 1);
    const double b0 = cfg.data_params.value("b0", 1.0);
    const double k = grid->wavenumber_unit() * mode;
    const Field sk = Field::sample(grid, [&](const Point& x) { return std::sin(k * x[0]); });
    const double norm = integrate(sk * sk);

    const RunResult r = run(cfg);
    std::vector<double> t, a;
    for (const auto& s : r.states) {
        t.push_back(s.t);
        a.push_back(integrate(s.u[1] * sk) / norm);
    }
    const MhdState& s0 = r.states.front();
    const Field rho = density(cfg.eos, s0.p, s0.S);
    AlfvenMeasurement m;
    m.predicted = std::abs(k * b0) / std::sqrt(integrate(rho) / integrate(Field(grid, 1.0)));

    // zero crossings by quadratic interpolation through three samples
    std::vector<double> zeros;
    for (std::size_t i = 1; i < a.size(); ++i) {
        if ((a[i - 1] > 0.0) == (a[i] > 0.0)) continue;
        const std::size_t j = i + 1 < a.size() ? i - 1 : i - 2;
        const double x0 = t[j], x1 = t[j + 1], x2 = t[j + 2];
        const double y0 = a[j], y1 = a[j + 1], y2 = a[j + 2];
        // Newton form, solved from the linear root
        const double d1 = (y1 - y0) / (x1 - x0), d2 = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0);
        double z = t[i - 1] - a[i - 1] * (t[i] - t[i - 1]) / (a[i] - a[i - 1]);
        for (int it = 0; it < 20; ++it) {
            const double f = y0 + d1 * (z - x0) + d2 * (z - x0) * (z - x1);
            const double fp = d1 + d2 * ((z - x0) + (z - x1));
            z -= f / fp;
        }
        zeros.push_back(z);
    }
    require(!zeros.empty(), "measure_alfven: run too short to see a zero crossing");
    const double pi = std::numbers::pi;
    m.measured = zeros.size() >= 2 ? pi / (zeros.back() - zeros.front()) * static_cast<double>(zeros.size() - 1)
                                   : pi / (2.0 * zeros.front());
    return m;
}

}  // namespace machslab
