#include "machslab/picard.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "machslab/energy.hpp"

namespace machslab {

namespace {

template <class T>
struct Gen {
    std::vector<T> u, B;
    T P, S;
};

template <class T>
T dot_vec(const std::vector<T>& a, const std::vector<T>& b) {
    T r = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

// sum_j a_j d_j f
template <class T>
T along(const std::vector<T>& a, const T& f) {
    T r = a[0] * deriv(f, 0);
    for (std::size_t j = 1; j < a.size(); ++j) r += a[j] * deriv(f, static_cast<int>(j));
    return r;
}

template <class T>
Gen<T> linear_generic(const Gen<T>& b, const Gen<T>& s, const EosParams& eos, bool dl) {
    const std::size_t d = s.u.size();
    const double e2 = eos.epsilon * eos.epsilon;
    const T pb = b.P - 0.5 * dot_vec(b.B, b.B);
    const T inv_rho = pow(1.0 + e2 * pb, -1.0 / eos.gamma) * exp(b.S * (1.0 / (eos.gamma * eos.c_v)));
    const T inv_fp = (eos.gamma / e2) * (1.0 + e2 * pb);
    T divu = deriv(s.u[0], 0);
    for (std::size_t a = 1; a < d; ++a) divu += deriv(s.u[a], static_cast<int>(a));

    Gen<T> r;
    for (std::size_t i = 0; i < d; ++i)
        r.u.push_back(inv_rho * (along(b.B, s.B[i]) - deriv(s.P, static_cast<int>(i))) - along(b.u, s.u[i]));
    // D0 B, then d_t B = D0 B - u0.grad B
    std::vector<T> DB;
    for (std::size_t i = 0; i < d; ++i) DB.push_back(along(b.B, s.u[i]) - b.B[i] * divu);
    for (std::size_t i = 0; i < d; ++i) r.B.push_back(DB[i] - along(b.u, s.B[i]));
    r.P = dot_vec(DB, b.B) - inv_fp * divu - along(b.u, s.P);
    r.S = -along(b.u, s.S);
    if (dl) {
        for (auto& x : r.u) x = dealias(x);
        for (auto& x : r.B) x = dealias(x);
        r.P = dealias(r.P);
        r.S = dealias(r.S);
    }
    return r;
}

Gen<Field> to_gen(const MhdState& s) { return {s.u.components(), s.B.components(), s.p, s.S}; }

void stage_walls(MhdState& k) { k.u.normal().zero_walls(); }

// Basic state at t_j + theta dt from cubic Hermite data at the two ends.
MhdState hermite(const PicardIterate& it, std::size_t j, double theta, double dt) {
    if (theta == 0.0) return it.states[j];
    if (theta == 1.0) return it.states[j + 1];
    const double t2 = theta * theta, t3 = t2 * theta;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    MhdState r = it.states[j];
    r.scale(h00);
    r.axpy(h10 * dt, it.rates[j]).axpy(h01, it.states[j + 1]).axpy(h11 * dt, it.rates[j + 1]);
    r.t = it.states[j].t + theta * dt;
    return r;
}

PicardIterate solve_linear(const PicardIterate& basic, const MhdState& init, const EosParams& eos, double dt,
                           int steps, bool dl) {
    PicardIterate out;
    out.states.reserve(static_cast<std::size_t>(steps) + 1);
    out.rates.reserve(static_cast<std::size_t>(steps) + 1);
    auto f = [&](const MhdState& b, const MhdState& y) {
        MhdState k = linear_rhs(b, y, eos, dl);
        stage_walls(k);
        return k;
    };
    MhdState y = init;
    for (int n = 0; n < steps; ++n) {
        const auto j = static_cast<std::size_t>(n);
        const MhdState bm = hermite(basic, j, 0.5, dt);
        const MhdState k1 = f(basic.states[j], y);
        out.states.push_back(y);
        out.rates.push_back(k1);
        MhdState z = y;
        z.axpy(0.5 * dt, k1);
        const MhdState k2 = f(bm, z);
        z = y;
        z.axpy(0.5 * dt, k2);
        const MhdState k3 = f(bm, z);
        z = y;
        z.axpy(dt, k3);
        const MhdState k4 = f(basic.states[j + 1], z);
        y.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
        y.t = init.t + (n + 1) * dt;
        y.u.normal().zero_walls();
        if (!y.all_finite()) {
            std::ostringstream os;
            os << "picard: non-finite iterate at t = " << y.t;
            throw SolverError(os.str());
        }
    }
    out.rates.push_back(f(basic.states.back(), y));
    out.states.push_back(std::move(y));
    return out;
}

// Taylor coefficients (c[k] = d_t^k / k!) of one iterate at one instant; the
// basic coefficients must reach depth - 1.
using Coeffs = std::vector<std::vector<Field>>;  // per scalar field: u.., B.., P, S

Coeffs linear_jet(const Coeffs& basic, const MhdState& value, const EosParams& eos, int depth, bool dl) {
    const int d = value.dim();
    const auto nf = static_cast<std::size_t>(2 * d + 2);
    Coeffs c(nf);
    {
        std::size_t i = 0;
        for (const Field* f : value.fields()) c[i++].push_back(*f);
    }
    for (int k = 0; k < depth; ++k) {
        auto cut = [&](const std::vector<Field>& v) {
            return Jet(std::vector<Field>(v.begin(), v.begin() + k + 1));
        };
        JetState bj, sj;
        for (int i = 0; i < d; ++i) {
            bj.u.push_back(cut(basic[static_cast<std::size_t>(i)]));
            bj.B.push_back(cut(basic[static_cast<std::size_t>(d + i)]));
            sj.u.push_back(cut(c[static_cast<std::size_t>(i)]));
            sj.B.push_back(cut(c[static_cast<std::size_t>(d + i)]));
        }
        bj.p = cut(basic[nf - 2]);
        bj.S = cut(basic[nf - 1]);
        sj.p = cut(c[nf - 2]);
        sj.S = cut(c[nf - 1]);
        const JetState r = linear_rhs(bj, sj, eos, dl);
        const double f = 1.0 / (k + 1.0);
        for (int i = 0; i < d; ++i) {
            Field un = r.u[static_cast<std::size_t>(i)][k] * f;
            if (i == d - 1) un.zero_walls();
            c[static_cast<std::size_t>(i)].push_back(std::move(un));
            c[static_cast<std::size_t>(d + i)].push_back(r.B[static_cast<std::size_t>(i)][k] * f);
        }
        c[nf - 2].push_back(r.p[k] * f);
        c[nf - 1].push_back(r.S[k] * f);
    }
    return c;
}

TimeStack to_stack(const Coeffs& c, int dim, double t) {
    TimeStack st;
    const int depth = static_cast<int>(c.front().size()) - 1;
    double fact = 1.0;
    for (int k = 0; k <= depth; ++k) {
        if (k > 0) fact *= k;
        std::vector<Field> u, B;
        for (int i = 0; i < dim; ++i) {
            u.push_back(c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * fact);
            B.push_back(c[static_cast<std::size_t>(dim + i)][static_cast<std::size_t>(k)] * fact);
        }
        st.levels.emplace_back(VecField(std::move(u)), VecField(std::move(B)),
                               c[static_cast<std::size_t>(2 * dim)][static_cast<std::size_t>(k)] * fact,
                               c[static_cast<std::size_t>(2 * dim + 1)][static_cast<std::size_t>(k)] * fact, t);
    }
    return st;
}

constexpr int kDiffBase = 3;
constexpr int kDiffDepth = 2 * kDiffBase;

}  // namespace

MhdState to_total_pressure(const MhdState& s) {
    MhdState r = s;
    r.p += 0.5 * norm_sq(s.B);
    return r;
}

MhdState to_thermal_pressure(const MhdState& s) {
    MhdState r = s;
    r.p -= 0.5 * norm_sq(s.B);
    return r;
}

MhdState linear_rhs(const MhdState& basic, const MhdState& state, const EosParams& eos, bool dealias_on) {
    eos.validate();
    require(basic.grid().same_shape(state.grid()), "linear_rhs: basic and state grids differ");
    const double e2 = eos.epsilon * eos.epsilon;
    const Field pb = basic.p - 0.5 * norm_sq(basic.B);
    if ((1.0 + e2 * pb.array()).minCoeff() <= 0.0)
        throw InvalidArgument("linear_rhs: basic state has nonpositive density");
    Gen<Field> r = linear_generic(to_gen(basic), to_gen(state), eos, dealias_on);
    return MhdState(VecField(std::move(r.u)), VecField(std::move(r.B)), std::move(r.P), std::move(r.S), state.t);
}

JetState linear_rhs(const JetState& basic, const JetState& state, const EosParams& eos, bool dealias_on) {
    eos.validate();
    Gen<Jet> b{basic.u, basic.B, basic.p, basic.S};
    Gen<Jet> s{state.u, state.B, state.p, state.S};
    Gen<Jet> r = linear_generic(b, s, eos, dealias_on);
    return JetState{std::move(r.u), std::move(r.B), std::move(r.P), std::move(r.S)};
}

PicardResult picard_iterate(const MhdState& initial, const EosParams& eos, const PicardOptions& opt) {
    eos.validate();
    require(opt.t_final > 0.0, "picard: t_final must be positive");
    require(opt.n_max >= 3, "picard: n_max must be >= 3");
    require(opt.samples >= 1, "picard: samples must be >= 1");
    PicardResult res;
    double dt = opt.dt > 0.0 ? opt.dt : cfl_dt(initial, eos, opt.cfl);
    const int steps = static_cast<int>(std::ceil(opt.t_final / dt - 1e-9));
    dt = opt.t_final / steps;
    res.dt = dt;
    res.steps = steps;
    const int every = std::max(1, steps / opt.samples);

    const MhdState init = to_total_pressure(initial);
    const auto grid = initial.grid_ptr();
    const int d = initial.dim();

    // iterate 0: u = B = 0, P = S = 0 for all t
    std::vector<PicardIterate> its(1);
    for (int n = 0; n <= steps; ++n) {
        MhdState z(grid);
        z.t = initial.t + n * dt;
        its[0].states.push_back(z);
        its[0].rates.push_back(MhdState(grid));
    }

    // sample times; coefficient memo per sample: coeffs[sample][iterate] at depth >= needed
    std::vector<std::size_t> sample_idx;
    for (int n = 0; n <= steps; n += every) sample_idx.push_back(static_cast<std::size_t>(n));
    if (sample_idx.back() != static_cast<std::size_t>(steps)) sample_idx.push_back(static_cast<std::size_t>(steps));
    std::vector<std::vector<Coeffs>> memo(sample_idx.size());

    auto coeffs_at = [&](std::size_t si, std::size_t m) -> const Coeffs& {
        auto& row = memo[si];
        // iterate m needs depth kDiffDepth; its basic needs one less, and so on down
        while (row.size() <= m) {
            const std::size_t q = row.size();
            const MhdState& v = its[q].states[sample_idx[si]];
            if (q == 0) {
                Coeffs c;
                c.assign(v.fields().size(), std::vector<Field>(kDiffDepth + 1, Field(grid)));
                row.push_back(std::move(c));
            } else {
                row.push_back(linear_jet(row[q - 1], v, eos, kDiffDepth, opt.dealias));
            }
        }
        return row[m];
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    int bad = 0;
    double peak = 0.0;
    for (int n = 0; n < opt.n_max; ++n) {
        its.push_back(solve_linear(its.back(), init, eos, dt, steps, opt.dealias));
        const auto& cur = its.back();
        for (const auto& s : cur.states) {
            res.wall_u_max = std::max(res.wall_u_max, s.u.normal().wall_max_abs());
            res.wall_b_max = std::max(res.wall_b_max, s.B.normal().wall_max_abs());
        }
        // [E]^(n) over the samples: difference of iterates n + 1 and n, f' of iterate n
        double sup = 0.0;
        for (std::size_t si = 0; si < sample_idx.size(); ++si) {
            const Coeffs& a = coeffs_at(si, static_cast<std::size_t>(n + 1));
            const Coeffs& b = coeffs_at(si, static_cast<std::size_t>(n));
            Coeffs diff = a;
            for (std::size_t i = 0; i < diff.size(); ++i)
                for (std::size_t k = 0; k < diff[i].size(); ++k) diff[i][k] -= b[i][k];
            const MhdState& basic = its[static_cast<std::size_t>(n)].states[sample_idx[si]];
            EnergyOptions eo;
            eo.base = kDiffBase;
            eo.p_shift = 2;
            eo.pressure_correction = false;
            eo.fprime = f_prime(eos, basic.p - 0.5 * norm_sq(basic.B), basic.S);
            const TimeStack st = to_stack(diff, d, basic.t);
            sup = std::max(sup, energy(st, eos, eo).total);
        }
        res.sup_diff_energy.push_back(sup);
        double ratio = nan;
        if (n >= 2) {
            const double den = res.sup_diff_energy[static_cast<std::size_t>(n - 1)] +
                               res.sup_diff_energy[static_cast<std::size_t>(n - 2)];
            ratio = den > 0.0 ? sup / den : 0.0;
            bad = ratio >= 1.0 ? bad + 1 : 0;
        }
        res.ratio.push_back(ratio);
        if (!std::isfinite(sup)) {
            res.diverged = true;
            res.message = "picard: non-finite difference energy at n = " + std::to_string(n);
            break;
        }
        if (bad >= 3) {
            res.diverged = true;
            res.message = "picard: ratio >= 1 for three consecutive iterations (n = " + std::to_string(n) + ")";
            break;
        }
        peak = std::max(peak, sup);
        if (sup <= opt.floor_ratio * peak) break;
    }

    res.final_state = to_thermal_pressure(its.back().states.back());
    StepOptions so;
    so.dealias = opt.dealias;
    MhdState y = initial;
    for (int n = 0; n < steps; ++n) y = step(y, eos, dt, so);
    res.l2_vs_nonlinear = std::sqrt(std::pow(l2_norm(res.final_state.u - y.u), 2) +
                                    std::pow(l2_norm(res.final_state.B - y.B), 2) +
                                    std::pow(l2_norm(res.final_state.p - y.p), 2) +
                                    std::pow(l2_norm(res.final_state.S - y.S), 2));
    if (res.message.empty()) res.message = "ok";
    return res;
}

void write_picard_csv(const std::string& path, const PicardResult& r) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << "n,sup_t_diff_energy,ratio\n" << std::setprecision(17);
    for (std::size_t n = 0; n < r.sup_diff_energy.size(); ++n) {
        os << n << ',' << r.sup_diff_energy[n] << ',';
        if (std::isfinite(r.ratio[n])) os << r.ratio[n];
        else os << "nan";
        os << '\n';
    }
    if (!os) throw IoError("write failed for '" + path + "'");
}

}  // namespace machslab
