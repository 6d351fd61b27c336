#include "machslab/compressible.hpp"

#include <cmath>
#include <sstream>

#include "machslab/calculus.hpp"
#include "machslab/poisson.hpp"

namespace machslab {

namespace {

template <class T>
struct Gen {
    std::vector<T> u, B;
    T p, S;
};

template <class T>
T sum_products(const std::vector<T>& a, const std::vector<T>& b) {
    T r = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

template <class T>
Gen<T> rhs_generic(const Gen<T>& s, const EosParams& eos, bool dl) {
    const int d = static_cast<int>(s.u.size());
    const double e2 = eos.epsilon * eos.epsilon;
    std::vector<std::vector<T>> du(static_cast<std::size_t>(d)), dB(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) {
            du[static_cast<std::size_t>(i)].push_back(deriv(s.u[static_cast<std::size_t>(i)], a));
            dB[static_cast<std::size_t>(i)].push_back(deriv(s.B[static_cast<std::size_t>(i)], a));
        }
    std::vector<T> gp, gS;
    for (int a = 0; a < d; ++a) {
        gp.push_back(deriv(s.p, a));
        gS.push_back(deriv(s.S, a));
    }
    T divu = du[0][0];
    T divB = dB[0][0];
    for (int i = 1; i < d; ++i) {
        divu += du[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        divB += dB[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    const T inv_rho = pow(1.0 + e2 * s.p, -1.0 / eos.gamma) * exp(s.S * (1.0 / (eos.gamma * eos.c_v)));

    Gen<T> r;
    // pressure: -(gamma/eps^2)(1 + eps^2 p) div u - u.grad p
    r.p = (-eos.gamma / e2) * divu - eos.gamma * (s.p * divu) - sum_products(s.u, gp);
    r.S = -sum_products(s.u, gS);
    for (int i = 0; i < d; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        T lorentz = s.B[0] * dB[ii][0];
        for (int j = 1; j < d; ++j) lorentz += s.B[static_cast<std::size_t>(j)] * dB[ii][static_cast<std::size_t>(j)];
        T gradP = gp[ii];
        for (int j = 0; j < d; ++j) gradP += s.B[static_cast<std::size_t>(j)] * dB[static_cast<std::size_t>(j)][ii];
        T adv = s.u[0] * du[ii][0];
        for (int j = 1; j < d; ++j) adv += s.u[static_cast<std::size_t>(j)] * du[ii][static_cast<std::size_t>(j)];
        r.u.push_back(inv_rho * (lorentz - gradP) - adv);
    }
    if (d == 2) {
        const T E = s.u[0] * s.B[1] - s.u[1] * s.B[0];
        r.B.push_back(deriv(E, 1) - s.u[0] * divB);
        r.B.push_back(-deriv(E, 0) - s.u[1] * divB);
    } else {
        const T E0 = s.u[1] * s.B[2] - s.u[2] * s.B[1];
        const T E1 = s.u[2] * s.B[0] - s.u[0] * s.B[2];
        const T E2 = s.u[0] * s.B[1] - s.u[1] * s.B[0];
        r.B.push_back(deriv(E2, 1) - deriv(E1, 2) - s.u[0] * divB);
        r.B.push_back(deriv(E0, 2) - deriv(E2, 0) - s.u[1] * divB);
        r.B.push_back(deriv(E1, 0) - deriv(E0, 1) - s.u[2] * divB);
    }
    if (dl) {
        for (auto& x : r.u) x = dealias(x);
        for (auto& x : r.B) x = dealias(x);
        r.p = dealias(r.p);
        r.S = dealias(r.S);
    }
    return r;
}

Gen<Field> to_gen(const MhdState& s) { return {s.u.components(), s.B.components(), s.p, s.S}; }

MhdState from_gen(Gen<Field> g, double t) {
    return MhdState(VecField(std::move(g.u)), VecField(std::move(g.B)), std::move(g.p), std::move(g.S), t);
}

void check_state(const MhdState& s, const char* where) {
    if (!s.all_finite()) {
        std::ostringstream os;
        os << "non-finite values detected in " << where << " at t = " << s.t;
        throw SolverError(os.str());
    }
}

}  // namespace

MhdState rhs(const MhdState& s, const EosParams& eos, bool dealias_on) {
    eos.validate();
    const double e2 = eos.epsilon * eos.epsilon;
    if ((1.0 + e2 * s.p.array()).minCoeff() <= 0.0)
        throw InvalidArgument("rhs: invalid density (1 + eps^2 p <= 0)");
    return from_gen(rhs_generic(to_gen(s), eos, dealias_on), s.t);
}

JetState rhs(const JetState& s, const EosParams& eos, bool dealias_on) {
    eos.validate();
    Gen<Jet> g{s.u, s.B, s.p, s.S};
    auto r = rhs_generic(g, eos, dealias_on);
    return JetState{std::move(r.u), std::move(r.B), std::move(r.p), std::move(r.S)};
}

double cfl_dt(const MhdState& s, const EosParams& eos, double cfl) {
    const Field rho = density(eos, s.p, s.S);
    const Field cs = sound_speed(eos, s.p, s.S);
    double umax = 0.0, bmax = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double u2 = 0.0, b2 = 0.0;
        for (int a = 0; a < s.dim(); ++a) {
            u2 += s.u[a][i] * s.u[a][i];
            b2 += s.B[a][i] * s.B[a][i];
        }
        umax = std::max(umax, std::sqrt(u2));
        bmax = std::max(bmax, std::sqrt(b2 / rho[i]));
    }
    return cfl * s.grid().min_spacing() / (umax + bmax + cs.max());
}

double physical_energy(const MhdState& s, const EosParams& eos) {
    const Field rho = density(eos, s.p, s.S);
    const Field fp = f_prime(eos, s.p, s.S);
    Field q = rho * norm_sq(s.u) + norm_sq(s.B) + fp * s.p * s.p + rho * s.S * s.S;
    return integrate(q);
}

double physical_energy_rate(const MhdState& s, const EosParams& eos) {
    const Field fp = f_prime(eos, s.p, s.S);
    return (eos.gamma + 1.0) * integrate(fp * s.p * s.p * divergence(s.u));
}

StepResult step_full(const MhdState& s, const EosParams& eos, double dt, const StepOptions& opt) {
    if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
    check_state(s, "step input");
    if (opt.cfl_limit > 0.0) {
        const double lim = cfl_dt(s, eos, opt.cfl_limit);
        if (dt > lim) {
            std::ostringstream os;
            os << "CFL violation at t = " << s.t << ": dt = " << dt << " exceeds " << lim;
            throw SolverError(os.str());
        }
    }
    auto stage = [&](const MhdState& y) {
        MhdState k;
        try {
            k = rhs(y, eos, opt.dealias);
        } catch (const InvalidArgument& e) {
            std::ostringstream os;
            os << "unstable state near t = " << s.t << ": " << e.what();
            throw SolverError(os.str());
        }
        k.u.normal().zero_walls();
        if (opt.impose_b_normal) k.B.normal().zero_walls();
        return k;
    };
    const MhdState k1 = stage(s);
    const double r1 = physical_energy_rate(s, eos);
    MhdState y = s;
    y.axpy(0.5 * dt, k1);
    const MhdState k2 = stage(y);
    const double r2 = physical_energy_rate(y, eos);
    y = s;
    y.axpy(0.5 * dt, k2);
    const MhdState k3 = stage(y);
    const double r3 = physical_energy_rate(y, eos);
    y = s;
    y.axpy(dt, k3);
    const MhdState k4 = stage(y);
    const double r4 = physical_energy_rate(y, eos);
    StepResult out{s, 0.0};
    out.state.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
    out.state.t = s.t + dt;
    out.state.u.normal().zero_walls();
    out.rate_integral = dt / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
    check_state(out.state, "step output");
    return out;
}

MhdState step(const MhdState& s, const EosParams& eos, double dt, const StepOptions& opt) {
    return step_full(s, eos, dt, opt).state;
}

TimeStack bootstrap(const MhdState& s, const EosParams& eos, int depth, bool dealias_on) {
    require(depth >= 0 && depth <= 8, "bootstrap: depth must be in 0..8");
    check_state(s, "bootstrap input");
    const int d = s.dim();
    // coefficient lists, c[k] = d_t^k / k!
    std::vector<std::vector<Field>> cu(static_cast<std::size_t>(d)), cB(static_cast<std::size_t>(d));
    std::vector<Field> cp{s.p}, cS{s.S};
    for (int i = 0; i < d; ++i) {
        cu[static_cast<std::size_t>(i)].push_back(s.u[i]);
        cB[static_cast<std::size_t>(i)].push_back(s.B[i]);
    }
    for (int k = 0; k < depth; ++k) {
        JetState js;
        for (int i = 0; i < d; ++i) {
            js.u.emplace_back(cu[static_cast<std::size_t>(i)]);
            js.B.emplace_back(cB[static_cast<std::size_t>(i)]);
        }
        js.p = Jet(cp);
        js.S = Jet(cS);
        const JetState r = rhs(js, eos, dealias_on);
        const double f = 1.0 / (k + 1.0);
        for (int i = 0; i < d; ++i) {
            cu[static_cast<std::size_t>(i)].push_back(r.u[static_cast<std::size_t>(i)][k] * f);
            cB[static_cast<std::size_t>(i)].push_back(r.B[static_cast<std::size_t>(i)][k] * f);
        }
        cp.push_back(r.p[k] * f);
        cS.push_back(r.S[k] * f);
    }
    TimeStack st;
    double fact = 1.0;
    for (int k = 0; k <= depth; ++k) {
        if (k > 0) fact *= k;
        std::vector<Field> u, B;
        for (int i = 0; i < d; ++i) {
            u.push_back(cu[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * fact);
            B.push_back(cB[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * fact);
        }
        st.levels.emplace_back(VecField(std::move(u)), VecField(std::move(B)),
                               cp[static_cast<std::size_t>(k)] * fact, cS[static_cast<std::size_t>(k)] * fact, s.t);
    }
    return st;
}

MhdState well_prepared(const VecField& u0, const VecField& B0, const Field& S0, const EosParams& eos) {
    eos.validate();
    const double scale_u = std::max(1.0, u0.max_abs());
    const double scale_b = std::max(1.0, B0.max_abs());
    const double du = divergence(u0).max_abs(), db = divergence(B0).max_abs();
    if (du > 1e-9 * scale_u || db > 1e-9 * scale_b) {
        std::ostringstream os;
        os << "well_prepared: data not solenoidal (max|div u| = " << du << ", max|div B| = " << db << ")";
        throw InvalidArgument(os.str());
    }
    if (u0.normal().wall_max_abs() > 1e-10 * scale_u || B0.normal().wall_max_abs() > 1e-10 * scale_b)
        throw InvalidArgument("well_prepared: normal components must vanish on the walls");
    const Field rho0 = density(eos, Field(S0.grid_ptr(), 0.0), S0);
    const Field rinv(rho0.grid_ptr(), rho0.array().inverse());
    VecField Y = rinv * (directional(B0, B0) - 0.5 * gradient(norm_sq(B0))) - directional(u0, u0);
    for (auto& c : Y.components()) c = dealias(c);
    ProjectionResult pr = project_full(Y, rho0);
    return MhdState(u0, B0, pr.pi, S0, 0.0);
}

MhdState band_limit_state(const MhdState& s) {
    MhdState r = s;
    const int d = s.dim();
    for (int i = 0; i < d - 1; ++i) {
        r.u[i] = band_limit(s.u[i]);
        r.B[i] = band_limit(s.B[i]);
    }
    r.u.normal() = band_limit_zero_walls(s.u.normal());
    r.B.normal() = band_limit_zero_walls(s.B.normal());
    r.p = band_limit(s.p);
    r.S = band_limit(s.S);
    return r;
}

MhdState filter_state(const MhdState& s, int order, double strength) {
    MhdState r = s;
    if (strength <= 0.0) return r;
    for (auto* f : r.fields()) *f = filter_tangential(*f, order, strength);
    return r;
}

}  // namespace machslab
