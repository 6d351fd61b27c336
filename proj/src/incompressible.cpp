#include "machslab/incompressible.hpp"

#include <cmath>
#include <sstream>

#include "machslab/calculus.hpp"
#include "machslab/poisson.hpp"

namespace machslab {

bool IncState::all_finite() const {
    return u.all_finite() && B.all_finite() && varrho.all_finite() && S.all_finite();
}

std::vector<Field*> IncState::evolved() {
    std::vector<Field*> f;
    for (auto& c : u.components()) f.push_back(&c);
    for (auto& c : B.components()) f.push_back(&c);
    f.push_back(&varrho);
    f.push_back(&S);
    return f;
}

std::vector<const Field*> IncState::evolved() const {
    std::vector<const Field*> f;
    for (const auto& c : u.components()) f.push_back(&c);
    for (const auto& c : B.components()) f.push_back(&c);
    f.push_back(&varrho);
    f.push_back(&S);
    return f;
}

namespace {

VecField induction(const VecField& u, const VecField& B) {
    const Field divB = divergence(B);
    if (u.dim() == 2) {
        const Field E = u[0] * B[1] - u[1] * B[0];
        return VecField({deriv(E, 1) - u[0] * divB, -deriv(E, 0) - u[1] * divB});
    }
    VecField E = cross(u, B);
    VecField c = curl(E);
    for (int i = 0; i < 3; ++i) c[i] -= u[i] * divB;
    return c;
}

VecField momentum_source(const IncState& s) {
    const Field rinv(s.varrho.grid_ptr(), s.varrho.array().inverse());
    return rinv * (directional(s.B, s.B) - 0.5 * gradient(norm_sq(s.B))) - directional(s.u, s.u);
}

}  // namespace

IncRhs inc_rhs(const IncState& s, bool dl) {
    require(s.varrho.min() > 0.0, "inc_rhs: density must be positive");
    VecField Y = momentum_source(s);
    if (dl)
        for (auto& c : Y.components()) c = dealias(c);
    ProjectionResult pr = project_full(Y, s.varrho);
    IncRhs r;
    r.du = std::move(pr.u);
    r.pi = std::move(pr.pi);
    r.dB = induction(s.u, s.B);
    r.dvarrho = -directional(s.u, s.varrho);
    r.dS = -directional(s.u, s.S);
    if (dl) {
        for (auto& c : r.dB.components()) c = dealias(c);
        r.dvarrho = dealias(r.dvarrho);
        r.dS = dealias(r.dS);
    }
    return r;
}

Field inc_pressure(const IncState& s) { return inc_rhs(s).pi; }

double inc_cfl_dt(const IncState& s, double cfl) {
    double umax = 0.0, bmax = 0.0;
    for (std::size_t i = 0; i < s.varrho.size(); ++i) {
        double u2 = 0.0, b2 = 0.0;
        for (int a = 0; a < s.u.dim(); ++a) {
            u2 += s.u[a][i] * s.u[a][i];
            b2 += s.B[a][i] * s.B[a][i];
        }
        umax = std::max(umax, std::sqrt(u2));
        bmax = std::max(bmax, std::sqrt(b2 / s.varrho[i]));
    }
    const double speed = umax + bmax;
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return cfl * s.grid().min_spacing() / speed;
}

double inc_energy(const IncState& s) { return integrate(s.varrho * norm_sq(s.u) + norm_sq(s.B)); }

IncState inc_step(const IncState& s, double dt, double cfl_limit) {
    if (!(dt > 0.0)) throw InvalidArgument("inc_step: dt must be positive");
    if (!s.all_finite()) {
        std::ostringstream os;
        os << "non-finite incompressible state at t = " << s.t;
        throw SolverError(os.str());
    }
    if (cfl_limit > 0.0 && dt > inc_cfl_dt(s, cfl_limit)) {
        std::ostringstream os;
        os << "incompressible CFL violation at t = " << s.t << ": dt = " << dt;
        throw SolverError(os.str());
    }
    auto add = [](const IncState& base, double a, const IncRhs& k) {
        IncState y = base;
        auto f = y.evolved();
        std::vector<const Field*> d;
        for (const auto& c : k.du.components()) d.push_back(&c);
        for (const auto& c : k.dB.components()) d.push_back(&c);
        d.push_back(&k.dvarrho);
        d.push_back(&k.dS);
        for (std::size_t i = 0; i < f.size(); ++i) f[i]->array() += a * d[i]->array();
        return y;
    };
    const IncRhs k1 = inc_rhs(s);
    const IncRhs k2 = inc_rhs(add(s, 0.5 * dt, k1));
    const IncRhs k3 = inc_rhs(add(s, 0.5 * dt, k2));
    const IncRhs k4 = inc_rhs(add(s, dt, k3));
    IncState out = add(add(add(add(s, dt / 6.0, k1), dt / 3.0, k2), dt / 3.0, k3), dt / 6.0, k4);
    out.t = s.t + dt;
    out.u.normal().zero_walls();
    out.pi = Field();
    if (!out.all_finite()) {
        std::ostringstream os;
        os << "non-finite incompressible state after step to t = " << out.t;
        throw SolverError(os.str());
    }
    return out;
}

IncState inc_filter(const IncState& s, int order, double strength) {
    IncState r = s;
    if (strength <= 0.0) return r;
    for (auto* f : r.evolved()) *f = filter_tangential(*f, order, strength);
    r.pi = Field();
    return r;
}

}  // namespace machslab
