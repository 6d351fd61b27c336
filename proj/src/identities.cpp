#include "machslab/identities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "machslab/calculus.hpp"
#include "machslab/compressible.hpp"

namespace machslab {

namespace {

// 2D fields are embedded as x_3-independent 3-vectors, so one code path
// covers both dimensions (curl becomes (0, 0, scalar curl) plus zeros).
using V3 = std::array<Field, 3>;

V3 lift(const VecField& X) {
    const GridPtr& g = X.grid_ptr();
    V3 r{Field(g), Field(g), Field(g)};
    for (int i = 0; i < X.dim(); ++i) r[static_cast<std::size_t>(i)] = X[i];
    return r;
}

Field d(const Field& f, int axis) { return axis < f.grid().dim() ? deriv(f, axis) : Field(f.grid_ptr()); }

V3 grad3(const Field& f) { return {d(f, 0), d(f, 1), d(f, 2)}; }

V3 curl3(const V3& X) {
    return {d(X[2], 1) - d(X[1], 2), d(X[0], 2) - d(X[2], 0), d(X[1], 0) - d(X[0], 1)};
}

V3 cross3(const V3& a, const V3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Field dot3(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

V3 add(V3 a, const V3& b) {
    for (std::size_t i = 0; i < 3; ++i) a[i] += b[i];
    return a;
}
V3 sub(V3 a, const V3& b) {
    for (std::size_t i = 0; i < 3; ++i) a[i] -= b[i];
    return a;
}
V3 scale(const Field& f, V3 a) {
    for (auto& c : a) c *= f;
    return a;
}
V3 scale(double s, V3 a) {
    for (auto& c : a) c *= s;
    return a;
}

Field along(const V3& a, const Field& f) { return a[0] * d(f, 0) + a[1] * d(f, 1) + a[2] * d(f, 2); }
V3 along(const V3& a, const V3& X) { return {along(a, X[0]), along(a, X[1]), along(a, X[2])}; }

double l2(const V3& a) { return std::sqrt(integrate(dot3(a, a))); }
double linf(const V3& a) { return std::max({a[0].max_abs(), a[1].max_abs(), a[2].max_abs()}); }

std::vector<int> grid_extents(const SlabGrid& g) { return g.extents(); }

double rel(double diff, std::initializer_list<double> scales) {
    double s = 0.0;
    for (double x : scales) s = std::max(s, std::abs(x));
    return s > 0.0 ? diff / s : diff;
}

// amplitude * sum_{j<=2} P_j(x_d) (a_j + sum_axes b cos(k x_a) + c sin(k x_a))
Field random_field(const GridPtr& g, std::mt19937_64& rng, double amplitude, bool vanish_on_walls) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int nt = g->dim() - 1;
    std::array<double, 3> a{};
    std::array<std::array<double, 2>, 3> bc{}, cs{};
    for (int j = 0; j < 3; ++j) {
        a[static_cast<std::size_t>(j)] = U(rng);
        for (int ax = 0; ax < nt; ++ax) {
            bc[static_cast<std::size_t>(j)][static_cast<std::size_t>(ax)] = U(rng);
            cs[static_cast<std::size_t>(j)][static_cast<std::size_t>(ax)] = U(rng);
        }
    }
    const double k = g->wavenumber_unit();
    const auto n = static_cast<std::size_t>(g->normal_axis());
    return Field::sample(g, [&](const Point& x) {
        const double z = x[n];
        const std::array<double, 3> P{1.0, z, 0.5 * (3.0 * z * z - 1.0)};
        double v = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            double t = a[j];
            for (int ax = 0; ax < nt; ++ax) {
                const auto axu = static_cast<std::size_t>(ax);
                t += bc[j][axu] * std::cos(k * x[axu]) + cs[j][axu] * std::sin(k * x[axu]);
            }
            v += P[j] * t;
        }
        return amplitude * v * (vanish_on_walls ? (1.0 - z) * (1.0 + z) : 1.0);
    });
}

const char* kRemainder = "analytic remainder, unchecked: ";

IdentityReport make_report(std::string name, double residual, double tol, const SlabGrid& g, double eps,
                           std::uint64_t seed) {
    IdentityReport r;
    r.check_name = std::move(name);
    r.residual = residual;
    r.tolerance = tol;
    r.grid = grid_extents(g);
    r.epsilon = eps;
    r.seed = seed;
    return r;
}

}  // namespace

MhdState manufactured_state(const GridPtr& grid, std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    const int dim = grid->dim();
    MhdState s(grid);
    for (int i = 0; i < dim; ++i) s.u[i] = random_field(grid, rng, amplitude, i == dim - 1);
    for (int i = 0; i < dim; ++i) s.B[i] = random_field(grid, rng, amplitude, i == dim - 1);
    s.B[0] += 1.0;
    s.p = random_field(grid, rng, amplitude, false);
    s.S = random_field(grid, rng, 0.5 * amplitude, false);
    return s;
}

IdentityReport check_triple_product(const GridPtr& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    V3 u, v, w;
    for (auto* X : {&u, &v, &w})
        for (auto& c : *X) c = random_field(grid, rng, 1.0, false);
    const Field lhs = dot3(cross3(u, v), w);
    const Field other = -1.0 * dot3(cross3(u, w), v);
    const double res = rel((lhs - other).max_abs(), {lhs.max_abs(), other.max_abs(), 1e-300});
    return make_report("triple_product", res, 1e-13, *grid, 0.0, seed);
}

IdentityReport check_lorentz_rewrite(const MhdState& s, const EosParams& eos) {
    const V3 B = lift(s.B);
    const V3 lhs = sub(along(B, B), scale(0.5, grad3(dot3(B, B))));
    const V3 force = scale(-1.0, cross3(B, curl3(B)));
    double res = rel(linf(sub(lhs, force)), {linf(lhs), linf(force), 1e-300});

    // momentum with the force in rewritten form: rho D_t u = -grad p - B x curl B
    const MhdState dt = rhs(s, eos, false);
    const V3 u = lift(s.u);
    const Field rho = density(eos, s.p, s.S);
    const V3 Du = add(lift(dt.u), along(u, u));
    const V3 left = scale(rho, Du);
    const V3 right = sub(scale(-1.0, grad3(s.p)), cross3(B, curl3(B)));
    res = std::max(res, rel(linf(sub(left, right)), {linf(left), linf(right), 1e-300}));

    IdentityReport r = make_report("lorentz_rewrite_" + std::to_string(s.dim()) + "d", res, 1e-7, s.grid(),
                                   eos.epsilon, 0);
    return r;
}

IdentityReport check_key_chain(const TimeStack& stack, const EosParams& eos) {
    require(stack.depth() >= 2, "check_key_chain: time stack depth must be >= 2");
    const MhdState& s0 = stack[0];
    const MhdState& s1 = stack[1];
    const MhdState& s2 = stack[2];
    {
        const MhdState expect = rhs(s0, eos, false);
        double worst = 0.0;
        const auto a = expect.fields();
        const auto b = s1.fields();
        for (std::size_t i = 0; i < a.size(); ++i)
            worst = std::max(worst, rel((*a[i] - *b[i]).max_abs(), {a[i]->max_abs(), 1.0}));
        if (worst > 1e-8) throw InvalidArgument("check_key_chain: stack level 1 does not satisfy the equations");
    }
    const double e2 = eos.epsilon * eos.epsilon;
    const V3 u = lift(s0.u), ut = lift(s1.u), utt = lift(s2.u);
    const V3 B = lift(s0.B), Bt = lift(s1.B);
    const Field rho = density(eos, s0.p, s0.S);
    const Field fp = f_prime(eos, s0.p, s0.S);
    const Field rho_t = rho * fp * s1.p - (1.0 / (eos.gamma * eos.c_v)) * (rho * s1.S);
    const Field Drho = rho_t + along(u, rho);
    const Field Dp = s1.p + along(u, s0.p);
    const V3 Du = add(ut, along(u, u));
    const V3 Du_t = add(add(utt, along(ut, u)), along(u, ut));
    const V3 D2u = add(Du_t, along(u, Du));
    const V3 curlB = curl3(B);
    const V3 Y = cross3(B, curlB);
    const V3 DY = add(add(cross3(Bt, curlB), cross3(B, curl3(Bt))), along(u, Y));
    const V3 gp = grad3(s0.p);
    V3 G;
    for (int i = 0; i < 3; ++i) {
        G[static_cast<std::size_t>(i)] = d(u[0], i) * gp[0] + d(u[1], i) * gp[1] + d(u[2], i) * gp[2];
    }
    const V3 lhs = scale(e2, cross3(B, grad3(Dp)));
    const V3 t1 = scale(-e2, cross3(B, scale(rho, D2u)));
    const V3 t2 = scale(-e2, cross3(B, scale(Drho, Du)));
    const V3 t3 = scale(-e2, cross3(B, DY));
    const V3 t4 = scale(e2, cross3(B, G));
    const V3 sum = add(add(add(t1, t2), t3), t4);
    const double res = rel(l2(sub(lhs, sum)), {l2(lhs), l2(t1), l2(t2), l2(t3), l2(t4), 1e-300});
    IdentityReport r = make_report("key_chain_" + std::to_string(s0.dim()) + "d", res, 1e-7, s0.grid(), eos.epsilon, 0);
    r.unchecked = {std::string(kRemainder) + "commutators of the third-order tangential derivatives with B x and D_t",
                   std::string(kRemainder) + "lower-order terms dropped in the curl estimate of the differentiated chain"};
    return r;
}

IdentityReport check_cancellation_k1k2(const MhdState& s, bool omega) {
    auto T = [&](const Field& f) { return omega ? omega_deriv(f) : deriv(f, 0); };
    const VecField& B = s.B;
    const int dim = s.dim();
    std::vector<Field> TB;
    for (int i = 0; i < dim; ++i) TB.push_back(T(B[i]));
    const Field divu = divergence(s.u);
    const Field Tdivu = T(divu);
    Field BTB = B[0] * TB[0], TB2 = TB[0] * TB[0];
    for (int i = 1; i < dim; ++i) {
        BTB += B[i] * TB[static_cast<std::size_t>(i)];
        TB2 += TB[static_cast<std::size_t>(i)] * TB[static_cast<std::size_t>(i)];
    }
    const double i1 = integrate(BTB * Tdivu);
    const double i2 = integrate(BTB * Tdivu) + integrate(TB2 * divu);
    const double reduced = -integrate(TB2 * divu);
    const double res = rel(std::abs((i1 - i2) - reduced), {i1, i2, reduced, 1e-300});
    IdentityReport r = make_report(omega ? "cancellation_k1k2_omega" : "cancellation_k1k2_tangential", res, 1e-9,
                                   s.grid(), 0.0, 0);
    r.unchecked = {std::string(kRemainder) + "Leibniz terms with fewer than the top number of derivatives on B"};
    return r;
}

IdentityReport check_omega_commutator(const Field& f, int k) {
    const Field a = omega_commutator(k, f);
    const Field b = omega_commutator_formula(k, f);
    const double res = rel(l2_norm(a - b), {l2_norm(a), l2_norm(b), 1e-300});
    IdentityReport r = make_report("omega_commutator_k" + std::to_string(k), res, 1e-7, f.grid(), 0.0, 0);
    r.unchecked = {std::string(kRemainder) + "commutator bounds (inequalities with unspecified constants)"};
    return r;
}

double lorentz_energy(const MhdState& s, const EosParams& eos) {
    const V3 B = lift(s.B);
    const V3 Y = cross3(B, curl3(B));
    const Field fp = f_prime(eos, s.p, s.S);
    return integrate(fp * dot3(Y, Y)) / (eos.epsilon * eos.epsilon);
}

double lorentz_energy_rate(const std::vector<MhdState>& traj, const EosParams& eos) {
    require(traj.size() >= 3, "lorentz_energy_rate: need at least three states");
    std::vector<double> q;
    for (const auto& s : traj) q.push_back(lorentz_energy(s, eos));
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double h = traj[i + 1].t - traj[i - 1].t;
        require(h > 0.0, "lorentz_energy_rate: times must increase");
        worst = std::max(worst, std::abs(q[i + 1] - q[i - 1]) / h);
    }
    return worst;
}

std::vector<IdentityReport> run_identity_suite(const GridPtr& grid, const EosParams& eos, std::uint64_t seed,
                                               int seeds) {
    require(seeds >= 1, "identity suite: seeds must be >= 1");
    std::vector<IdentityReport> out;
    for (int i = 0; i < seeds; ++i) {
        const std::uint64_t sd = seed + static_cast<std::uint64_t>(i);
        const MhdState s = manufactured_state(grid, sd);
        std::vector<IdentityReport> batch;
        batch.push_back(check_triple_product(grid, sd));
        batch.push_back(check_lorentz_rewrite(s, eos));
        batch.push_back(check_key_chain(bootstrap(s, eos, 2, false), eos));
        batch.push_back(check_cancellation_k1k2(s, false));
        batch.push_back(check_cancellation_k1k2(s, true));
        for (int k = 1; k <= 3; ++k) batch.push_back(check_omega_commutator(s.p, k));
        for (auto& r : batch) {
            r.seed = sd;
            r.epsilon = eos.epsilon;
            out.push_back(std::move(r));
        }
    }
    return out;
}

nlohmann::json identity_reports_json(const std::vector<IdentityReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back({{"check_name", r.check_name},
                       {"residual", r.residual},
                       {"tolerance", r.tolerance},
                       {"passed", r.passed()},
                       {"grid", r.grid},
                       {"epsilon", r.epsilon},
                       {"seed", r.seed},
                       {"unchecked", r.unchecked}});
    }
    return arr;
}

}  // namespace machslab
