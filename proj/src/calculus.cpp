#include "machslab/calculus.hpp"

#include <cmath>
#include <sstream>

#include "machslab/norms.hpp"

namespace machslab {

MultiIndex::MultiIndex(std::vector<int> a) : alpha(std::move(a)) {
    require(alpha.size() == 4 || alpha.size() == 5, "multi-index length must be dim + 2");
    for (int v : alpha) require(v >= 0, "multi-index entries must be nonnegative");
}

MultiIndex MultiIndex::zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim + 2), 0)); }

int MultiIndex::aniso_length() const {
    const int d = dim();
    int n = 0;
    for (int j = 0; j < d; ++j) n += alpha[static_cast<std::size_t>(j)];
    return n + 2 * alpha[static_cast<std::size_t>(d)] + alpha[static_cast<std::size_t>(d + 1)];
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
    os << ']';
    return os.str();
}

VecField gradient(const Field& f) {
    std::vector<Field> c;
    for (int a = 0; a < f.grid().dim(); ++a) c.push_back(deriv(f, a));
    return VecField(std::move(c));
}

Field divergence(const VecField& X) {
    Field r = deriv(X[0], 0);
    for (int a = 1; a < X.dim(); ++a) r += deriv(X[a], a);
    return r;
}

VecField curl(const VecField& X) {
    require(X.dim() == 3, "curl: vector curl needs dim 3 (use scalar_curl in 2D)");
    return VecField({deriv(X[2], 1) - deriv(X[1], 2), deriv(X[0], 2) - deriv(X[2], 0),
                     deriv(X[1], 0) - deriv(X[0], 1)});
}

Field scalar_curl(const VecField& X) {
    require(X.dim() == 2, "scalar_curl needs dim 2");
    return deriv(X[1], 0) - deriv(X[0], 1);
}

Field directional(const VecField& a, const Field& f) {
    Field r = a[0] * deriv(f, 0);
    for (int i = 1; i < a.dim(); ++i) r += a[i] * deriv(f, i);
    return r;
}

VecField directional(const VecField& a, const VecField& X) {
    std::vector<Field> c;
    for (int i = 0; i < X.dim(); ++i) c.push_back(directional(a, X[i]));
    return VecField(std::move(c));
}

Field material_derivative(const VecField& u, const Field& f_now, const Field& f_prev, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("material_derivative: dt must be positive");
    Field r = (f_now - f_prev) * (1.0 / dt);
    r += directional(u, f_now);
    return r;
}

Field tangential_apply(const MultiIndex& m, std::span<const Field> stack) {
    require(!stack.empty(), "tangential_apply: empty time stack");
    const int d = stack.front().grid().dim();
    require(m.dim() == d, "tangential_apply: multi-index dimension mismatch");
    if (m.time_order() >= static_cast<int>(stack.size())) {
        std::ostringstream os;
        os << "tangential_apply: time stack depth " << stack.size() << " insufficient for alpha_0 = "
           << m.time_order();
        throw InvalidArgument(os.str());
    }
    Field r = stack[static_cast<std::size_t>(m.time_order())];
    for (int a = 0; a < d; ++a) r = deriv(r, a, m.alpha[static_cast<std::size_t>(a + 1)]);
    for (int j = 0; j < m.omega_order(); ++j) r = omega_deriv(r);
    return r;
}

Field tangential_apply(const MultiIndex& m, const Field& steady) {
    if (m.time_order() > 0) return Field(steady.grid_ptr());
    return tangential_apply(m, std::span<const Field>(&steady, 1));
}

namespace {

Field omega_pow(const Field& f, int k) {
    Field r = f;
    for (int j = 0; j < k; ++j) r = omega_deriv(r);
    return r;
}

using Poly = std::vector<double>;

Poly poly_add(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_deriv(const Poly& a) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = static_cast<double>(i) * a[i];
    return r;
}

Field poly_eval(const GridPtr& g, const Poly& c) {
    const int n = g->normal_axis();
    return Field::sample(g, [&](const Point& x) {
        const double z = x[static_cast<std::size_t>(n)];
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
        return v;
    });
}

}  // namespace

Field omega_commutator(int k, const Field& f) {
    require(k >= 1, "omega_commutator: k must be >= 1");
    const int n = f.grid().normal_axis();
    return omega_pow(deriv(f, n), k) - deriv(omega_pow(f, k), n);
}

std::vector<std::vector<double>> omega_commutator_coefficients(int k) {
    require(k >= 1, "omega_commutator: k must be >= 1");
    const Poly omega{1.0, 0.0, -1.0};
    const Poly domega{0.0, -2.0};
    std::vector<Poly> c{Poly{0.0, 2.0}};
    for (int kk = 2; kk <= k; ++kk) {
        std::vector<Poly> next(static_cast<std::size_t>(kk));
        for (int l = 0; l < kk; ++l) {
            Poly v;
            if (l < kk - 1) {
                const Poly& prev = c[static_cast<std::size_t>(l)];
                v = poly_add(poly_mul(omega, poly_deriv(prev)), poly_mul(domega, prev));
            }
            if (l >= 1) v = poly_add(v, c[static_cast<std::size_t>(l - 1)]);
            if (l == kk - 1) v = poly_add(v, poly_mul(Poly{-1.0}, domega));
            next[static_cast<std::size_t>(l)] = v;
        }
        c = std::move(next);
    }
    return c;
}

Field omega_commutator_formula(int k, const Field& f) {
    const auto coeffs = omega_commutator_coefficients(k);
    const int n = f.grid().normal_axis();
    Field df = deriv(f, n);
    Field r(f.grid_ptr());
    Field term = df;
    for (int l = 0; l < k; ++l) {
        r += poly_eval(f.grid_ptr(), coeffs[static_cast<std::size_t>(l)]) * term;
        term = omega_deriv(term);
    }
    return r;
}

double omega_commutator_span_residual(int k, const Field& f) {
    const Field target = omega_commutator(k, f);
    const auto& g = f.grid_ptr();
    const int n = g->normal_axis();
    std::vector<Field> basis;
    Field term = deriv(f, n);
    for (int l = 0; l < k; ++l) {
        for (int j = 0; j <= k + 1; ++j) {
            Poly mono(static_cast<std::size_t>(j + 1), 0.0);
            mono.back() = 1.0;
            basis.push_back(poly_eval(g, mono) * term);
        }
        term = omega_deriv(term);
    }
    const auto rows = static_cast<Eigen::Index>(f.size());
    Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(basis.size()));
    Eigen::VectorXd w(rows);
    const auto qw = g->quad_weights();
    for (Eigen::Index i = 0; i < rows; ++i) w[i] = std::sqrt(qw[static_cast<std::size_t>(i)]);
    for (std::size_t c = 0; c < basis.size(); ++c)
        A.col(static_cast<Eigen::Index>(c)) = basis[c].array().matrix().cwiseProduct(w);
    const Eigen::VectorXd b = target.array().matrix().cwiseProduct(w);
    const double bn = b.norm();
    if (bn == 0.0) return 0.0;
    const Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(b);
    return (A * x - b).norm() / bn;
}

double boundary_trace_norm_sq(const Field& f, double r) {
    const auto& g = f.grid();
    const int d = g.dim();
    const auto nn = static_cast<std::size_t>(g.n_normal());
    const std::size_t np = g.n_pencils();
    double cell = 1.0;
    for (int a = 0; a < d - 1; ++a) cell *= g.period() / g.n_tangential(a);
    const double ku = g.wavenumber_unit();
    double total = 0.0;
    for (int wall = 0; wall < 2; ++wall) {
        const std::size_t off = wall == 0 ? 0 : nn - 1;
        Eigen::VectorXd tr(static_cast<Eigen::Index>(np));
        for (std::size_t p = 0; p < np; ++p) tr[static_cast<Eigen::Index>(p)] = f[p * nn + off];
        if (d == 2) {
            const Eigen::VectorXd c = g.fourier_basis(0).transpose() * tr;
            const auto& modes = g.fourier_modes(0);
            for (Eigen::Index i = 0; i < c.size(); ++i) {
                const double k = ku * modes[static_cast<std::size_t>(i)];
                total += std::pow(1.0 + k * k, r) * c[i] * c[i] * cell;
            }
        } else {
            const int n1 = g.n_tangential(0), n2 = g.n_tangential(1);
            Eigen::Map<const Eigen::MatrixXd> t(tr.data(), n2, n1);  // column-major: (i2, i1)
            const Eigen::MatrixXd c = g.fourier_basis(1).transpose() * t * g.fourier_basis(0);
            const auto& m1 = g.fourier_modes(0);
            const auto& m2 = g.fourier_modes(1);
            for (int i1 = 0; i1 < n1; ++i1)
                for (int i2 = 0; i2 < n2; ++i2) {
                    const double k1 = ku * m1[static_cast<std::size_t>(i1)];
                    const double k2 = ku * m2[static_cast<std::size_t>(i2)];
                    total += std::pow(1.0 + k1 * k1 + k2 * k2, r) * c(i2, i1) * c(i2, i1) * cell;
                }
        }
    }
    return total;
}

double hodge_report(const VecField& X, int s) {
    require(s >= 1 && s <= 4, "hodge_report: s must be in 1..4");
    const double lhs = sobolev_norm_sq(X, s);
    if (lhs == 0.0) return 0.0;
    double rhs = sobolev_norm_sq(X, 0) + sobolev_norm_sq(divergence(X), s - 1);
    if (X.dim() == 3)
        rhs += sobolev_norm_sq(curl(X), s - 1);
    else
        rhs += sobolev_norm_sq(scalar_curl(X), s - 1);
    rhs += boundary_trace_norm_sq(X.normal(), s - 0.5);
    return lhs / rhs;
}

}  // namespace machslab
