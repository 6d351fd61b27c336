#include "machslab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace machslab {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd fourier_diff_matrix(int n, double period) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    const double h = kPi / n;
    const double scale = 2.0 * kPi / period;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const int s = j - k;
            const double sign = (s % 2 == 0) ? 1.0 : -1.0;
            d(j, k) = scale * 0.5 * sign / std::tan(s * h);
        }
    }
    return d;
}

void build_fourier_basis(int n, double period, Eigen::MatrixXd& q, Eigen::VectorXd& eval,
                   std::vector<int>& modes) {
    q.resize(n, n);
    eval.resize(n);
    modes.assign(static_cast<std::size_t>(n), 0);
    const double kunit = 2.0 * kPi / period;
    const double a0 = 1.0 / std::sqrt(static_cast<double>(n));
    const double a1 = std::sqrt(2.0 / n);
    int col = 0;
    for (int j = 0; j < n; ++j) q(j, col) = a0;
    eval[col] = 0.0;
    modes[static_cast<std::size_t>(col)] = 0;
    ++col;
    for (int m = 1; m < n / 2; ++m) {
        for (int j = 0; j < n; ++j) {
            const double x = 2.0 * kPi * j / n;
            q(j, col) = a1 * std::cos(m * x);
            q(j, col + 1) = a1 * std::sin(m * x);
        }
        eval[col] = eval[col + 1] = -(m * kunit) * (m * kunit);
        modes[static_cast<std::size_t>(col)] = m;
        modes[static_cast<std::size_t>(col + 1)] = -m;
        col += 2;
    }
    // Nyquist: annihilated by the first-derivative matrix, so eigenvalue 0.
    for (int j = 0; j < n; ++j) q(j, col) = a0 * ((j % 2 == 0) ? 1.0 : -1.0);
    eval[col] = 0.0;
    modes[static_cast<std::size_t>(col)] = n / 2;
}

Eigen::MatrixXd lgl_diff_matrix(const std::vector<double>& x) {
    const int np = static_cast<int>(x.size());
    const int n = np - 1;
    // P_n at nodes
    std::vector<double> pn(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
        double p0 = 1.0, p1 = x[static_cast<std::size_t>(i)];
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x[static_cast<std::size_t>(i)] * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        pn[static_cast<std::size_t>(i)] = (n == 0) ? 1.0 : p1;
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(np, np);
    for (int i = 0; i < np; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < np; ++j) {
            if (i == j) continue;
            d(i, j) = pn[static_cast<std::size_t>(i)] / pn[static_cast<std::size_t>(j)] /
                      (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
            rowsum += d(i, j);
        }
        d(i, i) = -rowsum;
    }
    return d;
}

}  // namespace

void lgl_nodes_weights(int n_points, std::vector<double>& nodes, std::vector<double>& weights) {
    require(n_points >= 2, "LGL rule needs at least 2 points");
    const int n = n_points - 1;
    std::vector<double> x(static_cast<std::size_t>(n_points));
    for (int j = 0; j <= n; ++j) x[static_cast<std::size_t>(j)] = -std::cos(kPi * j / n);
    std::vector<double> pn(x.size()), pn1(x.size());
    for (int iter = 0; iter < 100; ++iter) {
        double change = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double xj = x[static_cast<std::size_t>(j)];
            double p0 = 1.0, p1 = xj;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * xj * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pn[static_cast<std::size_t>(j)] = p1;
            pn1[static_cast<std::size_t>(j)] = p0;
            if (j == 0 || j == n) continue;
            const double dx = (xj * p1 - p0) / ((n + 1) * p1);
            x[static_cast<std::size_t>(j)] = xj - dx;
            change = std::max(change, std::abs(dx));
        }
        if (change < 1e-16) break;
    }
    x.front() = -1.0;
    x.back() = 1.0;
    weights.resize(x.size());
    for (int j = 0; j <= n; ++j) {
        const double xj = x[static_cast<std::size_t>(j)];
        double p0 = 1.0, p1 = xj;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * xj * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        weights[static_cast<std::size_t>(j)] = 2.0 / (n * (n + 1.0) * p1 * p1);
    }
    nodes = std::move(x);
}

GridPtr SlabGrid::build(int dim, std::vector<int> n_tangential, int n_normal, double period) {
    require(dim == 2 || dim == 3, "dim must be 2 or 3");
    require(static_cast<int>(n_tangential.size()) == dim - 1,
            "expected " + std::to_string(dim - 1) + " tangential mode counts");
    for (int n : n_tangential) {
        require(n % 2 == 0, "tangential mode counts must be even (dealiasing)");
        require(n >= 8, "tangential mode counts must be >= 8");
    }
    require(n_normal >= 9 && n_normal % 2 == 1, "n_normal must be odd and >= 9");
    require(period > 0.0 && std::isfinite(period), "period must be positive");

    auto g = std::shared_ptr<SlabGrid>(new SlabGrid());
    g->dim_ = dim;
    g->extents_ = n_tangential;
    g->extents_.push_back(n_normal);
    g->period_ = period;
    g->size_ = 1;
    for (int e : g->extents_) g->size_ *= static_cast<std::size_t>(e);

    lgl_nodes_weights(n_normal, g->nodes_normal_, g->weights_normal_);

    double tan_cell = 1.0;
    for (int a = 0; a < dim - 1; ++a) {
        const int n = n_tangential[static_cast<std::size_t>(a)];
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) xs[static_cast<std::size_t>(j)] = period * j / n;
        g->nodes_tan_.push_back(std::move(xs));
        g->diff_.push_back(fourier_diff_matrix(n, period));
        Eigen::MatrixXd q;
        Eigen::VectorXd ev;
        std::vector<int> modes;
        build_fourier_basis(n, period, q, ev, modes);
        const int cutoff = (n - 1) / 3;
        Eigen::VectorXd mask(n);
        for (int c = 0; c < n; ++c) mask[c] = std::abs(modes[static_cast<std::size_t>(c)]) <= cutoff ? 1.0 : 0.0;
        g->dealias_.push_back(q * mask.asDiagonal() * q.transpose());
        g->basis_.push_back(std::move(q));
        g->basis_eval_.push_back(std::move(ev));
        g->basis_mode_.push_back(std::move(modes));
        tan_cell *= period / n;
    }
    g->diff_.push_back(lgl_diff_matrix(g->nodes_normal_));
    g->dealias_.push_back(Eigen::MatrixXd::Identity(n_normal, n_normal));
    g->basis_.emplace_back();
    g->basis_eval_.emplace_back();
    g->basis_mode_.emplace_back();

    g->quad_weights_.resize(g->size_);
    for (std::size_t i = 0; i < g->size_; ++i)
        g->quad_weights_[i] = tan_cell * g->weights_normal_[i % static_cast<std::size_t>(n_normal)];
    return g;
}

std::array<int, 3> SlabGrid::unflatten(std::size_t index) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        const auto e = static_cast<std::size_t>(extents_[static_cast<std::size_t>(a)]);
        idx[static_cast<std::size_t>(a)] = static_cast<int>(index % e);
        index /= e;
    }
    return idx;
}

std::size_t SlabGrid::flatten(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a)
        flat = flat * static_cast<std::size_t>(extents_[static_cast<std::size_t>(a)]) +
               static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
    return flat;
}

Point SlabGrid::point(std::size_t index) const {
    const auto idx = unflatten(index);
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_ - 1; ++a)
        p[static_cast<std::size_t>(a)] = nodes_tan_[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
    p[static_cast<std::size_t>(dim_ - 1)] = nodes_normal_[static_cast<std::size_t>(idx[static_cast<std::size_t>(dim_ - 1)])];
    return p;
}

double SlabGrid::min_spacing() const {
    double h = nodes_normal_[1] - nodes_normal_[0];
    for (std::size_t j = 1; j < nodes_normal_.size(); ++j) h = std::min(h, nodes_normal_[j] - nodes_normal_[j - 1]);
    for (int a = 0; a < dim_ - 1; ++a) h = std::min(h, period_ / extents_[static_cast<std::size_t>(a)]);
    return h;
}

double SlabGrid::measure() const { return 2.0 * std::pow(period_, dim_ - 1); }

void apply_along_axis(const SlabGrid& grid, const Eigen::MatrixXd& a, int axis, const double* in,
                      double* out) {
    const int dim = grid.dim();
    const auto& ext = grid.extents();
    const Eigen::Index n = ext[static_cast<std::size_t>(axis)];
    Eigen::Index inner = 1, outer = 1;
    for (int j = axis + 1; j < dim; ++j) inner *= ext[static_cast<std::size_t>(j)];
    for (int j = 0; j < axis; ++j) outer *= ext[static_cast<std::size_t>(j)];
    if (inner == 1) {
        Eigen::Map<const Eigen::MatrixXd> x(in, n, outer);
        Eigen::Map<Eigen::MatrixXd> y(out, n, outer);
        y.noalias() = a * x;
        return;
    }
    for (Eigen::Index o = 0; o < outer; ++o) {
        Eigen::Map<const Eigen::MatrixXd> x(in + o * n * inner, inner, n);
        Eigen::Map<Eigen::MatrixXd> y(out + o * n * inner, inner, n);
        y.noalias() = x * a.transpose();
    }
}

// ---- Field ------------------------------------------------------------------

Field::Field(GridPtr grid, double value) : grid_(std::move(grid)) {
    require(grid_ != nullptr, "Field requires a grid");
    values_ = Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(grid_->size()), value);
}

Field::Field(GridPtr grid, Eigen::ArrayXd values) : grid_(std::move(grid)), values_(std::move(values)) {
    require(grid_ != nullptr, "Field requires a grid");
    require(static_cast<std::size_t>(values_.size()) == grid_->size(), "Field size does not match grid");
}

Field Field::sample(GridPtr grid, const std::function<double(const Point&)>& fn) {
    Field f(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) f[i] = fn(grid->point(i));
    return f;
}

double Field::wall_max_abs() const {
    const auto nn = static_cast<std::size_t>(grid_->n_normal());
    double m = 0.0;
    for (std::size_t p = 0; p < grid_->n_pencils(); ++p) {
        m = std::max(m, std::abs(values_[static_cast<Eigen::Index>(p * nn)]));
        m = std::max(m, std::abs(values_[static_cast<Eigen::Index>(p * nn + nn - 1)]));
    }
    return m;
}

void Field::zero_walls() {
    const auto nn = static_cast<std::size_t>(grid_->n_normal());
    for (std::size_t p = 0; p < grid_->n_pencils(); ++p) {
        values_[static_cast<Eigen::Index>(p * nn)] = 0.0;
        values_[static_cast<Eigen::Index>(p * nn + nn - 1)] = 0.0;
    }
}

namespace {
void check_same(const Field& a, const Field& b) {
    if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_shape(b.grid()))
        throw InvalidArgument("fields live on different grids");
}
}  // namespace

Field& Field::operator+=(const Field& o) { check_same(*this, o); values_ += o.values_; return *this; }
Field& Field::operator-=(const Field& o) { check_same(*this, o); values_ -= o.values_; return *this; }
Field& Field::operator*=(const Field& o) { check_same(*this, o); values_ *= o.values_; return *this; }
Field& Field::operator*=(double s) { values_ *= s; return *this; }
Field& Field::operator+=(double s) { values_ += s; return *this; }

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }
Field operator+(Field a, double s) { return a += s; }
Field operator+(double s, Field a) { return a += s; }
Field operator-(Field a) { return a *= -1.0; }

// ---- VecField ---------------------------------------------------------------

VecField::VecField(GridPtr grid, double value) {
    const int d = grid->dim();
    for (int i = 0; i < d; ++i) comp_.emplace_back(grid, value);
}

VecField::VecField(std::vector<Field> components) : comp_(std::move(components)) {
    require(!comp_.empty(), "VecField needs components");
    for (const auto& c : comp_) check_same(c, comp_.front());
}

bool VecField::all_finite() const {
    return std::all_of(comp_.begin(), comp_.end(), [](const Field& f) { return f.all_finite(); });
}

double VecField::max_abs() const {
    double m = 0.0;
    for (const auto& c : comp_) m = std::max(m, c.max_abs());
    return m;
}

VecField& VecField::operator+=(const VecField& o) {
    for (int i = 0; i < dim(); ++i) comp_[static_cast<std::size_t>(i)] += o[i];
    return *this;
}
VecField& VecField::operator-=(const VecField& o) {
    for (int i = 0; i < dim(); ++i) comp_[static_cast<std::size_t>(i)] -= o[i];
    return *this;
}
VecField& VecField::operator*=(double s) {
    for (auto& c : comp_) c *= s;
    return *this;
}

VecField operator+(VecField a, const VecField& b) { return a += b; }
VecField operator-(VecField a, const VecField& b) { return a -= b; }
VecField operator*(double s, VecField a) { return a *= s; }
VecField operator*(const Field& f, VecField a) {
    for (auto& c : a.components()) c *= f;
    return a;
}

Field dot(const VecField& a, const VecField& b) {
    Field r = a[0] * b[0];
    for (int i = 1; i < a.dim(); ++i) r += a[i] * b[i];
    return r;
}

Field norm_sq(const VecField& a) { return dot(a, a); }

VecField cross(const VecField& a, const VecField& b) {
    require(a.dim() == 3 && b.dim() == 3, "cross product needs 3-vectors");
    return VecField({a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]});
}

// ---- operators --------------------------------------------------------------

Field deriv(const Field& f, int axis) {
    const auto& g = f.grid();
    if (axis < 0 || axis >= g.dim())
        throw InvalidArgument("deriv: axis " + std::to_string(axis) + " out of range for dim " +
                              std::to_string(g.dim()));
    Field out(f.grid_ptr());
    apply_along_axis(g, g.diff_matrix(axis), axis, f.array().data(), out.array().data());
    return out;
}

Field deriv(const Field& f, int axis, int order) {
    require(order >= 0, "derivative order must be nonnegative");
    Field r = f;
    for (int i = 0; i < order; ++i) r = deriv(r, axis);
    return r;
}

Field weight_omega(const GridPtr& grid) {
    const int n = grid->normal_axis();
    return Field::sample(grid, [n](const Point& x) {
        const double z = x[static_cast<std::size_t>(n)];
        return (1.0 - z) * (1.0 + z);
    });
}

Field omega_deriv(const Field& f) {
    Field d = deriv(f, f.grid().normal_axis());
    const auto nodes = f.grid().nodes_normal();
    const auto nn = static_cast<std::size_t>(f.grid().n_normal());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double z = nodes[i % nn];
        d[i] *= (1.0 - z) * (1.0 + z);
    }
    return d;
}

double integrate(const Field& f) {
    const auto w = f.grid().quad_weights();
    Eigen::Map<const Eigen::ArrayXd> wa(w.data(), static_cast<Eigen::Index>(w.size()));
    return (wa * f.array()).sum();
}

double l2_norm(const Field& f) { return std::sqrt(std::max(0.0, integrate(f * f))); }

double l2_norm(const VecField& f) {
    double s = 0.0;
    for (const auto& c : f.components()) s += integrate(c * c);
    return std::sqrt(std::max(0.0, s));
}

Field dealias(const Field& f) {
    const auto& g = f.grid();
    Field a = f, b(f.grid_ptr());
    for (int axis = 0; axis < g.dim() - 1; ++axis) {
        apply_along_axis(g, g.dealias_matrix(axis), axis, a.array().data(), b.array().data());
        std::swap(a, b);
    }
    return a;
}

Field filter_tangential(const Field& f, int order, double strength) {
    const auto& g = f.grid();
    Field a = f, b(f.grid_ptr());
    for (int axis = 0; axis < g.dim() - 1; ++axis) {
        const auto& q = g.fourier_basis(axis);
        const auto& modes = g.fourier_modes(axis);
        const int n = g.n_tangential(axis);
        Eigen::VectorXd sigma(n);
        for (int c = 0; c < n; ++c) {
            const double r = std::abs(modes[static_cast<std::size_t>(c)]) / (0.5 * n);
            sigma[c] = std::exp(-strength * std::pow(r, order));
        }
        const Eigen::MatrixXd m = q * sigma.asDiagonal() * q.transpose();
        apply_along_axis(g, m, axis, a.array().data(), b.array().data());
        std::swap(a, b);
    }
    return a;
}

namespace {

// V diag(sigma) V^{-1} with V_ij = P_j(x_i) at the LGL nodes.
Eigen::MatrixXd legendre_modal_operator(const SlabGrid& g, const Eigen::VectorXd& sigma) {
    const int n = g.n_normal();
    const auto x = g.nodes_normal();
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i) {
        double p0 = 1.0, p1 = x[static_cast<std::size_t>(i)];
        v(i, 0) = 1.0;
        if (n > 1) v(i, 1) = p1;
        for (int j = 2; j < n; ++j) {
            const double p2 = ((2 * j - 1) * x[static_cast<std::size_t>(i)] * p1 - (j - 1) * p0) / j;
            p0 = p1;
            p1 = p2;
            v(i, j) = p2;
        }
    }
    return v * sigma.asDiagonal() * v.partialPivLu().inverse();
}

Field apply_normal(const Field& f, const Eigen::MatrixXd& m) {
    Field out(f.grid_ptr());
    apply_along_axis(f.grid(), m, f.grid().normal_axis(), f.array().data(), out.array().data());
    return out;
}

}  // namespace

Field filter_normal(const Field& f, int order, double strength) {
    const int n = f.grid().n_normal();
    Eigen::VectorXd sigma(n);
    for (int j = 0; j < n; ++j) sigma[j] = std::exp(-strength * std::pow(static_cast<double>(j) / (n - 1), order));
    return apply_normal(f, legendre_modal_operator(f.grid(), sigma));
}

Field band_limit(const Field& f) {
    const int n = f.grid().n_normal();
    const int keep = (n - 1) / 3;
    Eigen::VectorXd sigma(n);
    for (int j = 0; j < n; ++j) sigma[j] = j <= keep ? 1.0 : 0.0;
    return apply_normal(dealias(f), legendre_modal_operator(f.grid(), sigma));
}

Field band_limit_zero_walls(const Field& f) {
    Field r = band_limit(f);
    const auto& g = f.grid();
    const auto n = static_cast<std::size_t>(g.n_normal());
    const auto x = g.nodes_normal();
    for (std::size_t p = 0; p < g.n_pencils(); ++p) {
        const double lo = r[p * n], hi = r[p * n + n - 1];
        for (std::size_t i = 0; i < n; ++i) r[p * n + i] -= 0.5 * (lo * (1.0 - x[i]) + hi * (1.0 + x[i]));
    }
    return r;
}

}  // namespace machslab
