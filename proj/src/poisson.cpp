#include "machslab/poisson.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "machslab/calculus.hpp"

namespace machslab {

namespace {

class ConstantSolver {
public:
    explicit ConstantSolver(const SlabGrid& g) {
        const int nn = g.n_normal();
        const Eigen::MatrixXd& d = g.diff_matrix(g.normal_axis());
        Eigen::MatrixXd it = Eigen::MatrixXd::Identity(nn, nn);
        it(0, 0) = 0.0;
        it(nn - 1, nn - 1) = 0.0;
        const Eigen::MatrixXd dd = d * it * d;
        const int d_tan = g.dim() - 1;
        const std::size_t np = g.n_pencils();
        pencil_slot_.resize(np);
        std::map<long long, int> slots;
        for (std::size_t p = 0; p < np; ++p) {
            double lam = 0.0;
            if (d_tan == 1) {
                lam = g.fourier_eigenvalues(0)[static_cast<Eigen::Index>(p)];
            } else {
                const auto n2 = static_cast<std::size_t>(g.n_tangential(1));
                lam = g.fourier_eigenvalues(0)[static_cast<Eigen::Index>(p / n2)] +
                      g.fourier_eigenvalues(1)[static_cast<Eigen::Index>(p % n2)];
            }
            const auto key = std::llround(lam * 1e8);
            auto it_slot = slots.find(key);
            if (it_slot == slots.end()) {
                Eigen::MatrixXd l = dd;
                l.diagonal().array() += lam;
                Eigen::MatrixXd inv;
                if (std::abs(lam) < 1e-12) {
                    // Null space is span{1, P_{N-1}}: both have vanishing interior
                    // gradient. Take the solution of least quadrature norm so the
                    // pressure carries no spurious top Legendre mode.
                    Eigen::VectorXd sw(nn);
                    for (int i = 0; i < nn; ++i) sw[i] = std::sqrt(g.normal_weights()[static_cast<std::size_t>(i)]);
                    const Eigen::MatrixXd scaled = l * sw.cwiseInverse().asDiagonal();
                    inv = sw.cwiseInverse().asDiagonal() * scaled.completeOrthogonalDecomposition().pseudoInverse();
                } else {
                    inv = l.partialPivLu().inverse();
                }
                const int slot = static_cast<int>(inverses_.size());
                inverses_.push_back(std::move(inv));
                it_slot = slots.emplace(key, slot).first;
            }
            pencil_slot_[p] = it_slot->second;
        }
    }

    Field solve(const Field& f) const {
        const auto& g = f.grid();
        Field a = f, b(f.grid_ptr());
        for (int axis = 0; axis < g.dim() - 1; ++axis) {
            apply_along_axis(g, g.fourier_basis(axis).transpose(), axis, a.array().data(), b.array().data());
            std::swap(a, b);
        }
        const auto nn = static_cast<Eigen::Index>(g.n_normal());
        for (std::size_t p = 0; p < g.n_pencils(); ++p) {
            Eigen::Map<Eigen::VectorXd> src(a.array().data() + static_cast<Eigen::Index>(p) * nn, nn);
            Eigen::Map<Eigen::VectorXd> dst(b.array().data() + static_cast<Eigen::Index>(p) * nn, nn);
            dst.noalias() = inverses_[static_cast<std::size_t>(pencil_slot_[p])] * src;
        }
        std::swap(a, b);
        for (int axis = 0; axis < g.dim() - 1; ++axis) {
            apply_along_axis(g, g.fourier_basis(axis), axis, a.array().data(), b.array().data());
            std::swap(a, b);
        }
        a += -integrate(a) / g.measure();
        return a;
    }

private:
    std::vector<Eigen::MatrixXd> inverses_;
    std::vector<int> pencil_slot_;
};

const ConstantSolver& constant_solver(const SlabGrid& g) {
    using Key = std::tuple<int, std::vector<int>, double>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<ConstantSolver>> cache;
    std::lock_guard<std::mutex> lock(mu);
    Key key{g.dim(), g.extents(), g.period()};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<ConstantSolver>(g)).first;
    return *it->second;
}

// div(I~ r grad mu)
Field apply_operator(const Field& mu, const Field& rinv) {
    VecField g = rinv * gradient(mu);
    return wall_divergence(g);
}

bool is_constant(const Field& f) { return f.max() - f.min() <= 1e-14 * std::max(1.0, f.max_abs()); }

double dotw(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b); }

}  // namespace

Field wall_divergence(const VecField& X) {
    VecField y = X;
    y.normal().zero_walls();
    return divergence(y);
}

Field solve_neumann_constant(const Field& f) { return constant_solver(f.grid()).solve(f); }

ProjectionResult project_full(const VecField& X, const Field& varrho, double tol) {
    require(varrho.min() > 0.0, "project: density must be positive");
    const auto& grid = X.grid();
    const ConstantSolver& pre = constant_solver(grid);
    Field rhs = wall_divergence(X);
    ProjectionResult out;
    const Field rinv(varrho.grid_ptr(), varrho.array().inverse());

    if (is_constant(varrho)) {
        const double r = rinv[0];
        out.pi = pre.solve(rhs) * (1.0 / r);
    } else {
        // Right-preconditioned restarted GMRES on A M^{-1} y = b.
        const double cbar = integrate(rinv) / grid.measure();
        auto precond = [&](const Field& v) { return pre.solve(v) * (1.0 / cbar); };
        const auto n = static_cast<Eigen::Index>(rhs.size());
        const Eigen::VectorXd b = rhs.array().matrix();
        // Residuals are measured against the uncancelled size of the divergence so
        // that nearly solenoidal inputs do not demand sub-roundoff accuracy.
        Eigen::ArrayXd scale = Eigen::ArrayXd::Zero(n);
        {
            VecField y = X;
            y.normal().zero_walls();
            for (int a = 0; a < y.dim(); ++a) scale += deriv(y[a], a).array().abs();
        }
        const double bnorm = std::max(b.norm(), scale.matrix().norm());
        Field mu(X.grid_ptr());
        if (b.norm() > 0.0) {
            const int restart = 40;
            const int max_cycles = 25;
            double rel = 1.0;
            int total_it = 0;
            for (int cycle = 0; cycle < max_cycles; ++cycle) {
                const Eigen::VectorXd r0 = b - apply_operator(mu, rinv).array().matrix();
                const double beta = r0.norm();
                rel = beta / bnorm;
                if (rel <= tol) break;
                Eigen::MatrixXd V(n, restart + 1);
                Eigen::MatrixXd Z(n, restart);
                Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
                V.col(0) = r0 / beta;
                int k = 0;
                Eigen::VectorXd g = Eigen::VectorXd::Zero(restart + 1);
                g[0] = beta;
                std::vector<double> cs(static_cast<std::size_t>(restart)), sn(static_cast<std::size_t>(restart));
                for (; k < restart; ++k) {
                    Field vk(X.grid_ptr(), Eigen::ArrayXd(V.col(k).array()));
                    const Field zk = precond(vk);
                    Z.col(k) = zk.array().matrix();
                    Eigen::VectorXd w = apply_operator(zk, rinv).array().matrix();
                    for (int i = 0; i <= k; ++i) {
                        H(i, k) = dotw(V.col(i), w);
                        w -= H(i, k) * V.col(i);
                    }
                    // second Gram-Schmidt pass for stability near the tolerance floor
                    for (int i = 0; i <= k; ++i) {
                        const double c = dotw(V.col(i), w);
                        H(i, k) += c;
                        w -= c * V.col(i);
                    }
                    H(k + 1, k) = w.norm();
                    if (H(k + 1, k) > 0.0) V.col(k + 1) = w / H(k + 1, k);
                    for (int i = 0; i < k; ++i) {
                        const double t = cs[static_cast<std::size_t>(i)] * H(i, k) + sn[static_cast<std::size_t>(i)] * H(i + 1, k);
                        H(i + 1, k) = -sn[static_cast<std::size_t>(i)] * H(i, k) + cs[static_cast<std::size_t>(i)] * H(i + 1, k);
                        H(i, k) = t;
                    }
                    const double den = std::hypot(H(k, k), H(k + 1, k));
                    cs[static_cast<std::size_t>(k)] = den > 0 ? H(k, k) / den : 1.0;
                    sn[static_cast<std::size_t>(k)] = den > 0 ? H(k + 1, k) / den : 0.0;
                    H(k, k) = den;
                    H(k + 1, k) = 0.0;
                    g[k + 1] = -sn[static_cast<std::size_t>(k)] * g[k];
                    g[k] = cs[static_cast<std::size_t>(k)] * g[k];
                    ++total_it;
                    if (std::abs(g[k + 1]) / bnorm <= tol * 0.5 || H(k, k) == 0.0) {
                        ++k;
                        break;
                    }
                }
                const Eigen::VectorXd y =
                    H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
                Eigen::VectorXd dz = Z.leftCols(k) * y;
                mu.array() += dz.array();
            }
            const Eigen::VectorXd rf = b - apply_operator(mu, rinv).array().matrix();
            rel = rf.norm() / bnorm;
            out.iterations = total_it;
            out.residual = rel;
            if (!(rel <= std::max(tol, 1e-9))) {
                std::ostringstream os;
                os << "variable-density projection did not converge: relative residual " << rel
                   << " after " << total_it << " GMRES iterations";
                throw SolverError(os.str());
            }
        }
        mu += -integrate(mu) / grid.measure();
        out.pi = mu;
    }
    out.u = X - rinv * gradient(out.pi);
    out.u.normal().zero_walls();
    return out;
}

VecField project(const VecField& X, const Field& varrho) { return project_full(X, varrho).u; }

VecField project(const VecField& X) { return project_full(X, Field(X.grid_ptr(), 1.0)).u; }

}  // namespace machslab
