// Vector calculus on the slab and the anisotropic derivative algebra.
#pragma once

#include <span>
#include <vector>

#include "machslab/grid.hpp"

namespace machslab {

/// (alpha_0, alpha_1, ..., alpha_{d-1}, alpha_d, alpha_{d+1}): counts of d_t,
/// tangential d_i, normal d_d, and (omega d_d).
struct MultiIndex {
    std::vector<int> alpha;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> a);
    /// All-zero index for spatial dimension dim.
    static MultiIndex zero(int dim);

    int dim() const { return static_cast<int>(alpha.size()) - 2; }
    int time_order() const { return alpha.front(); }
    int normal_order() const { return alpha[static_cast<std::size_t>(dim())]; }
    int omega_order() const { return alpha.back(); }
    /// <<alpha>> = sum_{j<d} alpha_j + 2 alpha_d + alpha_{d+1}.
    int aniso_length() const;
    bool tangential_only() const { return normal_order() == 0; }
    std::string str() const;
    bool operator<(const MultiIndex& o) const { return alpha < o.alpha; }
    bool operator==(const MultiIndex& o) const { return alpha == o.alpha; }
};

VecField gradient(const Field& f);
Field divergence(const VecField& X);
/// 3D curl.
VecField curl(const VecField& X);
/// 2D scalar curl d_1 X_2 - d_2 X_1.
Field scalar_curl(const VecField& X);
/// (a . grad) f.
Field directional(const VecField& a, const Field& f);
/// (a . grad) X componentwise.
VecField directional(const VecField& a, const VecField& X);

/// (f_now - f_prev)/dt + u . grad f_now.
Field material_derivative(const VecField& u, const Field& f_now, const Field& f_prev, double dt);

/// d_t^{a0} (omega d_d)^{a_{d+1}} d_1^{a1} ... d_d^{a_d} applied to a time
/// stack (stack[k] = d_t^k f).
Field tangential_apply(const MultiIndex& m, std::span<const Field> stack);
Field tangential_apply(const MultiIndex& m, const Field& steady);

/// (omega d_3)^k d_3 f - d_3 (omega d_3)^k f, evaluated directly.
Field omega_commutator(int k, const Field& f);
/// Same commutator rebuilt as sum_{l<k} c_{k,l}(x_d) (omega d_d)^l d_d f with
/// c_{k,l} = omega c'_{k-1,l} + c_{k-1,l-1} + omega' c_{k-1,l} - omega' [l = k-1].
Field omega_commutator_formula(int k, const Field& f);
/// Polynomial coefficients (ascending powers of x_d) of c_{k,l}, l = 0..k-1.
std::vector<std::vector<double>> omega_commutator_coefficients(int k);
/// Relative least-squares residual of the direct commutator against the span
/// of {x_d^j (omega d_d)^l d_d f : l < k, j <= k + 1}.
double omega_commutator_span_residual(int k, const Field& f);

/// ||X||_s^2 / (||X||_0^2 + ||div X||_{s-1}^2 + ||curl X||_{s-1}^2 + |X_n|_{s-1/2}^2),
/// 0 for X = 0. 1 <= s <= 4.
double hodge_report(const VecField& X, int s);
/// Squared H^r norm of the normal trace over both walls, Fourier multiplier
/// (1 + |k|^2)^r.
double boundary_trace_norm_sq(const Field& f, double r);

}  // namespace machslab
