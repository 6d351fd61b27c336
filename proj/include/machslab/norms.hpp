// Interior Sobolev norms and the anisotropic H_*^m norms.
#pragma once

#include <span>
#include <vector>

#include "machslab/calculus.hpp"

namespace machslab {

/// (sum_{|beta| <= s} ||d^beta f||_0^2)^{1/2}, beta running over unordered
/// spatial multi-indices. 0 <= s <= 4.
double sobolev_norm(const Field& f, int s);
double sobolev_norm(const VecField& f, int s);
double sobolev_norm_sq(const Field& f, int s);
double sobolev_norm_sq(const VecField& f, int s);

/// Every alpha (length dim + 2) with <<alpha>> <= m, in lexicographic order.
std::vector<MultiIndex> enumerate_multi_indices(int dim, int m);
/// Closed-form count of the same set: sum_j C(m - 2j + d + 1, d + 1).
long long lattice_count(int dim, int m);

/// (sum_{<<alpha>> <= m} ||d_*^alpha f||_0^2)^{1/2}; stack[k] = d_t^k f.
double aniso_norm(std::span<const Field> stack, int m);

}  // namespace machslab
