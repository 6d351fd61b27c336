// Discrete Leray projection on the slab. The pressure operator is
// div(I~ r grad .) where I~ drops the wall-normal component at wall nodes, so
// the projected field is divergence-free at every node and has zero normal
// trace exactly.
#pragma once

#include "machslab/grid.hpp"

namespace machslab {

struct ProjectionResult {
    VecField u;        // X - varrho^{-1} grad pi, normal trace zero
    Field pi;          // zero-mean multiplier
    int iterations = 0;
    double residual = 0.0;
};

/// Solves div(I~ grad mu) = f with zero mean for constant coefficient.
/// f must have zero quadrature mean (up to roundoff; the mean is discarded).
Field solve_neumann_constant(const Field& f);

/// Variable-coefficient projection with respect to varrho > 0. A constant
/// varrho uses the direct transform-space solver; otherwise right-preconditioned
/// GMRES to relative residual tol.
ProjectionResult project_full(const VecField& X, const Field& varrho, double tol = 1e-11);
VecField project(const VecField& X, const Field& varrho);
/// Constant-density projection.
VecField project(const VecField& X);

/// Divergence of X with its normal component zeroed at wall nodes.
Field wall_divergence(const VecField& X);

}  // namespace machslab
