// Reference solver for incompressible MHD with a transported density.
#pragma once

#include "machslab/grid.hpp"

namespace machslab {

struct IncState {
    VecField u;
    VecField B;
    Field varrho;
    Field S;
    Field pi;  // empty until inc_pressure is evaluated
    double t = 0.0;

    const GridPtr& grid_ptr() const { return varrho.grid_ptr(); }
    const SlabGrid& grid() const { return varrho.grid(); }
    bool all_finite() const;
    std::vector<Field*> evolved();
    std::vector<const Field*> evolved() const;
};

struct IncRhs {
    VecField du, dB;
    Field dvarrho, dS;
    Field pi;  // pressure with varrho^{-1} grad pi = (I - P)(...)
};

/// du = P_varrho[varrho^{-1}(B.grad B - grad|B|^2/2) - u.grad u], dB = curl(u x B) - u div B,
/// d varrho = -u.grad varrho, dS = -u.grad S. Tangential 2/3 truncation.
IncRhs inc_rhs(const IncState& s, bool dealias = true);

/// Pressure pi of the current state (solves the projection once).
Field inc_pressure(const IncState& s);

double inc_cfl_dt(const IncState& s, double cfl);

/// int varrho |u|^2 + |B|^2.
double inc_energy(const IncState& s);

/// RK4 with the projected velocity derivative in every stage. cfl_limit 0 skips
/// the check. The returned pi is left empty.
IncState inc_step(const IncState& s, double dt, double cfl_limit = 0.0);

IncState inc_filter(const IncState& s, int order, double strength);

}  // namespace machslab
