// Picard iteration for compressible MHD: each iterate solves the linear,
// variable-coefficient system obtained by freezing the coefficients at the
// previous iterate (the "basic state"), in total-pressure variables.
#pragma once

#include <string>
#include <vector>

#include "machslab/compressible.hpp"
#include "machslab/eos.hpp"
#include "machslab/state.hpp"

namespace machslab {

/// States in this module carry the total pressure P = p + |B|^2/2 in the p slot.
MhdState to_total_pressure(const MhdState& s);
MhdState to_thermal_pressure(const MhdState& s);

/// Time derivative of (u, B, P, S) for the linear problem about `basic`:
///   rho0 D0 u = B0.grad B - grad P
///   D0 B      = B0.grad u - B0 div u
///   f0' (D0 P - D0 B . B0) + div u = 0
///   D0 S      = 0
/// with D0 = d_t + u0.grad, rho0 and f0' from p0 = P0 - |B0|^2/2.
/// No wall condition is applied here.
MhdState linear_rhs(const MhdState& basic, const MhdState& state, const EosParams& eos, bool dealias = true);
JetState linear_rhs(const JetState& basic, const JetState& state, const EosParams& eos, bool dealias = true);

/// One iterate on the time grid t_j = j dt: states and their time derivatives.
struct PicardIterate {
    std::vector<MhdState> states;
    std::vector<MhdState> rates;
};

struct PicardOptions {
    double t_final = 0.125;
    double dt = 0.0;        // 0: from the CFL rule on the initial state
    double cfl = 1.0;
    int n_max = 16;
    int samples = 8;        // sup_t is taken over this many equal subintervals (plus t = 0)
    /// Stop once sup[E]^(n) falls below floor_ratio times the largest value seen.
    /// Sixth time derivatives of roundoff-level differences put a floor near
    /// 1e-8 relative, below which ratios are noise.
    double floor_ratio = 1e-8;
    bool dealias = true;
};

struct PicardResult {
    double dt = 0.0;
    int steps = 0;
    std::vector<double> sup_diff_energy;  // index n: sup_t [E]^(n), [f]^(n) = f^(n+1) - f^(n)
    std::vector<double> ratio;            // NaN for n < 2
    bool diverged = false;
    std::string message;
    MhdState final_state;                 // last iterate at t_final, thermal pressure
    double l2_vs_nonlinear = 0.0;         // ||last iterate - nonlinear RK4 solution||_0 at t_final
    double wall_u_max = 0.0;              // max over iterates and times of |u_d| on the walls
    double wall_b_max = 0.0;              // same for B_d
};

/// Runs the iteration from a compressible state (thermal pressure). Iterate 0
/// is u = B = 0, P = S = 0. Aborts, with diverged set, after three consecutive
/// ratios >= 1.
PicardResult picard_iterate(const MhdState& initial, const EosParams& eos, const PicardOptions& opt = {});

/// CSV with columns n, sup_t_diff_energy, ratio.
void write_picard_csv(const std::string& path, const PicardResult& r);

}  // namespace machslab
