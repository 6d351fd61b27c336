// Compressible MHD in (u, B, p, S) variables with perfectly conducting walls.
#pragma once

#include "machslab/eos.hpp"
#include "machslab/jet.hpp"
#include "machslab/state.hpp"

namespace machslab {

/// d_t (u, B, p, S):
///   d_t p = -(div u)/f' - u.grad p
///   d_t u = rho^{-1}(B.grad B - grad P) - u.grad u,   P = p + |B|^2/2
///   d_t B = curl(u x B) - u div B                      (= B.grad u - B div u - u.grad B)
///   d_t S = -u.grad S
/// Tangential 2/3 truncation is applied to the result when dealias is set.
/// No wall condition is applied here.
MhdState rhs(const MhdState& s, const EosParams& eos, bool dealias = true);

/// Same right-hand side on Taylor jets; used for time-derivative stacks.
struct JetState {
    std::vector<Jet> u, B;
    Jet p, S;
};
JetState rhs(const JetState& s, const EosParams& eos, bool dealias = true);

/// Largest dt allowed by dt <= cfl * dx_min / (max|u| + max|B|/sqrt(rho) + max c_s).
double cfl_dt(const MhdState& s, const EosParams& eos, double cfl);

/// Physical energy Q = int rho|u|^2 + |B|^2 + f' p^2 + rho S^2.
double physical_energy(const MhdState& s, const EosParams& eos);
/// dQ/dt along smooth solutions: int (gamma + 1) f' p^2 div u.
double physical_energy_rate(const MhdState& s, const EosParams& eos);

struct StepOptions {
    double cfl_limit = 0.0;  // 0 disables the CFL check
    bool dealias = true;
    /// Also zero d_t B_d at wall nodes. Off by default: the induction equation in
    /// curl form keeps B_d = 0 on the walls by itself, and that is monitored.
    bool impose_b_normal = false;
};

struct StepResult {
    MhdState state;
    double rate_integral = 0.0;  // RK4 quadrature of physical_energy_rate over the step
};

/// Classical RK4. The normal component of the stage derivative of u is zeroed
/// at wall nodes, so u_d = 0 holds on the walls after every stage.
StepResult step_full(const MhdState& s, const EosParams& eos, double dt, const StepOptions& opt = {});
MhdState step(const MhdState& s, const EosParams& eos, double dt, const StepOptions& opt = {});

/// d_t^k (u, B, p, S), k = 0..depth, from repeated time differentiation of the
/// equations (Taylor-mode recursion). depth <= 8.
TimeStack bootstrap(const MhdState& s, const EosParams& eos, int depth, bool dealias = true);

/// Pairs an incompressible datum with its pressure: p0 solves
/// rho0^{-1} grad p0 = (I - P_rho0)(rho0^{-1}(B.grad B - grad|B|^2/2) - u.grad u),
/// rho0 = rho(0, S0), zero mean.
MhdState well_prepared(const VecField& u0, const VecField& B0, const Field& S0, const EosParams& eos);

/// Band-limited copy (see band_limit); normal components keep their zero wall
/// traces. Energies are evaluated on this projection.
MhdState band_limit_state(const MhdState& s);

/// Applies the tangential exponential filter to every field.
MhdState filter_state(const MhdState& s, int order, double strength);

}  // namespace machslab
