// Named initial-data recipes: "equilibrium", "vortex", "alfven".
#pragma once

#include <string>

#include <json.hpp>

#include "machslab/eos.hpp"
#include "machslab/incompressible.hpp"
#include "machslab/state.hpp"

namespace machslab {

/// Divergence-free incompressible datum with vanishing normal traces.
struct IncDatum {
    VecField u;
    VecField B;
    Field S;
};

/// vortex:      stream-function velocity and field, w = cos(pi x_d / 2),
///              psi = amplitude w (sin x_1 + 0.3 cos 2x_1 [+ cos x_2 terms in 3D]),
///              B = b0 e_1 + curl(b_amplitude w cos x_1), S = s_amplitude cos x_1.
///              Reflection through a wall maps the data to itself with odd normal
///              components, so wall compatibility holds to every order.
/// equilibrium: u = 0, B = b0 (tangential vector), S = s0.
/// alfven:      u = amplitude sin(mode x_1) e_2, B = b0 e_1, S = s0 (3D only).
IncDatum make_datum(const GridPtr& grid, const std::string& kind, const nlohmann::json& params);

/// Compressible initial state: well-prepared pressure from the datum, plus an
/// optional "pressure_perturbation" amplitude (cos x_1 cos(pi x_d) added to p),
/// or "p0" for equilibrium.
MhdState make_compressible_state(const GridPtr& grid, const std::string& kind, const nlohmann::json& params,
                                 const EosParams& eos);

/// varrho = rho(0, S), pi from the projection.
IncState make_incompressible_state(const GridPtr& grid, const std::string& kind, const nlohmann::json& params,
                                   const EosParams& eos);

}  // namespace machslab
