// JSON run configuration shared by the compressible and incompressible drivers.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "machslab/eos.hpp"
#include "machslab/grid.hpp"

namespace machslab {

struct RunConfig {
    std::string kind = "compressible";  // or "incompressible"
    int dim = 2;
    std::vector<int> n_tangential{32};
    int n_normal = 33;
    double period = 2.0 * std::numbers::pi;
    EosParams eos;
    double dt_cfl = 0.5;       // CFL number
    double dt = 0.0;           // explicit step; 0 derives it from dt_cfl at t = 0
    double t_final = 0.5;
    double output_every = 0.05;
    std::string data_kind = "vortex";
    nlohmann::json data_params = nlohmann::json::object();
    int filter_order = 8;
    double filter_strength = 0.0;
    bool energy_diagnostics = true;
    bool impose_b_normal = false;  // also zero d_t B_d on the walls
    std::uint64_t seed = 0;

    GridPtr make_grid() const;
    void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

}  // namespace machslab
