#include "machslab/config.hpp"

#include <fstream>

namespace machslab {

GridPtr RunConfig::make_grid() const { return SlabGrid::build(dim, n_tangential, n_normal, period); }

void RunConfig::validate() const {
    require(kind == "compressible" || kind == "incompressible", "config: kind must be compressible or incompressible");
    require(dim == 2 || dim == 3, "config: dim must be 2 or 3");
    require(static_cast<int>(n_tangential.size()) == dim - 1, "config: grid.n_tangential must have dim-1 entries");
    eos.validate();
    require(dt_cfl > 0.0, "config: dt_cfl must be positive");
    require(dt >= 0.0, "config: dt must be nonnegative");
    require(t_final >= 0.0, "config: t_final must be nonnegative");
    require(output_every > 0.0, "config: output_every must be positive");
    require(filter_order >= 2 && filter_order % 2 == 0, "config: filter.order must be even and >= 2");
    require(filter_strength >= 0.0, "config: filter.strength must be nonnegative");
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        c.kind = j.value("kind", c.kind);
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            c.dim = g.value("dim", c.dim);
            if (g.contains("n_tangential")) c.n_tangential = g.at("n_tangential").get<std::vector<int>>();
            else c.n_tangential.assign(static_cast<std::size_t>(c.dim - 1), c.n_tangential.front());
            c.n_normal = g.value("n_normal", c.n_normal);
        }
        c.period = j.value("period", c.period);
        if (j.contains("eos")) {
            const auto& e = j.at("eos");
            c.eos.epsilon = e.value("epsilon", c.eos.epsilon);
            c.eos.gamma = e.value("gamma", c.eos.gamma);
            c.eos.c_v = e.value("c_v", c.eos.c_v);
        }
        c.dt_cfl = j.value("dt_cfl", c.dt_cfl);
        c.dt = j.value("dt", c.dt);
        c.t_final = j.value("t_final", c.t_final);
        c.output_every = j.value("output_every", c.output_every);
        if (j.contains("initial_data")) {
            const auto& d = j.at("initial_data");
            c.data_kind = d.value("kind", c.data_kind);
            if (d.contains("parameters")) c.data_params = d.at("parameters");
        }
        if (j.contains("filter")) {
            c.filter_order = j.at("filter").value("order", c.filter_order);
            c.filter_strength = j.at("filter").value("strength", c.filter_strength);
        }
        c.energy_diagnostics = j.value("energy_diagnostics", c.energy_diagnostics);
        c.impose_b_normal = j.value("impose_b_normal", c.impose_b_normal);
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["kind"] = c.kind;
    j["grid"] = {{"dim", c.dim}, {"n_tangential", c.n_tangential}, {"n_normal", c.n_normal}};
    j["period"] = c.period;
    j["eos"] = {{"epsilon", c.eos.epsilon}, {"gamma", c.eos.gamma}, {"c_v", c.eos.c_v}};
    j["dt_cfl"] = c.dt_cfl;
    j["dt"] = c.dt;
    j["t_final"] = c.t_final;
    j["output_every"] = c.output_every;
    j["initial_data"] = {{"kind", c.data_kind}, {"parameters", c.data_params}};
    j["filter"] = {{"order", c.filter_order}, {"strength", c.filter_strength}};
    j["energy_diagnostics"] = c.energy_diagnostics;
    j["impose_b_normal"] = c.impose_b_normal;
    j["seed"] = c.seed;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse config file '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

}  // namespace machslab
