#include "machslab/initial_data.hpp"

#include <cmath>

#include "machslab/calculus.hpp"
#include "machslab/compressible.hpp"

namespace machslab {

namespace {

std::vector<double> vec_param(const nlohmann::json& p, const char* key, std::vector<double> def) {
    if (!p.contains(key)) return def;
    if (p.at(key).is_number()) {
        def.assign(def.size(), 0.0);
        def[0] = p.at(key).get<double>();
        return def;
    }
    auto v = p.at(key).get<std::vector<double>>();
    require(v.size() == def.size(), std::string("initial data: '") + key + "' has wrong length");
    return v;
}

}  // namespace

IncDatum make_datum(const GridPtr& grid, const std::string& kind, const nlohmann::json& params_in) {
    // null means no parameters
    const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
    const int d = grid->dim();
    const int n = d - 1;
    IncDatum out{VecField(grid), VecField(grid), Field(grid)};
    try {
        if (kind == "equilibrium") {
            std::vector<double> b0(static_cast<std::size_t>(d), 0.0);
            b0[0] = 1.0;
            b0 = vec_param(params, "b0", b0);
            require(b0.back() == 0.0, "equilibrium: b0 must be tangential");
            for (int i = 0; i < d; ++i) out.B[i] = Field(grid, b0[static_cast<std::size_t>(i)]);
            out.S = Field(grid, params.value("s0", 0.0));
        } else if (kind == "alfven") {
            require(d == 3, "alfven data needs dim 3 (the perturbation is along x_2)");
            const double a = params.value("amplitude", 1e-3);
            const int m = params.value("mode", 1);
            const double b0 = params.value("b0", 1.0);
            const double ku = grid->wavenumber_unit() * m;
            out.u[1] = Field::sample(grid, [&](const Point& x) { return a * std::sin(ku * x[0]); });
            out.B[0] = Field(grid, b0);
            out.S = Field(grid, params.value("s0", 0.0));
        } else if (kind == "vortex") {
            const double a = params.value("amplitude", 0.5);
            const double b = params.value("b_amplitude", 0.25);
            const double b0 = params.value("b0", 1.0);
            const double s = params.value("s_amplitude", 0.0);
            const double k = grid->wavenumber_unit();
            // odd under reflection through either wall, so the normal components are odd
            // and everything else even: compatible with u_n = 0 to all orders
            auto w2 = [n](const Point& x) { return std::cos(0.5 * std::numbers::pi * x[static_cast<std::size_t>(n)]); };
            const Field psi = Field::sample(grid, [&](const Point& x) {
                double v = std::sin(k * x[0]) + 0.3 * std::cos(2.0 * k * x[0]);
                if (d == 3) v += 0.4 * std::cos(k * x[0] + k * x[1]);
                return a * w2(x) * v;
            });
            const Field phi = Field::sample(grid, [&](const Point& x) { return b * w2(x) * std::cos(k * x[0]); });
            // u = (d_n psi, 0, -d_1 psi) [+ (0, d_n chi, -d_2 chi)]
            out.u[0] = deriv(psi, n);
            out.u[n] = -deriv(psi, 0);
            out.B[0] = deriv(phi, n) + b0;
            out.B[n] = -deriv(phi, 0);
            if (d == 3) {
                const Field chi = Field::sample(grid, [&](const Point& x) { return 0.5 * a * w2(x) * std::sin(k * x[1]); });
                out.u[1] = deriv(chi, n);
                out.u[n] -= deriv(chi, 1);
            }
            out.S = Field::sample(grid, [&](const Point& x) { return s * std::cos(k * x[0]); });
        } else {
            throw InvalidArgument("unknown initial data kind '" + kind + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("initial data parameters: ") + e.what());
    }
    out.u.normal().zero_walls();
    out.B.normal().zero_walls();
    return out;
}

MhdState make_compressible_state(const GridPtr& grid, const std::string& kind, const nlohmann::json& params_in,
                                 const EosParams& eos) {
    // null means no parameters
    const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
    const IncDatum dat = make_datum(grid, kind, params);
    MhdState s = well_prepared(dat.u, dat.B, dat.S, eos);
    const int n = grid->normal_axis();
    if (kind == "equilibrium") s.p = Field(grid, params.value("p0", 0.0));
    const double pp = params.value("pressure_perturbation", 0.0);
    if (pp != 0.0) {
        const double k = grid->wavenumber_unit();
        s.p += Field::sample(grid, [&](const Point& x) {
            return pp * std::cos(k * x[0]) * std::cos(std::numbers::pi * x[static_cast<std::size_t>(n)]);
        });
    }
    return s;
}

IncState make_incompressible_state(const GridPtr& grid, const std::string& kind, const nlohmann::json& params_in,
                                   const EosParams& eos) {
    // null means no parameters
    const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
    IncDatum dat = make_datum(grid, kind, params);
    IncState s;
    s.u = std::move(dat.u);
    s.B = std::move(dat.B);
    s.S = std::move(dat.S);
    s.varrho = density(eos, Field(grid, 0.0), s.S);
    s.pi = inc_pressure(s);
    return s;
}

}  // namespace machslab
