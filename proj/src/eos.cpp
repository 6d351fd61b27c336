#include "machslab/eos.hpp"

#include <cmath>
#include <sstream>

namespace machslab {

void EosParams::validate() const {
    require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
    require(gamma >= 1.0, "gamma must be >= 1");
    require(c_v > 0.0, "c_v must be positive");
}

namespace {
double base(const EosParams& eos, double p) {
    const double b = 1.0 + eos.epsilon * eos.epsilon * p;
    if (!(b > 0.0)) {
        std::ostringstream msg;
        msg << "invalid state: 1 + eps^2 p = " << b << " <= 0 (p = " << p << ")";
        throw InvalidArgument(msg.str());
    }
    return b;
}
}  // namespace

double density(const EosParams& eos, double p, double S) {
    return std::pow(base(eos, p) * std::exp(-S / eos.c_v), 1.0 / eos.gamma);
}

double f_prime(const EosParams& eos, double p, double /*S*/) {
    const double e2 = eos.epsilon * eos.epsilon;
    return e2 / (eos.gamma * base(eos, p));
}

double sound_speed(const EosParams& eos, double p, double S) {
    const double rho = density(eos, p, S);
    const double lam = 1.0 / eos.epsilon;
    return lam * std::sqrt(eos.gamma * std::pow(rho, eos.gamma - 1.0) * std::exp(S / eos.c_v));
}

double pressure_of(const EosParams& eos, double rho, double S) {
    require(rho > 0.0, "density must be positive");
    return (std::pow(rho, eos.gamma) * std::exp(S / eos.c_v) - 1.0) / (eos.epsilon * eos.epsilon);
}

namespace {
template <class Fn>
Field pointwise(const Field& p, const Field& S, Fn fn) {
    Field out(p.grid_ptr());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = fn(p[i], S[i]);
    return out;
}
}  // namespace

Field density(const EosParams& eos, const Field& p, const Field& S) {
    return pointwise(p, S, [&](double a, double b) { return density(eos, a, b); });
}
Field f_prime(const EosParams& eos, const Field& p, const Field& S) {
    return pointwise(p, S, [&](double a, double b) { return f_prime(eos, a, b); });
}
Field sound_speed(const EosParams& eos, const Field& p, const Field& S) {
    return pointwise(p, S, [&](double a, double b) { return sound_speed(eos, a, b); });
}

}  // namespace machslab
