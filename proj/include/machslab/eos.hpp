// Mach-parametrized polytropic gas: rho = ((1 + eps^2 p) e^{-S/Cv})^{1/gamma}.
#pragma once

#include "machslab/grid.hpp"

namespace machslab {

struct EosParams {
    double epsilon = 0.1;
    double gamma = 1.4;
    double c_v = 1.0;

    void validate() const;
};

double density(const EosParams& eos, double p, double S);
/// d(log rho)/dp = eps^2 / (gamma (1 + eps^2 p)).
double f_prime(const EosParams& eos, double p, double S);
double sound_speed(const EosParams& eos, double p, double S);
/// Inverse of density in p at fixed S.
double pressure_of(const EosParams& eos, double rho, double S);

Field density(const EosParams& eos, const Field& p, const Field& S);
Field f_prime(const EosParams& eos, const Field& p, const Field& S);
Field sound_speed(const EosParams& eos, const Field& p, const Field& S);

}  // namespace machslab
