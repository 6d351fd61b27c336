// Mach-weighted energy functionals E_4..E_8 and their truncated variants.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "machslab/calculus.hpp"
#include "machslab/eos.hpp"
#include "machslab/state.hpp"

namespace machslab {

struct EnergyTerm {
    int l = 0;
    MultiIndex alpha;   // tangential-only, <<alpha>> = 2l
    int k = 0;          // extra time derivatives
    int weight_exponent = 0;  // (k-1)_+ + 2l
    double value = 0.0;       // eps^{2w} * sum of squared norms
    std::string key() const;
};

struct EnergyReport {
    int base = 4;                 // E_base .. E_{2 base}
    std::vector<double> levels;   // levels[l] = E_{base+l}
    double total = 0.0;
    std::vector<EnergyTerm> terms;
    std::map<std::string, double> constituents;

    double e(int index) const { return levels.at(static_cast<std::size_t>(index - base)); }
};

struct EnergyOptions {
    int base = 4;
    /// Exponent of the extra sqrt(f') weight on the pressure is (k + a0 - l - p_shift)_+.
    int p_shift = 3;
    /// Replace ||p||_base^2 by ||sqrt(f') p||_0^2 + ||grad p||_{base-1}^2.
    bool pressure_correction = true;
    /// Weight field for the pressure; computed from level 0 when empty.
    Field fprime;
};

/// Requires stack depth >= 2 base.
EnergyReport energy(const TimeStack& stack, const EosParams& eos, const EnergyOptions& opt = {});

/// Tangential-only multi-indices with <<alpha>> = 2l.
std::vector<MultiIndex> tangential_indices(int dim, int order);

}  // namespace machslab
