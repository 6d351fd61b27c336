#include "machslab/energy.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "machslab/norms.hpp"

namespace machslab {

std::string EnergyTerm::key() const {
    std::ostringstream os;
    os << "l=" << l << ",a=" << alpha.str() << ",k=" << k;
    return os.str();
}

std::vector<MultiIndex> tangential_indices(int dim, int order) {
    std::vector<MultiIndex> out;
    for (auto& a : enumerate_multi_indices(dim, order))
        if (a.tangential_only() && a.aniso_length() == order) out.push_back(a);
    return out;
}

namespace {

// Memoized T^alpha of one scalar time stack, keyed by (time level, spatial part).
class DerivativeCache {
public:
    explicit DerivativeCache(std::vector<Field> stack) : stack_(std::move(stack)) {}

    const Field& get(int level, const std::vector<int>& spatial) {
        auto key = std::make_pair(level, spatial);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Field value;
        const int d = static_cast<int>(spatial.size()) - 1;  // entries: d axes then omega
        bool done = false;
        if (spatial.back() > 0) {
            auto prev = spatial;
            --prev.back();
            value = omega_deriv(get(level, prev));
            done = true;
        }
        for (int a = 0; !done && a < d; ++a) {
            if (spatial[static_cast<std::size_t>(a)] > 0) {
                auto prev = spatial;
                --prev[static_cast<std::size_t>(a)];
                value = deriv(get(level, prev), a);
                done = true;
            }
        }
        if (!done) value = stack_.at(static_cast<std::size_t>(level));
        return cache_.emplace(key, std::move(value)).first->second;
    }

private:
    std::vector<Field> stack_;
    std::map<std::pair<int, std::vector<int>>, Field> cache_;
};

}  // namespace

EnergyReport energy(const TimeStack& stack, const EosParams& eos, const EnergyOptions& opt) {
    eos.validate();
    require(opt.base >= 1 && opt.base <= 4, "energy: base must be in 1..4");
    if (stack.depth() < 2 * opt.base) {
        std::ostringstream os;
        os << "energy: time stack depth " << stack.depth() << " < required " << 2 * opt.base;
        throw InvalidArgument(os.str());
    }
    const MhdState& s0 = stack[0];
    const int d = s0.dim();
    const int nf = s0.field_count();
    const int p_index = 2 * d;
    const Field fp = opt.fprime.empty() ? f_prime(eos, s0.p, s0.S) : opt.fprime;
    const Field sqrt_fp(fp.grid_ptr(), fp.array().sqrt());

    std::vector<DerivativeCache> caches;
    for (int i = 0; i < nf; ++i) caches.emplace_back(stack.scalar_stack(i));

    EnergyReport rep;
    rep.base = opt.base;
    rep.levels.assign(static_cast<std::size_t>(opt.base + 1), 0.0);
    for (int l = 0; l <= opt.base; ++l) {
        for (const auto& alpha : tangential_indices(d, 2 * l)) {
            for (int k = 0; k <= opt.base - l; ++k) {
                const int s = opt.base - k - l;
                const int w = std::max(k - 1, 0) + 2 * l;
                const double weight = std::pow(eos.epsilon, 2.0 * w);
                const int level = alpha.time_order() + k;
                std::vector<int> spatial(alpha.alpha.begin() + 1, alpha.alpha.end());
                const int pexp = std::max(k + alpha.time_order() - l - opt.p_shift, 0);
                double sum = 0.0;
                for (int i = 0; i < nf; ++i) {
                    const Field& v = caches[static_cast<std::size_t>(i)].get(level, spatial);
                    if (i != p_index) {
                        sum += sobolev_norm_sq(v, s);
                    } else if (opt.pressure_correction && l == 0 && k == 0) {
                        sum += integrate((sqrt_fp * v) * (sqrt_fp * v));
                        for (int a = 0; a < d; ++a) sum += sobolev_norm_sq(deriv(v, a), s - 1);
                    } else if (pexp > 0) {
                        Field wv = v;
                        wv.array() *= fp.array().pow(0.5 * pexp);
                        sum += sobolev_norm_sq(wv, s);
                    } else {
                        sum += sobolev_norm_sq(v, s);
                    }
                }
                EnergyTerm term;
                term.l = l;
                term.alpha = alpha;
                term.k = k;
                term.weight_exponent = w;
                term.value = weight * sum;
                rep.levels[static_cast<std::size_t>(l)] += term.value;
                rep.constituents[term.key()] = term.value;
                rep.terms.push_back(std::move(term));
            }
        }
    }
    for (double v : rep.levels) rep.total += v;
    return rep;
}

}  // namespace machslab
