#include "machslab/norms.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace machslab {

namespace {

// Sum of ||d^beta f||^2 over nondecreasing axis sequences of length <= s.
double derivative_tree(const Field& f, int s, int min_axis) {
    double total = integrate(f * f);
    if (s == 0) return total;
    for (int a = min_axis; a < f.grid().dim(); ++a) total += derivative_tree(deriv(f, a), s - 1, a);
    return total;
}

}  // namespace

double sobolev_norm_sq(const Field& f, int s) {
    require(s >= 0 && s <= 4, "sobolev_norm: s must be in 0..4");
    return std::max(0.0, derivative_tree(f, s, 0));
}

double sobolev_norm_sq(const VecField& f, int s) {
    double t = 0.0;
    for (const auto& c : f.components()) t += sobolev_norm_sq(c, s);
    return t;
}

double sobolev_norm(const Field& f, int s) { return std::sqrt(sobolev_norm_sq(f, s)); }
double sobolev_norm(const VecField& f, int s) { return std::sqrt(sobolev_norm_sq(f, s)); }

std::vector<MultiIndex> enumerate_multi_indices(int dim, int m) {
    require(dim == 2 || dim == 3, "dim must be 2 or 3");
    require(m >= 0, "order must be nonnegative");
    const int len = dim + 2;
    std::vector<MultiIndex> out;
    std::vector<int> a(static_cast<std::size_t>(len), 0);
    std::function<void(int, int)> rec = [&](int pos, int budget) {
        if (pos == len) {
            out.emplace_back(a);
            return;
        }
        const int cost = (pos == dim) ? 2 : 1;
        for (int v = 0; v * cost <= budget; ++v) {
            a[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, budget - v * cost);
        }
        a[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, m);
    return out;
}

long long lattice_count(int dim, int m) {
    auto binom = [](long long n, long long k) {
        long long r = 1;
        for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    long long total = 0;
    for (int j = 0; 2 * j <= m; ++j) total += binom(m - 2 * j + dim + 1, dim + 1);
    return total;
}

double aniso_norm(std::span<const Field> stack, int m) {
    require(m >= 0 && m <= 8, "aniso_norm: m must be in 0..8");
    require(!stack.empty(), "aniso_norm: empty stack");
    if (static_cast<int>(stack.size()) < m + 1) {
        std::ostringstream os;
        os << "aniso_norm: stack depth " << stack.size() - 1 << " < m = " << m;
        throw InvalidArgument(os.str());
    }
    double total = 0.0;
    for (const auto& a : enumerate_multi_indices(stack.front().grid().dim(), m)) {
        const Field v = tangential_apply(a, stack);
        total += integrate(v * v);
    }
    return std::sqrt(std::max(0.0, total));
}

}  // namespace machslab
