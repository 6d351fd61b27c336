// Randomized checks of invariants over seeded manufactured states.
#include <doctest.h>

#include <cmath>
#include <random>

#include "machslab/compressible.hpp"
#include "machslab/energy.hpp"
#include "machslab/identities.hpp"
#include "machslab/initial_data.hpp"
#include "machslab/norms.hpp"
#include "machslab/poisson.hpp"

using namespace machslab;

namespace {

constexpr int kCases = 6;

EosParams random_eos(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> eps(0.05, 0.5), gam(1.2, 2.0);
    return {eps(rng), gam(rng), 1.0};
}

}  // namespace

TEST_CASE("property: steps keep u_n = 0 on walls, positive density and bounded div B") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> amp(0.05, 0.3);
    auto g = SlabGrid::build(2, {16}, 13);
    for (int c = 0; c < kCases; ++c) {
        const EosParams e = random_eos(rng);
        const double a = amp(rng);
        MhdState s = make_compressible_state(g, "vortex", {{"amplitude", a}, {"b_amplitude", 0.5 * a}}, e);
        const double div0 = l2_norm(divergence(s.B));
        const double dt = cfl_dt(s, e, 0.5);
        for (int i = 0; i < 5; ++i) {
            s = step(s, e, dt);
            CHECK(s.u.normal().wall_max_abs() <= 1e-12);
            CHECK(density(e, s.p, s.S).min() > 0.0);
            CHECK(l2_norm(divergence(s.B)) <= div0 + 1e-8 * s.t);
        }
    }
}

TEST_CASE("property: identical inputs give bit-identical steps") {
    auto g = SlabGrid::build(2, {16}, 13);
    const EosParams e{0.2, 1.4, 1.0};
    const MhdState s = manufactured_state(g, 99, 0.1);
    const MhdState a = step(s, e, 1e-3), b = step(s, e, 1e-3);
    for (std::size_t i = 0; i < a.fields().size(); ++i) CHECK((a.fields()[i]->array() == b.fields()[i]->array()).all());
}

TEST_CASE("property: energy constituents are nonnegative and sum to the total") {
    std::mt19937_64 rng(7);
    auto g = SlabGrid::build(2, {12}, 9);
    for (int c = 0; c < kCases; ++c) {
        const EosParams e = random_eos(rng);
        const MhdState s = band_limit_state(manufactured_state(g, rng(), 0.1));
        const EnergyReport r = energy(bootstrap(s, e, 8), e);
        double sum = 0.0;
        for (const auto& [k, v] : r.constituents) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(r.total).epsilon(1e-12));
    }
}

TEST_CASE("property: higher energy levels vanish as epsilon shrinks at frozen fields") {
    std::mt19937_64 rng(11);
    auto g = SlabGrid::build(2, {12}, 9);
    const MhdState s = band_limit_state(manufactured_state(g, rng(), 0.1));
    const EosParams e{0.1, 1.4, 1.0};
    const TimeStack st = bootstrap(s, e, 8);
    EnergyOptions o;
    o.fprime = f_prime(e, s.p, s.S);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        EosParams ee = e;
        ee.epsilon = eps;
        const EnergyReport r = energy(st, ee, o);
        const double hi = r.e(5) + r.e(6) + r.e(7) + r.e(8);
        CHECK(hi < prev);
        prev = hi;
    }
}

TEST_CASE("property: projection is idempotent with zero normal trace") {
    std::mt19937_64 rng(5);
    auto g = SlabGrid::build(2, {16}, 13);
    for (int c = 0; c < kCases; ++c) {
        const MhdState s = manufactured_state(g, rng(), 0.5);
        VecField X = s.u;
        X[0] += s.p;
        X[1] += s.S;
        const VecField P = project(X);
        CHECK(P.normal().wall_max_abs() < 1e-12);
        CHECK(l2_norm(project(P) - P) <= 1e-10 * (1.0 + l2_norm(P)));
        CHECK(l2_norm(P) <= l2_norm(X) * (1.0 + 1e-12));
    }
}

TEST_CASE("property: band limiting is idempotent and filtering never adds energy") {
    std::mt19937_64 rng(3);
    auto g = SlabGrid::build(2, {16}, 13);
    for (int c = 0; c < kCases; ++c) {
        const EosParams e = random_eos(rng);
        const MhdState s = manufactured_state(g, rng(), 0.3);
        const MhdState b = band_limit_state(s);
        const MhdState bb = band_limit_state(b);
        for (std::size_t i = 0; i < b.fields().size(); ++i) CHECK((*b.fields()[i] - *bb.fields()[i]).max_abs() < 1e-12);
        const MhdState f = filter_state(s, 8, 4.0);
        CHECK(physical_energy(f, e) <= physical_energy(s, e) * (1.0 + 1e-12));
    }
}

TEST_CASE("property: triple product antisymmetry on random seeds") {
    auto g = SlabGrid::build(3, {8, 8}, 9);
    for (std::uint64_t seed = 100; seed < 100 + kCases; ++seed) CHECK(check_triple_product(g, seed).passed());
}

TEST_CASE("property: aniso norms are monotone in the order on random stacks") {
    std::mt19937_64 rng(17);
    auto g = SlabGrid::build(2, {12}, 9);
    for (int c = 0; c < kCases; ++c) {
        const MhdState s = band_limit_state(manufactured_state(g, rng(), 0.2));
        const TimeStack st = bootstrap(s, {0.3, 1.4, 1.0}, 8);
        const auto stack = st.scalar_stack(0);
        double prev = 0.0;
        for (int m = 0; m <= 8; ++m) {
            const double v = aniso_norm(stack, m);
            CHECK(v >= prev);
            prev = v;
        }
    }
}
