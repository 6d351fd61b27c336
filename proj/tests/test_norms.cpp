#include <doctest.h>

#include <cmath>
#include <numbers>

#include "machslab/compressible.hpp"
#include "machslab/energy.hpp"
#include "machslab/eos.hpp"
#include "machslab/error.hpp"
#include "machslab/norms.hpp"

using namespace machslab;
using std::numbers::pi;

namespace {

// Brute force over all alpha in [0, m]^(d+2) with the doubled normal weight.
long long brute_count(int dim, int m) {
    const int len = dim + 2;
    std::vector<int> a(static_cast<std::size_t>(len), 0);
    long long count = 0;
    while (true) {
        int w = 0;
        for (int j = 0; j < len; ++j) w += (j == dim ? 2 : 1) * a[static_cast<std::size_t>(j)];
        if (w <= m) ++count;
        int j = 0;
        while (j < len && ++a[static_cast<std::size_t>(j)] > m) a[static_cast<std::size_t>(j++)] = 0;
        if (j == len) break;
    }
    return count;
}

}  // namespace

TEST_CASE("eos closed forms") {
    EosParams e{0.1, 1.4, 1.0};
    CHECK(density(e, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK(f_prime(e, 0.0, 0.0) == doctest::Approx(0.01 / 1.4));
    CHECK(f_prime(e, 2.0, 0.3) == doctest::Approx(0.01 / (1.4 * 1.02)));
    CHECK(sound_speed(e, 0.0, 0.0) == doctest::Approx(std::sqrt(1.4) / 0.1));
    const double rho = density(e, 3.0, 0.4);
    CHECK(rho == doctest::Approx(std::pow(1.03 * std::exp(-0.4), 1.0 / 1.4)));
    CHECK(pressure_of(e, rho, 0.4) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS((EosParams{0.0, 1.4, 1.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS((EosParams{0.1, 0.9, 1.0}).validate(), InvalidArgument);
}

TEST_CASE("sobolev_norm golden values") {
    auto g = SlabGrid::build(3, {8, 8}, 9);
    CHECK(sobolev_norm(Field(g, 0.0), 3) == 0.0);
    CHECK(sobolev_norm(Field(g, 1.0), 0) == doctest::Approx(std::sqrt(8.0 * pi * pi)).epsilon(1e-12));
    CHECK(sobolev_norm(Field(g, 1.0), 4) == doctest::Approx(std::sqrt(8.0 * pi * pi)).epsilon(1e-12));
    const Field s = Field::sample(g, [](const Point& x) { return std::sin(x[0]); });
    CHECK(std::abs(sobolev_norm(s, 1) - std::sqrt(8.0 * pi * pi)) <= 1e-9);
    // s = 2 adds ||d11 sin||^2 = 4 pi^2
    CHECK(sobolev_norm(s, 2) == doctest::Approx(std::sqrt(12.0 * pi * pi)).epsilon(1e-12));
    CHECK_THROWS_AS(sobolev_norm(s, 5), InvalidArgument);
}

TEST_CASE("multi-index enumeration matches lattice counts up to m = 8") {
    for (int d : {2, 3})
        for (int m = 0; m <= 8; ++m) {
            const long long n = brute_count(d, m);
            CHECK(static_cast<long long>(enumerate_multi_indices(d, m).size()) == n);
            CHECK(lattice_count(d, m) == n);
        }
}

TEST_CASE("aniso_norm examples") {
    auto g = SlabGrid::build(3, {8, 8}, 9);
    std::vector<Field> zero(3, Field(g, 0.0));
    CHECK(aniso_norm(zero, 2) == 0.0);

    std::vector<Field> one{Field(g, 1.0), Field(g, 0.0), Field(g, 0.0)};
    CHECK(aniso_norm(one, 2) == doctest::Approx(std::sqrt(8.0 * pi * pi)).epsilon(1e-12));

    // m = 1 of x_3: ||x_3||^2 + ||(1 - x_3^2)||^2, i.e. 4 pi^2 (2/3 + 16/15)
    std::vector<Field> x3{Field::sample(g, [](const Point& x) { return x[2]; }), Field(g, 0.0)};
    CHECK(std::abs(aniso_norm(x3, 1) - std::sqrt(4.0 * pi * pi * (2.0 / 3.0 + 16.0 / 15.0))) <= 1e-9);

    std::vector<Field> shallow{Field(g, 1.0)};
    CHECK_THROWS_AS(aniso_norm(shallow, 2), InvalidArgument);
}

TEST_CASE("aniso_norm is monotone in m") {
    auto g = SlabGrid::build(2, {12}, 9);
    std::vector<Field> st;
    for (int k = 0; k <= 6; ++k)
        st.push_back(Field::sample(g, [k](const Point& x) { return std::cos(x[0] + k) * (1.0 + x[1] * x[1] * k); }));
    double prev = 0.0;
    for (int m = 0; m <= 6; ++m) {
        const double v = aniso_norm(st, m);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("energy of the zero state and of an equilibrium") {
    auto g = SlabGrid::build(3, {8, 8}, 9);
    EosParams e{0.1, 1.4, 1.0};
    const EnergyReport z = energy(bootstrap(MhdState(g), e, 8), e);
    CHECK(z.total == 0.0);
    for (const auto& [k, v] : z.constituents) CHECK(v == 0.0);

    MhdState s(g);
    s.B[0] = Field(g, 1.0);
    const EnergyReport r = energy(bootstrap(s, e, 8), e);
    // only the underived B entry survives
    CHECK(std::abs(r.e(4) - 8.0 * pi * pi) <= 1e-9);
    CHECK(std::abs(r.total - 8.0 * pi * pi) <= 1e-9);
    for (int i = 5; i <= 8; ++i) CHECK(r.e(i) <= 1e-12);
    CHECK(r.constituents.at("l=0,a=[0,0,0,0,0],k=0") == doctest::Approx(8.0 * pi * pi));
}

TEST_CASE("energy bookkeeping and constituent keys") {
    auto g = SlabGrid::build(2, {12}, 9);
    EosParams e{0.3, 1.4, 1.0};
    MhdState s(g);
    s.u[0] = Field::sample(g, [](const Point& x) { return 0.1 * std::sin(x[0]) * (1.0 - x[1] * x[1]); });
    s.B[0] = Field(g, 1.0);
    s.p = Field::sample(g, [](const Point& x) { return 0.05 * std::cos(x[0]); });
    const EnergyReport r = energy(bootstrap(band_limit_state(s), e, 8), e);
    double sum = 0.0;
    for (double v : r.levels) sum += v;
    CHECK(r.total == doctest::Approx(sum).epsilon(1e-14));
    for (const auto& [k, v] : r.constituents) CHECK(v >= 0.0);
    // 2D: l ranges 0..4 with one tangential index of order 2l and k <= 4 - l
    std::size_t expected = 0;
    for (int l = 0; l <= 4; ++l) expected += static_cast<std::size_t>(tangential_indices(2, 2 * l).size() * (5 - l));
    CHECK(r.constituents.size() == expected);
    CHECK(r.constituents.count("l=1,a=[2,0,0,0],k=0") == 1);
    CHECK(r.constituents.count("l=1,a=[0,2,0,0],k=3") == 1);
}

TEST_CASE("energy weights are explicit powers of epsilon") {
    auto g = SlabGrid::build(2, {12}, 9);
    const EosParams e{0.1, 1.4, 1.0};
    MhdState s(g);
    s.u[0] = Field::sample(g, [](const Point& x) { return 0.1 * std::sin(x[0]) * (1.0 - x[1] * x[1]); });
    s.B[0] = Field(g, 1.0);
    s.p = Field::sample(g, [](const Point& x) { return 0.05 * std::cos(x[0]); });
    const TimeStack st = bootstrap(band_limit_state(s), e, 8);
    EnergyOptions opt;
    opt.fprime = f_prime(e, st[0].p, st[0].S);
    EosParams e2 = e;
    e2.epsilon = 0.2;
    const EnergyReport a = energy(st, e, opt), b = energy(st, e2, opt);
    for (const auto& t : a.terms) {
        const double vb = b.constituents.at(t.key());
        CHECK(vb == doctest::Approx(t.value * std::pow(2.0, 2 * t.weight_exponent)).epsilon(1e-12));
    }
}

TEST_CASE("energy rejects shallow stacks") {
    auto g = SlabGrid::build(2, {8}, 9);
    EosParams e;
    CHECK_THROWS_AS(energy(bootstrap(MhdState(g), e, 4), e), InvalidArgument);
}
