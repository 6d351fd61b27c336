#include <doctest.h>

#include <cmath>
#include <numbers>

#include "machslab/calculus.hpp"
#include "machslab/error.hpp"
#include "machslab/grid.hpp"

using namespace machslab;
using std::numbers::pi;

TEST_CASE("LGL nodes and weights match closed forms") {
    std::vector<double> x, w;
    lgl_nodes_weights(3, x, w);
    CHECK(x[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(x[1]) < 1e-15);
    CHECK(w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

    lgl_nodes_weights(5, x, w);
    CHECK(x[1] == doctest::Approx(-std::sqrt(3.0 / 7.0)).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(49.0 / 90.0).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx(32.0 / 45.0).epsilon(1e-14));
}

TEST_CASE("quadrature integrates the slab measure and polynomials") {
    auto g2 = SlabGrid::build(2, {16}, 9);
    CHECK(integrate(Field(g2, 1.0)) == doctest::Approx(4.0 * pi).epsilon(1e-13));
    auto g3 = SlabGrid::build(3, {8, 8}, 9);
    CHECK(integrate(Field(g3, 1.0)) == doctest::Approx(8.0 * pi * pi).epsilon(1e-13));
    CHECK(g3->measure() == doctest::Approx(8.0 * pi * pi).epsilon(1e-13));
    // degree 2N-3 is exact for N LGL points
    const Field x14 = Field::sample(g2, [](const Point& p) { return std::pow(p[1], 14); });
    CHECK(integrate(x14) == doctest::Approx(2.0 * pi * 2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("spectral derivatives are exact on resolved functions") {
    auto g = SlabGrid::build(2, {16}, 11);
    const Field f = Field::sample(g, [](const Point& p) { return std::sin(3.0 * p[0]) * std::pow(p[1], 7); });
    const Field fx = Field::sample(g, [](const Point& p) { return 3.0 * std::cos(3.0 * p[0]) * std::pow(p[1], 7); });
    const Field fy = Field::sample(g, [](const Point& p) { return std::sin(3.0 * p[0]) * 7.0 * std::pow(p[1], 6); });
    CHECK((deriv(f, 0) - fx).max_abs() < 1e-12);
    CHECK((deriv(f, 1) - fy).max_abs() < 1e-11);
    CHECK((deriv(f, 0, 2) + 9.0 * f).max_abs() < 1e-11);
}

TEST_CASE("non-default period scales tangential wavenumbers") {
    auto g = SlabGrid::build(2, {16}, 9, 4.0);
    const double k = 2.0 * pi / 4.0;
    const Field f = Field::sample(g, [&](const Point& p) { return std::cos(k * p[0]); });
    const Field fx = Field::sample(g, [&](const Point& p) { return -k * std::sin(k * p[0]); });
    CHECK((deriv(f, 0) - fx).max_abs() < 1e-13);
    CHECK(integrate(Field(g, 1.0)) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("omega derivative and weight") {
    auto g = SlabGrid::build(2, {8}, 9);
    const Field f = Field::sample(g, [](const Point& p) { return p[1] * p[1]; });
    const Field expect = Field::sample(g, [](const Point& p) { return (1.0 - p[1] * p[1]) * 2.0 * p[1]; });
    CHECK((omega_deriv(f) - expect).max_abs() < 1e-13);
    CHECK(weight_omega(g).wall_max_abs() < 1e-15);
}

TEST_CASE("dealias keeps low modes and removes high ones") {
    auto g = SlabGrid::build(2, {24}, 9);
    const Field low = Field::sample(g, [](const Point& p) { return std::cos(7.0 * p[0]); });
    const Field high = Field::sample(g, [](const Point& p) { return std::cos(9.0 * p[0]); });
    CHECK((dealias(low) - low).max_abs() < 1e-13);
    CHECK(dealias(high).max_abs() < 1e-13);
}

TEST_CASE("band limits") {
    auto g = SlabGrid::build(2, {24}, 13);
    const Field smooth = Field::sample(g, [](const Point& p) { return std::cos(2.0 * p[0]) * p[1] * p[1] * p[1]; });
    CHECK((band_limit(smooth) - smooth).max_abs() < 1e-12);
    const Field rough = Field::sample(g, [](const Point& p) { return std::pow(p[1], 12); });
    CHECK((band_limit(rough) - rough).max_abs() > 1e-3);

    // a field with zero wall values keeps them after the zero-wall variant
    const Field w = Field::sample(g, [](const Point& p) { return (1.0 - p[1] * p[1]) * std::pow(p[1], 10) * std::sin(p[0]); });
    CHECK(band_limit_zero_walls(w).wall_max_abs() < 1e-14);
}

TEST_CASE("filters are identities at zero strength and damp the top mode") {
    auto g = SlabGrid::build(2, {16}, 9);
    const Field f = Field::sample(g, [](const Point& p) { return std::sin(p[0]) + std::cos(7.0 * p[0]) * p[1]; });
    CHECK((filter_tangential(f, 8, 0.0) - f).max_abs() < 1e-13);
    CHECK((filter_normal(f, 8, 0.0) - f).max_abs() < 1e-12);
    const Field top = Field::sample(g, [](const Point& p) { return std::cos(7.0 * p[0]); });
    CHECK(filter_tangential(top, 8, 36.0).max_abs() < 0.5);
}

TEST_CASE("grid rejects bad shapes") {
    CHECK_THROWS_AS(SlabGrid::build(4, {8, 8, 8}, 9), InvalidArgument);
    CHECK_THROWS_AS(SlabGrid::build(2, {8, 8}, 9), InvalidArgument);
    CHECK_THROWS_AS(SlabGrid::build(2, {8}, 1), InvalidArgument);
}

TEST_CASE("vector calculus identities hold discretely on resolved fields") {
    auto g = SlabGrid::build(3, {12, 12}, 11);
    const Field phi = Field::sample(g, [](const Point& p) { return std::sin(p[0]) * std::cos(p[1]) * p[2] * p[2]; });
    CHECK(curl(gradient(phi)).max_abs() < 1e-11);
    VecField A(g);
    A[0] = Field::sample(g, [](const Point& p) { return std::cos(p[1]) * p[2]; });
    A[1] = Field::sample(g, [](const Point& p) { return std::sin(p[0]) * p[2] * p[2]; });
    A[2] = Field::sample(g, [](const Point& p) { return std::cos(p[0] + p[1]); });
    CHECK(divergence(curl(A)).max_abs() < 1e-11);
}
