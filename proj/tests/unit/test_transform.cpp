#include "doctest.h"
#include "mixfront/errors.hpp"
#include "mixfront/transform.hpp"

using namespace mixfront;

TEST_SUITE("transform") {

TEST_CASE("physical_x") {
    CHECK(physical_x(-1, 1, 0) == 0.0);
    CHECK(physical_x(-1, 1, 1) == 1.0);
    CHECK(physical_x(-2, 4, 0.5) == 2.5);
    CHECK(physical_x(-2, 4, -1) == -2.0);
    CHECK(physical_x(-2, 4, 0.25) + physical_x(-2, 4, -0.75) == 2.0 * physical_x(-2, 4, -0.25));
    CHECK_THROWS_AS(physical_x(1, 1, 0), ConfigError);
}

TEST_CASE("xi") {
    CHECK(xi(-1, 1) == 1.0);
    CHECK(xi(-2, 2) == 0.25);
    CHECK(xi(0, 1) == 4.0);
    CHECK_THROWS_AS(xi(2, 1), ConfigError);
}

TEST_CASE("eta") {
    CHECK(eta(-1.5, 1.5, -0.3, 0.3, 0.0) == 0.0);
    CHECK(eta(-1, 1, -1, 1, 1) == 1.0);
    // (0.25 - 0.5)/3 + (0.25 + 0.5)(-0.4)/3 = -0.55/3
    CHECK(eta(-1, 2, -0.5, 0.25, -0.4) == doctest::Approx(-0.55 / 3.0).epsilon(1e-15));
    CHECK(eta(-1, 2, -0.5, 0.25, 1) == doctest::Approx(2 * 0.25 / 3.0));
    CHECK(eta(-1, 2, -0.5, 0.25, -1) == doctest::Approx(2 * -0.5 / 3.0));
    const double a = eta(-1, 2, -0.5, 0.25, -0.8), b = eta(-1, 2, -0.5, 0.25, 0.1),
                 c = eta(-1, 2, -0.5, 0.25, 0.6);
    CHECK((b - a) / 0.9 == doctest::Approx((c - b) / 0.5).epsilon(1e-12));
    CHECK(eta(-1, 2, -0.5, 0.25, 1) > 0);
    CHECK(eta(-1, 2, -0.5, 0.25, -1) < 0);
    CHECK_THROWS_AS(eta(0, 0, 0, 0, 0), ConfigError);
}

TEST_CASE("reference grid") {
    ReferenceGrid g(8);
    CHECK(g.size() == 9);
    CHECK(g[0] == -1.0);
    CHECK(g[8] == 1.0);
    CHECK(g.spacing() == 0.25);
    const auto e = eta_on_grid(-1, 2, -0.5, 0.25, g);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(e[j] == eta(-1, 2, -0.5, 0.25, g[j]));
}

}
