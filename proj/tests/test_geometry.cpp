#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hsl/geometry.hpp"

using namespace hsl;

TEST_CASE("labels with inclusive boundary") {
    CHECK(label(Threshold{0.5}, 0.5) == 1);
    CHECK(label(Threshold{0.5}, 0.2) == 1);
    CHECK(label(Threshold{0.5}, 0.7) == 0);
    Halfspace h = make_halfspace({1.0, 0.0}, 0.0, false);
    CHECK(label(h, {-0.3, 0.1}) == 0);
    CHECK(label(h, {0.0, 0.1}) == 1);  // tie
    CHECK_THROWS_AS(label(Concept(Threshold{0.5}), Point{0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("make_halfspace canonicalizes") {
    Halfspace h = make_halfspace({2.0, 0.0}, 0.5, false);
    CHECK(h.omega[0] == doctest::Approx(1.0));
    CHECK(h.b == doctest::Approx(0.25));
    Halfspace hom = make_halfspace({0.0, 3.0}, 0.7, true);
    CHECK(hom.b == 0.0);
    CHECK_THROWS_AS(make_halfspace({0.0, 0.0}, 0.0, false), std::invalid_argument);
}

TEST_CASE("projection and distance") {
    Halfspace a = make_halfspace({1.0, 0.0}, 0.0, false);
    Point p = project_onto_boundary({0.3, 0.1}, a);
    CHECK(p[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.1));
    CHECK(distance_to_boundary({0.3, 0.1}, a) == doctest::Approx(0.3));

    Halfspace b = make_halfspace({0.0, 1.0}, 0.2, false);
    Point q = project_onto_boundary({0.0, 0.0}, b);
    CHECK(q[1] == doctest::Approx(0.2));

    double s = 1.0 / std::sqrt(2.0);
    Halfspace c = make_halfspace({s, s}, 0.0, false);
    Point r = project_onto_boundary({0.1, 0.1}, c);
    CHECK(std::abs(r[0]) < 1e-12);
    CHECK(std::abs(r[1]) < 1e-12);
    CHECK(std::abs(dot(c.omega, r) - c.b) < 1e-12);
    CHECK(distance_to_boundary({0.1, 0.1}, c) == doctest::Approx(0.2 / std::sqrt(2.0)));
    CHECK(distance_to_boundary({0.1, 0.1}, c) ==
          doctest::Approx(norm(sub(Point{0.1, 0.1}, r))).epsilon(1e-10));
}

TEST_CASE("exact error formulas") {
    CHECK(threshold_error(Threshold{0.2}, Threshold{0.7}) == doctest::Approx(0.5));
    CHECK(threshold_error(Threshold{0.3}, Threshold{0.3}) == 0.0);
    CHECK(threshold_error(Threshold{0.0}, Threshold{1.0}) == doctest::Approx(1.0));

    Halfspace ha = make_halfspace({1.0, 0.0}, 0.0, true);
    Halfspace hb = make_halfspace({0.0, 1.0}, 0.0, true);
    CHECK(homogeneous_error(ha, hb) == doctest::Approx(0.5));
    CHECK(homogeneous_error(ha, ha) == doctest::Approx(0.0));
    Halfspace hc = make_halfspace({1.0, 0.0, 0.0}, 0.0, true);
    Halfspace hd = make_halfspace({-1.0, 0.0, 0.0}, 0.0, true);
    CHECK(homogeneous_error(hc, hd) == doctest::Approx(1.0));
    CHECK_THROWS_AS(homogeneous_error(ha, make_halfspace({1.0, 0.0}, 0.1, false)),
                    std::invalid_argument);
}

TEST_CASE("monte carlo error estimator") {
    Concept a(make_halfspace({1.0, 1.0}, 0.05, false));
    McEstimate same = monte_carlo_error(a, a, 1000, 3);
    CHECK(same.estimate == 0.0);
    CHECK(same.std_error == 0.0);

    Concept ha(make_halfspace({1.0, 0.2, -0.3}, 0.0, true));
    Concept hb(make_halfspace({0.7, -0.4, 0.1}, 0.0, true));
    McEstimate mc = monte_carlo_error(ha, hb, 400'000, 11);
    double exact = homogeneous_error(ha.halfspace(), hb.halfspace());
    CHECK(std::abs(mc.estimate - exact) <= 4.0 * mc.std_error);

    // b = 0.5 boundary is tangent to the ball: disagreement = mass of {x1 >= 0}
    Concept t1(make_halfspace({1.0, 0.0}, 0.0, false));
    Concept t2(make_halfspace({1.0, 0.0}, 0.5, false));
    McEstimate tan = monte_carlo_error(t1, t2, 200'000, 17);
    CHECK(std::abs(tan.estimate - 0.5) <= 4.0 * tan.std_error + 1e-3);
}

TEST_CASE("parallel and serial kernels agree bit-for-bit") {
    Concept a(make_halfspace({1.0, 0.3, -0.2, 0.5}, 0.1, false));
    Concept b(make_halfspace({0.4, -0.8, 0.1, 0.2}, -0.05, false));
    McEstimate p = monte_carlo_error(a, b, 123'457, 99);
    McEstimate s = monte_carlo_error_serial(a, b, 123'457, 99);
    CHECK(p.estimate == s.estimate);
    CHECK(p.std_error == s.std_error);
}

TEST_CASE("uniform ball sampling") {
    Rng rng(5);
    const int n = 100'000;
    double mean0 = 0.0, mean1 = 0.0;
    int inside_quarter = 0;
    for (int i = 0; i < n; ++i) {
        Point x = sample_uniform_ball(2, rng);
        REQUIRE(norm(x) <= 0.5 + 1e-12);
        mean0 += x[0];
        mean1 += x[1];
        if (norm(x) <= 0.25) ++inside_quarter;
    }
    CHECK(std::abs(mean0 / n) < 0.01);
    CHECK(std::abs(mean1 / n) < 0.01);
    CHECK(std::abs(double(inside_quarter) / n - 0.25) < 0.01);  // (r/R)^k law
}

TEST_CASE("induced hypotheses") {
    Halfspace h1 = induced_halfspace({0.0, 0.4}, {0.0, -0.1}, 1);
    CHECK(label(h1, {0.0, 0.4}) == 1);
    CHECK(std::abs(dot(h1.omega, Point{0.0, -0.1}) - h1.b) < 1e-12);  // through x'
    CHECK(std::abs(std::abs(h1.omega[1]) - 1.0) < 1e-12);

    Halfspace h2 = induced_halfspace({0.2, 0.0}, {-0.2, 0.0}, 0);
    CHECK(label(h2, {0.2, 0.0}) == 0);
    CHECK(std::abs(dot(h2.omega, Point{-0.2, 0.0}) - h2.b) < 1e-12);

    auto g1 = induced_homogeneous({0.0, 0.4}, {0.0, -0.1}, 1);
    REQUIRE(g1.has_value());
    CHECK(g1->omega[1] == doctest::Approx(1.0));
    CHECK(g1->b == 0.0);

    auto g2 = induced_homogeneous({0.3, 0.3}, {0.3, -0.3}, 1);
    REQUIRE(g2.has_value());
    CHECK(g2->omega[1] == doctest::Approx(1.0));

    CHECK(!induced_homogeneous({0.1, 0.1}, {0.1, 0.1}, 1).has_value());
    CHECK_THROWS_AS(induced_halfspace({0.1, 0.1}, {0.1, 0.1}, 1), std::invalid_argument);

    // property: label(result, x) = label_x over random pairs
    Rng rng(21);
    for (int i = 0; i < 10'000; ++i) {
        Point x = sample_uniform_ball(3, rng);
        Point xp = sample_uniform_ball(3, rng);
        if (norm(sub(x, xp)) == 0.0) continue;
        int lx = rng.uniform() < 0.5 ? 0 : 1;
        CHECK(label(induced_halfspace(x, xp, lx), x) == lx);
        auto hom = induced_homogeneous(x, xp, lx);
        if (hom.has_value()) CHECK(label(*hom, x) == lx);
    }
}

TEST_CASE("angle at vertex") {
    CHECK(angle_at({-0.2, 0.0}, {0.0, 0.4}, {0.0, 0.0}) ==
          doctest::Approx(std::atan(0.5)).epsilon(1e-9));
    CHECK(angle_at({0.0, 0.0}, {0.0, 0.4}, {0.0, 0.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(angle_at({0.0, 0.4}, {0.0, 0.4}, {0.0, 0.0}), std::invalid_argument);

    // right-angle configuration saturates the arctan bound
    Point x = {0.0, 0.3};
    Point proj = {0.0, 0.0};
    Point xp = {0.15, 0.0};  // perpendicular offset at the projection
    double angle = angle_at(xp, x, proj);
    CHECK(angle == doctest::Approx(std::atan(0.15 / 0.3)).epsilon(1e-12));
}

TEST_CASE("concept_error picks exact formulas") {
    CHECK(concept_error(Concept(Threshold{0.2}), Concept(Threshold{0.6}), 10, 1) ==
          doctest::Approx(0.4));
    Concept ha(make_halfspace({1.0, 0.0}, 0.0, true));
    Concept hb(make_halfspace({0.0, 1.0}, 0.0, true));
    CHECK(concept_error(ha, hb, 10, 1) == doctest::Approx(0.5));
}
