#include <doctest.h>

#include "mmcf/barriers.hpp"
#include "mmcf/geometry.hpp"
#include "support.hpp"

using namespace mmcf;

TEST_CASE("cap height field") {
    SUBCASE("sigma = 0 is the hemisphere of radius r") {
        const Grid g = test::axi(33);
        const CapField c = cap_field(BarrierSpec{BarrierKind::cap, 1.0, 1.7, 0.0, 2}, g);
        for (double v : c.v) CHECK(v == doctest::Approx(std::log(1.7)));
    }
    SUBCASE("n = 2, sigma = 1, r = 1: pole height 1/2") {
        const Grid g = test::axi(33);
        const CapField c = cap_field(BarrierSpec{BarrierKind::cap, 1.0, 1.0, 1.0, 2}, g);
        CHECK(std::exp(c.v[0]) == doctest::Approx(0.5));
    }
    SUBCASE("cap points lie on the sphere of radius r centred at -sigma r / n e") {
        const Grid g = test::line(33);
        const double sigma = 0.6, r = 1.3;
        const CapField c = cap_field(BarrierSpec{BarrierKind::cap, 1.0, r, sigma, 1}, g);
        const auto x = embed(c.v, g);
        for (const auto& p : x) CHECK(std::hypot(p[0], p[1] + sigma * r) == doctest::Approx(r));
    }
    SUBCASE("invalid parameters are rejected") {
        CHECK_THROWS_AS(BarrierSpec({BarrierKind::cap, 1.0, 1.0, 2.0, 2}).validate(), InvalidArgument);
        CHECK_THROWS_AS(BarrierSpec({BarrierKind::cap, 1.0, -1.0, 0.5, 2}).validate(), InvalidArgument);
    }
}

TEST_CASE("horosphere height field") {
    const Grid g = test::axi(33);
    const double c0 = 1.4, sigma = 0.5;
    SUBCASE("pole value at t = 0") { CHECK(horosphere_field(c0, 0.0, sigma, g)[0] == doctest::Approx(std::log(c0))); }
    SUBCASE("strictly increasing in t") {
        const Field a = horosphere_field(c0, 0.1, sigma, g);
        const Field b = horosphere_field(c0, 0.2, sigma, g);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(b[i] > a[i]);
    }
    SUBCASE("constant height c0 e^{(n - sigma) t}") {
        const double t = 0.3;
        for (const auto& x : embed(horosphere_field(c0, t, sigma, g), g))
            CHECK(x[2] == doctest::Approx(c0 * std::exp((2 - sigma) * t)));
    }
}

TEST_CASE("barrier names") {
    CHECK(parse_barrier_kind("hemisphere") == BarrierKind::hemisphere);
    CHECK(parse_barrier_kind("horosphere") == BarrierKind::horosphere);
    CHECK(parse_barrier_kind("cap") == BarrierKind::cap);
    CHECK(to_string(BarrierKind::cap) == "cap");
    CHECK_THROWS_AS(parse_barrier_kind("sphere"), InvalidArgument);
}

TEST_CASE("comparison check") {
    SUBCASE("two horospheres keep a constant gap") {
        const Grid g = test::line(65, 1.0);
        auto run = [&](double c) {
            FlowConfig f;
            f.sigma = 0.5;
            f.T = 0.2;
            f.cadence = 0.05;
            f.boundary_policy = BoundaryPolicy::prescribed;
            const Field v0 = horosphere_field(c, 0.0, 0.5, g);
            f.boundary_data = [v0](std::size_t i, double t) { return v0[i] + 0.5 * t; };
            return evolve(v0, f, g);
        };
        const Trajectory lo = run(1.0), hi = run(1.5);
        for (std::size_t k = 0; k < lo.size(); ++k)
            for (std::size_t i = 0; i < g.size(); ++i)
                CHECK(hi.snapshots[k].v[i] - lo.snapshots[k].v[i] == doctest::Approx(std::log(1.5)).epsilon(1e-6));
        CHECK(comparison_check(lo, hi).worst_margin == doctest::Approx(std::log(1.5)).epsilon(1e-6));
    }
    SUBCASE("identical trajectories have zero margin") {
        const Grid g = test::line(33);
        FlowConfig f;
        f.T = 0.1;
        const Trajectory t = evolve(Field(g.size(), 0.0), f, g);
        const MarginReport r = comparison_check(t, t);
        CHECK(r.worst_margin == 0.0);
        CHECK(r.passed);
    }
    SUBCASE("cap below a horosphere stays below") {
        const Grid g = test::line(65, 1.0);
        const double sigma = 0.5;
        const CapField cap = cap_field(BarrierSpec{BarrierKind::cap, 1.0, 1.0, sigma, 1}, g);
        const Field horo = horosphere_field(1.2, 0.0, sigma, g);
        for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(cap.v[i] < horo[i]);
        FlowConfig f;
        f.sigma = sigma;
        f.T = 1.0;
        f.cadence = 0.1;
        const Trajectory lo = evolve(cap.v, f, g, cap.mask);
        const Trajectory hi = evolve(horo, f, g, cap.mask);
        const MarginReport r = comparison_check(lo, hi);
        CHECK(r.passed);
        CHECK(r.worst_margin >= -1e-8);
    }
}
