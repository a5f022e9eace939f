#include <doctest.h>

#include "mmcf/sphere_grid.hpp"
#include "support.hpp"

using namespace mmcf;

TEST_CASE("grid nodes") {
    const Grid g = test::line(129, 1.2);
    SUBCASE("pole node of the arc") {
        const std::size_t mid = 64;
        CHECK(g.coords(mid)[0] == doctest::Approx(0.0));
        CHECK(g.z(mid)[0] == doctest::Approx(0.0));
        CHECK(g.z(mid)[1] == doctest::Approx(1.0));
        CHECK(g.y(mid) == doctest::Approx(1.0));
    }
    SUBCASE("s = pi/3 has y = 1/2") {
        const Grid h = test::line(9, 4.0 * M_PI / 9.0);
        // nodes at multiples of pi/9
        CHECK(h.coords(7)[0] == doctest::Approx(M_PI / 3.0));
        CHECK(h.y(7) == doctest::Approx(0.5));
    }
    SUBCASE("full n = 2 nodes are unit vectors") {
        const Grid f = test::full(33, 24);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(norm(f.z(i)) - 1.0) <= 1e-12);
    }
    SUBCASE("invalid specs are rejected") {
        CHECK_THROWS_AS(Grid(GridSpec{3, GridMode::full, 33, 8, 1.0}), InvalidArgument);
        CHECK_THROWS_AS(Grid(GridSpec{1, GridMode::full, 33, 8, 1.7}), InvalidArgument);
        CHECK_THROWS_AS(Grid(GridSpec{1, GridMode::full, 5, 8, 1.0}), InvalidArgument);
    }
}

TEST_CASE("gradient") {
    SUBCASE("constant field has zero gradient") {
        for (const Grid& g : {test::line(33), test::axi(33), test::full(17, 16)}) {
            const Field f(g.size(), 3.25);
            for (const auto& p : covariant_gradient(f, g)) {
                CHECK(p[0] == 0.0);
                CHECK(p[1] == 0.0);
            }
        }
    }
    SUBCASE("horosphere height gradient at s = pi/3") {
        // v = -log cos s: |grad v|^2 = tan^2 s = 3 at s = pi/3, so w = 2.
        double prev = 0.0;
        for (int k = 0; k < 3; ++k) {
            const int nodes = 6 * (8 << k) + 1;
            const Grid g = test::line(nodes, M_PI / 2.0 * 0.999);
            Field f(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) f[i] = -std::log(g.y(i));
            const auto p = covariant_gradient(f, g);
            std::size_t best = 0;
            for (std::size_t i = 0; i < g.size(); ++i)
                if (std::abs(g.coords(i)[0] - M_PI / 3) < std::abs(g.coords(best)[0] - M_PI / 3)) best = i;
            const double s = g.coords(best)[0];
            const double err = std::abs(p[best][0] * p[best][0] - std::tan(s) * std::tan(s));
            CHECK(std::abs(s - M_PI / 3) < g.h());
            if (k > 0) CHECK(test::order(prev, err) > 1.8);
            prev = err;
        }
        CHECK(prev < 5e-3);
    }
    SUBCASE("|grad y|^2 = 1 - y^2 on S^2") {
        double prev = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Grid g = test::full(17 << k, 16 << k);
            Field f(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) f[i] = g.y(i);
            const auto p = covariant_gradient(f, g);
            const double err = test::max_interior(g, DomainMask::whole(g),
                                                  [&](std::size_t i) { return norm2(p[i], 2) - (1 - g.y(i) * g.y(i)); });
            if (k > 0) CHECK(test::order(prev, err) > 1.8);
            prev = err;
        }
        CHECK(prev < 1e-4);
    }
}

TEST_CASE("hessian") {
    SUBCASE("constant field has zero hessian") {
        for (const Grid& g : {test::line(33), test::axi(33), test::full(17, 16)}) {
            const Field f(g.size(), -1.5);
            for (const auto& q : covariant_hessian(f, g)) {
                CHECK(q.xx == 0.0);
                CHECK(q.xy == 0.0);
                CHECK(q.yy == 0.0);
            }
        }
    }
    SUBCASE("f = y on S^2 has hessian -y gamma and Laplacian -2y") {
        double prev_h = 0.0, prev_l = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Grid g = test::full(17 << k, 16 << k);
            const DomainMask m = DomainMask::whole(g);
            Field f(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) f[i] = g.y(i);
            const auto q = covariant_hessian(f, g, m);
            const Field lap = sphere_laplacian(f, g, m);
            const double eh = test::max_interior(g, m, [&](std::size_t i) {
                return std::max({std::abs(q[i].xx + g.y(i)), std::abs(q[i].xy), std::abs(q[i].yy + g.y(i))});
            });
            const double el = test::max_interior(g, m, [&](std::size_t i) { return lap[i] + 2.0 * g.y(i); });
            if (k > 0) {
                CHECK(test::order(prev_h, eh) > 1.8);
                CHECK(test::order(prev_l, el) > 1.8);
            }
            prev_h = eh;
            prev_l = el;
        }
    }
    SUBCASE("hessian is symmetric") {
        const Grid g = test::full(33, 32);
        Field f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(3 * g.z(i)[0]) * std::exp(g.z(i)[1]);
        for (const auto& q : covariant_hessian(f, g)) CHECK(std::abs(q(0, 1) - q(1, 0)) <= 1e-12);
    }
}

TEST_CASE("truncated domain") {
    const Grid g = test::line(129, 1.3);
    SUBCASE("hemisphere mask is y >= epsilon") {
        const Field v(g.size(), 0.0);
        const double eps = 0.5;
        const DomainMask m = truncate_domain(v, g, eps);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(m.contains(i) == (g.y(i) >= eps));
        CHECK(m.interior_count() > 0);
    }
    SUBCASE("epsilon >= 1 leaves no domain") {
        CHECK_THROWS_AS(truncate_domain(Field(g.size(), 0.0), g, 1.0), InvalidArgument);
    }
    SUBCASE("horosphere gives the same mask as the hemisphere") {
        Field v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::log(2.0 / g.y(i));
        const DomainMask a = truncate_domain(v, g, 0.4);
        const DomainMask b = truncate_domain(Field(g.size(), 0.0), g, 0.4);
        CHECK(a.inside == b.inside);
    }
}
