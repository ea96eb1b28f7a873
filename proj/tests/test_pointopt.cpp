#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "optrec/covering.hpp"
#include "optrec/pointopt.hpp"
#include "optrec/wce.hpp"

using namespace optrec;

TEST_CASE("greedy farthest point") {
    // two disjoint balls: separation forces one node in each
    PointSet centers(2, {0.0, 0.0, 5.0, 0.0});
    auto two = Domain::ball_union(centers, {1.0, 1.0}, NormSpec::lp(2.0), true);
    auto X = greedy_farthest_point(two, 2, NormSpec::lp(2.0), 1);
    auto in_ball = [&](std::span<const double> x, std::size_t b) {
        return distance(x, centers.point(b), NormSpec::lp(2.0)) <= 1.0;
    };
    bool split_pair = (in_ball(X.point(0), 0) && in_ball(X.point(1), 1)) ||
                      (in_ball(X.point(0), 1) && in_ball(X.point(1), 0));
    CHECK(split_pair);

    // 2-approximation on the square (optimum 1/4 at n=4)
    auto sq = Domain::unit_box(2);
    auto X4 = greedy_farthest_point(sq, 4, NormSpec::linf(), 2);
    auto r = covering_radius(sq, X4, NormSpec::linf(), {});
    CHECK(r.hi <= 0.52);

    // n=1 on a symmetric domain: near the center
    auto disk = Domain::ball({0.0, 0.0}, 1.0, NormSpec::lp(2.0));
    auto X1 = greedy_farthest_point(disk, 1, NormSpec::lp(2.0), 3);
    CHECK(norm_of(X1.point(0), NormSpec::lp(2.0)) < 0.05);

    CHECK_THROWS_AS(greedy_farthest_point(sq, 0, NormSpec::lp(2.0), 1), std::invalid_argument);
}

TEST_CASE("lloyd descent covering objective reaches near-grid quality") {
    auto sq = Domain::unit_box(2);
    OptimizerConfig cfg;
    cfg.objective = OptimizerConfig::Objective::Covering;
    cfg.norm = NormSpec::linf();
    cfg.seed = 7;
    cfg.iterations = 40;
    cfg.restarts = 6;
    auto X0 = greedy_farthest_point(sq, 4, NormSpec::linf(), 7);
    auto res = lloyd_descent(sq, X0, cfg);
    auto r = covering_radius(sq, res.points, NormSpec::linf(), {});
    CHECK(r.hi <= 0.30); // optimum 0.25
    // greedy -> lloyd never worsens the certified radius (up to MC slack)
    auto r0 = covering_radius(sq, X0, NormSpec::linf(), {});
    CHECK(r.hi <= r0.hi + 0.02);

    // best-so-far along the trace is nonincreasing by the selection rule
    double run = std::numeric_limits<double>::infinity();
    for (double v : res.trace) {
        run = std::min(run, v);
        CHECK(run <= v + 1e-12);
    }
}

TEST_CASE("lloyd descent quantization: single node moves to the disk center") {
    auto disk = Domain::ball({0.0, 0.0}, 1.0, NormSpec::lp(2.0));
    PointSet X0(2, {0.7, 0.6}); // deliberately off-center
    OptimizerConfig cfg;
    cfg.objective = OptimizerConfig::Objective::Quantization;
    cfg.norm = NormSpec::lp(2.0);
    cfg.seed = 11;
    cfg.iterations = 25;
    cfg.restarts = 2;
    auto res = lloyd_descent(disk, X0, cfg);
    CHECK(norm_of(res.points.point(0), NormSpec::lp(2.0)) < 0.05);
}

TEST_CASE("make_grid_points") {
    auto sq = Domain::unit_box(2);
    auto g2 = make_grid_points(sq, 2);
    REQUIRE(g2.size() == 4);
    std::vector<double> expect{0.25, 0.75};
    for (std::size_t i = 0; i < 4; ++i)
        for (double c : g2.point(i))
            CHECK((c == expect[0] || c == expect[1]));
    auto r = covering_radius(sq, g2, NormSpec::linf(), {});
    CHECK(r.value == Catch::Approx(0.25).margin(1e-9));

    // single center: l2 radius sqrt(d)/2
    for (std::size_t d : {1u, 2u, 3u}) {
        auto box = Domain::unit_box(d);
        auto g1 = make_grid_points(box, 1);
        auto r1 = covering_radius(box, g1, NormSpec::lp(2.0), {});
        CHECK(r1.value == Catch::Approx(0.5 * std::sqrt(double(d))).margin(1e-6));
    }

    // scaling: [0,2]^2 with m=2 has radius 1/2
    auto big = Domain::box({0.0, 0.0}, {2.0, 2.0});
    auto gb = make_grid_points(big, 2);
    auto rb = covering_radius(big, gb, NormSpec::linf(), {});
    CHECK(rb.value == Catch::Approx(0.5).margin(1e-9));

    CHECK_THROWS_AS(make_grid_points(Domain::ball({0.0, 0.0}, 1.0, NormSpec::lp(2.0)), 2),
                    std::invalid_argument);
}

TEST_CASE("extremal ball union") {
    auto ex = make_extremal_ball_union(3, 1.0, 2, NormSpec::lp(2.0), 2.5);
    CHECK(ex.volume == Catch::Approx(3.0 * M_PI));
    CHECK(ex.integration_error == Catch::Approx(2.0 * M_PI));
    CHECK(ex.covering_radius == 1.0);
    // normalized sharpness: e_n vol^-(d+1)/d = (d/(d+1)) lambda(B)^-1/d n^-1/d
    double lhs = ex.integration_error * std::pow(ex.volume, -1.5);
    double rhs = (2.0 / 3.0) * std::pow(M_PI, -0.5) * std::pow(3.0, -0.5);
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
    CHECK_THROWS_AS(make_extremal_ball_union(3, 1.0, 2, NormSpec::lp(2.0), 1.9),
                    std::invalid_argument);
}

namespace {
// composite Simpson per axis, aligned to the spline breakpoints: exact for
// piecewise quadratics up to rounding
double simpson_axis_integral(const FoolingFunction& f, std::size_t axis, double lo, double hi,
                             std::size_t m) {
    std::vector<double> bps;
    double h = (hi - lo) / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        double c = lo + (k + 0.5) * h;
        for (double off : {-0.5 * h, -0.25 * h, 0.0, 0.25 * h, 0.5 * h}) bps.push_back(c + off);
    }
    bps.push_back(lo);
    bps.push_back(hi);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        double a = bps[i], b = bps[i + 1], mid = 0.5 * (a + b);
        acc += (b - a) / 6.0 * (f.f1(a, axis) + 4.0 * f.f1(mid, axis) + f.f1(b, axis));
    }
    return acc;
}
} // namespace

TEST_CASE("fooling function certificate and scaling") {
    for (std::size_t d : {1u, 2u, 3u}) {
        for (std::size_t m : {1u, 2u, 3u}) {
            auto box = Domain::unit_box(d);
            auto f = fooling_function(box, m);
            auto nodes = make_grid_points(box, m);
            for (std::size_t i = 0; i < nodes.size(); ++i)
                CHECK(f(nodes.point(i)) == 0.0); // exact zeros at grid nodes

            // quadrature oracle equals the closed form
            double per_axis = simpson_axis_integral(f, 0, 0.0, 1.0, m);
            INFO("d=" << d << " m=" << m);
            CHECK(per_axis == Catch::Approx(f.integral_closed_form()).epsilon(1e-12));
            CHECK(f.integral_closed_form() > 0.0);

            auto cert = f.certify();
            CHECK(cert.vanishes_at_nodes);
            CHECK(cert.admissible);
            CHECK(cert.max_gradient_norm <= std::pow(double(d), -0.5) + 1e-9);
            CHECK(cert.max_second_difference <= 1.0 / double(d) + 1e-9);
        }
    }

    // integral scaling: (d=2, m) vs (d=2, 2m) ratio exactly 4 (n^{-2/d})
    auto box2 = Domain::unit_box(2);
    for (std::size_t m : {1u, 2u, 4u}) {
        double i1 = fooling_function(box2, m).integral_closed_form();
        double i2 = fooling_function(box2, 2 * m).integral_closed_form();
        CHECK(i1 / i2 == Catch::Approx(4.0).epsilon(1e-12));
    }

    // Monte-Carlo cross-check of the closed form at (d=2, m=2)
    auto f22 = fooling_function(box2, 2);
    auto pts = sample_uniform(box2, 1u << 19, 77);
    double mc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) mc += f22(pts.point(i));
    mc /= static_cast<double>(pts.size());
    CHECK(mc == Catch::Approx(f22.integral_closed_form()).epsilon(0.01));

    CHECK_THROWS_AS(fooling_function(Domain::ball({0.0, 0.0}, 1.0, NormSpec::lp(2.0)), 2),
                    std::invalid_argument);
}

TEST_CASE("optimized points stay within 15% of the grid optimum (covering, linf)") {
    auto sq = Domain::unit_box(2);
    for (std::size_t m : {2u, 3u}) {
        std::size_t n = m * m;
        OptimizerConfig cfg;
        cfg.objective = OptimizerConfig::Objective::Covering;
        cfg.norm = NormSpec::linf();
        cfg.seed = 100 + m;
        cfg.iterations = 40;
        cfg.restarts = 6;
        auto X0 = greedy_farthest_point(sq, n, NormSpec::linf(), cfg.seed);
        auto res = lloyd_descent(sq, X0, cfg);
        auto r = covering_radius(sq, res.points, NormSpec::linf(), {});
        INFO("n=" << n);
        CHECK(r.hi <= 1.15 * (0.5 / double(m)));
    }
}
