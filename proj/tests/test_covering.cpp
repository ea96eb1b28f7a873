#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "optrec/covering.hpp"
#include "optrec/pointopt.hpp"
#include "optrec/rng.hpp"

using namespace optrec;

namespace {
// independent oracle: exhaustive maximum of the min-distance over a fine grid
double grid_oracle_max(const Domain& D, const PointSet& X, const NormSpec& norm, double step) {
    Box b = D.bounding_box();
    REQUIRE(D.dim() == 2);
    double best = 0.0;
    std::vector<double> x(2);
    for (x[0] = b.lo[0]; x[0] <= b.hi[0] + 1e-12; x[0] += step)
        for (x[1] = b.lo[1]; x[1] <= b.hi[1] + 1e-12; x[1] += step) {
            if (!D.contains(x)) continue;
            double md = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < X.size(); ++i)
                md = std::min(md, distance(x, X.point(i), norm));
            best = std::max(best, md);
        }
    return best;
}
} // namespace

TEST_CASE("certified covering radius of grid centers is side/(2m)") {
    for (std::size_t d : {1u, 2u, 3u}) {
        for (std::size_t m : {1u, 2u, 3u}) {
            auto box = Domain::unit_box(d);
            auto X = make_grid_points(box, m);
            CoverOptions opt;
            opt.tol = 1e-6;
            auto r = covering_radius(box, X, NormSpec::linf(), opt);
            INFO("d=" << d << " m=" << m << " [" << r.lo << "," << r.hi << "]");
            CHECK(r.converged);
            CHECK(r.width() <= 1e-6);
            // the FP-realized node set can shift the true sup by an ulp
            double expect = 0.5 / static_cast<double>(m);
            CHECK(r.lo <= expect + 1e-12);
            CHECK(r.hi >= expect - 1e-12);
        }
    }
}

TEST_CASE("single node in the unit disk certifies radius 1") {
    auto disk = Domain::ball({0.0, 0.0}, 1.0, NormSpec::lp(2.0));
    PointSet X(2, {0.0, 0.0});
    auto r = covering_radius(disk, X, NormSpec::lp(2.0), {});
    CHECK(r.converged);
    CHECK(r.lo <= 1.0);
    CHECK(r.hi >= 1.0 - 1e-9);
    CHECK(r.width() <= 1e-6);
}

TEST_CASE("certified interval brackets the fine-grid oracle") {
    auto eng = stream_engine(31, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto sq = Domain::unit_box(2);
    PointSet X(2);
    for (int i = 0; i < 3; ++i) {
        std::vector<double> p{u(eng), u(eng)};
        X.push_back(p);
    }
    double oracle = grid_oracle_max(sq, X, NormSpec::lp(2.0), 1e-3);
    CoverOptions opt;
    opt.tol = 1e-6;
    auto r = covering_radius(sq, X, NormSpec::lp(2.0), opt);
    CHECK(r.converged);
    // the grid oracle undershoots by at most a grid cell diameter
    CHECK(r.value >= oracle - 1e-9);
    CHECK(r.value <= oracle + 2e-3);
}

TEST_CASE("monte carlo mode is a flagged lower estimate") {
    auto sq = Domain::unit_box(2);
    auto X = make_grid_points(sq, 2);
    CoverOptions mc;
    mc.mode = CoverOptions::Mode::MonteCarlo;
    mc.budget = 200000;
    mc.seed = 5;
    auto rm = covering_radius(sq, X, NormSpec::linf(), mc);
    CHECK(rm.lower_estimate_only);
    CHECK(rm.kind == ErrorReport::Kind::MonteCarlo);
    CHECK(rm.value <= 0.25 + 1e-12);
    CHECK(rm.value >= 0.24); // dense sampling gets close from below
}

TEST_CASE("extremal ball union certifies radius delta") {
    for (std::size_t d : {1u, 2u, 3u}) {
        for (double p : {2.0, std::numeric_limits<double>::infinity()}) {
            NormSpec norm = std::isinf(p) ? NormSpec::linf() : NormSpec::lp(p);
            auto ex = make_extremal_ball_union(3, 0.8, d, norm, 2.5);
            auto r = covering_radius(ex.domain, ex.nodes, norm, {});
            INFO("d=" << d << " p=" << p);
            CHECK(r.converged);
            CHECK(r.lo <= 0.8 + 1e-9);
            CHECK(r.hi >= 0.8 - 1e-9);
        }
    }
}

TEST_CASE("covering radius scales linearly under domain scaling") {
    auto sq = Domain::unit_box(2);
    auto sq2 = Domain::box({0.0, 0.0}, {2.0, 2.0});
    auto eng = stream_engine(77, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet X(2), X2(2);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> p{u(eng), u(eng)};
        X.push_back(p);
        std::vector<double> q{2.0 * p[0], 2.0 * p[1]};
        X2.push_back(q);
    }
    auto r = covering_radius(sq, X, NormSpec::lp(2.0), {});
    auto r2 = covering_radius(sq2, X2, NormSpec::lp(2.0), {});
    CHECK(r2.value == Catch::Approx(2.0 * r.value).margin(3e-6));
}

TEST_CASE("adding a node never increases the certified radius") {
    auto sq = Domain::unit_box(2);
    auto eng = stream_engine(99, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet X(2);
    std::vector<double> p{u(eng), u(eng)};
    X.push_back(p);
    double prev = covering_radius(sq, X, NormSpec::lp(2.0), {}).hi;
    for (int i = 0; i < 6; ++i) {
        std::vector<double> q{u(eng), u(eng)};
        X.push_back(q);
        auto r = covering_radius(sq, X, NormSpec::lp(2.0), {});
        CHECK(r.lo <= prev + 1e-9);
        prev = r.hi;
    }
}

TEST_CASE("edge cases") {
    auto sq = Domain::unit_box(2);
    PointSet none(2);
    auto r = covering_radius(sq, none, NormSpec::lp(2.0), {});
    CHECK(r.infinite);

    auto L = Domain::builtin_mask("l_shape");
    PointSet one(2, {0.25, 0.25});
    CHECK_THROWS_AS(covering_radius(L, one, NormSpec::lp(2.0), {}), std::invalid_argument);
    CoverOptions mc;
    mc.mode = CoverOptions::Mode::MonteCarlo;
    mc.budget = 10000;
    CHECK_NOTHROW(covering_radius(L, one, NormSpec::lp(2.0), mc));
}
