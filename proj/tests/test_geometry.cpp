#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "optrec/geometry.hpp"
#include "optrec/rng.hpp"

using namespace optrec;

TEST_CASE("distance basics") {
    NormSpec l2 = NormSpec::lp(2.0);
    std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(distance(a, b, l2) == Catch::Approx(5.0));

    std::vector<double> one3{1.0, 1.0, 1.0};
    for (auto& n : {NormSpec::lp(1.0), NormSpec::lp(2.0), NormSpec::lp(3.5), NormSpec::linf()})
        CHECK(distance(one3, one3, n) == 0.0);

    std::vector<double> c{1.0, 1.0};
    CHECK(distance(a, c, NormSpec::linf()) == Catch::Approx(1.0));
    CHECK(distance(a, c, NormSpec::lp(1.0)) == Catch::Approx(2.0));

    CHECK_THROWS_AS(distance(a, one3, l2), std::invalid_argument);
}

TEST_CASE("weighted distance scales per axis") {
    NormSpec w = NormSpec::lp(2.0).with_weights({2.0, 1.0});
    std::vector<double> a{0.0, 0.0}, b{1.0, 1.0};
    CHECK(distance(a, b, w) == Catch::Approx(std::sqrt(5.0)));
    CHECK_THROWS_AS(NormSpec::lp(2.0).with_weights({1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 eng(stream_engine(42, 0));
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        for (std::size_t d : {1u, 2u, 5u}) {
            NormSpec norm = p == 3.0 ? NormSpec::lp(p).with_weights(std::vector<double>(d, 0.7))
                                     : NormSpec::lp(p);
            for (int rep = 0; rep < 2500; ++rep) {
                std::vector<double> x(d), y(d), z(d);
                for (auto& v : x) v = u(eng);
                for (auto& v : y) v = u(eng);
                for (auto& v : z) v = u(eng);
                double xy = distance(x, y, norm);
                double yx = distance(y, x, norm);
                CHECK(xy == Catch::Approx(yx));
                CHECK(distance(x, z, norm) <= xy + distance(y, z, norm) + 1e-12);
            }
        }
    }
    NormSpec inf = NormSpec::linf();
    for (int rep = 0; rep < 2500; ++rep) {
        std::vector<double> x{u(eng), u(eng)}, y{u(eng), u(eng)}, z{u(eng), u(eng)};
        CHECK(distance(x, z, inf) <= distance(x, y, inf) + distance(y, z, inf) + 1e-12);
    }
}

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(2, NormSpec::lp(2.0)) == Catch::Approx(M_PI));
    CHECK(unit_ball_volume(7, NormSpec::linf()) == Catch::Approx(128.0));
    CHECK(unit_ball_volume(3, NormSpec::lp(1.0)) == Catch::Approx(4.0 / 3.0));
    CHECK(unit_ball_volume(10, NormSpec::lp(2.0)) == Catch::Approx(std::pow(M_PI, 5) / 120.0));
    CHECK(unit_ball_volume(1, NormSpec::lp(2.0)) == Catch::Approx(2.0));
    // axis weights scale by the product of inverse weights
    CHECK(unit_ball_volume(2, NormSpec::lp(2.0).with_weights({2.0, 4.0})) ==
          Catch::Approx(M_PI / 8.0));
}

TEST_CASE("unit ball volume agrees with rejection Monte Carlo") {
    // oracle: fraction of [-1,1]^d landing inside the ball
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        for (std::size_t d : {2u, 4u, 6u}) {
            NormSpec norm = std::isinf(p) ? NormSpec::linf() : NormSpec::lp(p);
            const std::size_t budget = 200000;
            auto eng = stream_engine(7, d + static_cast<std::size_t>(10 * p));
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            std::vector<double> x(d);
            std::size_t hits = 0;
            for (std::size_t s = 0; s < budget; ++s) {
                for (auto& v : x) v = u(eng);
                if (norm_of(x, norm) <= 1.0) ++hits;
            }
            double cube = std::pow(2.0, static_cast<double>(d));
            double phat = static_cast<double>(hits) / budget;
            double est = cube * phat;
            double se = cube * std::sqrt(phat * (1 - phat) / budget);
            double exact = unit_ball_volume(d, norm);
            INFO("p=" << p << " d=" << d);
            CHECK(std::abs(est - exact) <= 3.5 * se);
        }
    }
}

TEST_CASE("ball volume root asymptotic") {
    // p = 2: d^(1/2) * exact root tends to sqrt(2 pi e) ~ 4.1327
    double target = std::sqrt(2.0 * M_PI * std::exp(1.0));
    auto ratio_at = [&](std::size_t d) {
        return std::pow(unit_ball_volume(d, NormSpec::lp(2.0)), 1.0 / d) * std::sqrt(double(d)) /
               target;
    };
    CHECK(std::abs(ratio_at(200) - 1.0) < 0.02); // 0.9840 computed
    CHECK(std::abs(ratio_at(400) - 1.0) < 0.01); // 0.9911 computed
    CHECK(ball_volume_root_asymptotic(1000, 2.0) * std::sqrt(1000.0) / 2.0 ==
          Catch::Approx(target / 2.0));

    // p = 1, d = 10: formula 2e/10; the exact root is ~23% below at this d
    CHECK(ball_volume_root_asymptotic(10, 1.0) == Catch::Approx(2.0 * std::exp(1.0) / 10.0));
    double exact_root = std::pow(unit_ball_volume(10, NormSpec::lp(1.0)), 0.1);
    double r = ball_volume_root_asymptotic(10, 1.0) / exact_root;
    CHECK(r == Catch::Approx(1.23104).epsilon(1e-4));

    // p = 2, d = 2: both routes computed; ratio is sqrt(e) at this small d
    double asy = ball_volume_root_asymptotic(2, 2.0);
    CHECK(asy == Catch::Approx(2.0 * std::tgamma(1.5) * std::sqrt(std::exp(1.0))));
    CHECK(asy / std::sqrt(M_PI) == Catch::Approx(std::sqrt(std::exp(1.0))).epsilon(1e-12));

    CHECK_THROWS_AS(ball_volume_root_asymptotic(5, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("covering constant bracket") {
    auto b2 = covering_constant_bracket(2, NormSpec::linf());
    CHECK(b2.lower == 1.0);
    CHECK(b2.upper == 1.0);

    auto b10 = covering_constant_bracket(10, NormSpec::lp(2.0));
    CHECK(b10.lower == 1.0);
    CHECK(b10.upper == Catch::Approx(81.3661753824).epsilon(1e-9));
    CHECK(b10.upper_finite);
    CHECK_FALSE(b10.warning);

    // d = 2 evaluates the Rogers expression verbatim (negative middle term)
    auto bb = covering_constant_bracket(2, NormSpec::lp(2.0));
    CHECK(bb.upper == Catch::Approx(2.0 * std::log(2.0) + 2.0 * std::log(std::log(2.0)) + 10.0));

    // root tends to 1
    auto b100 = covering_constant_bracket(100, NormSpec::lp(2.0));
    CHECK(std::pow(b100.upper, 0.01) <= 1.08);

    // d = 1: Rogers expression undefined, warning + infinite upper
    auto b1 = covering_constant_bracket(1, NormSpec::lp(2.0));
    CHECK(b1.warning);
    CHECK_FALSE(b1.upper_finite);
    CHECK(std::isinf(b1.upper));
    // lower <= upper whenever finite
    CHECK(b10.lower <= b10.upper);
}
