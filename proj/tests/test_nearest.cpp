#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "optrec/nearest.hpp"
#include "optrec/rng.hpp"

using namespace optrec;

namespace {
std::pair<std::size_t, double> brute(const PointSet& nodes, std::span<const double> x,
                                     const NormSpec& norm) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double d = distance(x, nodes.point(i), norm);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return {best, bd};
}
} // namespace

TEST_CASE("bucket grid equals brute force") {
    auto eng = stream_engine(123, 0);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    for (std::size_t d : {1u, 2u, 3u}) {
        std::vector<NormSpec> norms{NormSpec::lp(1.0), NormSpec::lp(2.0), NormSpec::lp(2.7),
                                    NormSpec::linf(),
                                    NormSpec::lp(2.0).with_weights(std::vector<double>(d, 0.5))};
        for (const auto& norm : norms) {
            PointSet nodes(d);
            std::vector<double> x(d);
            for (int i = 0; i < 300; ++i) { // above the grid threshold
                for (auto& v : x) v = u(eng);
                nodes.push_back(x);
            }
            NearestQuery nq(nodes, norm);
            for (int rep = 0; rep < 2000; ++rep) {
                for (auto& v : x) v = u(eng);
                auto [bi, bd] = brute(nodes, x, norm);
                auto [gi, gd] = nq.query(x);
                REQUIRE(gd == Catch::Approx(bd).margin(1e-12));
                REQUIRE(gi == bi);
            }
        }
    }
}

TEST_CASE("small sets use brute force and break ties by lowest index") {
    PointSet nodes(2, {0.0, 0.0, 1.0, 0.0});
    NearestQuery nq(nodes, NormSpec::lp(2.0));
    std::vector<double> mid{0.5, 0.3};
    CHECK(nq.nearest_index(mid) == 0); // exact tie -> lowest index
    CHECK(nq.min_distance(std::vector<double>{1.0, 1.0}) == Catch::Approx(1.0));
}
