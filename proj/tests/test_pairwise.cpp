#include <cmath>

#include "doctest.h"
#include "flatcluster/errors.hpp"
#include "flatcluster/pairwise.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace flatcluster;
using testing_util::gaussian_vector;
using testing_util::line;
using testing_util::random_flat;

TEST_CASE("pair_projection on intersecting axes") {
    const auto p = pair_projection(line({0, 0}, {1, 0}), line({0, 0}, {0, 1}));
    CHECK(p.distance < 1e-15);
    CHECK(p.midpoint.norm() < 1e-15);
}

TEST_CASE("pair_projection on symmetric skew lines in R^4") {
    const auto p = pair_projection(line({1, 0, 0, 0}, {0, 1, 0, 0}), line({-1, 0, 0, 0}, {0, 0, 1, 0}));
    CHECK(p.distance == doctest::Approx(2.0));
    CHECK(p.midpoint.norm() < 1e-14);
    CHECK((p.closest_i - Vector::Unit(4, 0)).norm() < 1e-14);
    CHECK((p.closest_j + Vector::Unit(4, 0)).norm() < 1e-14);
    CHECK_FALSE(p.degenerate);
}

TEST_CASE("pair_projection matches the parametric oracle") {
    RngStream rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const Index d = 4 + trial % 9;
        const Index k = 1 + (trial / 9) % (d / 2);
        const Flat f = random_flat(d, k, rng, 2.0);
        const Flat g = random_flat(d, k, rng, 2.0);
        const auto got = pair_projection(f, g);
        const auto ref = oracle::pair(f, g);
        CHECK(std::abs(got.distance - ref.distance) <= 1e-8 * (1.0 + ref.distance));
        CHECK((got.midpoint - ref.midpoint).norm() <= 1e-6);
    }
}

TEST_CASE("pair_projection invariants") {
    RngStream rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const Index d = 3 + trial % 10;
        const Index k1 = 1 + trial % (d - 1);
        const Index k2 = 1 + (trial / 3) % (d - 1);
        const Flat f = random_flat(d, k1, rng, 3.0);
        const Flat g = random_flat(d, k2, rng, 3.0);
        const auto p = pair_projection(f, g);
        CHECK((p.midpoint - 0.5 * (p.closest_i + p.closest_j)).norm() <= 1e-10);
        CHECK(std::abs(p.distance - (p.closest_i - p.closest_j).norm()) <= 1e-10);
        CHECK(distance_to_point(f, p.closest_i) <= 1e-8);
        CHECK(distance_to_point(g, p.closest_j) <= 1e-8);
        CHECK(p.distance >= 0.0);

        const Vector gap = p.closest_i - p.closest_j;
        CHECK((f.basis().transpose() * gap).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK((g.basis().transpose() * gap).cwiseAbs().maxCoeff() <= 1e-8);

        const auto q = pair_projection(g, f);
        CHECK(std::abs(q.distance - p.distance) <= 1e-12 * (1.0 + p.distance));
        CHECK((q.midpoint - p.midpoint).norm() <= 1e-12 * (1.0 + p.midpoint.norm()));

        for (int s = 0; s < 20; ++s) {
            const Vector a = f.point_at(gaussian_vector(k1, rng, 2.0));
            const Vector b = g.point_at(gaussian_vector(k2, rng, 2.0));
            CHECK(p.distance <= (a - b).norm() + 1e-12);
        }
        CHECK(pair_projection(f, f).distance <= 1e-10);
    }
}

TEST_CASE("pointwise translation scaling with shared directions") {
    RngStream rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const Index d = 6 + trial % 20;
        const Index k = 1 + trial % ((d - 1) / 2);
        Matrix u(d, k), v(d, k);
        for (Index c = 0; c < k; ++c) {
            u.col(c) = gaussian_vector(d, rng);
            v.col(c) = gaussian_vector(d, rng);
        }
        const double one = pair_projection(Flat(-Vector::Unit(d, 0), u), Flat(Vector::Unit(d, 0), v)).distance;
        for (double delta : {2.0, 10.0, 100.0}) {
            const double scaled =
                pair_projection(Flat(-delta * Vector::Unit(d, 0), u), Flat(delta * Vector::Unit(d, 0), v))
                    .distance;
            CHECK(std::abs(scaled - delta * one) <= 1e-10 * delta * one);
        }
    }
}

TEST_CASE("parallel flats are flagged degenerate") {
    const auto p = pair_projection(line({0, 0, 0}, {1, 0, 0}), line({0, 3, 0}, {1, 0, 0}));
    CHECK(p.degenerate);
    CHECK(p.distance == doctest::Approx(3.0));
    CHECK(p.midpoint(1) == doctest::Approx(1.5));
}

TEST_CASE("pair_projection rejects mismatched dimensions") {
    CHECK_THROWS_AS(pair_projection(line({0, 0}, {1, 0}), line({0, 0, 0}, {1, 0, 0})),
                    InvalidInput);
}

TEST_CASE("all_pairs ordering, counts and worker independence") {
    CHECK(pair_count(20) == 190);
    CHECK(pair_count(2) == 1);
    CHECK(pair_count(1) == 0);

    RngStream rng(404);
    std::vector<Flat> flats;
    for (int i = 0; i < 20; ++i) flats.push_back(random_flat(9, 3, rng));
    const auto serial = all_pairs(flats, kDefaultRankTol, 1);
    const auto threaded = all_pairs(flats, kDefaultRankTol, 4);
    REQUIRE(serial.size() == 190);
    REQUIRE(threaded.size() == 190);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = i + 1; j < 20; ++j, ++idx) {
            CHECK(serial[idx].i == i);
            CHECK(serial[idx].j == j);
            CHECK(serial[idx].distance == threaded[idx].distance);
            CHECK(serial[idx].midpoint == threaded[idx].midpoint);
            const auto direct = pair_projection(flats[i], flats[j]);
            CHECK(serial[idx].distance == doctest::Approx(direct.distance).epsilon(1e-12));
        }
    }

    const std::vector<Flat> two = {flats[0], flats[1]};
    CHECK(all_pairs(two).size() == 1);
    const std::vector<Flat> one = {flats[0]};
    CHECK_THROWS_AS(all_pairs(one), InvalidInput);
    const std::vector<Flat> mixed = {flats[0], random_flat(5, 2, rng)};
    CHECK_THROWS_AS(all_pairs(mixed), InvalidInput);
}
