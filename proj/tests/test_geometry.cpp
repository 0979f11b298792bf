#include <cmath>

#include "doctest.h"
#include "flatcluster/errors.hpp"
#include "flatcluster/geometry.hpp"
#include "flatcluster/pairwise.hpp"
#include "helpers.hpp"

using namespace flatcluster;
using testing_util::gaussian_vector;
using testing_util::line;
using testing_util::random_flat;

TEST_CASE("Flat construction errors") {
    CHECK_THROWS_AS(Flat(Vector::Zero(3), Matrix::Zero(3, 0)), InvalidInput);
    CHECK_THROWS_AS(Flat(Vector::Zero(3), Matrix::Identity(3, 3)), InvalidInput);
    CHECK_THROWS_AS(Flat(Vector::Zero(3), Matrix::Identity(2, 1)), InvalidInput);
    Matrix dup(3, 2);
    dup << 1, 2, 0, 0, 0, 0;
    CHECK_THROWS_AS(Flat(Vector::Zero(3), dup), DegenerateFlat);
    CHECK_THROWS_AS(Flat(Vector::Zero(3), Matrix::Zero(3, 1)), DegenerateFlat);
    Vector bad = Vector::Zero(3);
    bad(1) = std::nan("");
    CHECK_THROWS_AS(Flat(bad, Matrix::Identity(3, 1)), InvalidInput);
}

TEST_CASE("implicitize examples") {
    const auto xaxis = implicitize(line({0, 0}, {1, 0}));
    REQUIRE(xaxis.c.rows() == 1);
    CHECK(std::abs(xaxis.c(0, 0)) < 1e-15);
    CHECK(std::abs(xaxis.c(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(xaxis.e(0)) < 1e-15);

    Vector base(3);
    base << 0, 0, 5;
    const auto plane = implicitize(Flat(base, Matrix::Identity(3, 2)));
    REQUIRE(plane.c.rows() == 1);
    const double sign = plane.c(0, 2) > 0 ? 1.0 : -1.0;
    CHECK(sign * plane.c(0, 2) == doctest::Approx(1.0));
    CHECK(sign * plane.e(0) == doctest::Approx(5.0));

    RngStream rng(9);
    const Flat f = random_flat(6, 2, rng);
    const auto g = implicitize(f);
    CHECK((g.c * g.c.transpose() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i < 10; ++i) {
        const Vector x = f.point_at(gaussian_vector(2, rng));
        CHECK((g.c * x - g.e).norm() < 1e-9);
    }
}

TEST_CASE("ImplicitFlat requires orthonormal rows") {
    Matrix c(1, 2);
    c << 0, 2;
    CHECK_THROWS_AS(ImplicitFlat(c, Vector::Zero(1)), InvalidInput);
}

TEST_CASE("parametrize examples") {
    Matrix c(1, 2);
    c << 0, 1;
    Vector e(1);
    e << 3;
    const Flat f = parametrize(ImplicitFlat(c, e));
    CHECK(f.base()(1) == doctest::Approx(3.0));
    CHECK(f.base()(0) == doctest::Approx(0.0));
    CHECK(std::abs(f.directions()(0, 0)) == doctest::Approx(1.0));

    Matrix c3(2, 3);
    c3 << 1, 0, 0, 0, 1, 0;
    Vector e3(2);
    e3 << 1, 2;
    const Flat l = parametrize(ImplicitFlat(c3, e3));
    CHECK(l.dim() == 1);
    CHECK(l.base()(0) == doctest::Approx(1.0));
    CHECK(l.base()(1) == doctest::Approx(2.0));
    CHECK(l.base()(2) == doctest::Approx(0.0));
    CHECK(std::abs(l.directions()(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("round trip preserves the point set") {
    RngStream rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const Index d = 3 + trial % 8;
        const Index k = 1 + trial % (d - 1);
        const Flat f = random_flat(d, k, rng, 3.0);
        const Flat g = parametrize(implicitize(f));
        CHECK(g.dim() == k);
        CHECK(pair_projection(f, g).distance <= 1e-8);
        for (int i = 0; i < 5; ++i) {
            CHECK(distance_to_point(g, f.point_at(gaussian_vector(k, rng))) < 1e-8);
        }
    }
}

TEST_CASE("project_point examples and properties") {
    Vector p(2);
    p << 3, 4;
    const Vector q = project_point(line({0, 0}, {1, 0}), p);
    CHECK(q(0) == doctest::Approx(3.0));
    CHECK(std::abs(q(1)) < 1e-15);

    const Vector r = project_point(line({0, 0, 0}, {1, 0, 0}), Vector::Ones(3));
    CHECK((r - Vector::Unit(3, 0)).norm() < 1e-15);

    RngStream rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Flat f = random_flat(7, 3, rng);
        const Vector x = gaussian_vector(7, rng, 5.0);
        const Vector proj = project_point(f, x);
        CHECK((project_point(f, proj) - proj).norm() <= 1e-12);
        const double best = (x - proj).norm();
        for (int i = 0; i < 1000; ++i) {
            const Vector cand = f.point_at(gaussian_vector(3, rng, 3.0));
            CHECK((x - cand).norm() >= best);
        }
    }
}

TEST_CASE("isometries") {
    const Flat x = line({0, 0}, {1, 0});
    const Flat same = apply_isometry(x, Isometry::identity(2));
    CHECK(pair_projection(x, same).distance < 1e-15);

    Vector t(2);
    t << 0, 1;
    const Flat moved = apply_isometry(x, Isometry(Matrix::Identity(2, 2), t));
    Vector probe(2);
    probe << 17, 1;
    CHECK(distance_to_point(moved, probe) < 1e-14);

    RngStream rng(8);
    const auto iso = Isometry::random(6, rng, 2.0);
    CHECK((iso.rotation.transpose() * iso.rotation - Matrix::Identity(6, 6))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    CHECK_THROWS_AS(Isometry(Matrix::Ones(2, 2), Vector::Zero(2)), InvalidInput);
}

TEST_CASE("distance and midpoint commute with isometries") {
    RngStream rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const Index d = 4 + trial % 6;
        const Index k = 1 + trial % (d / 2);
        const Flat f = random_flat(d, k, rng);
        const Flat g = random_flat(d, k, rng);
        const auto iso = Isometry::random(d, rng, 3.0);
        const auto before = pair_projection(f, g);
        const auto after = pair_projection(apply_isometry(f, iso), apply_isometry(g, iso));
        CHECK(after.distance == doctest::Approx(before.distance).epsilon(1e-8));
        CHECK((after.midpoint - iso.apply(before.midpoint)).norm() <= 1e-8);
    }
}

TEST_CASE("general_position") {
    CHECK(general_position(line({0, 0, 0}, {1, 0, 0}), line({0, 0, 0}, {0, 1, 0})));
    CHECK_FALSE(general_position(line({0, 0, 0}, {1, 0, 0}), line({0, 1, 0}, {1, 0, 0})));
    RngStream rng(77);
    int hits = 0;
    for (int i = 0; i < 1000; ++i) {
        hits += general_position(random_flat(10, 3, rng), random_flat(10, 3, rng)) ? 1 : 0;
    }
    CHECK(hits == 1000);
}

TEST_CASE("Ball requires positive radius") {
    CHECK_THROWS_AS(Ball(Vector::Zero(2), 0.0), InvalidInput);
    CHECK(Ball(Vector::Zero(2)).radius == 1.0);
}

TEST_CASE("remove_trivial_coordinates") {
    RngStream rng(13);
    // Coordinate 2 is free in every flat: e_2 is one of the directions.
    std::vector<Flat> flats;
    for (int i = 0; i < 4; ++i) {
        Matrix dirs(5, 2);
        dirs.col(0) = gaussian_vector(5, rng);
        dirs.col(0)(2) = 0.0;
        dirs.col(1) = Vector::Unit(5, 2);
        flats.emplace_back(gaussian_vector(5, rng), dirs);
    }
    const auto reduced = remove_trivial_coordinates(flats);
    REQUIRE(reduced.kept == std::vector<Index>{0, 1, 3, 4});
    REQUIRE(reduced.flats.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(reduced.flats[i].ambient_dim() == 4);
        CHECK(reduced.flats[i].dim() == 1);
        const Vector probe = flats[i].point_at(gaussian_vector(2, rng));
        Vector dropped(4);
        dropped << probe(0), probe(1), probe(3), probe(4);
        CHECK(distance_to_point(reduced.flats[i], dropped) < 1e-9);
    }

    std::vector<Flat> generic = {random_flat(5, 2, rng), random_flat(5, 2, rng)};
    CHECK(remove_trivial_coordinates(generic).kept.size() == 5);
}
