#pragma once

#include <random>

#include "flatcluster/geometry.hpp"
#include "flatcluster/rng.hpp"

namespace testing_util {

using namespace flatcluster;

inline Vector gaussian_vector(Index d, RngStream& rng, double scale = 1.0) {
    std::normal_distribution<double> n01;
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = scale * n01(rng);
    return v;
}

inline Flat random_flat(Index d, Index k, RngStream& rng, double base_scale = 1.0) {
    Matrix dirs(d, k);
    for (Index c = 0; c < k; ++c) dirs.col(c) = gaussian_vector(d, rng);
    return Flat(gaussian_vector(d, rng, base_scale), dirs);
}

inline Flat line(std::initializer_list<double> base, std::initializer_list<double> dir) {
    Vector b(static_cast<Index>(base.size()));
    Matrix m(static_cast<Index>(dir.size()), 1);
    Index i = 0;
    for (double x : base) b(i++) = x;
    i = 0;
    for (double x : dir) m(i++, 0) = x;
    return Flat(b, m);
}

}  // namespace testing_util
