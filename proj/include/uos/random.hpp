#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "uos/common.hpp"

namespace uos {

using Rng = std::mt19937_64;

// Stable 64-bit mixing of a seed with any number of integer tags. Used to
// give every trial, restart and search branch its own independent stream.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

// Engine seeded through derive_seed so nearby user seeds give unrelated streams.
inline Rng make_rng(std::uint64_t seed) { return Rng(derive_seed(seed, {})); }

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Orthonormal basis of the column span of a full-column-rank matrix; the
// result has the same shape as the input.
Matrix orthonormalize(const Matrix& a);

}  // namespace uos
