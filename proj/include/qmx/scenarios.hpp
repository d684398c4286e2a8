#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qmx/lattice.hpp"
#include "qmx/matrix.hpp"

namespace qmx::scenarios {

// Reference inputs for the built-in verification scenarios: a rank-2 paving
// q-matroid on GF(2)^4 represented over GF(4), together with its conjugate
// representation and the five 2-dimensional spaces of rank 1.

inline Field gf4() { return FieldContext::make(2, 2); }
inline Field gf2() { return FieldContext::make(2, 1); }

/// 2x4 generator over GF(4) of the rank-2 paving q-matroid on GF(2)^4.
inline Matrix paving_generator(const Field& f4) { return Matrix::parse(f4, "1,2,0,3;0,0,1,2"); }

/// The same matroid's other representation: entrywise conjugate of the
/// generator (the image under the Frobenius of GF(4)).
inline Matrix paving_generator_conjugate(const Field& f4) {
  return Matrix::parse(f4, "1,3,0,2;0,0,1,3");
}

/// Generators of the five 2-dimensional rank-1 spaces of the paving matroid.
inline std::array<Matrix, 5> paving_family_generators(const Field& f2) {
  return {Matrix::parse(f2, "1,0,0,0;0,1,0,0"), Matrix::parse(f2, "1,0,1,1;0,1,0,1"),
          Matrix::parse(f2, "1,0,0,1;0,0,1,1"), Matrix::parse(f2, "0,1,1,0;0,0,0,1"),
          Matrix::parse(f2, "1,1,0,1;0,0,1,0")};
}

inline std::vector<std::uint32_t> paving_family_indices(const LatticeContext& lat) {
  Field f2 = lat.prime_field();
  std::vector<std::uint32_t> out;
  for (const Matrix& y : paving_family_generators(f2)) out.push_back(lat.canonicalize(y).index);
  return out;
}

/// Expected rank table of the paving matroid: 1 on the five family spaces,
/// min{2, dim} everywhere else.
inline std::vector<std::uint8_t> paving_expected_table(const LatticeContext& lat) {
  std::vector<std::uint8_t> t(lat.size());
  for (std::uint32_t i = 0; i < lat.size(); ++i)
    t[i] = static_cast<std::uint8_t>(std::min<std::uint32_t>(2, lat.dim_of(i)));
  for (std::uint32_t i : paving_family_indices(lat)) t[i] = 1;
  return t;
}

/// Expected rank table of U_{1,2}(2) (+) U_{1,2}(2) on GF(2)^4: rank 1 on
/// <e1,e2> and <e3,e4>, min{2, dim} everywhere else.
inline std::vector<std::uint8_t> u12_sum_expected_table(const LatticeContext& lat) {
  std::vector<std::uint8_t> t(lat.size());
  for (std::uint32_t i = 0; i < lat.size(); ++i)
    t[i] = static_cast<std::uint8_t>(std::min<std::uint32_t>(2, lat.dim_of(i)));
  Field f2 = lat.prime_field();
  t[lat.canonicalize(Matrix::parse(f2, "1,0,0,0;0,1,0,0")).index] = 1;
  t[lat.canonicalize(Matrix::parse(f2, "0,0,1,0;0,0,0,1")).index] = 1;
  return t;
}

}  // namespace qmx::scenarios
