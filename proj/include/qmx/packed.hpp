#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "qmx/matrix.hpp"

namespace qmx {

/// Row vectors of GF(q)^n (q prime) packed into one machine word: coordinate
/// i occupies bits [i*bpc, (i+1)*bpc). For q = 2 a row is a plain bitmask and
/// row addition is XOR. All methods are pure; a PackedSpace is freely shared.
struct PackedSpace {
  std::uint32_t q = 2;
  std::uint32_t n = 0;
  std::uint32_t bpc = 1;          // bits per coordinate
  std::uint64_t digit_mask = 1;   // low bpc bits

  PackedSpace() = default;

  PackedSpace(std::uint32_t q_, std::uint32_t n_) : q(q_), n(n_) {
    bpc = 1;
    while ((std::uint64_t(1) << bpc) < q) ++bpc;
    digit_mask = (std::uint64_t(1) << bpc) - 1;
    if (std::uint64_t(n) * bpc > 64) throw std::invalid_argument("packed row does not fit a word");
  }

  std::uint32_t row_bits() const { return n * bpc; }

  Code get(std::uint64_t row, std::uint32_t i) const {
    return static_cast<Code>((row >> (i * bpc)) & digit_mask);
  }

  std::uint64_t with(std::uint64_t row, std::uint32_t i, Code v) const {
    std::uint64_t shift = std::uint64_t(i) * bpc;
    return (row & ~(digit_mask << shift)) | (std::uint64_t(v) << shift);
  }

  std::uint64_t pack(std::span<const Code> v) const {
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < n; ++i) r |= std::uint64_t(v[i] % q) << (i * bpc);
    return r;
  }

  void unpack(std::uint64_t row, std::span<Code> out) const {
    for (std::uint32_t i = 0; i < n; ++i) out[i] = get(row, i);
  }

  /// a + c*b, coordinatewise mod q.
  std::uint64_t add_scaled(std::uint64_t a, std::uint64_t b, Code c) const {
    if (q == 2) return c ? a ^ b : a;
    if (c == 0) return a;
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      r |= std::uint64_t((get(a, i) + std::uint64_t(c) * get(b, i)) % q) << (i * bpc);
    return r;
  }

  std::uint64_t scale(std::uint64_t a, Code c) const {
    if (q == 2) return c ? a : 0;
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      r |= std::uint64_t(std::uint64_t(c) * get(a, i) % q) << (i * bpc);
    return r;
  }

  Code negate_scalar(Code c) const { return static_cast<Code>((q - c) % q); }

  Code inv_scalar(Code c) const {  // q prime, c != 0
    std::uint64_t r = 1, b = c, e = q - 2;
    while (e > 0) {
      if (e & 1) r = r * b % q;
      b = b * b % q;
      e >>= 1;
    }
    return static_cast<Code>(r);
  }

  /// Index of the leftmost (lowest) nonzero coordinate, or -1 for the zero row.
  int pivot(std::uint64_t row) const {
    if (row == 0) return -1;
    return std::countr_zero(row) / static_cast<int>(bpc);
  }

  /// In-place RREF of the rows in [rows, rows+count): canonical basis of the
  /// row space, sorted by pivot, zero rows dropped. Returns the rank.
  std::size_t rref(std::uint64_t* rows, std::size_t count) const {
    std::size_t rank = 0;
    for (std::size_t r = 0; r < count; ++r) {
      std::uint64_t row = rows[r];
      // reduce against existing pivot rows
      for (std::size_t i = 0; i < rank; ++i) {
        int p = pivot(rows[i]);
        Code c = get(row, static_cast<std::uint32_t>(p));
        if (c != 0) row = add_scaled(row, rows[i], negate_scalar(c));
      }
      if (row == 0) continue;
      int p = pivot(row);
      Code lead = get(row, static_cast<std::uint32_t>(p));
      if (lead != 1) row = scale(row, inv_scalar(lead));
      // back-eliminate this pivot from earlier rows, keep rows pivot-sorted
      std::size_t pos = rank;
      for (std::size_t i = 0; i < rank; ++i) {
        Code c = get(rows[i], static_cast<std::uint32_t>(p));
        if (c != 0) rows[i] = add_scaled(rows[i], row, negate_scalar(c));
        if (pivot(rows[i]) > p && pos == rank) pos = i;
      }
      for (std::size_t i = rank; i > pos; --i) rows[i] = rows[i - 1];
      rows[pos] = row;
      ++rank;
    }
    return rank;
  }

  std::size_t rref(std::vector<std::uint64_t>& rows) const {
    std::size_t rank = rref(rows.data(), rows.size());
    rows.resize(rank);
    return rank;
  }

  /// Reduces `row` against an RREF basis; the result is zero iff the row
  /// lies in the basis's span.
  std::uint64_t reduce(std::uint64_t row, std::span<const std::uint64_t> basis) const {
    for (std::uint64_t b : basis) {
      Code c = get(row, static_cast<std::uint32_t>(pivot(b)));
      if (c != 0) row = add_scaled(row, b, negate_scalar(c));
    }
    return row;
  }

  std::uint64_t pack_matrix_row(const Matrix& m, std::size_t r) const {
    std::uint64_t row = 0;
    for (std::uint32_t i = 0; i < n; ++i) row |= std::uint64_t(m.at(r, i) % q) << (i * bpc);
    return row;
  }
};

}  // namespace qmx
