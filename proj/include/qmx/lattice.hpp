#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qmx/packed.hpp"

namespace qmx {

inline constexpr std::uint64_t kDefaultLatticeCap = std::uint64_t(1) << 23;

namespace detail {

inline std::uint64_t pow_saturating(std::uint64_t q, std::uint32_t e) {
  unsigned __int128 r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    r *= q;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

inline std::uint64_t gauss_binom_impl(std::uint32_t n, std::uint32_t k, std::uint64_t q,
                                      bool saturate) {
  if (k > n) throw std::invalid_argument("gauss_binom requires 0 <= k <= n");
  constexpr std::uint64_t sat = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 r = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint64_t num = pow_saturating(q, n - i);
    std::uint64_t den = pow_saturating(q, i + 1);
    if (num == sat || den == sat) {
      if (saturate) return sat;
      throw std::overflow_error("gauss_binom overflow");
    }
    unsigned __int128 prod = r * (num - 1);
    if (prod / (num - 1) != r || prod > (unsigned __int128)sat * (den - 1)) {
      if (saturate) return sat;
      throw std::overflow_error("gauss_binom overflow");
    }
    r = prod / (den - 1);  // exact: every q-binomial prefix is an integer
    if (r > sat) {
      if (saturate) return sat;
      throw std::overflow_error("gauss_binom overflow");
    }
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace detail

/// Number of k-dimensional subspaces of GF(q)^n, computed exactly.
inline std::uint64_t gauss_binom(std::uint32_t n, std::uint32_t k, std::uint64_t q) {
  return detail::gauss_binom_impl(n, k, q, false);
}

/// Like gauss_binom but returns UINT64_MAX instead of throwing on overflow;
/// used for cap checks where only "too many" matters.
inline std::uint64_t gauss_binom_saturating(std::uint32_t n, std::uint32_t k, std::uint64_t q) {
  return detail::gauss_binom_impl(n, k, q, true);
}

class LatticeContext;

/// Lightweight reference to one subspace of a materialized lattice. Two
/// handles are equal iff they index the same subspace of the same ground
/// space; the canonical RREF basis is read from the lattice on demand.
struct SubspaceHandle {
  const LatticeContext* lattice = nullptr;
  std::uint32_t index = 0;

  std::uint32_t dim() const;
  std::span<const std::uint64_t> rows() const;
  Matrix basis_matrix() const;
  std::string text() const;

  bool operator==(const SubspaceHandle& o) const;
};

/// The full subspace lattice of GF(q)^n (q prime), every subspace stored by
/// its canonical RREF basis and indexed densely: dimension ascending, then
/// lexicographically by the tuple of packed basis rows. Immutable once built;
/// all queries are safe concurrently.
class LatticeContext {
 public:
  static std::shared_ptr<const LatticeContext> build(std::uint32_t q, std::uint32_t n,
                                                     std::uint64_t cap = kDefaultLatticeCap) {
    return std::shared_ptr<const LatticeContext>(new LatticeContext(q, n, cap));
  }

  std::uint32_t q() const noexcept { return ps_.q; }
  std::uint32_t n() const noexcept { return ps_.n; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(dims_.size()); }
  const PackedSpace& packed() const noexcept { return ps_; }
  const Field& prime_field() const noexcept { return prime_field_; }

  std::uint32_t dim_of(std::uint32_t idx) const { return dims_[idx]; }
  std::uint32_t dim_first(std::uint32_t d) const { return dim_first_[d]; }
  std::uint32_t dim_count(std::uint32_t d) const { return dim_first_[d + 1] - dim_first_[d]; }
  std::uint32_t zero_index() const { return 0; }
  std::uint32_t full_index() const { return size() - 1; }

  std::span<const std::uint64_t> rows_of(std::uint32_t idx) const {
    std::uint32_t d = dims_[idx];
    std::size_t off = row_offset_[d] + std::size_t(idx - dim_first_[d]) * d;
    return {rows_flat_.data() + off, d};
  }

  SubspaceHandle handle(std::uint32_t idx) const { return {this, idx}; }

  /// Index of a subspace given rows already in canonical RREF.
  std::uint32_t index_of(std::span<const std::uint64_t> rref_rows) const {
    auto it = index_.find(make_key(rref_rows.data(), rref_rows.size()));
    if (it == index_.end()) throw std::logic_error("subspace not in lattice index");
    return it->second;
  }

  /// Canonical index of the span of arbitrary packed rows (RREFs a copy).
  std::uint32_t span_index(std::span<const std::uint64_t> any_rows) const {
    std::vector<std::uint64_t> buf(any_rows.begin(), any_rows.end());
    std::size_t rank = ps_.rref(buf.data(), buf.size());
    return index_of({buf.data(), rank});
  }

  /// Handle of the row space of a matrix over the prime field GF(q).
  SubspaceHandle canonicalize(const Matrix& y) const {
    if (y.field()->degree() != 1 || y.field()->order() != q())
      throw std::invalid_argument("canonicalize expects a matrix over the lattice base field");
    if (y.cols() != n() && y.rows() != 0)
      throw std::invalid_argument("canonicalize column count mismatch");
    std::vector<std::uint64_t> rows(y.rows());
    for (std::size_t r = 0; r < y.rows(); ++r) rows[r] = ps_.pack_matrix_row(y, r);
    ps_.rref(rows);
    return handle(index_of(rows));
  }

  // --- lattice operations ---

  std::uint32_t join(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return a;
    if (dims_[a] == 0) return b;
    if (dims_[b] == 0) return a;
    std::uint64_t buf[128];
    auto ra = rows_of(a), rb = rows_of(b);
    std::copy(ra.begin(), ra.end(), buf);
    std::copy(rb.begin(), rb.end(), buf + ra.size());
    std::size_t rank = ps_.rref(buf, ra.size() + rb.size());
    return index_of({buf, rank});
  }

  std::uint32_t meet(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return a;
    if (dims_[a] == 0 || dims_[b] == 0) return zero_index();
    if (contains(a, b)) return b;
    if (contains(b, a)) return a;
    if (zassenhaus_ok_) return meet_zassenhaus(a, b);
    return meet_generic(a, b);
  }

  bool contains(std::uint32_t outer, std::uint32_t inner) const {
    if (dims_[inner] > dims_[outer]) return false;
    auto basis = rows_of(outer);
    for (std::uint64_t r : rows_of(inner))
      if (ps_.reduce(r, basis) != 0) return false;
    return true;
  }

  /// Visits every codimension-1 subspace of V exactly once, in a fixed
  /// deterministic order. The callback returns false to stop early; the
  /// function returns false iff it was stopped.
  template <class F>
  bool for_each_cover_below(std::uint32_t v, F&& f) const {
    std::uint32_t d = dims_[v];
    if (d == 0) return true;
    auto rows = rows_of(v);
    std::uint64_t buf[64];
    const std::uint32_t qq = q();
    // Hyperplanes correspond to nonzero functionals on the coordinate space
    // of V, normalized so the first nonzero coefficient is 1: coefficient j
    // is the position of that leading 1, the digits above j run freely.
    for (std::uint32_t j = 0; j < d; ++j) {
      std::uint64_t combos = 1;
      for (std::uint32_t t = j + 1; t < d; ++t) combos *= qq;
      for (std::uint64_t c = 0; c < combos; ++c) {
        std::size_t out = 0;
        for (std::uint32_t i = 0; i < j; ++i) buf[out++] = rows[i];
        std::uint64_t rem = c;
        for (std::uint32_t i = j + 1; i < d; ++i) {
          Code phi = static_cast<Code>(rem % qq);
          rem /= qq;
          buf[out++] = ps_.add_scaled(rows[i], rows[j], ps_.negate_scalar(phi));
        }
        std::size_t rank = ps_.rref(buf, out);
        if (!f(index_of({buf, rank}))) return false;
      }
    }
    return true;
  }

  std::vector<std::uint32_t> covers_below(std::uint32_t v) const {
    std::vector<std::uint32_t> out;
    for_each_cover_below(v, [&](std::uint32_t h) {
      out.push_back(h);
      return true;
    });
    return out;
  }

 private:
  using Key = unsigned __int128;

  struct KeyHash {
    std::size_t operator()(Key k) const noexcept {
      std::uint64_t lo = static_cast<std::uint64_t>(k);
      std::uint64_t hi = static_cast<std::uint64_t>(k >> 64);
      std::uint64_t x = lo ^ (hi * 0x9e3779b97f4a7c15ULL);
      x ^= x >> 30;
      x *= 0xbf58476d1ce4e5b9ULL;
      x ^= x >> 27;
      x *= 0x94d049bb133111ebULL;
      x ^= x >> 31;
      return static_cast<std::size_t>(x);
    }
  };

  LatticeContext(std::uint32_t q, std::uint32_t n, std::uint64_t cap) : ps_(q, n) {
    if (!detail::is_prime(q)) throw std::invalid_argument("lattice base field must be prime");
    if (n == 0) throw std::invalid_argument("ambient dimension must be positive");
    if (std::uint64_t(ps_.row_bits()) * n > 128)
      throw std::invalid_argument("lattice basis key exceeds 128 bits");
    prime_field_ = FieldContext::make(q, 1);

    std::uint64_t total = 0;
    std::vector<std::uint64_t> counts(n + 1);
    for (std::uint32_t k = 0; k <= n; ++k) {
      counts[k] = gauss_binom_saturating(n, k, q);
      if (counts[k] > std::numeric_limits<std::uint64_t>::max() - total)
        total = std::numeric_limits<std::uint64_t>::max();
      else
        total += counts[k];
    }
    if (total > cap) throw CapExceeded("subspace lattice cap exceeded", total, cap);

    dims_.reserve(total);
    dim_first_.assign(n + 2, 0);
    row_offset_.assign(n + 2, 0);
    index_.reserve(total);

    if (zassenhaus_fits()) {
      ps2_ = PackedSpace(q, 2 * n);
      zassenhaus_ok_ = true;
    }

    for (std::uint32_t d = 0; d <= n; ++d) {
      dim_first_[d] = static_cast<std::uint32_t>(dims_.size());
      row_offset_[d] = rows_flat_.size();
      enumerate_dimension(d, counts[d]);
    }
    dim_first_[n + 1] = static_cast<std::uint32_t>(dims_.size());
    row_offset_[n + 1] = rows_flat_.size();
  }

  bool zassenhaus_fits() const { return std::uint64_t(2) * ps_.n * ps_.bpc <= 64; }

  Key make_key(const std::uint64_t* rows, std::size_t count) const {
    // Injective: basis rows are nonzero, so the folded value recovers the
    // row count from its highest nonzero chunk.
    Key k = 0;
    for (std::size_t i = count; i-- > 0;) k = (k << ps_.row_bits()) | rows[i];
    return k;
  }

  /// Generates all RREF bases of dimension d by pivot profile and stores them
  /// in canonical (packed-row lexicographic) order.
  void enumerate_dimension(std::uint32_t d, std::uint64_t expected) {
    const std::uint32_t n = ps_.n;
    const std::uint32_t qq = ps_.q;
    if (d == 0) {
      dims_.push_back(0);
      index_.emplace(make_key(nullptr, 0), static_cast<std::uint32_t>(dims_.size()) - 1);
      return;
    }
    std::vector<std::uint64_t> bases;  // d consecutive words per subspace
    bases.reserve(expected * d);

    std::vector<std::uint32_t> profile(d);
    std::iota(profile.begin(), profile.end(), 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> free_cells;  // (row, col)
    std::vector<std::uint64_t> rows(d);
    while (true) {
      free_cells.clear();
      for (std::uint32_t i = 0; i < d; ++i) {
        rows[i] = ps_.with(0, profile[i], 1);
        for (std::uint32_t c = profile[i] + 1; c < n; ++c) {
          bool is_pivot = std::binary_search(profile.begin(), profile.end(), c);
          if (!is_pivot) free_cells.emplace_back(i, c);
        }
      }
      // Odometer over the free cells, last cell fastest.
      std::vector<Code> vals(free_cells.size(), 0);
      while (true) {
        for (std::uint64_t r : rows) bases.push_back(r);
        std::size_t cell = free_cells.size();
        while (cell > 0) {
          --cell;
          auto [ri, ci] = free_cells[cell];
          if (++vals[cell] < qq) {
            rows[ri] = ps_.with(rows[ri], ci, vals[cell]);
            break;
          }
          vals[cell] = 0;
          rows[ri] = ps_.with(rows[ri], ci, 0);
          if (cell == 0) {
            cell = SIZE_MAX;
            break;
          }
        }
        if (free_cells.empty() || cell == SIZE_MAX) break;
      }
      // next pivot-column combination
      std::uint32_t i = d;
      while (i > 0) {
        --i;
        if (profile[i] + (d - i) < n) {
          ++profile[i];
          for (std::uint32_t j = i + 1; j < d; ++j) profile[j] = profile[j - 1] + 1;
          break;
        }
        if (i == 0) {
          i = UINT32_MAX;
          break;
        }
      }
      if (i == UINT32_MAX) break;
    }

    std::size_t count = bases.size() / d;
    if (count != expected) throw std::logic_error("subspace enumeration count mismatch");
    std::vector<std::uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const std::uint64_t* ra = bases.data() + std::size_t(a) * d;
      const std::uint64_t* rb = bases.data() + std::size_t(b) * d;
      return std::lexicographical_compare(ra, ra + d, rb, rb + d);
    });
    for (std::uint32_t o : order) {
      const std::uint64_t* src = bases.data() + std::size_t(o) * d;
      std::uint32_t idx = static_cast<std::uint32_t>(dims_.size());
      dims_.push_back(static_cast<std::uint8_t>(d));
      rows_flat_.insert(rows_flat_.end(), src, src + d);
      index_.emplace(make_key(src, d), idx);
    }
  }

  std::uint32_t meet_zassenhaus(std::uint32_t a, std::uint32_t b) const {
    // Rows [v | v] for v in basis(a), [w | 0] for w in basis(b); after RREF
    // the right halves of the rows whose left half vanished span the meet.
    std::uint64_t buf[128];
    auto ra = rows_of(a), rb = rows_of(b);
    std::size_t m = 0;
    const std::uint32_t shift = ps_.row_bits();
    for (std::uint64_t r : ra) buf[m++] = r | (r << shift);
    for (std::uint64_t r : rb) buf[m++] = r;
    std::size_t rank = ps2_.rref(buf, m);
    std::uint64_t out[64];
    std::size_t cnt = 0;
    const std::uint64_t left_mask = (shift == 64) ? ~0ULL : ((std::uint64_t(1) << shift) - 1);
    for (std::size_t i = 0; i < rank; ++i)
      if ((buf[i] & left_mask) == 0) out[cnt++] = buf[i] >> shift;
    // Right halves of an RREF block are themselves RREF.
    return index_of({out, cnt});
  }

  std::uint32_t meet_generic(std::uint32_t a, std::uint32_t b) const {
    Matrix ma = handle(a).basis_matrix();
    Matrix mb = handle(b).basis_matrix();
    Matrix stacked = ma.vstack(mb);
    Matrix k = stacked.transpose().kernel();  // rows (z1|z2) with z1*ma = -z2*mb
    std::vector<std::uint64_t> rows;
    for (std::size_t i = 0; i < k.rows(); ++i) {
      std::uint64_t r = 0;
      for (std::uint32_t c = 0; c < ps_.n; ++c) {
        Code acc = 0;
        for (std::size_t j = 0; j < ma.rows(); ++j)
          acc = prime_field_->add(acc, prime_field_->mul(k.at(i, j), ma.at(j, c)));
        r = ps_.with(r, c, acc);
      }
      rows.push_back(r);
    }
    ps_.rref(rows);
    return index_of(rows);
  }

  PackedSpace ps_;
  PackedSpace ps2_;
  bool zassenhaus_ok_ = false;
  Field prime_field_;
  std::vector<std::uint8_t> dims_;
  std::vector<std::uint32_t> dim_first_;
  std::vector<std::size_t> row_offset_;
  std::vector<std::uint64_t> rows_flat_;
  std::unordered_map<Key, std::uint32_t, KeyHash> index_;
};

using Lattice = std::shared_ptr<const LatticeContext>;

inline std::uint32_t SubspaceHandle::dim() const { return lattice->dim_of(index); }

inline std::span<const std::uint64_t> SubspaceHandle::rows() const {
  return lattice->rows_of(index);
}

inline Matrix SubspaceHandle::basis_matrix() const {
  const PackedSpace& ps = lattice->packed();
  Matrix m(lattice->prime_field(), dim(), lattice->n());
  auto rs = rows();
  for (std::size_t r = 0; r < rs.size(); ++r)
    for (std::uint32_t c = 0; c < lattice->n(); ++c) m.set(r, c, ps.get(rs[r], c));
  return m;
}

inline std::string SubspaceHandle::text() const { return basis_matrix().text(); }

inline bool SubspaceHandle::operator==(const SubspaceHandle& o) const {
  return lattice && o.lattice && lattice->q() == o.lattice->q() &&
         lattice->n() == o.lattice->n() && index == o.index;
}

/// Coordinate projection onto the first n1 or last n2 coordinates of a split
/// ground space; the result lives in the side lattice.
inline std::uint32_t project(const LatticeContext& big, std::uint32_t v, std::uint32_t n1,
                             std::uint32_t n2, int side, const LatticeContext& side_lat) {
  if (big.n() != n1 + n2) throw std::invalid_argument("projection split mismatch");
  std::uint32_t want = side == 1 ? n1 : n2;
  if (side_lat.n() != want || side_lat.q() != big.q())
    throw std::invalid_argument("projection target lattice mismatch");
  const PackedSpace& ps = big.packed();
  std::uint64_t buf[64];
  std::size_t cnt = 0;
  const std::uint32_t cut = n1 * ps.bpc;
  const std::uint64_t low_mask = (cut == 64) ? ~0ULL : ((std::uint64_t(1) << cut) - 1);
  for (std::uint64_t r : big.rows_of(v)) buf[cnt++] = side == 1 ? (r & low_mask) : (r >> cut);
  std::size_t rank = side_lat.packed().rref(buf, cnt);
  return side_lat.index_of({buf, rank});
}

inline SubspaceHandle project(const SubspaceHandle& v, std::uint32_t n1, std::uint32_t n2,
                              int side, const LatticeContext& side_lat) {
  return side_lat.handle(project(*v.lattice, v.index, n1, n2, side, side_lat));
}

/// The subspace V1 (+) V2 of the split ground space; projections recover the
/// inputs and the dimension is the sum of the input dimensions.
inline std::uint32_t embed_direct_sum(const LatticeContext& l1, std::uint32_t v1,
                                      const LatticeContext& l2, std::uint32_t v2,
                                      const LatticeContext& big) {
  if (big.n() != l1.n() + l2.n() || big.q() != l1.q() || big.q() != l2.q())
    throw std::invalid_argument("embedding lattice mismatch");
  std::uint64_t buf[64];
  std::size_t cnt = 0;
  const std::uint32_t shift = l1.n() * big.packed().bpc;
  for (std::uint64_t r : l1.rows_of(v1)) buf[cnt++] = r;
  for (std::uint64_t r : l2.rows_of(v2)) buf[cnt++] = r << shift;
  // Pivot columns stay sorted and normalized, so this is already RREF.
  return big.index_of({buf, cnt});
}

inline SubspaceHandle embed_direct_sum(const SubspaceHandle& v1, const SubspaceHandle& v2,
                                       const LatticeContext& big) {
  return big.handle(embed_direct_sum(*v1.lattice, v1.index, *v2.lattice, v2.index, big));
}

}  // namespace qmx
