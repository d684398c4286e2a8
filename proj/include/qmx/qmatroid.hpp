#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qmx/lattice.hpp"

namespace qmx {

struct CheckOptions {
  std::uint64_t seed = 0xC0FFEE;
  std::uint64_t sample_pairs = 1'000'000;  // submodularity pairs above the threshold
  std::uint32_t exhaustive_threshold = 10'000;
  std::size_t max_violations = 100;
};

struct AxiomViolation {
  int axiom;  // 1 = dimension-boundedness, 2 = monotonicity, 3 = submodularity
  std::uint32_t v;
  std::uint32_t w;  // second witness; unused for axiom 1
  std::string detail;
};

/// Checks the rank axioms on a raw table: (R1) 0 <= rho(V) <= dim V for every
/// subspace, (R2) rho monotone along every covering pair (sufficient by
/// transitivity), (R3) submodularity on all pairs when the lattice is small
/// and on seeded random pairs otherwise. Each violation names its witnesses.
inline std::vector<AxiomViolation> check_axioms(const LatticeContext& lat,
                                                std::span<const std::uint8_t> table,
                                                const CheckOptions& opts = {}) {
  if (table.size() != lat.size()) throw std::invalid_argument("rank table length mismatch");
  std::vector<AxiomViolation> out;
  auto full = [&]() { return out.size() >= opts.max_violations; };

  for (std::uint32_t v = 0; v < lat.size() && !full(); ++v)
    if (table[v] > lat.dim_of(v))
      out.push_back({1, v, 0,
                     "rank " + std::to_string(table[v]) + " exceeds dim " +
                         std::to_string(lat.dim_of(v))});

  for (std::uint32_t w = 0; w < lat.size() && !full(); ++w) {
    if (lat.dim_of(w) == 0) continue;
    lat.for_each_cover_below(w, [&](std::uint32_t v) {
      if (table[v] > table[w])
        out.push_back({2, v, w,
                       "rank drops from " + std::to_string(table[v]) + " to " +
                           std::to_string(table[w]) + " along an inclusion"});
      return !full();
    });
  }

  auto submodular = [&](std::uint32_t a, std::uint32_t b) {
    std::uint32_t j = lat.join(a, b);
    std::uint32_t m = lat.meet(a, b);
    if (std::uint32_t(table[j]) + table[m] > std::uint32_t(table[a]) + table[b])
      out.push_back({3, a, b,
                     "rho(V+W)+rho(V^W) = " + std::to_string(table[j] + table[m]) +
                         " > " + std::to_string(table[a] + table[b])});
  };
  if (lat.size() <= opts.exhaustive_threshold) {
    for (std::uint32_t a = 0; a < lat.size() && !full(); ++a)
      for (std::uint32_t b = a + 1; b < lat.size() && !full(); ++b) submodular(a, b);
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::uint32_t> dist(0, lat.size() - 1);
    for (std::uint64_t i = 0; i < opts.sample_pairs && !full(); ++i)
      submodular(dist(rng), dist(rng));
  }
  return out;
}

/// A q-matroid as a materialized rank table over the full subspace lattice.
/// Construction validates the axioms (exactly on small lattices, sampled on
/// large ones); instances are immutable afterwards.
class QMatroid {
 public:
  QMatroid(Lattice lattice, std::vector<std::uint8_t> table, const CheckOptions& opts = {})
      : lat_(std::move(lattice)), table_(std::move(table)) {
    auto violations = check_axioms(*lat_, table_, opts);
    if (!violations.empty()) {
      const AxiomViolation& v = violations.front();
      throw std::invalid_argument("rank table violates axiom (R" + std::to_string(v.axiom) +
                                  ") at subspace " + std::to_string(v.v) + ": " + v.detail +
                                  " (" + std::to_string(violations.size()) + " violations found)");
    }
  }

  /// The q-matroid represented by G: rho(V) = rank(G * B^T) with B the
  /// canonical basis of V lifted into G's field.
  static QMatroid from_matrix(const Matrix& g, Lattice lattice, const CheckOptions& opts = {}) {
    const LatticeContext& lat = *lattice;
    if (g.field()->characteristic() != lat.q())
      throw std::invalid_argument("representing field characteristic differs from the base field");
    if (g.cols() != lat.n()) throw std::invalid_argument("column count differs from ground dimension");
    const FieldContext& f = *g.field();
    const PackedSpace& ps = lat.packed();
    const std::size_t k = g.rows();
    std::vector<std::uint8_t> table(lat.size(), 0);
    std::vector<Code> prod(k * lat.n());
    for (std::uint32_t idx = 0; idx < lat.size(); ++idx) {
      auto rows = lat.rows_of(idx);
      const std::size_t d = rows.size();
      // prod = G * B^T, one column per basis row of the subspace
      for (std::size_t t = 0; t < d; ++t) {
        for (std::size_t i = 0; i < k; ++i) prod[i * d + t] = 0;
        for (std::uint32_t c = 0; c < lat.n(); ++c) {
          Code coeff = ps.get(rows[t], c);  // prime-subfield code
          if (coeff == 0) continue;
          for (std::size_t i = 0; i < k; ++i) {
            Code term = coeff == 1 ? g.at(i, c) : f.mul(g.at(i, c), coeff);
            prod[i * d + t] = f.add(prod[i * d + t], term);
          }
        }
      }
      table[idx] = static_cast<std::uint8_t>(rank_in_place(f, prod, k, d));
    }
    return QMatroid(std::move(lattice), std::move(table), opts);
  }

  /// Uniform q-matroid U_{k,n}: rho(V) = min{k, dim V}.
  static QMatroid uniform(std::uint32_t k, Lattice lattice) {
    if (k > lattice->n()) throw std::invalid_argument("uniform rank exceeds ground dimension");
    std::vector<std::uint8_t> table(lattice->size());
    for (std::uint32_t i = 0; i < lattice->size(); ++i)
      table[i] = static_cast<std::uint8_t>(std::min(k, lattice->dim_of(i)));
    return QMatroid(std::move(lattice), std::move(table));
  }

  /// Paving q-matroid of rank k from a family of k-dimensional spaces with
  /// pairwise intersections of dimension at most k-2: rho = k-1 on the family
  /// and min{k, dim} elsewhere.
  static QMatroid paving_from_family(std::span<const std::uint32_t> family, std::uint32_t k,
                                     Lattice lattice, const CheckOptions& opts = {}) {
    const LatticeContext& lat = *lattice;
    if (k < 1 || k >= lat.n()) throw std::invalid_argument("paving rank must satisfy 1 <= k < n");
    for (std::uint32_t s : family)
      if (lat.dim_of(s) != k)
        throw std::invalid_argument("family member " + lat.handle(s).text() +
                                    " does not have dimension " + std::to_string(k));
    for (std::size_t i = 0; i < family.size(); ++i)
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        if (family[i] == family[j]) throw std::invalid_argument("family member repeated");
        std::uint32_t m = lat.meet(family[i], family[j]);
        if (lat.dim_of(m) + 2 > k)
          throw std::invalid_argument("family members " + lat.handle(family[i]).text() + " and " +
                                      lat.handle(family[j]).text() +
                                      " intersect in dimension " + std::to_string(lat.dim_of(m)));
      }
    std::vector<std::uint8_t> table(lat.size());
    for (std::uint32_t i = 0; i < lat.size(); ++i)
      table[i] = static_cast<std::uint8_t>(std::min(k, lat.dim_of(i)));
    for (std::uint32_t s : family) table[s] = static_cast<std::uint8_t>(k - 1);
    return QMatroid(std::move(lattice), std::move(table), opts);
  }

  const Lattice& lattice_ptr() const noexcept { return lat_; }
  const LatticeContext& lattice() const noexcept { return *lat_; }
  const std::vector<std::uint8_t>& table() const noexcept { return table_; }
  std::uint8_t rank_of(std::uint32_t idx) const { return table_[idx]; }
  std::uint8_t rank_of(const SubspaceHandle& h) const { return table_[h.index]; }
  std::uint32_t matroid_rank() const { return table_[lat_->full_index()]; }

 private:
  // Gaussian elimination on a k x d scratch buffer; destroys the buffer.
  static std::size_t rank_in_place(const FieldContext& f, std::vector<Code>& m, std::size_t k,
                                   std::size_t d) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < k; ++col) {
      std::size_t sel = rank;
      while (sel < k && m[sel * d + col] == 0) ++sel;
      if (sel == k) continue;
      if (sel != rank)
        for (std::size_t c = col; c < d; ++c) std::swap(m[sel * d + c], m[rank * d + c]);
      Code inv = f.inv(m[rank * d + col]);
      for (std::size_t r = rank + 1; r < k; ++r) {
        Code factor = m[r * d + col];
        if (factor == 0) continue;
        Code scale = f.mul(factor, inv);
        for (std::size_t c = col; c < d; ++c)
          m[r * d + c] = f.sub(m[r * d + c], f.mul(scale, m[rank * d + c]));
      }
      ++rank;
    }
    return rank;
  }

  Lattice lat_;
  std::vector<std::uint8_t> table_;
};

struct RankMismatch {
  std::uint32_t index;
  std::uint8_t lhs;
  std::uint8_t rhs;
};

/// First subspace (in canonical index order) where the two rank tables
/// disagree, or nullopt when the q-matroids are equal.
inline std::optional<RankMismatch> first_difference(const QMatroid& a, const QMatroid& b) {
  if (a.lattice().q() != b.lattice().q() || a.lattice().n() != b.lattice().n())
    throw std::invalid_argument("q-matroids live on different ground spaces");
  for (std::uint32_t i = 0; i < a.lattice().size(); ++i)
    if (a.rank_of(i) != b.rank_of(i)) return RankMismatch{i, a.rank_of(i), b.rank_of(i)};
  return std::nullopt;
}

inline bool equal(const QMatroid& a, const QMatroid& b) { return !first_difference(a, b); }

// --- cryptomorphic structures ---

inline std::vector<std::uint32_t> loops(const QMatroid& m) {
  const LatticeContext& lat = m.lattice();
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = lat.dim_first(1); i < lat.dim_first(1) + lat.dim_count(1); ++i)
    if (m.rank_of(i) == 0) out.push_back(i);
  return out;
}

inline std::vector<std::uint32_t> independent_spaces(const QMatroid& m) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < m.lattice().size(); ++i)
    if (m.rank_of(i) == m.lattice().dim_of(i)) out.push_back(i);
  return out;
}

inline std::vector<std::uint32_t> dependent_spaces(const QMatroid& m) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < m.lattice().size(); ++i)
    if (m.rank_of(i) < m.lattice().dim_of(i)) out.push_back(i);
  return out;
}

/// Dependent spaces all of whose proper subspaces are independent. Checking
/// the hyperplanes suffices: independence is downward closed and every proper
/// subspace lies in a hyperplane.
inline std::vector<std::uint32_t> circuits(const QMatroid& m) {
  const LatticeContext& lat = m.lattice();
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < lat.size(); ++i) {
    if (m.rank_of(i) >= lat.dim_of(i)) continue;
    bool hyperplanes_independent = lat.for_each_cover_below(
        i, [&](std::uint32_t h) { return m.rank_of(h) == lat.dim_of(h); });
    if (hyperplanes_independent) out.push_back(i);
  }
  return out;
}

/// Spaces whose every cover has strictly larger rank. Detected with one sweep
/// over all covering pairs, which monotonicity makes sufficient.
inline std::vector<std::uint32_t> flats(const QMatroid& m) {
  const LatticeContext& lat = m.lattice();
  std::vector<bool> not_flat(lat.size(), false);
  for (std::uint32_t w = 0; w < lat.size(); ++w) {
    if (lat.dim_of(w) == 0) continue;
    lat.for_each_cover_below(w, [&](std::uint32_t v) {
      if (m.rank_of(v) == m.rank_of(w)) not_flat[v] = true;
      return true;
    });
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < lat.size(); ++i)
    if (!not_flat[i]) out.push_back(i);
  return out;
}

/// Spaces equal to the join of the circuits they contain; the zero space is
/// open as the empty join. Computed dimension-ascending: every proper circuit
/// of V lies in a hyperplane of V, so joining the hyperplanes' values and V
/// itself (when V is a circuit) gives the circuit join of V.
inline std::vector<std::uint32_t> open_spaces(const QMatroid& m,
                                              const std::vector<std::uint32_t>& circuit_list) {
  const LatticeContext& lat = m.lattice();
  std::vector<bool> is_circuit(lat.size(), false);
  for (std::uint32_t c : circuit_list) is_circuit[c] = true;
  std::vector<std::uint32_t> circuit_join(lat.size(), lat.zero_index());
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < lat.size(); ++v) {
    std::uint32_t acc = is_circuit[v] ? v : lat.zero_index();
    if (acc != v) {
      lat.for_each_cover_below(v, [&](std::uint32_t h) {
        acc = lat.join(acc, circuit_join[h]);
        return acc != v;  // the join can only grow up to V itself
      });
    }
    circuit_join[v] = acc;
    if (acc == v) out.push_back(v);
  }
  return out;
}

inline std::vector<std::uint32_t> open_spaces(const QMatroid& m) {
  return open_spaces(m, circuits(m));
}

inline std::vector<std::uint32_t> cyclic_flats(const QMatroid& m) {
  std::vector<std::uint32_t> f = flats(m), o = open_spaces(m), out;
  std::set_intersection(f.begin(), f.end(), o.begin(), o.end(), std::back_inserter(out));
  return out;
}

/// True iff every circuit has dimension at least the matroid rank
/// (vacuously true without circuits).
inline bool is_paving(const QMatroid& m) {
  for (std::uint32_t c : circuits(m))
    if (m.lattice().dim_of(c) < m.matroid_rank()) return false;
  return true;
}

struct StructureReport {
  std::vector<std::uint32_t> loops;
  std::vector<std::uint32_t> independent;
  std::vector<std::uint32_t> dependent;
  std::vector<std::uint32_t> circuits;
  std::vector<std::uint32_t> flats;
  std::vector<std::uint32_t> open;
  std::vector<std::uint32_t> cyclic_flats;
  std::uint32_t rank = 0;
  bool paving = false;
};

inline StructureReport analyze_structures(const QMatroid& m) {
  StructureReport r;
  r.loops = loops(m);
  r.independent = independent_spaces(m);
  r.dependent = dependent_spaces(m);
  r.circuits = circuits(m);
  r.flats = flats(m);
  r.open = open_spaces(m, r.circuits);
  std::set_intersection(r.flats.begin(), r.flats.end(), r.open.begin(), r.open.end(),
                        std::back_inserter(r.cyclic_flats));
  r.rank = m.matroid_rank();
  r.paving = true;
  for (std::uint32_t c : r.circuits)
    if (m.lattice().dim_of(c) < r.rank) r.paving = false;
  return r;
}

}  // namespace qmx
