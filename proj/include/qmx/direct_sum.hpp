#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qmx/qmatroid.hpp"

namespace qmx {

struct DirectSumOptions {
  std::uint64_t lattice_cap = kDefaultLatticeCap;
  CheckOptions check;
  Lattice big;  // optional pre-built lattice for the combined ground space
};

/// Everything needed to evaluate the direct sum of two q-matroids on the
/// split GF(q)^{n1+n2}: the lifted rank tables rho'_i = rho_i o pi_i, the
/// deficiency tau(X) = rho'_1(X)+rho'_2(X)-dim X, and the minimization table
/// mu(V) = min(0, min_{X <= V} tau(X)), computed by a dimension-ascending
/// dynamic program over covering pairs. Immutable once built.
class DirectSumContext {
 public:
  static DirectSumContext build(const QMatroid& m1, const QMatroid& m2,
                                const DirectSumOptions& opts = {}) {
    return DirectSumContext(m1, m2, opts);
  }

  std::uint32_t n1() const noexcept { return n1_; }
  std::uint32_t n2() const noexcept { return n2_; }
  const Lattice& left() const noexcept { return left_; }
  const Lattice& right() const noexcept { return right_; }
  const Lattice& big() const noexcept { return big_; }

  std::span<const std::uint8_t> rho1_lifted() const noexcept { return rho1p_; }
  std::span<const std::uint8_t> rho2_lifted() const noexcept { return rho2p_; }
  std::span<const std::int16_t> tau() const noexcept { return tau_; }
  std::span<const std::int16_t> mu() const noexcept { return mu_; }

  /// rho(V) = dim V + mu(V).
  std::uint8_t sum_rank(std::uint32_t idx) const {
    return static_cast<std::uint8_t>(std::int32_t(big_->dim_of(idx)) + mu_[idx]);
  }

  /// The direct sum as a validated q-matroid.
  QMatroid sum(const CheckOptions& check = {}) const {
    std::vector<std::uint8_t> table(big_->size());
    for (std::uint32_t i = 0; i < big_->size(); ++i) table[i] = sum_rank(i);
    return QMatroid(big_, std::move(table), check);
  }

  /// The summand extended by a loop space on the other side: the table
  /// V -> rho_side(pi_side(V)) as a validated q-matroid on the big lattice.
  QMatroid lift_with_loops(int side, const CheckOptions& check = {}) const {
    if (side != 1 && side != 2) throw std::invalid_argument("side must be 1 or 2");
    std::vector<std::uint8_t> table(side == 1 ? rho1p_ : rho2p_);
    return QMatroid(big_, std::move(table), check);
  }

  /// The set of subspaces with rho'_1(X) + rho'_2(X) < dim X.
  std::vector<std::uint32_t> x_set() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < big_->size(); ++i)
      if (tau_[i] < 0) out.push_back(i);
    return out;
  }

  /// The inclusion-minimal members of the x-set; these are exactly the
  /// circuits of the direct sum. X is minimal iff no hyperplane of X already
  /// contains a deficient subspace, i.e. mu vanishes on every hyperplane.
  std::vector<std::uint32_t> circuits_of_sum() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < big_->size(); ++i) {
      if (tau_[i] >= 0) continue;
      bool minimal =
          big_->for_each_cover_below(i, [&](std::uint32_t h) { return mu_[h] == 0; });
      if (minimal) out.push_back(i);
    }
    return out;
  }

 private:
  DirectSumContext(const QMatroid& m1, const QMatroid& m2, const DirectSumOptions& opts)
      : left_(m1.lattice_ptr()), right_(m2.lattice_ptr()) {
    if (left_->q() != right_->q())
      throw std::invalid_argument("direct sum requires the same base field");
    n1_ = left_->n();
    n2_ = right_->n();
    if (opts.big) {
      if (opts.big->q() != left_->q() || opts.big->n() != n1_ + n2_)
        throw std::invalid_argument("pre-built lattice does not match the split");
      big_ = opts.big;
    } else {
      big_ = LatticeContext::build(left_->q(), n1_ + n2_, opts.lattice_cap);
    }

    const LatticeContext& big = *big_;
    const PackedSpace& ps = big.packed();
    const std::uint32_t size = big.size();
    rho1p_.resize(size);
    rho2p_.resize(size);
    tau_.resize(size);
    mu_.resize(size);

    // Lifted tables: project every subspace to both sides once.
    const std::uint32_t cut = n1_ * ps.bpc;
    const std::uint64_t low_mask = (cut == 64) ? ~0ULL : ((std::uint64_t(1) << cut) - 1);
    std::uint64_t buf[64];
    for (std::uint32_t idx = 0; idx < size; ++idx) {
      auto rows = big.rows_of(idx);
      std::size_t cnt = 0;
      for (std::uint64_t r : rows) buf[cnt++] = r & low_mask;
      std::size_t rank = left_->packed().rref(buf, cnt);
      rho1p_[idx] = m1.rank_of(left_->index_of({buf, rank}));
      cnt = 0;
      for (std::uint64_t r : rows) buf[cnt++] = r >> cut;
      rank = right_->packed().rref(buf, cnt);
      rho2p_[idx] = m2.rank_of(right_->index_of({buf, rank}));
      tau_[idx] = static_cast<std::int16_t>(std::int32_t(rho1p_[idx]) + rho2p_[idx] -
                                            big.dim_of(idx));
    }

    // mu(V) = min(0, tau(V), min over hyperplanes W of mu(W)): every proper
    // subspace of V lies in a hyperplane, so the dimension-ascending sweep
    // reaches the full minimum.
    for (std::uint32_t idx = 0; idx < size; ++idx) {
      std::int16_t best = tau_[idx] < 0 ? tau_[idx] : std::int16_t(0);
      big.for_each_cover_below(idx, [&](std::uint32_t h) {
        if (mu_[h] < best) best = mu_[h];
        return true;
      });
      mu_[idx] = best;
    }
  }

  Lattice left_, right_, big_;
  std::uint32_t n1_ = 0, n2_ = 0;
  std::vector<std::uint8_t> rho1p_, rho2p_;
  std::vector<std::int16_t> tau_, mu_;
};

/// Direct sum of two q-matroids via the lattice minimization formula.
inline QMatroid direct_sum(const QMatroid& m1, const QMatroid& m2,
                           const DirectSumOptions& opts = {}) {
  return DirectSumContext::build(m1, m2, opts).sum(opts.check);
}

}  // namespace qmx
