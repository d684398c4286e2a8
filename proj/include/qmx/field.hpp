#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmx/errors.hpp"

namespace qmx {

/// Element code: base-p digits (least significant first) are the coefficients
/// of 1, x, ..., x^{d-1} in GF(p)[x]/(modulus). Code 0 is the additive and
/// code 1 the multiplicative identity.
using Code = std::uint32_t;

inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t(1) << 32;
inline constexpr std::uint64_t kLogTableLimit = std::uint64_t(1) << 16;

namespace detail {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t f = 2; f * f <= p; ++f)
    if (p % f == 0) return false;
  return true;
}

}  // namespace detail

/// A concrete finite field GF(p^d), fixed by characteristic, degree, and a
/// monic irreducible modulus polynomial. Immutable after construction; all
/// operations are safe to call concurrently on a shared context.
class FieldContext {
 public:
  /// Builds GF(p^d). If no modulus is given, a pinned default is used for
  /// the common binary fields and the smallest monic irreducible (by code)
  /// otherwise. Throws std::invalid_argument for a non-prime p, a reducible
  /// or non-monic modulus, or an order above 2^32.
  static std::shared_ptr<const FieldContext> make(std::uint32_t p, std::uint32_t d,
                                                  std::optional<std::vector<Code>> modulus = {}) {
    return std::shared_ptr<const FieldContext>(new FieldContext(p, d, std::move(modulus)));
  }

  /// Parses a field spec string "p^d" or "p^d/modulusCode", where the code's
  /// base-p digits (least significant first) are the modulus coefficients.
  static std::shared_ptr<const FieldContext> parse_spec(std::string_view spec) {
    auto take_int = [&](std::size_t& i, const char* what) -> std::uint64_t {
      std::size_t start = i;
      std::uint64_t v = 0;
      while (i < spec.size() && spec[i] >= '0' && spec[i] <= '9') {
        v = v * 10 + (spec[i] - '0');
        if (v > kMaxFieldOrder) throw ParseError(std::string(what) + " out of range", start);
        ++i;
      }
      if (i == start) throw ParseError(std::string("expected ") + what, start);
      return v;
    };
    std::size_t i = 0;
    std::uint64_t p = take_int(i, "characteristic");
    if (i >= spec.size() || spec[i] != '^') throw ParseError("expected '^' in field spec", i);
    ++i;
    std::uint64_t d = take_int(i, "degree");
    std::optional<std::vector<Code>> modulus;
    if (i < spec.size()) {
      if (spec[i] != '/') throw ParseError("unexpected character in field spec", i);
      ++i;
      std::uint64_t code = take_int(i, "modulus code");
      std::vector<Code> coeffs;
      while (code > 0) {
        coeffs.push_back(static_cast<Code>(code % p));
        code /= p;
      }
      coeffs.resize(d + 1, 0);
      modulus = std::move(coeffs);
    }
    if (i != spec.size()) throw ParseError("trailing characters in field spec", i);
    return make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(d), std::move(modulus));
  }

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return d_; }
  std::uint64_t order() const noexcept { return q_; }
  const std::vector<Code>& modulus() const noexcept { return modulus_; }

  /// Integer whose base-p digits are the modulus coefficients.
  std::uint64_t modulus_code() const noexcept {
    std::uint64_t c = 0;
    for (std::size_t i = modulus_.size(); i-- > 0;) c = c * p_ + modulus_[i];
    return c;
  }

  /// Canonical spec string, e.g. "2^2/7". The modulus is included whenever
  /// the degree exceeds 1 so artifacts pin the field exactly.
  std::string spec_string() const {
    std::string s = std::to_string(p_) + "^" + std::to_string(d_);
    if (d_ > 1) s += "/" + std::to_string(modulus_code());
    return s;
  }

  bool operator==(const FieldContext& o) const noexcept {
    return p_ == o.p_ && d_ == o.d_ && modulus_ == o.modulus_;
  }

  // --- scalar arithmetic ---

  Code add(Code a, Code b) const {
    if (p_ == 2) return a ^ b;
    std::uint64_t r = 0, mul = 1;
    for (std::uint32_t i = 0; i < d_; ++i) {
      r += (std::uint64_t(a % p_) + b % p_) % p_ * mul;
      a /= p_;
      b /= p_;
      mul *= p_;
    }
    return static_cast<Code>(r);
  }

  Code neg(Code a) const {
    if (p_ == 2) return a;
    std::uint64_t r = 0, mul = 1;
    for (std::uint32_t i = 0; i < d_; ++i) {
      r += std::uint64_t((p_ - a % p_) % p_) * mul;
      a /= p_;
      mul *= p_;
    }
    return static_cast<Code>(r);
  }

  Code sub(Code a, Code b) const { return add(a, neg(b)); }

  Code mul(Code a, Code b) const {
    if (!log_.empty()) {
      if (a == 0 || b == 0) return 0;
      return exp_[log_[a] + log_[b]];
    }
    return mul_poly(a, b);
  }

  /// Polynomial-path multiplication (always available; the table path must
  /// agree with it, which the test suite checks exhaustively).
  Code mul_poly(Code a, Code b) const {
    // Convolution of digit vectors followed by reduction mod the modulus.
    std::uint64_t prod[64] = {0};
    std::uint64_t da[32], db[32];
    Code ta = a, tb = b;
    for (std::uint32_t i = 0; i < d_; ++i) {
      da[i] = ta % p_;
      ta /= p_;
      db[i] = tb % p_;
      tb /= p_;
    }
    for (std::uint32_t i = 0; i < d_; ++i) {
      if (da[i] == 0) continue;
      for (std::uint32_t j = 0; j < d_; ++j)
        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    }
    // Reduce: x^d = -(modulus minus leading term).
    for (std::uint32_t k = 2 * d_ - 2 + 1; k-- > d_;) {
      std::uint64_t c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (std::uint32_t j = 0; j < d_; ++j) {
        std::uint64_t m = modulus_[j];
        if (m == 0) continue;
        std::uint32_t idx = k - d_ + j;
        prod[idx] = (prod[idx] + (p_ - m) % p_ * c) % p_;
      }
    }
    Code r = 0;
    for (std::uint32_t i = d_; i-- > 0;) r = static_cast<Code>(r * p_ + prod[i]);
    return r;
  }

  Code pow(Code a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (!log_.empty()) {
      std::uint64_t le = (static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
      return exp_[le];
    }
    Code base = a, r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  Code inv(Code a) const {
    if (a == 0) throw std::invalid_argument("division by zero in GF(" + std::to_string(q_) + ")");
    if (!log_.empty()) return exp_[q_ - 1 - log_[a]];
    return pow(a, q_ - 2);
  }

  Code div(Code a, Code b) const { return mul(a, inv(b)); }

  Code frobenius(Code a) const { return pow(a, p_); }

  // --- coordinates over the prime field ---

  /// Base-p digit vector of the code: the coordinates of the element in the
  /// basis 1, x, ..., x^{d-1}. A GF(p)-linear bijection onto GF(p)^d.
  std::vector<Code> coords(Code a) const {
    std::vector<Code> v(d_);
    for (std::uint32_t i = 0; i < d_; ++i) {
      v[i] = a % p_;
      a /= p_;
    }
    return v;
  }

  Code from_coords(std::span<const Code> v) const {
    Code r = 0;
    for (std::size_t i = v.size(); i-- > 0;) r = r * p_ + v[i];
    return r;
  }

  /// Degree of the minimal polynomial of a over GF(p): the least t >= 1 such
  /// that 1, a, ..., a^t are GF(p)-linearly dependent.
  std::uint32_t element_degree(Code a) const {
    // Incremental Gaussian elimination on coordinate vectors of powers of a.
    std::vector<std::vector<Code>> basis;  // reduced rows, pivot-indexed scan
    Code power = 1;
    for (std::uint32_t t = 0;; ++t) {
      std::vector<Code> row = coords(power);
      for (const auto& b : basis) {
        std::size_t piv = 0;
        while (piv < b.size() && b[piv] == 0) ++piv;
        if (piv < row.size() && row[piv] != 0) {
          std::uint64_t c = (p_ - row[piv] % p_) % p_;  // b[piv] is normalized to 1
          for (std::size_t i = 0; i < row.size(); ++i)
            row[i] = static_cast<Code>((row[i] + c * b[i]) % p_);
        }
      }
      std::size_t piv = 0;
      while (piv < row.size() && row[piv] == 0) ++piv;
      if (piv == row.size()) return t == 0 ? 1 : t;  // a = 0 has minimal poly x
      Code c = row[piv];
      std::uint64_t cinv = prime_inv(c);
      for (auto& e : row) e = static_cast<Code>(e * cinv % p_);
      basis.push_back(std::move(row));
      power = mul(power, a);
    }
  }

 private:
  FieldContext(std::uint32_t p, std::uint32_t d, std::optional<std::vector<Code>> modulus)
      : p_(p), d_(d) {
    if (!detail::is_prime(p)) throw std::invalid_argument("characteristic must be prime");
    if (d == 0) throw std::invalid_argument("degree must be positive");
    if (d > 32) throw std::invalid_argument("degree too large");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < d; ++i) {
      q *= p;
      if (q > kMaxFieldOrder) throw std::invalid_argument("field order exceeds 2^32");
    }
    q_ = q;
    modulus_ = modulus ? std::move(*modulus) : default_modulus(p, d);
    validate_modulus();
    if (q_ <= kLogTableLimit && d_ > 1) build_tables();
  }

  static std::uint64_t poly_code(std::uint32_t p, std::span<const Code> coeffs) {
    std::uint64_t c = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) c = c * p + coeffs[i];
    return c;
  }

  static std::vector<Code> code_to_poly(std::uint32_t p, std::uint64_t code) {
    std::vector<Code> v;
    while (code > 0) {
      v.push_back(static_cast<Code>(code % p));
      code /= p;
    }
    return v;
  }

  /// Remainder of a mod b over GF(p), both coefficient vectors (b monic).
  static std::vector<Code> poly_mod(std::uint32_t p, std::vector<Code> a,
                                    const std::vector<Code>& b) {
    std::size_t db = b.size() - 1;
    while (a.size() > db) {
      std::uint64_t lead = a.back();
      std::size_t shift = a.size() - 1 - db;
      if (lead != 0)
        for (std::size_t i = 0; i <= db; ++i)
          a[shift + i] = static_cast<Code>((a[shift + i] + (p - lead % p) * b[i]) % p);
      a.pop_back();
    }
    return a;
  }

  static bool poly_is_zero(const std::vector<Code>& a) {
    for (Code c : a)
      if (c != 0) return false;
    return true;
  }

  static bool is_irreducible(std::uint32_t p, const std::vector<Code>& m) {
    std::uint32_t d = static_cast<std::uint32_t>(m.size()) - 1;
    if (d == 1) return true;
    if (m[0] == 0) return false;  // divisible by x
    // Trial division by every monic polynomial of degree 1..d/2.
    for (std::uint32_t deg = 1; 2 * deg <= d; ++deg) {
      std::uint64_t lo = 1, hi = 1;
      for (std::uint32_t i = 0; i < deg; ++i) lo *= p;
      hi = lo * p;
      for (std::uint64_t code = lo; code < hi; ++code) {
        std::vector<Code> cand = code_to_poly(p, code);
        if (poly_is_zero(poly_mod(p, m, cand))) return false;
      }
    }
    return true;
  }

  static std::vector<Code> default_modulus(std::uint32_t p, std::uint32_t d) {
    if (d == 1) return {0, 1};  // GF(p)[x]/(x); never used for arithmetic
    // Pinned binary defaults so the meaning of small-field codes is stable.
    if (p == 2) {
      switch (d) {
        case 2: return {1, 1, 1};                    // x^2+x+1
        case 3: return {1, 1, 0, 1};                 // x^3+x+1
        case 4: return {1, 1, 0, 0, 1};              // x^4+x+1
        case 8: return {1, 0, 1, 1, 1, 0, 0, 0, 1};  // x^8+x^4+x^3+x^2+1
        default: break;
      }
    }
    // Otherwise the smallest monic irreducible of degree d, by code.
    std::uint64_t lo = 1;
    for (std::uint32_t i = 0; i < d; ++i) lo *= p;
    for (std::uint64_t code = lo; code < 2 * lo; ++code) {
      std::vector<Code> cand = code_to_poly(p, code);
      cand.resize(d + 1, 0);
      if (is_irreducible(p, cand)) return cand;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
  }

  void validate_modulus() const {
    if (modulus_.size() != d_ + 1)
      throw std::invalid_argument("modulus must have degree equal to the field degree");
    for (Code c : modulus_)
      if (c >= p_) throw std::invalid_argument("modulus coefficient out of range");
    if (modulus_.back() != 1) throw std::invalid_argument("modulus must be monic");
    if (d_ > 1 && !is_irreducible(p_, modulus_))
      throw std::invalid_argument("modulus is reducible over GF(" + std::to_string(p_) + ")");
  }

  std::uint64_t prime_inv(Code c) const {  // inverse mod p via Fermat
    std::uint64_t r = 1, b = c % p_;
    std::uint32_t e = p_ - 2;
    while (e > 0) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return r;
  }

  void build_tables() {
    const std::uint64_t group = q_ - 1;
    std::vector<std::uint64_t> prime_factors;
    std::uint64_t g = group;
    for (std::uint64_t f = 2; f * f <= g; ++f)
      if (g % f == 0) {
        prime_factors.push_back(f);
        while (g % f == 0) g /= f;
      }
    if (g > 1) prime_factors.push_back(g);

    auto pow_poly = [&](Code a, std::uint64_t e) {
      Code r = 1, base = a;
      while (e > 0) {
        if (e & 1) r = mul_poly(r, base);
        base = mul_poly(base, base);
        e >>= 1;
      }
      return r;
    };
    Code gen = 0;
    for (Code cand = 2; cand < q_; ++cand) {
      bool primitive = true;
      for (std::uint64_t f : prime_factors)
        if (pow_poly(cand, group / f) == 1) {
          primitive = false;
          break;
        }
      if (primitive) {
        gen = cand;
        break;
      }
    }
    exp_.resize(2 * group);
    log_.assign(q_, 0);
    Code cur = 1;
    for (std::uint64_t i = 0; i < group; ++i) {
      exp_[i] = cur;
      exp_[i + group] = cur;
      log_[cur] = static_cast<std::uint32_t>(i);
      cur = mul_poly(cur, gen);
    }
  }

  std::uint32_t p_;
  std::uint32_t d_;
  std::uint64_t q_;
  std::vector<Code> modulus_;
  std::vector<Code> exp_;
  std::vector<std::uint32_t> log_;
};

using Field = std::shared_ptr<const FieldContext>;

inline bool same_field(const Field& a, const Field& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace qmx
