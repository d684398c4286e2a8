#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmx/field.hpp"

namespace qmx {

/// Dense matrix over a FieldContext. Entries are element codes. Values are
/// immutable in spirit: operations return new matrices and never touch their
/// inputs, so shared matrices are safe to use concurrently.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Code> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_) throw std::invalid_argument("entry count mismatch");
    for (Code c : a_)
      if (c >= field_->order()) throw std::invalid_argument("entry code out of field range");
  }

  static Matrix identity(Field field, std::size_t n) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  static Matrix zero(Field field, std::size_t rows, std::size_t cols) {
    return Matrix(std::move(field), rows, cols);
  }

  /// Parses the matrix text format: rows separated by ';', entries by ','.
  /// An empty string yields a 0 x `cols_hint` matrix.
  static Matrix parse(Field field, std::string_view text, std::size_t cols_hint = 0) {
    if (text.empty()) return Matrix(std::move(field), 0, cols_hint);
    std::vector<Code> entries;
    std::size_t cols = 0, row_len = 0, rows = 0, i = 0;
    auto flush_row = [&](std::size_t pos) {
      ++rows;
      if (cols == 0)
        cols = row_len;
      else if (row_len != cols)
        throw ParseError("ragged matrix row", pos);
      row_len = 0;
    };
    while (true) {
      std::size_t start = i;
      std::uint64_t v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + (text[i] - '0');
        if (v >= kMaxFieldOrder) throw ParseError("entry out of range", start);
        ++i;
      }
      if (i == start) throw ParseError("expected matrix entry", i);
      if (v >= field->order()) throw ParseError("entry code out of field range", start);
      entries.push_back(static_cast<Code>(v));
      ++row_len;
      if (i == text.size()) {
        flush_row(i);
        break;
      }
      if (text[i] == ',') {
        ++i;
      } else if (text[i] == ';') {
        flush_row(i);
        ++i;
      } else {
        throw ParseError("unexpected character in matrix text", i);
      }
    }
    return Matrix(std::move(field), rows, cols, std::move(entries));
  }

  /// Matrix text format: "1,2,0,3;0,0,1,2". Empty matrix prints as "".
  std::string text() const {
    std::string s;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r > 0) s += ';';
      for (std::size_t c = 0; c < cols_; ++c) {
        if (c > 0) s += ',';
        s += std::to_string(at(r, c));
      }
    }
    return s;
  }

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Code at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Code v) { a_[r * cols_ + c] = v; }

  std::span<const Code> row(std::size_t r) const { return {a_.data() + r * cols_, cols_}; }

  bool operator==(const Matrix& o) const {
    return same_field(field_, o.field_) && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  bool is_zero() const {
    for (Code c : a_)
      if (c != 0) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    require_same_field(o);
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    const FieldContext& f = *field_;
    Matrix r(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        Code aik = at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          Code p = f.mul(aik, o.at(k, j));
          r.set(i, j, f.add(r.at(i, j), p));
        }
      }
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    require_same_field(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    Matrix r(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->add(a_[i], o.a_[i]);
    return r;
  }

  /// Rows of `this` stacked above rows of `o`.
  Matrix vstack(const Matrix& o) const {
    require_same_field(o);
    if (cols_ != o.cols_ && rows_ != 0 && o.rows_ != 0)
      throw std::invalid_argument("vstack column mismatch");
    std::size_t cols = rows_ > 0 ? cols_ : o.cols_;
    Matrix r(field_, rows_ + o.rows_, cols);
    r.a_ = a_;
    r.a_.insert(r.a_.end(), o.a_.begin(), o.a_.end());
    return r;
  }

  Matrix hstack(const Matrix& o) const {
    require_same_field(o);
    if (rows_ != o.rows_) throw std::invalid_argument("hstack row mismatch");
    Matrix r(field_, rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t c = 0; c < cols_; ++c) r.set(i, c, at(i, c));
      for (std::size_t c = 0; c < o.cols_; ++c) r.set(i, cols_ + c, o.at(i, c));
    }
    return r;
  }

  static Matrix block_diag(const Matrix& a, const Matrix& b) {
    a.require_same_field(b);
    Matrix r(a.field_, a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t c = 0; c < a.cols_; ++c) r.set(i, c, a.at(i, c));
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t c = 0; c < b.cols_; ++c) r.set(a.rows_ + i, a.cols_ + c, b.at(i, c));
    return r;
  }

  struct RrefResult;

  /// Reduced row echelon form: pivot entries 1, zeros above and below every
  /// pivot, pivot columns strictly increasing, zero rows last. The pivot is
  /// always the topmost nonzero entry of the leftmost unresolved column, so
  /// the output is canonical for the row space.
  RrefResult rref() const;

  std::size_t rank() const;

  /// Basis of the right kernel {v : M v^T = 0}, one vector per row, in
  /// free-column order. Has cols() - rank() rows; empty iff full column rank.
  Matrix kernel() const;

  /// Entrywise image under the prime-subfield embedding (codes 0..p-1 map to
  /// themselves). The source must be a prime field of the same characteristic.
  Matrix lift_to(Field target) const {
    if (field_->degree() != 1) throw std::invalid_argument("lift source must be a prime field");
    if (target->characteristic() != field_->characteristic())
      throw std::invalid_argument("lift characteristic mismatch");
    Matrix r(std::move(target), rows_, cols_);
    r.a_ = a_;
    return r;
  }

  void require_same_field(const Matrix& o) const {
    if (!same_field(field_, o.field_)) throw std::invalid_argument("mixed-field matrix operands");
  }

 private:
  Field field_;
  std::size_t rows_, cols_;
  std::vector<Code> a_;
};

struct Matrix::RrefResult {
  Matrix matrix;
  std::vector<std::size_t> pivots;
};

inline Matrix::RrefResult Matrix::rref() const {
  const FieldContext& f = *field_;
  Matrix m = *this;
  std::vector<std::size_t> pivots;
  std::size_t next_row = 0;
  for (std::size_t col = 0; col < cols_ && next_row < rows_; ++col) {
    std::size_t sel = next_row;
    while (sel < rows_ && m.at(sel, col) == 0) ++sel;
    if (sel == rows_) continue;
    if (sel != next_row)
      for (std::size_t c = 0; c < cols_; ++c) {
        Code t = m.at(sel, c);
        m.set(sel, c, m.at(next_row, c));
        m.set(next_row, c, t);
      }
    Code piv_inv = f.inv(m.at(next_row, col));
    if (piv_inv != 1)
      for (std::size_t c = col; c < cols_; ++c) m.set(next_row, c, f.mul(m.at(next_row, c), piv_inv));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == next_row) continue;
      Code factor = m.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < cols_; ++c)
        m.set(r, c, f.sub(m.at(r, c), f.mul(factor, m.at(next_row, c))));
    }
    pivots.push_back(col);
    ++next_row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t Matrix::rank() const { return rref().pivots.size(); }

inline Matrix Matrix::kernel() const {
  RrefResult rr = rref();
  const FieldContext& f = *field_;
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t p : rr.pivots) is_pivot[p] = true;
  Matrix k(field_, cols_ - rr.pivots.size(), cols_);
  std::size_t out = 0;
  for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
    if (is_pivot[free_col]) continue;
    k.set(out, free_col, 1);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i)
      k.set(out, rr.pivots[i], f.neg(rr.matrix.at(i, free_col)));
    ++out;
  }
  return k;
}

/// Solves x * A = b. Returns one solution or nullopt if inconsistent.
inline std::optional<std::vector<Code>> solve_row_system(const Matrix& A,
                                                         std::span<const Code> b) {
  if (b.size() != A.cols()) throw std::invalid_argument("solve shape mismatch");
  // Transposed system [A^T | b^T], then read the particular solution.
  Matrix at = A.transpose();
  Matrix rhs(A.field(), b.size(), 1, std::vector<Code>(b.begin(), b.end()));
  Matrix::RrefResult rr = at.hstack(rhs).rref();
  std::vector<Code> x(A.rows(), 0);
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
    if (rr.pivots[i] == A.rows()) return std::nullopt;  // pivot in the b column
    x[rr.pivots[i]] = rr.matrix.at(i, A.rows());
  }
  return x;
}

/// Coefficients over the prime field expressing `target` in the GF(p)-span
/// of `basis_elems` inside the extension field, or nullopt if not in the span.
inline std::optional<std::vector<Code>> express_in_prime_span(const Field& field,
                                                              std::span<const Code> basis_elems,
                                                              Code target) {
  Field prime = FieldContext::make(field->characteristic(), 1);
  Matrix b(prime, basis_elems.size(), field->degree());
  for (std::size_t i = 0; i < basis_elems.size(); ++i) {
    std::vector<Code> co = field->coords(basis_elems[i]);
    for (std::size_t j = 0; j < co.size(); ++j) b.set(i, j, co[j]);
  }
  std::vector<Code> t = field->coords(target);
  return solve_row_system(b, t);
}

}  // namespace qmx
