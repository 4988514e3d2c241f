#pragma once

// Dense complex/real matrix kernel: Kronecker products, realification
// (x -> [[x_I, -x_Q], [x_Q, x_I]]), interleaved real/imag vectorization,
// column-ordered Gram-Schmidt QR, determinants and a plain-text matrix format.
//
// Everything is sized for n_t <= 32 so storage is a flat row-major vector.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "stbc/errors.hpp"

namespace stbc {

using cplx = std::complex<double>;

inline constexpr cplx kJ{0.0, 1.0};

template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(Errc::DimensionMismatch, "entry count does not match rows*cols");
    }
    for (const auto& v : data_) {
      if (!finite(v)) throw Error(Errc::InvalidArgument, "non-finite matrix entry");
    }
  }

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(Errc::DimensionMismatch, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<T> entries() noexcept { return data_; }
  std::span<const T> entries() const noexcept { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const T> values) {
    if (values.size() != rows_) throw Error(Errc::DimensionMismatch, "column length");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Conjugate transpose; plain transpose for real matrices.
  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = conj_of((*this)(i, j));
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= T{-1}; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "matrix product shapes");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static bool finite(const T& v) {
    if constexpr (std::is_same_v<T, cplx>) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    } else {
      return std::isfinite(v);
    }
  }
  static T conj_of(const T& v) {
    if constexpr (std::is_same_v<T, cplx>) {
      return std::conj(v);
    } else {
      return v;
    }
  }
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw Error(Errc::DimensionMismatch, "shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;
using ComplexVector = std::vector<cplx>;
using RealVector = std::vector<double>;

template <typename T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw Error(Errc::DimensionMismatch, "matrix-vector shapes");
  std::vector<T> y(a.rows(), T{});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

template <typename T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& x) {
  return a * std::span<const T>(x);
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "dot lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Kronecker product: block (i,j) of the result is A(i,j) * B.
template <typename T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T aij = a(i, j);
      if (aij == T{}) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

// Kronecker power; kron_power(A, 0) is the 1x1 identity.
template <typename T>
Matrix<T> kron_power(const Matrix<T>& a, std::size_t m) {
  Matrix<T> r = Matrix<T>::identity(1);
  for (std::size_t i = 0; i < m; ++i) r = kron(r, a);
  return r;
}

inline RealMatrix realify(const ComplexMatrix& x) {
  RealMatrix r(2 * x.rows(), 2 * x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const cplx v = x(i, j);
      r(2 * i, 2 * j) = v.real();
      r(2 * i, 2 * j + 1) = -v.imag();
      r(2 * i + 1, 2 * j) = v.imag();
      r(2 * i + 1, 2 * j + 1) = v.real();
    }
  return r;
}

inline RealVector tilde_vec(std::span<const cplx> x) {
  RealVector r(2 * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[2 * i] = x[i].real();
    r[2 * i + 1] = x[i].imag();
  }
  return r;
}

inline ComplexVector untilde(std::span<const double> r) {
  if (r.size() % 2 != 0) throw Error(Errc::DimensionMismatch, "odd-length real vector");
  ComplexVector x(r.size() / 2);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {r[2 * i], r[2 * i + 1]};
  return x;
}

// Column-stacking vectorization.
template <typename T>
std::vector<T> vec(const Matrix<T>& m) {
  std::vector<T> v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m(i, j));
  return v;
}

inline RealVector tilde_vec(const ComplexMatrix& m) { return tilde_vec(vec(m)); }

template <typename T>
double fro_norm(const Matrix<T>& m) {
  double s = 0.0;
  for (const auto& v : m.entries()) s += std::norm(v);
  return std::sqrt(s);
}

template <typename T>
T trace(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(Errc::NonSquare, "trace of non-square matrix");
  T t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

template <typename T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, "max_abs_diff shapes");
  }
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) m = std::max(m, std::abs(ea[k] - eb[k]));
  return m;
}

template <typename T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (const auto& v : a.entries()) m = std::max(m, std::abs(v));
  return m;
}

// Determinant via LU with partial pivoting.
template <typename T>
T det(Matrix<T> a) {
  if (!a.is_square()) throw Error(Errc::NonSquare, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  T d{1};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return T{};
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      d = -d;
    }
    const T pivot = a(k, k);
    d *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a(i, k) / pivot;
      if (f == T{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

// log|det A| via LU; used as the independent route for log-det checks.
inline double log_abs_det(RealMatrix a) {
  if (!a.is_square()) throw Error(Errc::NonSquare, "log-det of non-square matrix");
  const std::size_t n = a.rows();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return -std::numeric_limits<double>::infinity();
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
    acc += std::log(std::abs(a(k, k)));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return acc;
}

struct QRResult {
  RealMatrix q;  // m x n, orthonormal columns
  RealMatrix r;  // n x n, upper triangular, positive diagonal
};

// Column-ordered (no pivoting) modified Gram-Schmidt with one
// re-orthogonalization pass. R's strictly lower part is literal zeros.
// Rank test: ||r_i|| < tol * ||A||_F raises RankDeficient.
inline QRResult gram_schmidt_qr(const RealMatrix& a, double tol = 1e-10) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n > m) throw Error(Errc::RankDeficient, "more columns than rows");
  const double scale = fro_norm(a);
  QRResult out{RealMatrix(m, n), RealMatrix(n, n)};
  std::vector<double> v(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < m; ++r) v[r] = a(r, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        double c = 0.0;
        for (std::size_t r = 0; r < m; ++r) c += out.q(r, j) * v[r];
        for (std::size_t r = 0; r < m; ++r) v[r] -= c * out.q(r, j);
        out.r(j, i) += c;
      }
    }
    const double len = norm2(v);
    if (!(len >= tol * scale) || len == 0.0) {
      throw Error(Errc::RankDeficient,
                  "column " + std::to_string(i) + " is dependent on earlier columns");
    }
    out.r(i, i) = len;
    for (std::size_t r = 0; r < m; ++r) out.q(r, i) = v[r] / len;
  }
  return out;
}

// True when the columns are linearly independent over R.
inline bool has_full_column_rank(const RealMatrix& a, double tol = 1e-10) {
  try {
    gram_schmidt_qr(a, tol);
    return true;
  } catch (const Error& e) {
    if (e.code() != Errc::RankDeficient) throw;
    return false;
  }
}

// Numerical rank by greedy column selection; used for diagnostics only.
inline std::size_t column_rank(const RealMatrix& a, double tol = 1e-10) {
  const double scale = std::max(fro_norm(a), 1e-300);
  std::vector<std::vector<double>> basis;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    auto v = a.column(i);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const double c = dot(q, v);
        for (std::size_t r = 0; r < v.size(); ++r) v[r] -= c * q[r];
      }
    const double len = norm2(v);
    if (len >= tol * scale) {
      for (auto& x : v) x /= len;
      basis.push_back(std::move(v));
    }
  }
  return basis.size();
}

// Linear independence over C of complex vectors: realify each v and j*v.
inline bool independent_over_complex(const std::vector<ComplexVector>& vs, double tol = 1e-10) {
  if (vs.empty()) return true;
  RealMatrix m(2 * vs.front().size(), 2 * vs.size());
  for (std::size_t k = 0; k < vs.size(); ++k) {
    ComplexVector jv(vs[k].size());
    for (std::size_t i = 0; i < jv.size(); ++i) jv[i] = kJ * vs[k][i];
    m.set_column(2 * k, tilde_vec(vs[k]));
    m.set_column(2 * k + 1, tilde_vec(jv));
  }
  return has_full_column_rank(m, tol);
}

inline bool is_unitary(const ComplexMatrix& m, double tol = 1e-12) {
  if (!m.is_square()) return false;
  return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows())) < tol;
}

inline bool is_orthogonal(const RealMatrix& m, double tol = 1e-10) {
  if (!m.is_square()) return false;
  return max_abs_diff(m.transpose() * m, RealMatrix::identity(m.rows())) < tol;
}

inline RealMatrix real_part(const ComplexMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
  return r;
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
  return c;
}

// ---------------------------------------------------------------------------
// Exact Gaussian-integer path, for matrices with entries in Z[j].

struct GaussInt {
  long long re = 0;
  long long im = 0;

  friend GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussInt operator*(GaussInt a, GaussInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(GaussInt a, GaussInt b) = default;
};

using GaussMatrix = Matrix<GaussInt>;

inline bool is_gaussian_integer(const ComplexMatrix& m) {
  for (const auto& v : m.entries()) {
    if (v.real() != std::round(v.real()) || v.imag() != std::round(v.imag())) return false;
  }
  return true;
}

inline GaussMatrix to_gaussian(const ComplexMatrix& m) {
  if (!is_gaussian_integer(m)) {
    throw Error(Errc::StructureError, "matrix entries are not Gaussian integers");
  }
  GaussMatrix g(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      g(i, j) = {std::llround(m(i, j).real()), std::llround(m(i, j).imag())};
  return g;
}

// GaussInt has no "zero skip" semantics in the generic product, so it gets its own.
inline GaussMatrix exact_product(const GaussMatrix& a, const GaussMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "exact product shapes");
  GaussMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = c(i, j) + a(i, k) * b(k, j);
  return c;
}

// ---------------------------------------------------------------------------
// Plain-text format: one row per line, entries "a+bi" separated by spaces.

namespace detail {

inline std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(Errc::ParseError, "bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

inline std::string format_complex(cplx v) {
  const double im = v.imag() == 0.0 ? 0.0 : v.imag();
  std::string s = detail::format_real(v.real());
  s += std::signbit(im) ? '-' : '+';
  s += detail::format_real(std::abs(im));
  s += 'i';
  return s;
}

// Accepts "a+bi", "a-bi", "bi" and plain reals "a".
inline cplx parse_complex(std::string_view s) {
  if (s.empty()) throw Error(Errc::ParseError, "empty complex literal");
  if (s.back() != 'i') return {detail::parse_real(s), 0.0};
  s.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    if (s.empty() || s == "+") return {0.0, 1.0};
    if (s == "-") return {0.0, -1.0};
    return {0.0, detail::parse_real(s)};
  }
  std::string_view im = s.substr(split);
  double imv = (im == "+") ? 1.0 : (im == "-") ? -1.0 : detail::parse_real(im);
  return {detail::parse_real(s.substr(0, split)), imv};
}

inline void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_complex(m(i, j));
    }
    os << '\n';
  }
}

inline void write_matrix(std::ostream& os, const RealMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << detail::format_real(m(i, j));
    }
    os << '\n';
  }
}

inline std::vector<cplx> parse_matrix_row(const std::string& line) {
  std::istringstream ls(line);
  std::vector<cplx> row;
  std::string tok;
  while (ls >> tok) row.push_back(parse_complex(tok));
  return row;
}

// Reads `rows` non-empty lines (all remaining non-empty lines when rows == 0).
inline ComplexMatrix read_matrix(std::istream& is, std::size_t rows = 0) {
  std::vector<cplx> data;
  std::size_t cols = 0;
  std::size_t got = 0;
  std::string line;
  while ((rows == 0 || got < rows) && std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      if (rows == 0 && got > 0) break;
      continue;
    }
    auto row = parse_matrix_row(line);
    if (got == 0) cols = row.size();
    if (row.size() != cols) throw Error(Errc::ParseError, "ragged matrix row");
    data.insert(data.end(), row.begin(), row.end());
    ++got;
  }
  if (rows != 0 && got != rows) throw Error(Errc::ParseError, "matrix truncated");
  if (got == 0) throw Error(Errc::ParseError, "empty matrix");
  return ComplexMatrix(got, cols, std::move(data));
}

inline ComplexMatrix parse_matrix(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

inline std::string matrix_to_string(const ComplexMatrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}

}  // namespace stbc
