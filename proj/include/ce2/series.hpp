#pragma once
// Truncated power series in one and two complex variables.
//
// Everything is templated on the real type so the same code runs in
// double and in long double (the "extended" precision mode).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ce2/errors.hpp"

namespace ce2 {

using Complex = std::complex<double>;

template <class R>
class TruncatedSeries1 {
 public:
  using value_type = std::complex<R>;

  TruncatedSeries1() = default;
  explicit TruncatedSeries1(int cutoff) : c_(check_cutoff(cutoff)) {}
  TruncatedSeries1(int cutoff, const std::vector<value_type>& coeffs) : c_(check_cutoff(cutoff)) {
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = coeffs[i];
  }

  static TruncatedSeries1 constant(int cutoff, value_type v) {
    TruncatedSeries1 s(cutoff);
    s.c_[0] = v;
    return s;
  }
  static TruncatedSeries1 identity(int cutoff) {
    TruncatedSeries1 s(cutoff);
    if (cutoff > 1) s.c_[1] = value_type(1);
    return s;
  }

  int cutoff() const { return static_cast<int>(c_.size()); }
  value_type operator[](int n) const { return c_[n]; }
  value_type& operator[](int n) { return c_[n]; }
  const std::vector<value_type>& coeffs() const { return c_; }

  // Same data at a different cutoff (zero padded or truncated).
  TruncatedSeries1 resized(int cutoff) const { return TruncatedSeries1(cutoff, c_); }

  value_type eval(value_type z) const {
    value_type acc(0);
    for (int n = cutoff() - 1; n >= 0; --n) acc = acc * z + c_[n];
    return acc;
  }

  TruncatedSeries1 derivative() const {
    TruncatedSeries1 d(cutoff());
    for (int n = 0; n + 1 < cutoff(); ++n) d.c_[n] = R(n + 1) * c_[n + 1];
    return d;
  }

  TruncatedSeries1 conj() const {
    TruncatedSeries1 out(cutoff());
    for (int n = 0; n < cutoff(); ++n) out.c_[n] = std::conj(c_[n]);
    return out;
  }

  TruncatedSeries1& operator+=(const TruncatedSeries1& o) {
    same_cutoff(o);
    for (int n = 0; n < cutoff(); ++n) c_[n] += o.c_[n];
    return *this;
  }
  TruncatedSeries1& operator-=(const TruncatedSeries1& o) {
    same_cutoff(o);
    for (int n = 0; n < cutoff(); ++n) c_[n] -= o.c_[n];
    return *this;
  }
  TruncatedSeries1& operator*=(value_type k) {
    for (auto& x : c_) x *= k;
    return *this;
  }
  friend TruncatedSeries1 operator+(TruncatedSeries1 a, const TruncatedSeries1& b) { return a += b; }
  friend TruncatedSeries1 operator-(TruncatedSeries1 a, const TruncatedSeries1& b) { return a -= b; }
  friend TruncatedSeries1 operator*(value_type k, TruncatedSeries1 a) { return a *= k; }

  void same_cutoff(const TruncatedSeries1& o) const {
    if (o.cutoff() != cutoff())
      throw UsageError("series cutoff mismatch: " + std::to_string(cutoff()) + " vs " +
                       std::to_string(o.cutoff()));
  }

 private:
  static std::size_t check_cutoff(int n) {
    if (n < 1) throw UsageError("series cutoff must be >= 1");
    return static_cast<std::size_t>(n);
  }
  std::vector<value_type> c_;
};

template <class R>
TruncatedSeries1<R> s_mul(const TruncatedSeries1<R>& a, const TruncatedSeries1<R>& b) {
  a.same_cutoff(b);
  const int N = a.cutoff();
  TruncatedSeries1<R> out(N);
  for (int i = 0; i < N; ++i) {
    if (a[i] == std::complex<R>(0)) continue;
    for (int j = 0; i + j < N; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <class R>
TruncatedSeries1<R> s_reciprocal(const TruncatedSeries1<R>& a) {
  if (a[0] == std::complex<R>(0)) throw SingularSeriesError("reciprocal of a series with zero constant term");
  const int N = a.cutoff();
  TruncatedSeries1<R> b(N);
  const std::complex<R> inv0 = std::complex<R>(1) / a[0];
  b[0] = inv0;
  for (int n = 1; n < N; ++n) {
    std::complex<R> acc(0);
    for (int k = 1; k <= n; ++k) acc += a[k] * b[n - k];
    b[n] = -acc * inv0;
  }
  return b;
}

// g∘f by Horner. Exact when f(0) = 0 or when g is a polynomial that fits
// in the cutoff; otherwise it is the composition of the truncated g and
// loses accuracy as |f(0)| approaches 1.
template <class R>
TruncatedSeries1<R> s_compose(const TruncatedSeries1<R>& g, const TruncatedSeries1<R>& f) {
  g.same_cutoff(f);
  if (std::abs(f[0]) >= R(1)) throw DomainError("s_compose needs |f(0)| < 1");
  const int N = g.cutoff();
  int top = N - 1;
  while (top > 0 && g[top] == std::complex<R>(0)) --top;
  auto acc = TruncatedSeries1<R>::constant(N, g[top]);
  for (int k = top - 1; k >= 0; --k) {
    acc = s_mul(acc, f);
    acc[0] += g[k];
  }
  return acc;
}

// a^k with k >= 0.
template <class R>
TruncatedSeries1<R> s_pow(const TruncatedSeries1<R>& a, int k) {
  auto out = TruncatedSeries1<R>::constant(a.cutoff(), std::complex<R>(1));
  for (int i = 0; i < k; ++i) out = s_mul(out, a);
  return out;
}

// Bivariate series p(z,w) = sum p_{n,m} z^n w^m on an N x N grid; only
// entries with n+m <= valid_total_degree() are meaningful.
template <class R>
class TruncatedSeries2 {
 public:
  using value_type = std::complex<R>;

  TruncatedSeries2() = default;
  explicit TruncatedSeries2(int cutoff) : TruncatedSeries2(cutoff, 2 * cutoff - 2) {}
  TruncatedSeries2(int cutoff, int valid_degree)
      : n_(cutoff), d_(valid_degree), g_(static_cast<std::size_t>(cutoff) * cutoff) {
    if (cutoff < 1) throw UsageError("series cutoff must be >= 1");
    if (valid_degree > 2 * cutoff - 2) throw UsageError("valid degree exceeds grid");
  }

  static TruncatedSeries2 constant(int cutoff, value_type v) {
    TruncatedSeries2 s(cutoff);
    s(0, 0) = v;
    return s;
  }
  // f(z) or f(w) viewed as a bivariate series.
  static TruncatedSeries2 from_z(const TruncatedSeries1<R>& f) {
    TruncatedSeries2 s(f.cutoff());
    for (int n = 0; n < f.cutoff(); ++n) s(n, 0) = f[n];
    return s;
  }
  static TruncatedSeries2 from_w(const TruncatedSeries1<R>& f) {
    TruncatedSeries2 s(f.cutoff());
    for (int m = 0; m < f.cutoff(); ++m) s(0, m) = f[m];
    return s;
  }

  int cutoff() const { return n_; }
  int valid_total_degree() const { return d_; }
  bool trusted(int n, int m) const { return n + m <= d_; }

  value_type operator()(int n, int m) const { return g_[static_cast<std::size_t>(n) * n_ + m]; }
  value_type& operator()(int n, int m) { return g_[static_cast<std::size_t>(n) * n_ + m]; }

  // Zero every untrusted entry, so stale data never leaks into later sums.
  void scrub() {
    for (int n = 0; n < n_; ++n)
      for (int m = 0; m < n_; ++m)
        if (n + m > d_) (*this)(n, m) = value_type(0);
  }
  void set_valid_total_degree(int d) {
    d_ = std::min(d, 2 * n_ - 2);
    scrub();
  }

  // Top-left block of size cutoff, keeping the trust bound where it fits.
  TruncatedSeries2 cropped(int cutoff, int valid_degree) const {
    TruncatedSeries2 out(cutoff, std::min({valid_degree, d_, 2 * cutoff - 2}));
    for (int n = 0; n < std::min(cutoff, n_); ++n)
      for (int m = 0; m < std::min(cutoff, n_); ++m)
        if (out.trusted(n, m)) out(n, m) = (*this)(n, m);
    return out;
  }

  value_type eval(value_type z, value_type w) const {
    value_type acc(0);
    for (int n = n_ - 1; n >= 0; --n) {
      value_type row(0);
      for (int m = n_ - 1; m >= 0; --m)
        if (trusted(n, m)) row = row * w + (*this)(n, m);
        else row = row * w;
      acc = acc * z + row;
    }
    return acc;
  }

  R max_abs() const {
    R out(0);
    for (int n = 0; n < n_; ++n)
      for (int m = 0; m < n_ && n + m <= d_; ++m) out = std::max(out, std::abs((*this)(n, m)));
    return out;
  }

  TruncatedSeries2& operator+=(const TruncatedSeries2& o) {
    same_cutoff(o);
    d_ = std::min(d_, o.d_);
    for (std::size_t i = 0; i < g_.size(); ++i) g_[i] += o.g_[i];
    scrub();
    return *this;
  }
  TruncatedSeries2& operator-=(const TruncatedSeries2& o) {
    same_cutoff(o);
    d_ = std::min(d_, o.d_);
    for (std::size_t i = 0; i < g_.size(); ++i) g_[i] -= o.g_[i];
    scrub();
    return *this;
  }
  TruncatedSeries2& operator*=(value_type k) {
    for (auto& x : g_) x *= k;
    return *this;
  }
  friend TruncatedSeries2 operator+(TruncatedSeries2 a, const TruncatedSeries2& b) { return a += b; }
  friend TruncatedSeries2 operator-(TruncatedSeries2 a, const TruncatedSeries2& b) { return a -= b; }
  friend TruncatedSeries2 operator*(value_type k, TruncatedSeries2 a) { return a *= k; }

  void same_cutoff(const TruncatedSeries2& o) const {
    if (o.n_ != n_)
      throw UsageError("bivariate cutoff mismatch: " + std::to_string(n_) + " vs " + std::to_string(o.n_));
  }

 private:
  int n_ = 0;
  int d_ = -1;
  std::vector<value_type> g_;
};

// Cauchy product in both variables, computed on the trusted triangle only.
template <class R>
TruncatedSeries2<R> s2_mul(const TruncatedSeries2<R>& a, const TruncatedSeries2<R>& b) {
  a.same_cutoff(b);
  const int N = a.cutoff();
  TruncatedSeries2<R> out(N, std::min(a.valid_total_degree(), b.valid_total_degree()));
  const int D = out.valid_total_degree();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N && i + j <= D; ++j) {
      const auto aij = a(i, j);
      if (aij == std::complex<R>(0)) continue;
      for (int n = i; n < N; ++n)
        for (int m = j; m < N && n + m <= D; ++m) out(n, m) += aij * b(n - i, m - j);
    }
  return out;
}

// f(z)·p(z,w); one convolution per column.
template <class R>
TruncatedSeries2<R> s2_mul_z(const TruncatedSeries1<R>& f, const TruncatedSeries2<R>& p) {
  if (f.cutoff() < p.cutoff()) throw UsageError("s2_mul_z: univariate factor too short");
  const int N = p.cutoff(), D = p.valid_total_degree();
  TruncatedSeries2<R> out(N, D);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N && n + m <= D; ++m) {
      std::complex<R> acc(0);
      for (int i = 0; i <= n; ++i) acc += f[i] * p(n - i, m);
      out(n, m) = acc;
    }
  return out;
}

template <class R>
TruncatedSeries2<R> s2_mul_w(const TruncatedSeries1<R>& f, const TruncatedSeries2<R>& p) {
  if (f.cutoff() < p.cutoff()) throw UsageError("s2_mul_w: univariate factor too short");
  const int N = p.cutoff(), D = p.valid_total_degree();
  TruncatedSeries2<R> out(N, D);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N && n + m <= D; ++m) {
      std::complex<R> acc(0);
      for (int j = 0; j <= m; ++j) acc += f[j] * p(n, m - j);
      out(n, m) = acc;
    }
  return out;
}

template <class R>
TruncatedSeries2<R> s2_reciprocal(const TruncatedSeries2<R>& a) {
  const auto a00 = a(0, 0);
  if (a00 == std::complex<R>(0)) throw SingularSeriesError("bivariate reciprocal with zero constant term");
  const int N = a.cutoff(), D = a.valid_total_degree();
  TruncatedSeries2<R> b(N, D);
  const auto inv = std::complex<R>(1) / a00;
  // Fill by total degree so every b(n-i, m-j) on the right is already known.
  for (int k = 0; k <= D; ++k)
    for (int n = std::max(0, k - (N - 1)); n <= std::min(k, N - 1); ++n) {
      const int m = k - n;
      if (k == 0) {
        b(0, 0) = inv;
        continue;
      }
      std::complex<R> acc(0);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= m; ++j) {
          if (i == 0 && j == 0) continue;
          const auto aij = a(i, j);
          if (aij != std::complex<R>(0)) acc += aij * b(n - i, m - j);
        }
      b(n, m) = -acc * inv;
    }
  return b;
}

// q(z,w) = (f(z) - f(w))/(z - w), q_{n,m} = c_{n+m+1}.
template <class R>
TruncatedSeries2<R> divided_difference(const TruncatedSeries1<R>& f) {
  const int N = f.cutoff();
  TruncatedSeries2<R> q(N, std::min(N - 2, 2 * N - 2));
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N && n + m + 1 < N; ++m) q(n, m) = f[n + m + 1];
  return q;
}

// Same rule with the grid decoupled from the series length: the grid is
// `grid` x `grid` and the trust bound is what f's length supports.
template <class R>
TruncatedSeries2<R> divided_difference(const TruncatedSeries1<R>& f, int grid) {
  const int L = f.cutoff();
  TruncatedSeries2<R> q(grid, std::min(L - 2, 2 * grid - 2));
  for (int n = 0; n < grid; ++n)
    for (int m = 0; m < grid && n + m + 1 < L; ++m) q(n, m) = f[n + m + 1];
  return q;
}

template <class R>
TruncatedSeries2<R> mul_by_diag(const TruncatedSeries2<R>& q) {
  const int N = q.cutoff();
  TruncatedSeries2<R> p(N, std::min(q.valid_total_degree() + 1, 2 * N - 2));
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      if (!p.trusted(n, m)) continue;
      std::complex<R> v(0);
      if (n > 0 && q.trusted(n - 1, m)) v += q(n - 1, m);
      if (m > 0 && q.trusted(n, m - 1)) v -= q(n, m - 1);
      p(n, m) = v;
    }
  return p;
}

template <class R>
R diagonal_residual(const TruncatedSeries2<R>& p, int k) {
  std::complex<R> s(0);
  const int N = p.cutoff();
  for (int n = std::max(0, k - (N - 1)); n <= std::min(k, N - 1); ++n) s += p(n, k - n);
  return std::abs(s);
}

// Solve (z - w) q = p. Needs p(z,z) = 0 on every trusted degree; the
// tolerance is relative to the largest trusted entry of p.
template <class R>
TruncatedSeries2<R> divide_by_diag(const TruncatedSeries2<R>& p, R rel_eps = R(1e-9), R scale = R(0)) {
  const int N = p.cutoff();
  const int D = p.valid_total_degree();
  // scale: magnitude of whatever p was computed from, when p itself is
  // the result of a cancellation
  const R eps = rel_eps * std::max(p.max_abs(), scale);
  // anti-diagonals past N-1 are cut by the square and do not telescope
  for (int k = 0; k <= std::min(D, N - 1); ++k) {
    const R res = diagonal_residual(p, k);
    if (res > eps)
      throw NotDivisibleError("diagonal residual " + std::to_string(static_cast<double>(res)) +
                              " at total degree " + std::to_string(k));
  }
  // q at total degree k uses p at degree k+1 with first index up to k+1.
  const int Dq = std::min(D, N - 1) - 1;
  TruncatedSeries2<R> q(N, std::max(Dq, -1));
  for (int k = 0; k <= Dq; ++k)
    for (int n = k; n >= 0; --n) {
      const int m = k - n;
      auto v = p(n + 1, m);
      if (m > 0) v += q(n + 1, m - 1);
      q(n, m) = v;
    }
  return q;
}

// P(g(z), h(w)) by nested Horner. Exact on trusted degrees when
// g(0) = h(0) = 0; otherwise the result is the truncated double sum.
template <class R>
TruncatedSeries2<R> s2_substitute(const TruncatedSeries2<R>& P, const TruncatedSeries1<R>& g,
                                  const TruncatedSeries1<R>& h) {
  const int N = P.cutoff();
  const int D = P.valid_total_degree();
  auto gz = g.resized(N), hw = h.resized(N);
  TruncatedSeries2<R> acc(N, D);
  for (int n = N - 1; n >= 0; --n) {
    // inner_n(w) = sum_m P(n,m) h(w)^m
    TruncatedSeries1<R> inner(N);
    for (int m = N - 1; m >= 0; --m) {
      inner = s_mul(inner, hw);
      if (P.trusted(n, m)) inner[0] += P(n, m);
    }
    acc = s2_mul_z(gz, acc);
    for (int m = 0; m < N; ++m)
      if (acc.trusted(0, m)) acc(0, m) += inner[m];
  }
  return acc;
}

}  // namespace ce2
