#pragma once
// Independent reference values for the tests. Nothing here calls into the
// series pipeline: closed forms, direct evaluation and quadrature only.

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int t = 1; t <= k; ++t) b = b * (n - k + t) / t;
  return b;
}

// F for z + c z^2: -c^2 / (1 + c(z+w))^2
inline C quadratic_F(C c, C z, C w) {
  const C d = 1.0 + c * (z + w);
  return -c * c / (d * d);
}

inline C quadratic_d(C c, int n, int m) {
  return -c * c * double(n + m + 1) * std::pow(-c, n + m) * binom(n + m, n);
}

// g_{n,m} for the pair (B_{a,r}, B_{b,s}).
inline C affine_g(C a, double r, C b, double s, int n, int m) {
  const double comb = factorial(n + m + 1) / (factorial(n) * factorial(m));
  return (n % 2 ? -1.0 : 1.0) * std::pow(r, n + 1) * std::pow(s, m + 1) * comb * std::pow(a - b, -(n + m + 2));
}

// F straight from the definition; only usable away from z = w.
inline C direct_F(const std::function<C(C)>& f, const std::function<C(C)>& df, C z, C w) {
  const C q = f(z) - f(w);
  return df(z) * df(w) / (q * q) - 1.0 / ((z - w) * (z - w));
}

// Schwarzian/6 of z + c z^2 as a Taylor series, from phi' = 1 + 2cz and
// phi'' = 2c: S = -(3/2)(2c/(1+2cz))^2, so S/6 = -c^2 (1+2cz)^{-2}.
inline std::vector<C> quadratic_schwarzian_over_6(C c, int K) {
  std::vector<C> out(K);
  for (int k = 0; k < K; ++k) out[k] = -c * c * double(k + 1) * std::pow(-2.0 * c, k);
  return out;
}

// Polar product rule on the unit disk: 64-point Gauss-Legendre in the
// radius, 64-point trapezoid in the angle. Nodes carry the area weight
// divided by pi, so sum of weights = 1 (the Bergman normalization).
struct DiskRule {
  std::vector<C> z;
  std::vector<double> w;

  explicit DiskRule(double angle_offset = 0.0) {
    using GL = boost::math::quadrature::gauss<double, 64>;
    const auto& x = GL::abscissa();
    const auto& wx = GL::weights();
    std::vector<double> rs, ws;
    for (std::size_t i = 0; i < x.size(); ++i) {
      // [-1,1] -> [0,1]
      for (const double sgn : {-1.0, 1.0}) {
        if (x[i] == 0.0 && sgn < 0) continue;
        rs.push_back(0.5 * (1.0 + sgn * x[i]));
        ws.push_back(0.5 * wx[i]);
      }
    }
    const int M = 64;
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (int j = 0; j < M; ++j) {
        const double t = 2.0 * M_PI * (j + angle_offset) / M;
        z.push_back(std::polar(rs[i], t));
        // dA = r dr dt; divided by pi
        w.push_back(ws[i] * rs[i] * (2.0 * M_PI / M) / M_PI);
      }
  }
};

// (f, g)_B for functions given pointwise.
inline C bergman_inner(const std::function<C(C)>& f, const std::function<C(C)>& g, const DiskRule& q) {
  C s = 0.0;
  for (std::size_t k = 0; k < q.z.size(); ++k) s += q.w[k] * std::conj(f(q.z[k])) * g(q.z[k]);
  return s;
}

inline C on_basis(int n, C z) { return std::sqrt(double(n + 1)) * std::pow(z, n); }

// c(n,m) = (1/pi^2) int int F(conj z, conj w) e_n(z) e_m(w) dA dA: the
// bilinear functional whose value on (E_a, E_b) is F(a,b), with both
// conjugations of its definition written out.
inline Eigen::MatrixXcd contraction_by_quadrature(const std::function<C(C, C)>& F, int N) {
  const DiskRule qz(0.0), qw(0.5);  // staggered so z != w at every node pair
  Eigen::MatrixXcd inner = Eigen::MatrixXcd::Zero(static_cast<long>(qw.z.size()), N);
  for (std::size_t b = 0; b < qw.z.size(); ++b) {
    const C wb = std::conj(qw.z[b]);
    for (std::size_t a = 0; a < qz.z.size(); ++a) {
      const C fz = qz.w[a] * F(std::conj(qz.z[a]), wb);
      C p = 1.0;
      for (int n = 0; n < N; ++n) {
        inner(static_cast<long>(b), n) += fz * std::sqrt(double(n + 1)) * p;
        p *= qz.z[a];
      }
    }
  }
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t b = 0; b < qw.z.size(); ++b) {
    C p = 1.0;
    for (int m = 0; m < N; ++m) {
      for (int n = 0; n < N; ++n) c(n, m) += qw.w[b] * inner(static_cast<long>(b), n) * std::sqrt(double(m + 1)) * p;
      p *= qw.z[b];
    }
  }
  return c;
}

// prod_{n=1}^{N} (1 - r^n)^{-1}
inline double euler_product(double r, int N) {
  double p = 1.0;
  for (int n = 1; n <= N; ++n) p /= 1.0 - std::pow(r, n);
  return p;
}

}  // namespace oracle
