#include "ce2/verify.hpp"

#include <Eigen/Cholesky>
#include <boost/multiprecision/cpp_int.hpp>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "ce2/fock_dense.hpp"
#include "ce2/vertex.hpp"

namespace ce2 {

using Rational = boost::multiprecision::cpp_rational;

// ---- run configuration ----

void RunConfig::validate() const {
  if (N < 4) throw UsageError("run config: N must be >= 4");
  if (P < 1) throw UsageError("run config: P must be >= 1");
  if (W < 0) throw UsageError("run config: W must be >= 0");
  if (!(abs_tol > 0.0)) throw UsageError("run config: abs_tol must be positive");
  if (!(conv_factor > 0.0 && conv_factor <= 1.0)) throw UsageError("run config: conv_factor must lie in (0, 1]");
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("run config: expected an object");
  RunConfig c;
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "N") c.N = v.get<int>();
      else if (k == "P") c.P = v.get<int>();
      else if (k == "W") c.W = v.get<int>();
      else if (k == "abs_tol") c.abs_tol = v.get<double>();
      else if (k == "conv_factor") c.conv_factor = v.get<double>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "precision") {
        const auto p = v.get<std::string>();
        if (p != "double" && p != "extended") throw ParseError("run config: precision must be double or extended");
        c.extended = p == "extended";
      } else {
        throw ParseError("run config: unexpected field '" + k + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("run config: ") + e.what());
  }
  c.validate();
  return c;
}

Json run_config_to_json(const RunConfig& c) {
  Json j;
  j["N"] = c.N;
  j["P"] = c.P;
  j["W"] = c.W;
  j["abs_tol"] = c.abs_tol;
  j["conv_factor"] = c.conv_factor;
  j["precision"] = c.extended ? "extended" : "double";
  j["seed"] = c.seed;
  return j;
}

bool SuiteReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Json SuiteReport::to_json() const {
  Json j;
  j["suite"] = suite;
  j["pass"] = all_pass();
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json e;
    e["id"] = c.id;
    e["params"] = c.params;
    e["value"] = c.value;
    e["expected"] = c.expected;
    e["abs_err"] = c.abs_err;
    e["pass"] = c.pass;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j;
}

int thread_cap() {
  if (const char* env = std::getenv("CE2_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

bool shrinks(double coarse, double fine, double conv_factor, double floor) {
  return coarse <= floor || fine <= conv_factor * coarse;
}

namespace {

// ---- check builders ----

CheckResult error_check(std::string id, Json params, double err, double tol) {
  params["tol"] = tol;
  return {std::move(id), std::move(params), err, 0.0, err, err <= tol};
}

CheckResult value_check(std::string id, Json params, double value, double expected, double tol) {
  params["tol"] = tol;
  const double e = std::abs(value - expected);
  return {std::move(id), std::move(params), value, expected, e, e <= tol};
}

CheckResult below_check(std::string id, Json params, double value, double bound) {
  params["relation"] = "<=";
  return {std::move(id), std::move(params), value, bound, std::abs(value - bound), value <= bound};
}

CheckResult above_check(std::string id, Json params, double value, double bound) {
  params["relation"] = ">=";
  return {std::move(id), std::move(params), value, bound, std::abs(value - bound), value >= bound};
}

CheckResult shrink_check(std::string id, Json params, double coarse, double fine, double factor) {
  params["coarse"] = coarse;
  params["factor"] = factor;
  const double target = factor * coarse;
  return {std::move(id), std::move(params), fine, target, std::abs(fine - target), shrinks(coarse, fine, factor)};
}

DiskMap poly_map(Complex a1, Complex a2) {
  TruncatedSeries1<double> s(3);
  s[1] = a1;
  s[2] = a2;
  return DiskMap::series(s);
}

DiskMap poly_map_unchecked(Complex a1, Complex a2) {
  TruncatedSeries1<double> s(3);
  s[1] = a1;
  s[2] = a2;
  return DiskMap::series_unchecked(s);
}

Json map_param(const DiskMap& phi) { return phi.describe(); }

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// ---- cocycle-identities ----

template <class R>
void cocycle_suite(const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int N = cfg.N;
  const int Nlo = std::max(4, N / 2);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  for (int i = 0; i < 10; ++i) {
    const double theta = (2.0 * U(rng) - 1.0) * std::numbers::pi;
    const Complex alpha = std::polar(0.9 * U(rng), 2.0 * std::numbers::pi * U(rng));
    const auto phi = DiskMap::mobius(theta, alpha);
    const auto g = grunsky(cocycle_F<R>(phi, N), KernelSource::F);
    out.push_back(error_check("mobius_F_vanishes", {{"map", map_param(phi)}, {"N", N}},
                              double(hs_norm_sq(g, g.valid_total_degree)), 1e-18));
  }

  for (const Complex c : {Complex(0.1, 0.0), Complex(0.0, 0.2)}) {
    const auto F = cocycle_F<R>(poly_map_unchecked(1.0, c), N);
    double err = 0.0;
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N && n + m <= F.valid_total_degree(); ++m) {
        double b = 1.0;
        for (int t = 1; t <= n; ++t) b = b * (n + m + 1 - t) / t;
        const Complex want = -c * c * double(n + m + 1) * std::pow(-c, n + m) * b;
        const auto got = F(n, m);
        err = std::max(err, std::abs(Complex(double(got.real()), double(got.imag())) - want));
      }
    out.push_back(error_check("quadratic_F_closed_form", {{"c", complex_to_json(c)}, {"N", N}}, err, 1e-10));
  }

  struct FPair {
    DiskMap f1, f2;
  };
  const std::vector<FPair> tri_F = {
      {DiskMap::mobius(0.4, {0.3, -0.2}), poly_map(0.5, 0.1)},
      {poly_map_unchecked(1.0, 0.2), poly_map(0.5, 0.1)},
      {poly_map_unchecked(1.0, 0.2), DiskMap::affine(0.0, 0.7)},
  };
  for (const auto& p : tri_F) {
    const auto r = verify_F_cocycle<R>(p.f1, p.f2, N);
    out.push_back(error_check("F_cocycle_triangular", {{"f1", map_param(p.f1)}, {"f2", map_param(p.f2)}, {"N", N}},
                              r.max_abs_err, 1e-9));
  }
  {
    const auto f1 = poly_map_unchecked(1.0, 0.45);
    const auto f2 = DiskMap::affine(0.45, 0.5);
    const double lo = verify_F_cocycle<R>(f1, f2, Nlo).max_abs_err;
    const double hi = verify_F_cocycle<R>(f1, f2, N).max_abs_err;
    out.push_back(shrink_check("F_cocycle_general",
                               {{"f1", map_param(f1)}, {"f2", map_param(f2)}, {"N", {Nlo, N}}}, lo, hi,
                               cfg.conv_factor));
  }

  {
    const auto g1 = DiskMap::affine(0.5, 0.3), g2 = DiskMap::affine(-0.4, 0.3);
    const auto f1 = poly_map(0.5, 0.1), f2 = DiskMap::affine(0.0, 0.6);
    for (const auto& f : {DiskMap::mobius(0.3, {0.0, 0.2}), DiskMap::affine(0.1, 0.8)}) {
      const auto r = verify_G_cocycles<R>(f, g1, g2, f1, f2, N);
      const Json params = {{"f", map_param(f)}, {"g1", map_param(g1)}, {"g2", map_param(g2)},
                           {"f1", map_param(f1)}, {"f2", map_param(f2)}, {"N", N}};
      out.push_back(error_check("G_cocycle_outer_triangular", params, r.outer.max_abs_err, 1e-9));
      out.push_back(error_check("G_cocycle_inner_triangular", params, r.inner.max_abs_err, 1e-9));
    }
  }
  {
    const auto f = poly_map_unchecked(1.0, 0.45);
    const auto g1 = DiskMap::affine(0.5, 0.45), g2 = DiskMap::affine(-0.5, 0.45);
    const auto f1 = DiskMap::affine(0.4, 0.5), f2 = DiskMap::affine(-0.4, 0.5);
    const auto lo = verify_G_cocycles<R>(f, g1, g2, f1, f2, Nlo);
    const auto hi = verify_G_cocycles<R>(f, g1, g2, f1, f2, N);
    const Json params = {{"f", map_param(f)}, {"g1", map_param(g1)}, {"g2", map_param(g2)},
                         {"f1", map_param(f1)}, {"f2", map_param(f2)}, {"N", {Nlo, N}}};
    out.push_back(shrink_check("G_cocycle_outer_general", params, lo.outer.max_abs_err, hi.outer.max_abs_err,
                               cfg.conv_factor));
    out.push_back(shrink_check("G_cocycle_inner_general", params, lo.inner.max_abs_err, hi.inner.max_abs_err,
                               cfg.conv_factor));
  }

  {
    const Affine a{0.5, 0.2}, b{-0.3, 0.2};
    const auto G = cocycle_G<R>(DiskMap::affine(a.a, a.r), DiskMap::affine(b.a, b.r), N);
    out.push_back(value_check("G_two_point", {{"a", 0.5}, {"b", -0.3}, {"r", 0.2}, {"s", 0.2}},
                              double(G(0, 0).real()), 0.0625, cfg.abs_tol));
    const int Nd = std::min(N, 24);
    const auto affine = cocycle_G_affine<R>(a, b, Nd);
    const auto general = cocycle_G_from_series(dm_to_series<R>(DiskMap::affine(a.a, a.r), Nd + 1),
                                               dm_to_series<R>(DiskMap::affine(b.a, b.r), Nd + 1), Nd);
    double err = 0.0;
    for (int n = 0; n < Nd; ++n)
      for (int m = 0; m < Nd && n + m <= general.valid_total_degree(); ++m)
        err = std::max(err, double(std::abs(affine(n, m) - general(n, m))));
    out.push_back(error_check("G_dual_path", {{"N", Nd}}, err, 1e-10));
  }

  // Tangency: sigma = (r+s)/|a-b| with a = 0.4, b = -0.4.
  const int Np = 41;
  for (const double sigma : {0.5, 0.9, 1.0}) {
    const double r = 0.4 * sigma;
    const auto G = cocycle_G<R>(DiskMap::affine(0.4, r), DiskMap::affine(-0.4, r), Np);
    const auto prof_r = hs_partial_profile(grunsky(G, KernelSource::G));
    const std::vector<double> prof(prof_r.begin(), prof_r.end());
    const auto diag = classify_profile(prof);
    const Json params = {{"sigma", sigma}, {"K", static_cast<int>(prof.size()) - 1},
                         {"verdict", to_string(diag.verdict)}, {"ratio", diag.ratio}};
    if (sigma < 1.0) {
      out.push_back(below_check("hs_profile_converges", params, diag.ratio, 0.95));
      out.back().pass = out.back().pass && diag.verdict == HsVerdict::converged;
    } else {
      double gap = INFINITY;
      for (int k = 1; 2 * k < static_cast<int>(prof.size()); ++k) gap = std::min(gap, prof[2 * k] - prof[k]);
      out.push_back(above_check("hs_profile_non_cauchy", params, gap, 1e-2));
      out.back().pass = out.back().pass && diag.verdict == HsVerdict::diverging;
    }
  }
}

// ---- monoid ----

std::vector<FockVector> monoid_states(int N, std::uint64_t seed) {
  std::vector<FockVector> states;
  for (const auto& modes : std::vector<std::vector<int>>{{0}, {0, 1}, {0, 1, 2}, {1, 1, 3}, {2, 2, 2}})
    states.push_back(FockVector::basis(N, 3, OccupationIndex::from_modes(modes)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G;
  FockVector mix(N, 3);
  for (int a = 0; a < 5; ++a)
    for (int b = a; b < 5; ++b)
      for (int c = b; c < 5; ++c) mix.add(OccupationIndex::from_modes({a, b, c}), {G(rng), G(rng)});
  mix.add(OccupationIndex::from_modes({0, 4}), {G(rng), G(rng)});
  states.push_back(mix);
  return states;
}

double monoid_defect(const DiskMap& phi, const DiskMap& psi, int N, std::uint64_t seed) {
  const auto comp = dm_compose(phi, psi);
  double err = 0.0;
  for (const auto& v : monoid_states(N, seed)) err = std::max(err, distance(rho1(comp, v), rho1(phi, rho1(psi, v))));
  return err;
}

double cocycle_law_defect(const DiskMap& phi, const DiskMap& psi, int N) {
  const auto lhs = contraction_functional(dm_compose(phi, psi), N);
  const auto rho = rho_cl_matrix(psi, N).entries;
  const Eigen::MatrixXcd rhs = contraction_functional(psi, N) + rho.transpose() * contraction_functional(phi, N) * rho;
  return max_diff(lhs, rhs);
}

void monoid_suite(const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int N = cfg.N;
  const int Nlo = std::max(4, N / 2);
  const auto phi = poly_map(0.6, 0.15);
  const auto psi_tri = poly_map(0.5, 0.1);
  const auto phi_gen = poly_map(0.6, 0.25);
  const auto psi_gen = DiskMap::affine(0.45, 0.5);

  {
    const auto M = rho_cl_matrix(DiskMap::affine(0.0, 0.7), N).entries;
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n) D(n, n) = std::pow(0.7, n + 1);
    out.push_back(error_check("rho_cl_dilation_diagonal", {{"r", 0.7}, {"N", N}}, max_diff(M, D), 1e-12));
  }
  {
    const auto lhs = rho_cl_matrix(dm_compose(phi, psi_tri), N).entries;
    const Eigen::MatrixXcd rhs = rho_cl_matrix(phi, N).entries * rho_cl_matrix(psi_tri, N).entries;
    out.push_back(error_check("rho_cl_homomorphism_triangular",
                              {{"phi", map_param(phi)}, {"psi", map_param(psi_tri)}, {"N", N}}, max_diff(lhs, rhs),
                              1e-10));
    const auto tl = t_matrix(dm_compose(phi, psi_tri), N).entries;
    const Eigen::MatrixXcd tr = t_matrix(psi_tri, N).entries * t_matrix(phi, N).entries;
    out.push_back(error_check("t_matrix_antihomomorphism_triangular",
                              {{"phi", map_param(phi)}, {"psi", map_param(psi_tri)}, {"N", N}}, max_diff(tl, tr),
                              1e-10));
  }
  out.push_back(error_check("fock_monoid_triangular",
                            {{"phi", map_param(phi)}, {"psi", map_param(psi_tri)}, {"N", N}, {"k", 3}},
                            monoid_defect(phi, psi_tri, N, cfg.seed), 1e-9));
  out.push_back(shrink_check("fock_monoid_general",
                             {{"phi", map_param(phi_gen)}, {"psi", map_param(psi_gen)}, {"N", {Nlo, N}}, {"k", 3}},
                             monoid_defect(phi_gen, psi_gen, Nlo, cfg.seed), monoid_defect(phi_gen, psi_gen, N, cfg.seed),
                             cfg.conv_factor));
  out.push_back(error_check("cocycle_law_triangular", {{"phi", map_param(phi)}, {"psi", map_param(psi_tri)}, {"N", N}},
                            cocycle_law_defect(phi, psi_tri, N), 1e-9));
  out.push_back(shrink_check("cocycle_law_general",
                             {{"phi", map_param(phi_gen)}, {"psi", map_param(psi_gen)}, {"N", {Nlo, N}}},
                             cocycle_law_defect(phi_gen, psi_gen, Nlo), cocycle_law_defect(phi_gen, psi_gen, N),
                             cfg.conv_factor));
}

// ---- covariance ----

double covariance_right(const DiskMap& p1, const DiskMap& p2, const DiskMap& q1, const DiskMap& q2, int N) {
  const auto lhs = pair_functional(dm_compose(p1, q1), dm_compose(p2, q2), N);
  const Eigen::MatrixXcd rhs =
      rho_cl_matrix(q1, N).entries.transpose() * pair_functional(p1, p2, N) * rho_cl_matrix(q2, N).entries;
  return max_diff(lhs, rhs);
}

double covariance_left(const DiskMap& h, const DiskMap& p1, const DiskMap& p2, int N) {
  const auto lhs = pair_functional(dm_compose(h, p1), dm_compose(h, p2), N);
  Eigen::MatrixXcd rhs = pair_functional(p1, p2, N);
  if (!(h.is_mobius() || h.is_affine()))
    rhs += rho_cl_matrix(p1, N).entries.transpose() * contraction_functional(h, N) * rho_cl_matrix(p2, N).entries;
  return max_diff(lhs, rhs);
}

void covariance_suite(const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int N = cfg.N;
  const int Nlo = std::max(4, N / 2);
  const auto p1 = DiskMap::affine(0.5, 0.3), p2 = DiskMap::affine(-0.4, 0.3);
  {
    const auto q1 = poly_map(0.6, 0.15), q2 = DiskMap::affine(0.0, 0.7);
    out.push_back(error_check("pair_covariance_triangular",
                              {{"phi1", map_param(p1)}, {"phi2", map_param(p2)}, {"psi1", map_param(q1)},
                               {"psi2", map_param(q2)}, {"N", N}},
                              covariance_right(p1, p2, q1, q2, N), 1e-9));
  }
  {
    const auto g1 = DiskMap::affine(0.5, 0.45), g2 = DiskMap::affine(-0.5, 0.45);
    const auto q1 = DiskMap::affine(0.4, 0.5), q2 = poly_map(0.6, 0.25);
    out.push_back(shrink_check("pair_covariance_general",
                               {{"phi1", map_param(g1)}, {"phi2", map_param(g2)}, {"psi1", map_param(q1)},
                                {"psi2", map_param(q2)}, {"N", {Nlo, N}}},
                               covariance_right(g1, g2, q1, q2, Nlo), covariance_right(g1, g2, q1, q2, N),
                               cfg.conv_factor));
  }
  {
    const auto h = DiskMap::mobius(0.5, {0.2, 0.1});
    out.push_back(error_check("pair_covariance_mobius_outer",
                              {{"h", map_param(h)}, {"phi1", map_param(p1)}, {"phi2", map_param(p2)}, {"N", N}},
                              covariance_left(h, p1, p2, N), 1e-9));
  }
  {
    const auto h = poly_map(0.6, 0.25);
    const auto g1 = DiskMap::affine(0.5, 0.45), g2 = DiskMap::affine(-0.5, 0.45);
    out.push_back(shrink_check("pair_covariance_outer_general",
                               {{"h", map_param(h)}, {"phi1", map_param(g1)}, {"phi2", map_param(g2)},
                                {"N", {Nlo, N}}},
                               covariance_left(h, g1, g2, Nlo), covariance_left(h, g1, g2, N), cfg.conv_factor));
  }
  {
    // swapping the pair transposes the functional
    const Eigen::MatrixXcd a = pair_functional(p1, p2, N);
    const Eigen::MatrixXcd b = pair_functional(p2, p1, N);
    out.push_back(error_check("pair_swap_transpose", {{"N", N}}, max_diff(a, b.transpose()), 1e-12));
  }
}

// ---- operad ----

Eigen::MatrixXcd random_matrix(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> G;
  Eigen::MatrixXcd M(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) M(i, j) = {G(rng), G(rng)};
  return M;
}

FockVector random_sector(int N, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> G;
  FockVector v(N, kMaxParticles);
  std::vector<int> modes(p, 0);
  std::function<void(int, int)> rec = [&](int k, int lo) {
    if (k == p) {
      v.add(OccupationIndex::from_modes(modes), {G(rng), G(rng)});
      return;
    }
    for (int m = lo; m < N; ++m) {
      modes[k] = m;
      rec(k + 1, m);
    }
  };
  rec(0, 0);
  return v;
}

double slot_distance(const SlotTensor& a, const SlotTensor& b) {
  double s = 0.0;
  for (const auto& [k, x] : a.terms()) {
    const auto it = b.terms().find(k);
    s += std::norm(x - (it == b.terms().end() ? Complex(0.0) : it->second));
  }
  for (const auto& [k, y] : b.terms())
    if (!a.terms().count(k)) s += std::norm(y);
  return std::sqrt(s);
}

void dense_checks(const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int N = 4;
  std::mt19937_64 rng(cfg.seed + 7);
  double merge_err = 0.0, lift_err = 0.0, pair_err = 0.0, cross_err = 0.0, sym_err = 0.0;
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; p + q <= 4 && q <= 3; ++q) {
      const auto u = random_sector(N, p, rng), w = random_sector(N, q, rng);
      const auto dense = dense_to_fock(dense_average(dense_tensor(dense_from_fock(u, p), dense_from_fock(w, q))), kMaxParticles);
      merge_err = std::max(merge_err, distance(merge(u, w), dense));
    }
  for (int p = 1; p <= 3; ++p) {
    const auto M = random_matrix(N, rng);
    const auto v = random_sector(N, p, rng);
    lift_err = std::max(lift_err, distance(lift_one_body(M, v), dense_to_fock(dense_lift(M, dense_from_fock(v, p)), kMaxParticles)));
    Eigen::MatrixXcd c = random_matrix(N, rng);
    c = (c + c.transpose()).eval() * 0.5;
    const auto dp = p >= 2 ? dense_to_fock(dense_pair_contract(c, dense_from_fock(v, p)), kMaxParticles)
                           : FockVector(N, kMaxParticles);
    pair_err = std::max(pair_err, distance(pair_annihilate(c, v), dp));
  }
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) {
      const auto c = random_matrix(N, rng);
      const auto u = random_sector(N, p, rng), w = random_sector(N, q, rng);
      const auto fast = cross_annihilate(c, 0, 1, SlotTensor::product({u, w}));
      const auto slow =
          dense_to_slots(dense_cross_contract(c, dense_tensor(dense_from_fock(u, p), dense_from_fock(w, q)), p), p - 1);
      cross_err = std::max(cross_err, slot_distance(fast, slow));
    }
  for (int p = 1; p <= 4; ++p) {
    std::vector<BergmanVector> vs;
    FockVector chain = FockVector::vacuum(N, kMaxParticles);
    for (int k = 0; k < p; ++k) {
      const auto one = random_sector(N, 1, rng);
      BergmanVector b(N);
      for (int n = 0; n < N; ++n) b(n) = one.amp(OccupationIndex::from_modes({n}));
      vs.push_back(b);
      chain = merge(chain, one);
    }
    sym_err = std::max(sym_err, distance(chain, dense_symmetrize(vs)));
  }
  out.push_back(error_check("dense_merge", {{"N", N}, {"p+q", 4}}, merge_err, 1e-12));
  out.push_back(error_check("dense_lift_one_body", {{"N", N}, {"p", 3}}, lift_err, 1e-12));
  out.push_back(error_check("dense_pair_annihilate", {{"N", N}, {"p", 3}}, pair_err, 1e-12));
  out.push_back(error_check("dense_cross_annihilate", {{"N", N}, {"p", 3}, {"q", 3}}, cross_err, 1e-12));
  out.push_back(error_check("dense_symmetrize_chain", {{"N", N}, {"p", 4}}, sym_err, 1e-12));
}

FockVector one_particle(int N, const std::vector<Complex>& amps) {
  FockVector v(N, kMaxParticles);
  for (int n = 0; n < static_cast<int>(amps.size()); ++n)
    if (amps[n] != Complex(0.0)) v.add(OccupationIndex::from_modes({n}), amps[n]);
  return v;
}

void operad_suite(const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int N = cfg.N;
  RhoOptions opt;
  opt.modes = N;
  opt.particles = cfg.P;
  const auto e0 = one_particle(N, {1.0});

  {
    const auto config = Configuration::make({DiskMap::affine(0.5, 0.2), DiskMap::affine(-0.3, 0.2)});
    const auto v = rho_n(config, {e0, e0}, opt);
    out.push_back(value_check("two_point", {{"a", 0.5}, {"b", -0.3}, {"r", 0.2}, {"s", 0.2}, {"N", N}},
                              v.vacuum_amp().real(), 0.0625, cfg.abs_tol));
    const Complex a(0.5, 0.2), b(-0.3, -0.1);
    const auto cz = Configuration::make({DiskMap::affine(a, 0.2), DiskMap::affine(b, 0.2)});
    const Complex plain = rho_n(cz, {e0, e0}, opt).vacuum_amp();
    const Complex twisted = rho_n(twist_J(cz), {e0, e0}, opt).vacuum_amp();
    const Complex want = 0.04 / ((a - b) * (a - b));
    out.push_back(error_check("two_point_complex", {{"a", complex_to_json(a)}, {"b", complex_to_json(b)}, {"N", N}},
                              std::abs(plain - want), cfg.abs_tol));
    out.push_back(error_check("two_point_twisted", {{"a", complex_to_json(a)}, {"b", complex_to_json(b)}, {"N", N}},
                              std::abs(twisted - std::conj(want)), cfg.abs_tol));
  }
  {
    const auto g1 = DiskMap::affine(-0.5, 0.3), g2 = DiskMap::affine(0.4, 0.5);
    const auto h1 = DiskMap::affine(-0.4, 0.4), h2 = DiskMap::affine(0.5, 0.3);
    const auto v1 = one_particle(N, {1.0, 0.5}), v2 = one_particle(N, {1.0}), v3 = one_particle(N, {0.0, 1.0});
    const auto full = rho_n(Configuration::make({g1, dm_compose(g2, h1), dm_compose(g2, h2)}), {v1, v2, v3}, opt);
    const auto inner = rho_n(Configuration::make({h1, h2}), {v2, v3}, opt);
    const auto outer = rho_n(Configuration::make({g1, g2}), {v1, inner}, opt);
    out.push_back(error_check("operad_composition_affine", {{"N", N}}, distance(full, outer), cfg.abs_tol));

    const auto c123 = Configuration::make({g1, dm_compose(g2, h1), dm_compose(g2, h2)});
    const auto c312 = Configuration::make({dm_compose(g2, h2), g1, dm_compose(g2, h1)});
    const double e = distance(rho_n(c123, {v1, v2, v3}, opt), rho_n(c312, {v3, v1, v2}, opt));
    out.push_back(error_check("symmetric_equivariance", {{"N", N}}, e, 1e-12));
  }
  {
    const auto vac = FockVector::vacuum(N, cfg.P);
    const auto c = Configuration::make({DiskMap::affine(0.5, 0.2), DiskMap::affine(-0.3, 0.2)});
    out.push_back(error_check("vacuum_inputs", {{"N", N}}, distance(rho_n(c, {vac, vac}, opt), vac), 1e-14));
    out.push_back(error_check("empty_configuration", {{"N", N}},
                              distance(rho_n(Configuration::make({}), {}, opt), vac), 0.0));
  }
  dense_checks(cfg, out);
}

// ---- trace ----

void trace_suite(const RunConfig& cfg, std::vector<CheckResult>& out) {
  {
    const auto M = rho_cl_matrix(DiskMap::affine(0.0, 0.5), cfg.N).entries;
    double err = 0.0;
    for (int n = 0; n < cfg.N; ++n)
      for (int m = 0; m < cfg.N; ++m) err = std::max(err, std::abs(M(n, m) - (n == m ? std::pow(0.5, n + 1) : 0.0)));
    out.push_back(error_check("dilation_eigenvalues", {{"r", 0.5}, {"N", cfg.N}}, err, 1e-12));
  }
  struct Case {
    double r;
    int N, P;
  };
  for (const auto& c : {Case{0.5, 20, 20}, Case{0.3, std::min(cfg.N, 60), cfg.P}}) {
    const auto t = dilation_trace(c.r, c.N, c.P);
    const Json params = {{"r", c.r}, {"N", c.N}, {"P", c.P}, {"tail_bound", t.tail_bound}};
    out.push_back(below_check("trace_gap_within_tail_bound", params, t.gap, t.tail_bound));
  }
  const auto t = dilation_trace(0.5, 20, 20);
  out.push_back(below_check("trace_tail_bound_small", {{"r", 0.5}, {"N", 20}, {"P", 20}}, t.tail_bound, 1e-4));
}

// ---- correspondence ----

template <class S>
HeisenbergVectorT<S> hbasis(const PartitionState& s, int P, int W) {
  return HeisenbergVectorT<S>::basis(P, W, s);
}

void heisenberg_exact_checks(const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int Wb = std::min(cfg.W, 6);
  const int big = Wb + 16;
  long bracket_fail = 0, bracket_checked = 0;
  for (const auto& s : partitions_up_to(Wb, big)) {
    const auto v = hbasis<Rational>(s, big, big);
    for (int n = -3; n <= 3; ++n)
      for (int m = -3; m <= 3; ++m) {
        auto lhs = virasoro_L(n, virasoro_L(m, v)) - virasoro_L(m, virasoro_L(n, v));
        auto rhs = Rational(n - m) * virasoro_L(n + m, v);
        if (n + m == 0) rhs += Rational(n * n * n - n, 12) * v;
        ++bracket_checked;
        if (!(lhs == rhs) || lhs.dropped() || rhs.dropped()) ++bracket_fail;
      }
  }
  out.push_back(error_check("virasoro_bracket_exact", {{"W", Wb}, {"modes", "[-3,3]"}, {"checked", bracket_checked}},
                            double(bracket_fail), 0.0));

  long gram_fail = 0, chol_fail = 0;
  double psi_err = 0.0;
  const int Pb = std::min(4, std::max(cfg.P, 1));
  for (int w = 0; w <= Wb; ++w)
    for (int p = 0; p <= Pb; ++p) {
      std::vector<PartitionState> sector;
      for (const auto& s : partitions_of(w, p))
        if (s.particles() == p) sector.push_back(s);
      if (sector.empty()) continue;
      const int d = static_cast<int>(sector.size());
      Eigen::MatrixXd G(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const Rational x = annihilation_pairing(sector[a], hbasis<Rational>(sector[b], big, big));
          const Rational want = a == b ? inner_norm_factor<Rational>(sector[a]) : Rational(0);
          if (x != want) ++gram_fail;
          G(a, b) = static_cast<double>(x);
        }
      if (Eigen::LLT<Eigen::MatrixXd>(G).info() != Eigen::Success) ++chol_fail;
      std::vector<FockVector> images;
      for (const auto& s : sector) images.push_back(psi(hbasis<Complex>(s, big, big), std::max(w, 1)));
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          Complex ip = 0.0;
          for (const auto& [idx, x] : images[a].table()) ip += std::conj(x) * images[b].amp(idx);
          const double want = a == b ? static_cast<double>(inner_norm_factor<Rational>(sector[a])) : 0.0;
          psi_err = std::max(psi_err, std::abs(ip - want));
        }
    }
  out.push_back(error_check("gram_matches_closed_form", {{"W", Wb}, {"P", Pb}}, double(gram_fail), 0.0));
  out.push_back(error_check("gram_cholesky", {{"W", Wb}, {"P", Pb}}, double(chol_fail), 0.0));
  out.push_back(error_check("psi_isometry", {{"W", Wb}, {"P", Pb}}, psi_err, 1e-12));
}

void correspondence_suite(const RunConfig& cfg, std::vector<CheckResult>& out) {
  heisenberg_exact_checks(cfg, out);
  const Complex zeta = 0.5;
  const double r = 0.2, s = 0.2;
  const int Nhi = cfg.N, Nlo = std::max(4, cfg.N / 2);
  const auto basis = partitions_up_to(4, 4);
  const int nb = static_cast<int>(basis.size());
  std::vector<double> lo(nb * nb), hi(nb * nb);
  std::vector<long> dropped(nb * nb);
  parallel_for(nb * nb, [&](int k) {
    const auto v = hbasis<Complex>(basis[k / nb], 8, 8), w = hbasis<Complex>(basis[k % nb], 8, 8);
    const auto a = correspondence(v, w, zeta, r, s, Nlo);
    const auto b = correspondence(v, w, zeta, r, s, Nhi);
    lo[k] = a.discrepancy;
    hi[k] = b.discrepancy;
    dropped[k] = a.dropped + b.dropped;
  });
  int worst = 0, worst_shrink = -1;
  long drops = 0;
  for (int k = 0; k < nb * nb; ++k) {
    if (hi[k] > hi[worst]) worst = k;
    if (!shrinks(lo[k], hi[k], 0.5) && worst_shrink < 0) worst_shrink = k;
    drops += dropped[k];
  }
  auto pair_json = [&](int k) {
    return Json{{"v", basis[k / nb].depths()}, {"w", basis[k % nb].depths()}};
  };
  const Json common = {{"zeta", 0.5}, {"r", r}, {"s", s}, {"pairs", nb * nb}};
  {
    Json p = common;
    p["N"] = Nhi;
    p["worst"] = pair_json(worst);
    out.push_back(error_check("correspondence_max_discrepancy", p, hi[worst], cfg.abs_tol));
  }
  {
    const int k = worst_shrink < 0 ? worst : worst_shrink;
    Json p = common;
    p["N"] = {Nlo, Nhi};
    p["pair"] = pair_json(k);
    p["failing_pairs"] = worst_shrink < 0 ? 0 : 1;
    auto c = shrink_check("correspondence_shrinks", p, lo[k], hi[k], 0.5);
    if (worst_shrink >= 0) c.pass = false;
    out.push_back(c);
  }
  out.push_back(error_check("correspondence_no_drops", common, double(drops), 0.0));

  const auto h1 = hbasis<Complex>(PartitionState::from_depths({1}), 8, 8);
  const auto res = correspondence(h1, h1, zeta, r, s, Nhi);
  out.push_back(value_check("two_point_witness", {{"zeta", 0.5}, {"r", r}, {"s", s}},
                            res.vertex.vacuum_amp().real(), 0.16, cfg.abs_tol));
  out.back().pass = out.back().pass && std::abs(res.operadic.vacuum_amp()) > 0.0;
}

// ---- convergence ----

void convergence_suite(const RunConfig& cfg, std::vector<CheckResult>& out) {
  const Complex zeta = 0.5;
  const int terms = std::max(40, cfg.N);
  const auto h1 = hbasis<Complex>(PartitionState::from_depths({1}), 8, 8);
  const auto vac = HeisenbergVector::vacuum(8, 8);
  {
    const auto prof = norm_convergence_profile(h1, h1, zeta, terms);
    Json p = {{"v", "h(-1)1"}, {"w", "h(-1)1"}, {"zeta", 0.5}, {"terms", terms}};
    out.push_back(below_check("profile_ratio", p, prof.ratio, 0.3));
    out.push_back(value_check("profile_monotone", p, prof.monotone ? 1.0 : 0.0, 1.0, 0.0));
  }
  {
    const auto prof = norm_convergence_profile(h1, vac, zeta, terms);
    const double limit = 1.0 / ((1.0 - 0.25) * (1.0 - 0.25));
    Json p = {{"v", "h(-1)1"}, {"w", "1"}, {"zeta", 0.5}, {"terms", terms}};
    out.push_back(value_check("profile_vacuum_first_term", p, prof.partial_sums.front(), 1.0, 1e-14));
    out.push_back(value_check("profile_vacuum_limit", p, prof.partial_sums.back(), limit, cfg.abs_tol));
  }
  {
    // L(-1)^2 h(-1)1 = 2 h(-3)1
    auto v = virasoro_L(-1, virasoro_L(-1, h1));
    const auto prof = norm_convergence_profile(v, h1, zeta, terms);
    Json p = {{"v", "L(-1)^2 h(-1)1"}, {"w", "h(-1)1"}, {"zeta", 0.5}, {"terms", terms}};
    out.push_back(below_check("profile_ratio_descendant", p, prof.ratio, 0.3));
    out.push_back(value_check("profile_monotone_descendant", p, prof.monotone ? 1.0 : 0.0, 1.0, 0.0));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"cocycle-identities", "monoid",      "covariance", "operad",
                                                 "trace",              "correspondence", "convergence"};
  return names;
}

SuiteReport run_suite(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  SuiteReport rep;
  rep.suite = name;
  if (name == "cocycle-identities") {
    if (cfg.extended)
      cocycle_suite<long double>(cfg, rep.checks);
    else
      cocycle_suite<double>(cfg, rep.checks);
  } else if (name == "monoid") {
    monoid_suite(cfg, rep.checks);
  } else if (name == "covariance") {
    covariance_suite(cfg, rep.checks);
  } else if (name == "operad") {
    operad_suite(cfg, rep.checks);
  } else if (name == "trace") {
    trace_suite(cfg, rep.checks);
  } else if (name == "correspondence") {
    correspondence_suite(cfg, rep.checks);
  } else if (name == "convergence") {
    convergence_suite(cfg, rep.checks);
  } else {
    throw UsageError("unknown suite '" + name + "'");
  }
  return rep;
}

}  // namespace ce2
