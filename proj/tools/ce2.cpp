// ce2: command-line front end.
//
//   ce2 cocycle <map.json> --cutoff N
//   ce2 twopoint <config.json> --inputs a.json b.json ...
//   ce2 verify <suite> --config run.json
//
// Exit codes: 0 ok, 1 failing check, 2 parse/usage error, 3 math error.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "ce2/verify.hpp"

namespace {

using namespace ce2;

struct Options {
  std::string format = "json";
  std::string precision = "double";
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json matrix_json(const Eigen::MatrixXcd& M, int D) {
  Json rows = Json::array();
  for (int n = 0; n < M.rows(); ++n) {
    Json row = Json::array();
    for (int m = 0; m < M.cols() && n + m <= D; ++m) row.push_back(complex_to_json(M(n, m)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class R>
int run_cocycle(const Json& input, int N, const Options& opt) {
  const bool single = input.is_object() && input.contains("kind");
  const auto maps = single ? std::vector<DiskMap>{map_from_json(input)} : maps_from_json(input);
  if (maps.empty() || maps.size() > 2) throw ParseError("cocycle: expected one map (F) or two maps (G)");

  const bool isF = maps.size() == 1;
  const auto series = isF ? cocycle_F<R>(maps[0], N) : cocycle_G<R>(maps[0], maps[1], N);
  const auto g = grunsky(series, isF ? KernelSource::F : KernelSource::G);
  const auto prof_r = hs_partial_profile(g);
  const std::vector<double> prof(prof_r.begin(), prof_r.end());
  const auto diag = classify_profile(prof);
  const int D = series.valid_total_degree();

  Eigen::MatrixXcd coeffs(N, N);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      const auto c = series(n, m);
      coeffs(n, m) = Complex(double(c.real()), double(c.imag()));
    }
  const Eigen::MatrixXcd gm = g.to_matrix();

  if (opt.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "n,m,coeff_re,coeff_im,grunsky_re,grunsky_im\n";
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N && n + m <= D; ++m)
        os << n << "," << m << "," << coeffs(n, m).real() << "," << coeffs(n, m).imag() << "," << gm(n, m).real()
           << "," << gm(n, m).imag() << "\n";
    std::cout << os.str();
    return 0;
  }

  Json j;
  j["kernel"] = isF ? "F" : "G";
  Json mj = Json::array();
  for (const auto& m : maps) mj.push_back(map_to_json(m));
  j["maps"] = std::move(mj);
  j["cutoff"] = N;
  j["precision"] = opt.precision;
  j["valid_total_degree"] = D;
  j["hs_norm_sq"] = prof.empty() ? 0.0 : prof.back();
  j["verdict"] = to_string(diag.verdict);
  j["ratio"] = diag.ratio;
  j["tail_estimate"] = diag.tail_estimate;
  j["profile"] = prof;
  j["coefficients"] = matrix_json(coeffs, D);
  j["grunsky"] = matrix_json(gm, D);
  emit(j);
  return 0;
}

int run_twopoint(const std::string& config_path, const std::vector<std::string>& inputs, int N, int P,
                 const Options& opt) {
  const auto config = config_from_json(read_json_file(config_path));
  std::vector<FockVector> vs;
  if (inputs.empty()) {
    for (std::size_t i = 0; i < config.size(); ++i)
      vs.push_back(FockVector::basis(N, P, OccupationIndex::from_modes({0})));
  } else {
    for (const auto& path : inputs) vs.push_back(fock_from_json(read_json_file(path)));
  }
  RhoOptions ro;
  ro.modes = N;
  ro.particles = P;
  RhoOptions coarse = ro;
  coarse.modes = std::max(4, N / 2);
  std::vector<FockVector> coarse_vs;
  for (const auto& v : vs) coarse_vs.push_back(v.recut(coarse.modes, kMaxParticles));

  const auto plain = rho_n(config, vs, ro);
  const auto twisted = rho_n(twist_J(config), vs, ro);
  const Complex plain_c = rho_n(config, coarse_vs, coarse).vacuum_amp();
  const Complex twisted_c = rho_n(twist_J(config), coarse_vs, coarse).vacuum_amp();

  if (opt.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "product,re,im,tail_estimate\n";
    os << "plain," << plain.vacuum_amp().real() << "," << plain.vacuum_amp().imag() << ","
       << std::abs(plain.vacuum_amp() - plain_c) << "\n";
    os << "twisted," << twisted.vacuum_amp().real() << "," << twisted.vacuum_amp().imag() << ","
       << std::abs(twisted.vacuum_amp() - twisted_c) << "\n";
    std::cout << os.str();
    return 0;
  }
  Json j;
  j["arity"] = config.size();
  j["cutoffs"] = {{"modes", N}, {"particles", P}};
  Json pairs = Json::array();
  for (const auto& p : config.pairs())
    pairs.push_back({{"i", p.i}, {"j", p.j}, {"closures", to_string(p.decision.verdict)},
                     {"evidence", to_string(p.decision.evidence)}});
  j["pairs"] = std::move(pairs);
  j["plain"] = {{"vacuum", complex_to_json(plain.vacuum_amp())},
                {"tail_estimate", std::abs(plain.vacuum_amp() - plain_c)},
                {"dropped", plain.dropped()}};
  j["twisted"] = {{"vacuum", complex_to_json(twisted.vacuum_amp())},
                  {"tail_estimate", std::abs(twisted.vacuum_amp() - twisted_c)},
                  {"dropped", twisted.dropped()}};
  j["product"] = fock_to_json(plain.pruned(1e-300));
  emit(j);
  return 0;
}

int run_verify(const std::string& suite, const std::string& config_path, const Options& opt) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "ce2: unknown suite '" << suite << "'\n";
    return 2;
  }
  RunConfig cfg = config_path.empty() ? RunConfig{} : run_config_from_json(read_json_file(config_path));
  if (opt.precision == "extended") cfg.extended = true;
  const auto rep = run_suite(suite, cfg);
  if (opt.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "id,value,expected,abs_err,pass\n";
    for (const auto& c : rep.checks)
      os << c.id << "," << c.value << "," << c.expected << "," << c.abs_err << "," << (c.pass ? 1 : 0) << "\n";
    std::cout << os.str();
  } else {
    Json j = rep.to_json();
    j["config"] = run_config_to_json(cfg);
    emit(j);
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical conformal-disk operad algebra and Heisenberg cross-checks"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--precision", opt.precision, "Arithmetic for series work")
      ->check(CLI::IsMember({"double", "extended"}));

  std::string map_path;
  int cutoff = 48;
  auto* cocycle = app.add_subcommand("cocycle", "F or G cocycle, Grunsky matrix and HS profile");
  cocycle->add_option("map", map_path, "Map file (one map: F, two maps: G)")->required();
  cocycle->add_option("--cutoff,-N", cutoff, "Cutoff N")->check(CLI::Range(2, 512));
  cocycle->fallthrough();

  std::string config_path;
  std::vector<std::string> inputs;
  int particles = 6;
  auto* twopoint = app.add_subcommand("twopoint", "Vacuum amplitudes of the n-ary product");
  twopoint->add_option("config", config_path, "Configuration file")->required();
  twopoint->add_option("--inputs", inputs, "Fock vector files, one per map");
  twopoint->add_option("--cutoff,-N", cutoff, "Mode cutoff")->check(CLI::Range(4, 250));
  twopoint->add_option("--particles,-P", particles, "Particle cutoff")->check(CLI::Range(1, 16));
  twopoint->fallthrough();

  std::string suite, run_path;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--config", run_path, "Run configuration file");
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cocycle) {
      const auto input = read_json_file(map_path);
      return opt.precision == "extended" ? run_cocycle<long double>(input, cutoff, opt)
                                         : run_cocycle<double>(input, cutoff, opt);
    }
    if (*twopoint) return run_twopoint(config_path, inputs, cutoff, particles, opt);
    if (*verify) return run_verify(suite, run_path, opt);
  } catch (const ParseError& e) {
    std::cerr << "ce2: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ce2: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "ce2: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
