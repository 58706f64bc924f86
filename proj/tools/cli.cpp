/*
 * Copyright 2026 The ckksid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ckksid/ckks.hpp"
#include "ckksid/config.hpp"
#include "ckksid/error.hpp"
#include "ckksid/identify.hpp"
#include "ckksid/statdist.hpp"

namespace ckksid::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kCsvSchemaVersion = 1;

struct SeedOverrides {
  std::optional<std::uint64_t> crypto, plant, quantizer;

  void add(CLI::App* cmd) {
    cmd->add_option("--seed-crypto", crypto, "Override the keygen/encryption seed");
    cmd->add_option("--seed-plant", plant, "Override the input/noise seed");
    cmd->add_option("--seed-quantizer", quantizer, "Override the encoding seed");
  }
  void apply(IdentSeeds& s) const {
    if (crypto) s.crypto = *crypto;
    if (plant) s.plant = *plant;
    if (quantizer) s.quantizer = *quantizer;
  }
};

std::string Num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

fs::path OutputPath(const ExperimentConfig& cfg, const std::string& given, const char* name) {
  if (!given.empty()) return given;
  return fs::path(cfg.output.dir) / name;
}

void EnsureParent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream OpenOut(const fs::path& p) {
  EnsureParent(p);
  std::ofstream f(p);
  if (!f) throw Error("cannot write " + p.string());
  f << std::setprecision(12);
  return f;
}

ParamReport ReportFor(const ExperimentConfig& c) {
  return validate_params(c.model, c.crypto.n, c.crypto.modulus(), c.crypto.delta(),
                         c.crypto.sigma, static_cast<double>(c.crypto.gamma), c.ident.alpha,
                         c.ident.theta_bar);
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// keygen -----------------------------------------------------------------

struct KeygenArgs {
  std::string params, out = "keys";
  std::optional<std::uint64_t> seed;
};

int CmdKeygen(const KeygenArgs& a, std::ostream& out) {
  const ExperimentConfig cfg = load_config(a.params);
  const auto ctx = cfg.crypto.context();
  ChaChaRng rng(a.seed.value_or(cfg.ident.seeds.crypto), "crypto");
  const auto t0 = std::chrono::steady_clock::now();
  const KeyBundle keys = keygen(*ctx, rng);
  const double secs = Seconds(t0);
  fs::create_directories(a.out);
  const auto sk = serialize(keys.sk);
  const auto pk = serialize(keys.pk);
  const auto rk = serialize(keys.rot, ctx->base_log());
  write_file(fs::path(a.out) / "secret.key", sk);
  write_file(fs::path(a.out) / "public.key", pk);
  write_file(fs::path(a.out) / "rotation.keys", rk);
  out << "N=" << ctx->n() << " P bits=" << ctx->ring()->modulus_bits()
      << " rotations=" << keys.rot.keys().size() << " keygen_s=" << Num(secs) << "\n"
      << "wrote " << (fs::path(a.out) / "secret.key").string() << " (" << sk.size()
      << " bytes), public.key (" << pk.size() << " bytes), rotation.keys (" << rk.size()
      << " bytes)\n";
  return kExitOk;
}

// validate ---------------------------------------------------------------

struct ValidateArgs {
  std::string config, json_out;
};

int CmdValidate(const ValidateArgs& a, std::ostream& out) {
  const ExperimentConfig cfg = load_config(a.config);
  const ParamReport rep = ReportFor(cfg);
  const std::string js = report_to_json(rep);
  if (a.json_out == "-") {
    out << js << "\n";
  } else {
    out << report_to_text(rep);
    const fs::path p = OutputPath(cfg, a.json_out, "param_report.json");
    OpenOut(p) << js << "\n";
    out << "json report: " << p.string() << "\n";
  }
  return rep.all_pass() ? kExitOk : kExitVerdictFail;
}

// simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config, out;
  std::optional<std::size_t> steps;
  SeedOverrides seeds;
};

int CmdSimulate(const SimulateArgs& a, std::ostream& out) {
  ExperimentConfig cfg = load_config(a.config);
  a.seeds.apply(cfg.ident.seeds);
  const std::size_t K = a.steps.value_or(cfg.ident.k_max);
  ChaChaRng rng(cfg.ident.seeds.plant, "plant");
  const ExcitationSpec& ex = cfg.ident.excitation;
  ARXPlant plant(cfg.model);
  const fs::path p = OutputPath(cfg, a.out, "simulation.csv");
  std::ofstream f = OpenOut(p);
  f << "# ckksid simulation schema_version=" << kCsvSchemaVersion << "\n";
  f << "k,u,w_next,y_next,phi_inf\n";
  double sup_phi = 0.0, sup_y = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double u = rng.uniform_real(ex.u_min, ex.u_max);
    const double w = rng.uniform_real(ex.w_min, ex.w_max);
    double phi_inf = 0.0;
    for (double v : plant.regressor_for(u)) phi_inf = std::max(phi_inf, std::fabs(v));
    const double y = plant.step(u, w);
    sup_phi = std::max(sup_phi, phi_inf);
    sup_y = std::max(sup_y, std::fabs(y));
    f << k << "," << u << "," << w << "," << y << "," << phi_inf << "\n";
  }
  out << "steps=" << K << " sup|y|=" << Num(sup_y) << " sup|phi|_inf=" << Num(sup_phi);
  if (spectral_radius(cfg.model) < 1.0) out << " G1=" << Num(compute_G1(cfg.model));
  out << " bound_violations=" << plant.bound_violations() << "\n"
      << "csv: " << p.string() << "\n";
  return kExitOk;
}

// identify ---------------------------------------------------------------

struct IdentifyArgs {
  std::string config, mode, out, dat;
  std::optional<std::size_t> k_max;
  std::optional<double> alpha;
  SeedOverrides seeds;
};

int CmdIdentify(const IdentifyArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = load_config(a.config);
  a.seeds.apply(cfg.ident.seeds);
  if (!a.mode.empty()) cfg.ident.mode = parse_ident_mode(a.mode);
  if (a.k_max) cfg.ident.k_max = *a.k_max;
  if (a.alpha) cfg.ident.alpha = *a.alpha;
  cfg.ident.validate(cfg.model.dim());

  const ParamReport rep = ReportFor(cfg);
  for (const auto& v : rep.verdicts) {
    if (!v.pass) err << "warning: " << v.name << " FAIL (" << v.detail << ")\n";
  }
  const bool encrypted = cfg.ident.mode != IdentMode::kPlaintext;
  const CkksContextPtr ctx = encrypted ? cfg.crypto.context() : nullptr;
  const fs::path csv =
      OutputPath(cfg, a.out, ("identify_" + to_string(cfg.ident.mode) + ".csv").c_str());
  const fs::path dat = a.dat.empty() ? fs::path(csv).replace_extension(".dat") : fs::path(a.dat);

  const auto t0 = std::chrono::steady_clock::now();
  IdentResult res;
  try {
    res = run_identification(cfg.model, cfg.ident, ctx);
  } catch (const CorrectnessViolation& e) {
    err << "correctness violation at iteration " << e.iteration() << ": " << e.what() << "\n";
    return kExitCorrectness;
  }
  const double secs = Seconds(t0);

  const std::size_t d = cfg.model.dim();
  const bool dual = cfg.ident.mode == IdentMode::kDual;
  std::ofstream f = OpenOut(csv);
  f << "# ckksid trajectory schema_version=" << kCsvSchemaVersion
    << " mode=" << to_string(cfg.ident.mode) << "\n";
  f << "k";
  for (std::size_t i = 1; i <= d; ++i) f << ",theta_hat_" << i;
  f << ",err_norm";
  for (std::size_t i = 1; i <= d; ++i) f << ",mt_" << i;
  if (dual) f << ",noise_inf,imag_inf";
  f << "\n";
  std::ofstream g = OpenOut(dat);
  g << "# k err_norm" << (dual ? " noise_inf" : "") << "\n";
  g << "-1 " << res.initial_err << (dual ? " 0" : "") << "\n";
  double max_noise = 0.0;
  for (const auto& r : res.records) {
    f << r.k;
    for (double v : r.theta_next) f << "," << v;
    f << "," << r.err_norm.value_or(NAN);
    for (double v : r.mt) f << "," << v;
    if (dual) {
      f << "," << *r.noise_inf << "," << *r.imag_inf;
      max_noise = std::max(max_noise, *r.noise_inf);
    }
    f << "\n";
    g << r.k << " " << r.err_norm.value_or(NAN);
    if (dual) g << " " << *r.noise_inf;
    g << "\n";
  }
  const double final_err = res.records.empty() ? res.initial_err : *res.records.back().err_norm;
  out << "mode=" << to_string(cfg.ident.mode) << " k_max=" << cfg.ident.k_max
      << " alpha=" << Num(cfg.ident.alpha) << " initial_err=" << Num(res.initial_err)
      << " final_err=" << Num(final_err) << " ratio=" << Num(final_err / res.initial_err);
  if (dual) out << " max_noise_inf=" << Num(max_noise);
  out << " seconds=" << Num(secs) << "\n"
      << "csv: " << csv.string() << "\ndat: " << dat.string() << "\n";
  return kExitOk;
}

// verify-distance --------------------------------------------------------

struct DistanceArgs {
  double sigma = 0;
  std::vector<double> gammas;
  int dim = 1;
  std::optional<double> tau;
  std::string out;
};

// Largest tau (times 0.999) with sqrt(sigma^2 + tau^2) >= 2 pi sigma tau eta.
double AutoTau(double sigma, double eta) {
  const double k = 4 * M_PI * M_PI * sigma * sigma * eta * eta - 1.0;
  return k <= 0 ? sigma : 0.999 * sigma / std::sqrt(k);
}

int CmdDistance(const DistanceArgs& a, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!a.out.empty()) {
    file = OpenOut(a.out);
    os = &file;
  }
  *os << std::setprecision(12);
  *os << "check,dim,sigma,gamma,tau,bound,measured,verdict\n";
  LatticeSpec lat;
  lat.dim = a.dim;
  const double n = a.dim;
  const double eta = smoothing_parameter(lat, std::exp(-n));
  const double tau = a.tau.value_or(AutoTau(a.sigma, eta));
  bool failed = false;
  auto row = [&](const char* check, double gamma, double bound, double measured,
                 const char* verdict) {
    *os << check << "," << a.dim << "," << a.sigma << "," << gamma << "," << tau << ","
        << bound << "," << measured << "," << verdict << "\n";
  };
  for (double gamma : a.gammas) {
    const double tail = tail_ratio(a.sigma, gamma, lat);
    const double bz = banaszczyk_bound(a.sigma, gamma, a.dim);
    const bool ok_bz = tail <= bz;
    failed |= !ok_bz;
    row("tail_vs_banaszczyk", gamma, bz, tail, ok_bz ? "PASS" : "FAIL");
    const bool trunc = check_truncation_condition(a.sigma, gamma, n).pass;
    const bool ok_exp = tail <= std::exp(-n);
    if (trunc) failed |= !ok_exp;
    row("tail_vs_exp", gamma, std::exp(-n), tail, !trunc ? "SKIP" : ok_exp ? "PASS" : "FAIL");
    if (a.dim == 1) {
      const double dist = convolved_distance(a.sigma, gamma, tau, lat);
      const bool pre = trunc && smoothing_condition_holds(a.sigma, tau, eta);
      const bool ok = dist <= 3 * std::exp(-n);
      if (pre) failed |= !ok;
      row("convolved_vs_3exp", gamma, 3 * std::exp(-n), dist, !pre ? "SKIP" : ok ? "PASS" : "FAIL");
    }
  }
  return failed ? kExitVerdictFail : kExitOk;
}

// bench ------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> sizes{1024, 2048, 4096, 8192};
  int reps = 3;
  std::string out;
};

template <typename F>
std::pair<double, double> TimeIt(int reps, F&& f) {
  double total = 0.0, best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s = Seconds(t0);
    total += s;
    best = std::min(best, s);
  }
  return {1e3 * total / reps, 1e3 * best};
}

int CmdBench(const BenchArgs& a, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!a.out.empty()) {
    file = OpenOut(a.out);
    os = &file;
  }
  *os << std::setprecision(6);
  *os << "op,N,reps,mean_ms,min_ms,trend\n";
  const mpz_class p1 = largest_prime_below_pow2(40), p2 = largest_prime_below_pow2(60);
  double dot_base = 0.0;
  for (std::size_t n : a.sizes) {
    auto ring = RingParams::from_factors(n, {{p1, 3}, {p2, 2}});
    const auto gamma = static_cast<std::int64_t>(std::ceil(3.2 * (std::sqrt(2.0) * n + 1)));
    const auto ctx = CkksContext::create(ring, NoiseParams{3.2, gamma, std::min<std::size_t>(64, n)},
                                         0x1p40);
    ChaChaRng rng(1, "bench");
    auto emit = [&](const char* op, std::pair<double, double> t, const std::string& trend) {
      *os << op << "," << n << "," << a.reps << "," << t.first << "," << t.second << ","
          << trend << "\n";
    };
    KeyBundle keys;
    emit("keygen", TimeIt(1, [&] { keys = keygen(*ctx, rng); }), "-");
    const RingElement x = uniform_ring(ring, rng), y = uniform_ring(ring, rng);
    emit("ring_mul", TimeIt(a.reps, [&] { (void)ring_mul(x, y); }), "-");
    std::vector<double> phi(9), theta(9);
    for (int i = 0; i < 9; ++i) {
      phi[i] = rng.uniform_real(-10, 10);
      theta[i] = rng.uniform_real(-2, 2);
    }
    const SlotVector z = embed_real(phi, PadMode::kZero, ctx->slot_count());
    Ciphertext ct;
    emit("encrypt",
         TimeIt(a.reps, [&] { ct = encrypt_slots(*ctx, z, ctx->delta(), keys.pk, rng); }), "-");
    emit("hom_mult", TimeIt(a.reps, [&] { (void)hom_mult(ct, ct); }), "-");
    const Plaintext th =
        encode(embed_real(theta, PadMode::kZero, ctx->slot_count()), ctx->delta(), ctx->basis(),
               ring, rng);
    const auto dot = TimeIt(a.reps, [&] { (void)hom_dot(*ctx, th, ct, keys.rot); });
    // Cost per N log N relative to the first size.
    const double norm = dot.first / (static_cast<double>(n) * std::log2(static_cast<double>(n)));
    if (dot_base == 0.0) dot_base = norm;
    const double ratio = norm / dot_base;
    emit("hom_dot", dot,
         (ratio > 10 || ratio < 0.1 ? "FLAG:" : "ok:") + Num(ratio));
    ChaChaRng crypto(2, "crypto"), quant(3, "quantizer");
    emit("protocol_step", TimeIt(a.reps, [&] {
           const SensorMessage m = sensor_step_encrypt(
               *ctx, 0, phi, 3.0, theta, ProtocolKeys{&keys.pk, &crypto, &quant});
           (void)sensor_step_decrypt(*ctx, cloud_step_eval(*ctx, m, keys.rot), keys.sk, 9, 0);
         }),
         "-");
  }
  return kExitOk;
}

}  // namespace

std::string report_to_text(const ParamReport& rep) {
  std::ostringstream os;
  os << std::setprecision(10);
  auto line = [&](const std::string& k, const std::string& v) {
    os << "  " << std::left << std::setw(14) << k << v << "\n";
  };
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ", ") + Num(x);
    return "(" + s + ")";
  };
  os << "inputs\n";
  line("p, q", std::to_string(rep.model.p()) + ", " + std::to_string(rep.model.q()));
  line("a", join(rep.model.a));
  line("b", join(rep.model.b));
  line("L", Num(rep.model.L));
  line("N", std::to_string(rep.n));
  line("P", std::to_string(mpz_sizeinbase(rep.modulus.get_mpz_t(), 2)) + " bits");
  line("Delta", "2^" + Num(std::log2(rep.delta)));
  line("sigma", Num(rep.sigma));
  line("Gamma", Num(rep.gamma));
  line("alpha", Num(rep.alpha));
  line("theta_bar", Num(rep.theta_bar));
  os << "constants\n";
  line("rho_A", Num(rep.rho));
  line("c", Num(rep.c) + " (r = " + std::to_string(rep.r) + ")");
  line("G1", Num(rep.G1));
  line("G2", Num(rep.G2));
  line("alpha_max", Num(rep.alpha_max));
  line("Gamma_min", Num(rep.gamma_threshold));
  if (rep.theta_norm) line("||theta||", Num(*rep.theta_norm));
  os << "verdicts\n";
  for (const auto& v : rep.verdicts) {
    os << "  " << (v.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(14) << v.name
       << v.detail << "\n";
  }
  os << "overall: " << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string report_to_json(const ParamReport& rep) {
  auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json verdicts = json::array();
  for (const auto& v : rep.verdicts) {
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  }
  json j = {
      {"schema_version", kCsvSchemaVersion},
      {"inputs",
       {{"model",
         {{"p", rep.model.p()}, {"q", rep.model.q()}, {"a", rep.model.a}, {"b", rep.model.b},
          {"L", rep.model.L}}},
        {"N", rep.n},
        {"P", rep.modulus.get_str()},
        {"delta", rep.delta},
        {"sigma", rep.sigma},
        {"gamma", rep.gamma},
        {"alpha", rep.alpha},
        {"theta_bar", rep.theta_bar}}},
      {"rho_A", rep.rho},
      {"c", finite(rep.c)},
      {"r", rep.r},
      {"G1", finite(rep.G1)},
      {"G2", finite(rep.G2)},
      {"alpha_max", rep.alpha_max},
      {"gamma_threshold", rep.gamma_threshold},
      {"theta_norm", rep.theta_norm ? json(*rep.theta_norm) : json(nullptr)},
      {"verdicts", verdicts},
      {"all_pass", rep.all_pass()}};
  return j.dump(2);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ckksid: encrypted ARX parameter identification over a CKKS-style scheme"};
  app.require_subcommand(1);

  KeygenArgs kg;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate secret, public and rotation keys");
  keygen_cmd->add_option("--params", kg.params, "Experiment config (crypto section)")
      ->required()
      ->check(CLI::ExistingFile);
  keygen_cmd->add_option("--seed", kg.seed, "Key generation seed");
  keygen_cmd->add_option("--out", kg.out, "Output directory");

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "Check every parameter condition");
  validate_cmd->add_option("--config", va.config)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--json", va.json_out,
                           "JSON report path ('-' prints JSON to stdout instead of text)");

  SimulateArgs sa;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate the plant and write a CSV");
  simulate_cmd->add_option("--config", sa.config)->required()->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out", sa.out, "CSV path");
  simulate_cmd->add_option("--steps", sa.steps, "Number of steps (default ident.k_max)");
  sa.seeds.add(simulate_cmd);

  IdentifyArgs ia;
  auto* identify_cmd = app.add_subcommand("identify", "Run the identification loop");
  identify_cmd->add_option("--config", ia.config)->required()->check(CLI::ExistingFile);
  identify_cmd->add_option("--mode", ia.mode, "plaintext | encrypted | dual")
      ->check(CLI::IsMember({"plaintext", "encrypted", "dual"}));
  identify_cmd->add_option("--out", ia.out, "Trajectory CSV path");
  identify_cmd->add_option("--dat", ia.dat, "gnuplot data path (default: CSV path with .dat)");
  identify_cmd->add_option("--k-max", ia.k_max, "Override ident.k_max");
  identify_cmd->add_option("--alpha", ia.alpha, "Override ident.alpha");
  ia.seeds.add(identify_cmd);

  DistanceArgs da;
  auto* dist_cmd = app.add_subcommand(
      "verify-distance", "Tail-ratio and convolved-distance checks on Z^dim (dim <= 3)");
  dist_cmd->add_option("--sigma", da.sigma)->required()->check(CLI::PositiveNumber);
  dist_cmd->add_option("--gamma", da.gammas, "One or more truncation values")
      ->required()
      ->check(CLI::NonNegativeNumber);
  dist_cmd->add_option("--dim", da.dim)->check(CLI::Range(1, 3));
  dist_cmd->add_option("--tau", da.tau, "Convolution width (default: largest admissible)")
      ->check(CLI::PositiveNumber);
  dist_cmd->add_option("--out", da.out, "CSV path (default stdout)");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Per-operation timings");
  bench_cmd->add_option("--sizes", ba.sizes, "Ring dimensions")->delimiter(',');
  bench_cmd->add_option("--reps", ba.reps)->check(CLI::Range(1, 1000));
  bench_cmd->add_option("--out", ba.out, "CSV path (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*keygen_cmd) return CmdKeygen(kg, out);
    if (*validate_cmd) return CmdValidate(va, out);
    if (*simulate_cmd) return CmdSimulate(sa, out);
    if (*identify_cmd) return CmdIdentify(ia, out, err);
    if (*dist_cmd) return CmdDistance(da, out);
    if (*bench_cmd) return CmdBench(ba, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CorrectnessViolation& e) {
    err << "correctness violation at iteration " << e.iteration() << ": " << e.what() << "\n";
    return kExitCorrectness;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerdictFail;
  }
  return kExitConfig;
}

}  // namespace ckksid::cli
