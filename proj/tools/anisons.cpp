// Batch front-end: experiment configs in, fields / ledgers / reports out.
//
// Subcommands
//   analyze    norms + smallness report for the configured initial data
//   smallness  the smallness functionals only
//   simulate   advance the flow, write AFLD1 checkpoints and an energy ledger
//   decompose  simulate plus the reference/correction split and its ledger
//   verify     run the verification suites, write JSON + JUnit reports
//   sweep      evaluate a data family over a parameter list, fit log-log slopes
//
// Exit codes: 0 ok, 2 config error, 3 solver abort, 4 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "anisons/decomposition.hpp"
#include "anisons/field_io.hpp"
#include "anisons/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace anisons;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

struct CliConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- config access with JSON-pointer diagnostics ---------------------------

const json* find(const json& root, const std::string& ptr) {
  const json::json_pointer p(ptr);
  if (!root.contains(p)) return nullptr;
  return &root.at(p);
}

double get_num(const json& root, const std::string& ptr, double dflt,
               double lo = -std::numeric_limits<double>::infinity(),
               double hi = std::numeric_limits<double>::infinity()) {
  const json* j = find(root, ptr);
  if (!j) return dflt;
  if (!j->is_number()) throw CliConfigError(ptr + ": expected a number");
  const double v = j->get<double>();
  if (!std::isfinite(v) || v < lo || v > hi) {
    std::ostringstream os;
    os << ptr << ": value " << v << " outside [" << lo << ", " << hi << "]";
    throw CliConfigError(os.str());
  }
  return v;
}

long get_int(const json& root, const std::string& ptr, long dflt,
             long lo = std::numeric_limits<long>::min(),
             long hi = std::numeric_limits<long>::max()) {
  const json* j = find(root, ptr);
  if (!j) return dflt;
  if (!j->is_number_integer()) throw CliConfigError(ptr + ": expected an integer");
  const long v = j->get<long>();
  if (v < lo || v > hi)
    throw CliConfigError(ptr + ": value " + std::to_string(v) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::string get_str(const json& root, const std::string& ptr, const std::string& dflt) {
  const json* j = find(root, ptr);
  if (!j) return dflt;
  if (!j->is_string()) throw CliConfigError(ptr + ": expected a string");
  return j->get<std::string>();
}

void check_keys(const json& obj, const std::string& ptr,
                std::initializer_list<const char*> allowed) {
  if (obj.is_null()) return;
  if (!obj.is_object()) throw CliConfigError(ptr + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw CliConfigError(ptr + "/" + key + ": unknown key");
  }
}

// ---- hashing ----------------------------------------------------------------

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliConfigError("input file not readable: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[65536];
  while (f.read(buf, sizeof buf) || f.gcount() > 0) h = fnv1a(buf, std::size_t(f.gcount()), h);
  return hash_hex(h);
}

// ---- shared run context ------------------------------------------------------

struct Ctx {
  json cfg;
  fs::path out;
  std::uint64_t seed = 1;
  int threads = 1;
  bool quiet = false;
  std::string config_hash;
  std::string cutoff_hash;
};

void say(const Ctx& c, const std::string& line) {
  if (!c.quiet) std::cout << line << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliConfigError("output not writable: " + path.string());
  f << text;
  if (!f) throw CliConfigError("write failed: " + path.string());
}

void write_json(const Ctx& c, const std::string& name, json j) {
  j["config_hash"] = c.config_hash;
  j["cutoff_hash"] = c.cutoff_hash;
  write_text(c.out / name, j.dump(2) + "\n");
}

// ---- config -> domain objects -----------------------------------------------

void validate_config(const json& cfg) {
  check_keys(cfg, "", {"grid", "solver", "horizon", "monitor_stride", "data", "constants",
                       "analyze", "verify", "sweep", "seed"});
  if (const json* g = find(cfg, "/grid")) check_keys(*g, "/grid", {"nh", "nv", "Lh", "Lv"});
  if (const json* s = find(cfg, "/solver")) check_keys(*s, "/solver", {"dt", "cfl_safety"});
  if (const json* d = find(cfg, "/data"))
    check_keys(*d, "/data",
               {"family", "inv_eps", "amplitude", "delta", "profile_kmax", "files", "kmax_h",
                "kmax_v", "target_l2", "vertical_mean"});
  if (const json* k = find(cfg, "/constants"))
    check_keys(*k, "/constants",
               {"L", "M", "N", "C", "eps0", "lambda", "kappa", "gamma", "mu"});
  if (const json* a = find(cfg, "/analyze")) check_keys(*a, "/analyze", {"s", "sp"});
  if (const json* v = find(cfg, "/verify"))
    check_keys(*v, "/verify",
               {"nh", "nv", "partition_samples", "partition_phi_scale", "bernstein_trials",
                "interpolation_trials", "heat_trials", "heat_horizon", "scaling_fields",
                "energy"});
  if (const json* e = find(cfg, "/verify/energy"))
    check_keys(*e, "/verify/energy", {"nh", "nv", "dt", "horizon", "modulation"});
  if (const json* w = find(cfg, "/sweep")) check_keys(*w, "/sweep", {"param", "values"});
}

Grid grid_from(const json& cfg, const std::string& ptr, int dnh, int dnv) {
  const int nh = int(get_int(cfg, ptr + "/nh", dnh, 8, 4096));
  const int nv = int(get_int(cfg, ptr + "/nv", dnv, 8, 4096));
  const double lh = get_num(cfg, ptr + "/Lh", two_pi, 1e-8);
  const double lv = get_num(cfg, ptr + "/Lv", two_pi, 1e-8);
  try {
    return Grid(nh, nv, lh, lv);
  } catch (const ConfigError& e) {
    throw CliConfigError(ptr + ": " + e.what());
  }
}

SolverConfig solver_from(const json& cfg) {
  SolverConfig s;
  s.dt = get_num(cfg, "/solver/dt", 1e-3, 1e-12);
  s.cfl_safety = get_num(cfg, "/solver/cfl_safety", 0.5, 1e-6);
  return s;
}

SmallnessConstants constants_from(const json& cfg) {
  SmallnessConstants k;
  k.L = get_num(cfg, "/constants/L", 1.0, 0.0);
  k.M = get_num(cfg, "/constants/M", 1.0, 0.0);
  k.C = get_num(cfg, "/constants/C", 1.0, 0.0);
  k.N = int(get_int(cfg, "/constants/N", 4, 2, 1 << 20));
  k.eps0 = get_num(cfg, "/constants/eps0", 1.0, 0.0);
  return k;
}

// divergence-free horizontal profile from a random stream function
HField stream_profile(const Grid& g, std::uint64_t seed, int kmax) {
  Field psi = random_field(g, seed, {.kmax_h = kmax, .kmax_v = kmax});
  HField v(g);
  v.c1 = -1.0 * spectral_derivative(psi, 1);
  v.c2 = spectral_derivative(psi, 0);
  return v;
}

struct DataResult {
  Grid grid{8, 8};
  VecField u;
  std::vector<std::string> inputs;  // files consumed, for the manifest

  DataResult(const Grid& g, VecField f) : grid(g), u(std::move(f)) {}
};

DataResult make_data(const Ctx& c, const json& cfg) {
  const std::string family = get_str(cfg, "/data/family", "random");

  if (family == "file") {
    const json* files = find(cfg, "/data/files");
    if (!files || !files->is_array() || files->size() != 3)
      throw CliConfigError("/data/files: expected an array of three AFLD1 paths");
    std::vector<std::string> paths;
    for (const auto& p : *files) {
      if (!p.is_string()) throw CliConfigError("/data/files: expected string paths");
      paths.push_back(p.get<std::string>());
      if (!fs::exists(paths.back()))
        throw CliConfigError("/data/files: no such file: " + paths.back());
    }
    Field f1 = read_afld(paths[0]);
    DataResult r(f1.grid(), VecField(f1.grid()));
    r.u.c1 = std::move(f1);
    r.u.c2 = read_afld(paths[1]);
    r.u.c3 = read_afld(paths[2]);
    if (!(r.u.c2.grid() == r.grid) || !(r.u.c3.grid() == r.grid))
      throw CliConfigError("/data/files: component grids disagree");
    r.inputs = std::move(paths);
    return r;
  }

  const Grid g = grid_from(cfg, "/grid", 32, 32);
  if (family == "random") {
    RandomFieldSpec spec;
    spec.kmax_h = int(get_int(cfg, "/data/kmax_h", 5, 1, g.nh / 2 - 1));
    spec.kmax_v = int(get_int(cfg, "/data/kmax_v", 5, 1, g.nv / 2 - 1));
    spec.target_l2 = get_num(cfg, "/data/target_l2", 1.0, 0.0);
    const json* vm = find(cfg, "/data/vertical_mean");
    if (vm) {
      if (!vm->is_boolean()) throw CliConfigError("/data/vertical_mean: expected a boolean");
      spec.vertical_mean = vm->get<bool>();
    }
    return {g, random_divfree(g, c.seed, spec)};
  }

  const int inv_eps = int(get_int(cfg, "/data/inv_eps", 8, 1, 1 << 20));
  if (family == "oscillatory") {
    const double amp = get_num(cfg, "/data/amplitude", 1.0);
    return {g, oscillatory_data(g, inv_eps, amp)};
  }

  const double delta = get_num(cfg, "/data/delta", 0.1);
  const int pk = int(get_int(cfg, "/data/profile_kmax", 2, 1, g.nh / 2 - 1));
  const Grid target = stretched_grid(g, inv_eps);
  if (family == "slow_varying") {
    const HField v0h = stream_profile(g, c.seed, pk);
    const VecField w0 = random_divfree(g, c.seed + 1, {.kmax_h = pk, .kmax_v = pk});
    return {target, slow_data(target, inv_eps, delta, v0h, w0)};
  }
  if (family == "combined") {
    const HField v0h = stream_profile(g, c.seed, pk);
    const Field phi = random_field(g, c.seed + 1, {.kmax_h = pk, .kmax_v = pk});
    return {target, combined_data(target, inv_eps, delta, v0h, phi)};
  }
  throw CliConfigError(
      "/data/family: expected one of oscillatory, slow_varying, combined, random, file");
}

json grid_json(const Grid& g) {
  return {{"nh", g.nh}, {"nv", g.nv}, {"Lh", g.Lh}, {"Lv", g.Lv}};
}

json smallness_json(const SmallnessReport& rep) {
  auto lhs = [](const SmallnessLhs& l) {
    return json{{"value", l.overflow ? json("overflow") : json(l.value)},
                {"overflow", l.overflow},
                {"verdict", l.verdict}};
  };
  return {{"norms",
           {{"lhinv_d3_u0_b0half", rep.base_b0half},
            {"dropped_mass", rep.dropped_mass},
            {"u03_b4neg", rep.u03_b4neg},
            {"u03_b0half", rep.u03_b0half},
            {"u0h_b0half", rep.u0h_b0half},
            {"cut_b0half", rep.cut_b0half},
            {"u0h_l2", rep.u0h_l2},
            {"d3u0h_l2", rep.d3u0h_l2}}},
          {"gauge",
           {{"value", rep.gauge.overflow ? json("overflow") : json(rep.gauge.value)},
            {"overflow", rep.gauge.overflow}}},
          {"lhs", {{"gauge_b4", lhs(rep.lhs_gauge_b4)},
                   {"energy_b4", lhs(rep.lhs_energy_b4)},
                   {"gauge_b", lhs(rep.lhs_gauge_b)},
                   {"energy_b", lhs(rep.lhs_energy_b)}}},
          {"constants",
           {{"L", rep.constants.L},
            {"M", rep.constants.M},
            {"C", rep.constants.C},
            {"N", rep.constants.N},
            {"eps0", rep.constants.eps0}}}};
}

void write_manifest(const Ctx& c, const std::string& command, const Grid& g,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& artifacts) {
  json inputs_j = json::array();
  for (const auto& p : inputs) inputs_j.push_back({{"path", p}, {"content_hash", file_hash(p)}});
  json j{{"command", command},
         {"grid", grid_json(g)},
         {"seed", c.seed},
         {"config", c.cfg},
         {"inputs", inputs_j},
         {"artifacts", artifacts}};
  write_json(c, "manifest.json", std::move(j));
}

// ---- subcommands --------------------------------------------------------------

int run_analyze(const Ctx& c) {
  DataResult d = make_data(c, c.cfg);
  DyadicLadder lad(d.grid);
  const SmallnessReport rep = smallness_report(lad, d.u, constants_from(c.cfg));

  const double s = get_num(c.cfg, "/analyze/s", 0.0);
  const double sp = get_num(c.cfg, "/analyze/sp", 0.5);
  HField uh(d.grid);
  uh.c1 = d.u.c1;
  uh.c2 = d.u.c2;
  json norms{{"u_l2", l2(d.u)},
             {"uh_l2", l2(uh)},
             {"u1_b0half", norm_B0half(lad, d.u.c1)},
             {"u2_b0half", norm_B0half(lad, d.u.c2)},
             {"u3_b0half", norm_B0half(lad, d.u.c3)},
             {"uh_b0half", norm_B0half(lad, uh)},
             {"u3_b4neg", norm_B4_neg(lad, d.u.c3)},
             {"u3_b4_0half", norm_B4_0half(lad, d.u.c3)},
             {"h_sobolev", {{"s", s},
                            {"sp", sp},
                            {"u1", norm_H(d.u.c1, s, sp)},
                            {"u2", norm_H(d.u.c2, s, sp)},
                            {"u3", norm_H(d.u.c3, s, sp)}}}};
  write_json(c, "norms.json", json{{"grid", grid_json(d.grid)}, {"norms", std::move(norms)}});
  write_json(c, "smallness.json",
             json{{"grid", grid_json(d.grid)}, {"report", smallness_json(rep)}});
  say(c, "analyze: wrote norms.json, smallness.json");
  return kExitOk;
}

int run_smallness(const Ctx& c) {
  DataResult d = make_data(c, c.cfg);
  DyadicLadder lad(d.grid);
  const SmallnessReport rep = smallness_report(lad, d.u, constants_from(c.cfg));
  write_json(c, "smallness.json",
             json{{"grid", grid_json(d.grid)}, {"report", smallness_json(rep)}});
  std::ostringstream os;
  os << "smallness: lhs_gauge_b4 = "
     << (rep.lhs_gauge_b4.overflow ? std::string("overflow")
                                   : std::to_string(rep.lhs_gauge_b4.value))
     << ", verdict " << (rep.lhs_gauge_b4.verdict ? "true" : "false");
  say(c, os.str());
  return kExitOk;
}

int run_simulate(const Ctx& c) {
  DataResult d = make_data(c, c.cfg);
  const SolverConfig scfg = solver_from(c.cfg);
  const double horizon = get_num(c.cfg, "/horizon", 1.0, 0.0);
  const long stride = get_int(c.cfg, "/monitor_stride", 1, 1, 1 << 30);

  CutoffPair cut;
  NormLedger led(d.grid, cut, c.config_hash);
  led.add_column("l2sq");
  led.add_column("diss_int");
  led.add_column("energy_drift");
  const double e0 = l2sq(d.u);
  auto row = [&](const AnsStepper& s) {
    const double e = l2sq(s.state());
    const double di = s.dissipation_integral()[0];  // already 2 int |grad_h u|^2
    led.start_row(s.time());
    led.put("l2sq", e);
    led.put("diss_int", di);
    led.put("energy_drift", e0 > 0.0 ? (e + di - e0) / e0 : 0.0);
    led.flush_row();
  };

  AnsStepper s(d.u, scfg);
  row(s);
  s.run(horizon, [&](const AnsStepper& st) {
    if (st.steps() % stride == 0) row(st);
  });

  std::ostringstream csv;
  led.to_csv(csv);
  write_text(c.out / "ledger.csv", csv.str());
  const VecField& u = s.state();
  write_afld((c.out / "u1.afld").string(), u.c1);
  write_afld((c.out / "u2.afld").string(), u.c2);
  write_afld((c.out / "u3.afld").string(), u.c3);
  write_manifest(c, "simulate", d.grid, d.inputs,
                 {"ledger.csv", "u1.afld", "u2.afld", "u3.afld"});
  say(c, "simulate: " + std::to_string(s.steps()) + " steps to t = " +
             std::to_string(s.time()) + ", wrote ledger.csv + checkpoints");
  return kExitOk;
}

int run_decompose(const Ctx& c) {
  DataResult d = make_data(c, c.cfg);
  DyadicLadder lad(d.grid);
  DecompositionConfig dcfg;
  dcfg.solver = solver_from(c.cfg);
  dcfg.monitor_stride = int(get_int(c.cfg, "/monitor_stride", 1, 1, 1 << 30));
  dcfg.lambda = get_num(c.cfg, "/constants/lambda", 1.0, 0.0);
  dcfg.kappa = get_num(c.cfg, "/constants/kappa", 1.0, 0.0);
  dcfg.gamma = get_num(c.cfg, "/constants/gamma", 1.0, 0.0);
  dcfg.mu = get_num(c.cfg, "/constants/mu", 1.0, 0.0);
  const double horizon = get_num(c.cfg, "/horizon", 1.0, 0.0);

  DecompositionRun run(lad, d.u, dcfg, c.config_hash);
  run.advance(horizon);

  std::ostringstream csv;
  run.ledger().to_csv(csv);
  write_text(c.out / "ledger.csv", csv.str());

  const VecField& u = run.u();
  const HField& baru = run.baru();
  const VecField v = run.v();
  const Field vF = run.v_F();
  const Field w = run.w();
  const std::vector<std::pair<std::string, const Field*>> channels = {
      {"u1.afld", &u.c1},     {"u2.afld", &u.c2},   {"u3.afld", &u.c3},
      {"baru1.afld", &baru.c1}, {"baru2.afld", &baru.c2},
      {"v1.afld", &v.c1},     {"v2.afld", &v.c2},   {"v3.afld", &v.c3},
      {"vF.afld", &vF},       {"w.afld", &w}};
  std::vector<std::string> names{"ledger.csv", "decompose.json"};
  for (const auto& [name, f] : channels) {
    write_afld((c.out / name).string(), *f);
    names.push_back(name);
  }

  const double cthr = get_num(c.cfg, "/constants/C", 1.0, 0.0);
  const BootstrapStatus bs = bootstrap_monitor(run.ledger(), cthr);
  double max_rel = 0.0, max_scale = 0.0;
  for (const WeqResidual& r : run.residuals()) {
    max_rel = std::max(max_rel, r.relative);
    max_scale = std::max(max_scale, r.scale);
  }
  const InitialIdentityReport& id = run.identities();
  write_json(c, "decompose.json",
             json{{"grid", grid_json(d.grid)},
                  {"horizon", horizon},
                  {"initial_identities",
                   {{"vh_residual", id.vh_residual},
                    {"w_residual", id.w_residual},
                    {"vertical_mean_l2", id.vertical_mean_l2}}},
                  {"correction_residual",
                   {{"samples", run.residuals().size()},
                    {"max_relative", max_rel},
                    {"max_scale", max_scale}}},
                  {"bootstrap",
                   {{"threshold_constant", cthr},
                    {"t_16", bs.t_16 ? json(*bs.t_16) : json()},
                    {"t_32", bs.t_32 ? json(*bs.t_32) : json()},
                    {"max_vh", bs.max_vh}}}});
  write_manifest(c, "decompose", d.grid, d.inputs, names);
  std::ostringstream os;
  os << "decompose: max correction residual " << max_rel << ", max composite vh "
     << bs.max_vh;
  say(c, os.str());
  return kExitOk;
}

int run_verify(const Ctx& c) {
  const json& cfg = c.cfg;
  const Grid g = grid_from(cfg, "/verify", 32, 32);
  const Grid ge(int(get_int(cfg, "/verify/energy/nh", 24, 8, 4096)),
                int(get_int(cfg, "/verify/energy/nv", 8, 8, 4096)));

  std::vector<VerifyReport> reports;
  // partition_phi_scale != 1 is fault injection for exercising the failure path
  reports.push_back(verify_partition(
      CutoffPair(), int(get_int(cfg, "/verify/partition_samples", 1000, 1000, 1 << 24)),
      get_num(cfg, "/verify/partition_phi_scale", 1.0, 0.0)));
  reports.push_back(
      verify_bernstein(g, int(get_int(cfg, "/verify/bernstein_trials", 200, 1, 1 << 20)),
                       c.seed));
  reports.push_back(verify_interpolation(
      g, int(get_int(cfg, "/verify/interpolation_trials", 40, 1, 1 << 20)), c.seed));
  reports.push_back(
      verify_heat_smoothing(g, int(get_int(cfg, "/verify/heat_trials", 4, 2, 1 << 20)),
                            get_num(cfg, "/verify/heat_horizon", 4.0, 1e-3), c.seed));
  reports.push_back(verify_scaling(
      g, int(get_int(cfg, "/verify/scaling_fields", 20, 1, 1 << 20)), c.seed));

  // x3-modulated Taylor-Green columns exercise both energy statements
  const double mod = get_num(cfg, "/verify/energy/modulation", 0.5, 0.0);
  AlignedVector<cplx> phys(ge.size());
  HField a0(ge);
  for (int comp = 0; comp < 2; ++comp) {
    for (int i1 = 0; i1 < ge.nh; ++i1)
      for (int i2 = 0; i2 < ge.nh; ++i2)
        for (int i3 = 0; i3 < ge.nv; ++i3) {
          const double x1 = ge.dx_h() * i1, x2 = ge.dx_h() * i2, x3 = ge.dx_v() * i3;
          const double a = 1.0 + mod * std::cos(x3);
          phys[ge.idx(i1, i2, i3)] = comp == 0 ? a * std::cos(x1) * std::sin(x2)
                                               : -a * std::sin(x1) * std::cos(x2);
        }
    a0[comp] = Field::from_physical(ge, phys);
  }
  reports.push_back(verify_energy_layers(a0, {.dt = get_num(cfg, "/verify/energy/dt", 1e-3, 1e-12)},
                                         get_num(cfg, "/verify/energy/horizon", 0.25, 0.0)));
  reports.push_back(trilinear_spot_check(g, c.seed));

  std::ostringstream js;
  write_reports_json(reports, js);
  json j = json::parse(js.str());
  write_json(c, "verify.json", std::move(j));
  std::ostringstream xs;
  write_reports_junit(reports, xs);
  xs << "<!-- config=" << c.config_hash << " cutoff=" << c.cutoff_hash << " -->\n";
  write_text(c.out / "verify.xml", xs.str());

  int hard = 0;
  for (const auto& r : reports) {
    hard += r.hard_failures();
    std::ostringstream os;
    os << "verify: " << r.suite << " " << (r.passed() ? "pass" : "FAIL") << " ("
       << r.checks.size() << " checks)";
    say(c, os.str());
  }
  if (hard > 0) {
    say(c, "verify: " + std::to_string(hard) + " hard-bound failure(s), see verify.json");
    return kExitVerify;
  }
  return kExitOk;
}

int run_sweep(const Ctx& c) {
  const json& cfg = c.cfg;
  const std::string param = get_str(cfg, "/sweep/param", "inv_eps");
  if (param != "inv_eps" && param != "delta")
    throw CliConfigError("/sweep/param: expected inv_eps or delta");
  const json* values = find(cfg, "/sweep/values");
  if (!values || !values->is_array() || values->size() < 2)
    throw CliConfigError("/sweep/values: expected an array of at least two values");

  struct Point {
    double x = 0.0;  // the swept abscissa (eps or delta)
    json cfg;
    SmallnessReport rep;
    double u03_b4neg = 0.0, u03_b0half = 0.0, uh_b0half = 0.0;
  };
  std::vector<Point> pts(values->size());
  for (std::size_t i = 0; i < values->size(); ++i) {
    const json& v = (*values)[i];
    pts[i].cfg = cfg;
    if (param == "inv_eps") {
      if (!v.is_number_integer() || v.get<long>() < 2)
        throw CliConfigError("/sweep/values: inv_eps entries must be integers >= 2");
      pts[i].cfg["data"]["inv_eps"] = v.get<long>();
      pts[i].x = 1.0 / double(v.get<long>());
    } else {
      if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() < 0.25))
        throw CliConfigError("/sweep/values: delta entries must lie in (0, 1/4)");
      pts[i].cfg["data"]["delta"] = v.get<double>();
      pts[i].x = v.get<double>();
    }
  }

  std::exception_ptr first_error;
  std::mutex err_mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pts.size()) return;
      try {
        DataResult d = make_data(c, pts[i].cfg);
        DyadicLadder lad(d.grid);
        pts[i].rep = smallness_report(lad, d.u, constants_from(pts[i].cfg));
        pts[i].u03_b4neg = norm_B4_neg(lad, d.u.c3);
        pts[i].u03_b0half = norm_B0half(lad, d.u.c3);
        HField uh(d.grid);
        uh.c1 = d.u.c1;
        uh.c2 = d.u.c2;
        pts[i].uh_b0half = norm_B0half(lad, uh);
      } catch (...) {
        std::scoped_lock lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const int nw = std::max(1, std::min<int>(c.threads, int(pts.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  const std::vector<std::pair<std::string, std::function<double(const Point&)>>> cols = {
      {"u03_b4neg", [](const Point& p) { return p.u03_b4neg; }},
      {"u03_b0half", [](const Point& p) { return p.u03_b0half; }},
      {"uh_b0half", [](const Point& p) { return p.uh_b0half; }},
      {"base_b0half", [](const Point& p) { return p.rep.base_b0half; }},
      {"lhs_gauge_b4",
       [](const Point& p) {
         return p.rep.lhs_gauge_b4.overflow ? std::numeric_limits<double>::infinity()
                                            : p.rep.lhs_gauge_b4.value;
       }}};

  // least-squares slope of log(col) against log(x); null when a value is
  // nonpositive or nonfinite
  auto slope = [&](const std::function<double(const Point&)>& get) -> json {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const Point& p : pts) {
      const double v = get(p);
      if (!(v > 0.0) || !std::isfinite(v)) return nullptr;
      const double lx = std::log(p.x), ly = std::log(v);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double n = double(pts.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return nullptr;
    return (n * sxy - sx * sy) / den;
  };

  std::ostringstream csv;
  csv << "#schema=sweep-v1;config=" << c.config_hash << ";cutoff=" << c.cutoff_hash << "\n";
  csv << param;
  for (const auto& [name, get] : cols) csv << "," << name;
  csv << "\n";
  char buf[32];
  for (const Point& p : pts) {
    std::snprintf(buf, sizeof buf, "%.17g", param == "inv_eps" ? 1.0 / p.x : p.x);
    csv << buf;
    for (const auto& [name, get] : cols) {
      std::snprintf(buf, sizeof buf, "%.17g", get(p));
      csv << "," << buf;
    }
    csv << "\n";
  }
  write_text(c.out / "sweep.csv", csv.str());

  json slopes;
  for (const auto& [name, get] : cols) slopes[name] = slope(get);
  json rows = json::array();
  for (const Point& p : pts) {
    json r{{param, param == "inv_eps" ? json(long(std::lround(1.0 / p.x))) : json(p.x)}};
    for (const auto& [name, get] : cols) {
      const double v = get(p);
      r[name] = std::isfinite(v) ? json(v) : json("overflow");
    }
    rows.push_back(std::move(r));
  }
  write_json(c, "sweep.json",
             json{{"param", param}, {"rows", std::move(rows)}, {"slopes", slopes}});
  std::ostringstream os;
  os << "sweep: " << pts.size() << " points";
  if (slopes["u03_b4neg"].is_number())
    os << ", slope(u03_b4neg) = " << slopes["u03_b4neg"].get<double>();
  say(c, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic spectral flow toolkit"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> threads_flag;
  bool quiet = false;
  app.add_option("--config", config_path, "experiment config JSON");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--seed", seed_flag, "override the config seed");
  app.add_option("--threads", threads_flag, "worker threads for sweeps (env ANISONS_THREADS)");
  app.add_flag("--quiet", quiet, "suppress progress lines");

  auto* a_an = app.add_subcommand("analyze", "norms and smallness report for the initial data");
  auto* a_sm = app.add_subcommand("smallness", "smallness functionals only");
  auto* a_si = app.add_subcommand("simulate", "advance the flow, write checkpoints and ledger");
  auto* a_de = app.add_subcommand("decompose", "simulate plus the reference/correction split");
  auto* a_ve = app.add_subcommand("verify", "run the verification suites");
  auto* a_sw = app.add_subcommand("sweep", "evaluate a data family over a parameter list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? kExitOk : kExitConfig;
  }

  try {
    Ctx c;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw CliConfigError("config file not readable: " + config_path);
      try {
        c.cfg = json::parse(f);
      } catch (const json::parse_error& e) {
        throw CliConfigError(std::string("config parse error: ") + e.what());
      }
    } else {
      c.cfg = json::object();
    }
    validate_config(c.cfg);

    c.seed = seed_flag ? *seed_flag : std::uint64_t(get_int(c.cfg, "/seed", 1, 0));
    c.cfg["seed"] = c.seed;

    if (threads_flag) {
      c.threads = *threads_flag;
    } else if (const char* env = std::getenv("ANISONS_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (!end || *end != '\0' || v < 1)
        throw CliConfigError("ANISONS_THREADS: expected a positive integer, got '" +
                             std::string(env) + "'");
      c.threads = int(v);
    }
    if (c.threads < 1) throw CliConfigError("--threads: expected a positive integer");
    c.quiet = quiet;

    c.out = out_dir;
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) throw CliConfigError("cannot create output directory: " + c.out.string());

    const std::string dumped = c.cfg.dump();
    c.config_hash = hash_hex(fnv1a(dumped.data(), dumped.size()));
    c.cutoff_hash = CutoffPair().hash_string();

    if (a_an->parsed()) return run_analyze(c);
    if (a_sm->parsed()) return run_smallness(c);
    if (a_si->parsed()) return run_simulate(c);
    if (a_de->parsed()) return run_decompose(c);
    if (a_ve->parsed()) return run_verify(c);
    if (a_sw->parsed()) return run_sweep(c);
    return kExitConfig;
  } catch (const CliConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return kExitSolver;
  }
}
