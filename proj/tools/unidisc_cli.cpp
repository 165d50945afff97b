// Experiment runner: every library operation is reachable through a JSON
// config (see docs/formats.md and the README for the schema). Exit codes:
// 0 ok, 2 validation, 3 cap exceeded, 4 internal inconsistency.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "unidisc/rng.hpp"
#include "unidisc/serialize.hpp"

namespace fs = std::filesystem;
using namespace unidisc;
using json = nlohmann::ordered_json;

namespace {

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  unsigned max_cpu = 0;
  std::uint64_t cap = kDefaultSupportCap;
  std::optional<std::string> out;
};

[[noreturn]] void config_fail(const std::string& where,
                              const std::string& what) {
  throw validation_error("config " + where + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      config_fail(where, "unknown key '" + key + "'");
}

const json& require_key(const json& obj, const std::string& key,
                        const std::string& where) {
  if (!obj.contains(key)) config_fail(where, "missing key '" + key + "'");
  return obj.at(key);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback,
         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    config_fail(where + "/" + key, "wrong type");
  }
}

template <typename T>
T get_required(const json& obj, const std::string& key,
               const std::string& where) {
  const json& v = require_key(obj, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    config_fail(where + "/" + key, "wrong type");
  }
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

Dictionary parse_dictionary(const json& cfg) {
  const json& d = require_key(cfg, "dictionary", "/");
  if (!d.is_object()) config_fail("/dictionary", "must be an object");
  reject_unknown(d, {"family", "M", "N", "d", "scale"}, "/dictionary");
  std::string family = get_required<std::string>(d, "family", "/dictionary");
  int dim = get_or<int>(d, "d", 1, "/dictionary");
  if (family == "trig") {
    int m = get_required<int>(d, "M", "/dictionary");
    return Dictionary::trig(m, dim);
  }
  if (family == "trig-n") {
    auto n = get_required<std::uint64_t>(d, "N", "/dictionary");
    return Dictionary::trig_prefix(n, dim);
  }
  if (family == "sine") {
    auto n = get_required<std::uint64_t>(d, "N", "/dictionary");
    double scale = get_or<double>(d, "scale", std::sqrt(2.0), "/dictionary");
    return Dictionary::sine(n, scale);
  }
  config_fail("/dictionary/family", "unknown family '" + family + "'");
}

SamplingMode parse_mode(const std::string& s) {
  if (s == "iid-uniform") return SamplingMode::IidUniform;
  if (s == "stratified") return SamplingMode::Stratified;
  if (s == "equispaced") return SamplingMode::Equispaced;
  config_fail("/sampling/mode", "unknown mode '" + s + "'");
}

struct SamplingSpec {
  SamplingMode mode = SamplingMode::IidUniform;
  std::optional<std::size_t> m;
  std::vector<std::size_t> m_values;
  std::uint64_t seed = 0;
};

SamplingSpec parse_sampling(const json& cfg, const GlobalOpts& g) {
  SamplingSpec spec;
  if (!cfg.contains("sampling")) return spec;
  const json& s = cfg.at("sampling");
  if (!s.is_object()) config_fail("/sampling", "must be an object");
  reject_unknown(s, {"mode", "m", "m_values", "seed"}, "/sampling");
  spec.mode =
      parse_mode(get_or<std::string>(s, "mode", "iid-uniform", "/sampling"));
  if (s.contains("m")) spec.m = get_required<std::size_t>(s, "m", "/sampling");
  if (s.contains("m_values")) {
    for (const auto& v : s.at("m_values"))
      spec.m_values.push_back(v.get<std::size_t>());
  }
  spec.seed = get_or<std::uint64_t>(s, "seed", 0, "/sampling");
  if (g.seed) spec.seed = *g.seed;
  return spec;
}

PointSet draw_from_spec(const Dictionary& dict, const SamplingSpec& spec,
                        const std::string& where) {
  if (!spec.m) config_fail(where, "sampling.m is required");
  return draw_points(*spec.m, dict.domain(), spec.mode, spec.seed);
}

/// Synthetic targets for the recovery subcommands.
struct Target {
  SparseCoefficients sparse;
  SparseCoefficients perturbation;  // empty unless sparse-plus-noise
  double delta = 0.0;
};

Target parse_target(const json& params, const Dictionary& dict,
                    const std::string& where) {
  const json& t = require_key(params, "target", where);
  reject_unknown(t, {"type", "v", "seed", "delta", "support", "values"},
                 where + "/target");
  std::string type = get_required<std::string>(t, "type", where + "/target");
  Target target;
  if (type == "coefficients") {
    const json& sup = require_key(t, "support", where + "/target");
    const json& vals = require_key(t, "values", where + "/target");
    if (sup.size() != vals.size())
      config_fail(where + "/target", "support/values size mismatch");
    for (const auto& i : sup)
      target.sparse.support.push_back(i.get<std::size_t>());
    for (const auto& v : vals) {
      if (!v.is_array() || v.size() != 2)
        config_fail(where + "/target/values", "entries must be [re, im]");
      target.sparse.values.emplace_back(v[0].get<double>(),
                                        v[1].get<double>());
    }
    target.sparse.validate(dict.size());
    return target;
  }
  std::size_t v = get_required<std::size_t>(t, "v", where + "/target");
  if (v == 0 || v > dict.size()) config_fail(where + "/target/v", "need 1 <= v <= N");
  std::uint64_t seed = get_or<std::uint64_t>(t, "seed", 1, where + "/target");
  CounterRng rng(seed, 0x7A26E7);
  target.sparse.support = rng.sample_without_replacement(dict.size(), v);
  target.sparse.values.resize(v);
  for (std::size_t i = 0; i < v; ++i)
    target.sparse.values[i] = rng.next_complex_gaussian();
  if (type == "sparse-random") return target;
  if (type == "sparse-plus-noise") {
    target.delta = get_required<double>(t, "delta", where + "/target");
    target.perturbation.support.resize(dict.size());
    target.perturbation.values.resize(dict.size());
    for (std::size_t i = 0; i < dict.size(); ++i) {
      target.perturbation.support[i] = i;
      target.perturbation.values[i] = rng.next_complex_gaussian();
    }
    double norm = continuous_norm(dict, target.perturbation, 2.0);
    for (cplx& c : target.perturbation.values) c /= norm;
    return target;
  }
  config_fail(where + "/target/type", "unknown type '" + type + "'");
}

std::function<cplx(const double*)> target_evaluator(const Dictionary& dict,
                                                    const Target& t) {
  return [&dict, &t](const double* x) {
    cplx val = dict.evaluate_sum(t.sparse, x);
    if (t.delta != 0.0) val += t.delta * dict.evaluate_sum(t.perturbation, x);
    return val;
  };
}

/// Reference-grid resolution for subcommands that materialize per-atom
/// grid values; the full per-dimension default is only affordable in one
/// dimension.
int quad_points_for(const json& params, const Dictionary& dict,
                    const std::string& where) {
  int fallback = dict.domain().dimension == 1 ? kDefaultQuadPointsPerDim : 256;
  int qp = get_or<int>(params, "quad_points", fallback, where);
  if (qp < 2) config_fail(where + "/quad_points", "must be at least 2");
  return qp;
}

struct RunContext {
  fs::path out_dir;
  std::vector<std::string> outputs;

  void write_text(const std::string& name, const std::string& body) {
    fs::create_directories(out_dir);
    std::ofstream os(out_dir / name, std::ios::binary);
    os << body;
    if (!os) throw std::runtime_error("cannot write " + name);
    outputs.push_back(name);
  }
  void write_json(const std::string& name, const json& j) {
    write_text(name, j.dump(2) + "\n");
  }
};

// ---------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------

void run_discretize_check(const json& cfg, const json& params,
                          const GlobalOpts& g, RunContext& ctx) {
  reject_unknown(params,
                 {"v", "C1", "C2", "one_sided", "randomized_supports",
                  "per_support_cap"},
                 "/params");
  Dictionary dict = parse_dictionary(cfg);
  SamplingSpec spec = parse_sampling(cfg, g);
  auto v = get_required<std::size_t>(params, "v", "/params");
  if (v == 0 || v > dict.size()) config_fail("/params/v", "need 1 <= v <= N");
  double c1 = get_or<double>(params, "C1", 0.5, "/params");
  double c2 = get_or<double>(params, "C2", 1.5, "/params");
  bool one_sided = get_or<bool>(params, "one_sided", false, "/params");
  CheckOptions opt;
  opt.support_cap = g.cap;
  opt.max_threads = g.max_cpu;
  opt.randomized_supports =
      get_or<std::size_t>(params, "randomized_supports", 0, "/params");
  opt.randomized_seed = spec.seed;
  opt.per_support_cap =
      get_or<std::size_t>(params, "per_support_cap", 0, "/params");

  PointSet pts = draw_from_spec(dict, spec, "/sampling");
  UniversalCertificate cert = one_sided
                                  ? one_sided_check(dict, v, pts, c1, opt)
                                  : universal_check(dict, v, pts, c1, c2, opt);
  ctx.write_json(
      "certificate.json",
      certificate_to_json(cert, dict.descriptor(), spec.seed, pts.m));
  std::ostringstream pcsv;
  write_point_set_csv(pcsv, pts);
  ctx.write_text("points.csv", pcsv.str());
}

void run_sweep_m(const json& cfg, const json& params, const GlobalOpts& g,
                 RunContext& ctx) {
  reject_unknown(params, {"v", "C1", "C2", "trials", "pi0", "m_cap"},
                 "/params");
  Dictionary dict = parse_dictionary(cfg);
  SamplingSpec spec = parse_sampling(cfg, g);
  auto v = get_required<std::size_t>(params, "v", "/params");
  if (v == 0 || v > dict.size()) config_fail("/params/v", "need 1 <= v <= N");
  double c1 = get_or<double>(params, "C1", 0.5, "/params");
  double c2 = get_or<double>(params, "C2", 1.5, "/params");
  auto trials = get_required<std::size_t>(params, "trials", "/params");
  CheckOptions opt;
  opt.support_cap = g.cap;
  opt.max_threads = g.max_cpu;

  if (params.contains("pi0")) {
    double pi0 = params.at("pi0").get<double>();
    auto m_cap = get_or<std::size_t>(params, "m_cap", 65536, "/params");
    MinMResult res =
        empirical_min_m(dict, v, c1, c2, pi0, trials, spec.seed, m_cap, opt);
    ctx.write_json("minm.json",
                   min_m_to_json(res, dict.descriptor(), spec.seed));
    std::ostringstream csv;
    write_sweep_csv(csv, res.sweep);
    ctx.write_text("sweep.csv", csv.str());
    return;
  }
  if (spec.m_values.empty())
    config_fail("/sampling/m_values", "required unless params.pi0 is given");
  std::vector<SweepEntry> sweep;
  for (std::size_t m : spec.m_values)
    sweep.push_back(
        success_probability(dict, v, m, c1, c2, trials, spec.seed, opt));
  ctx.write_json("sweep.json",
                 sweep_to_json(sweep, dict.descriptor(), spec.seed));
  std::ostringstream csv;
  write_sweep_csv(csv, sweep);
  ctx.write_text("sweep.csv", csv.str());
}

void run_rip(const json& cfg, const json& params, const GlobalOpts& g,
             RunContext& ctx) {
  reject_unknown(params, {"v"}, "/params");
  Dictionary dict = parse_dictionary(cfg);
  SamplingSpec spec = parse_sampling(cfg, g);
  auto v = get_required<std::size_t>(params, "v", "/params");
  if (v == 0 || v > dict.size()) config_fail("/params/v", "need 1 <= v <= N");
  CheckOptions opt;
  opt.support_cap = g.cap;
  opt.max_threads = g.max_cpu;
  PointSet pts = draw_from_spec(dict, spec, "/sampling");
  RIPReport rep = rip_delta(dict, v, pts, opt);
  ctx.write_json("rip.json",
                 rip_to_json(rep, dict.descriptor(), spec.seed, pts.m));
}

void run_recover(const json& cfg, const json& params, const GlobalOpts& g,
                 RunContext& ctx) {
  reject_unknown(params, {"target", "t", "max_iterations", "stop_tolerance"},
                 "/params");
  Dictionary dict = parse_dictionary(cfg);
  SamplingSpec spec = parse_sampling(cfg, g);
  Target target = parse_target(params, dict, "/params");
  PointSet pts = draw_from_spec(dict, spec, "/sampling");
  Eigen::MatrixXcd phi = sample_matrix(dict, pts);
  auto f = target_evaluator(dict, target);
  Eigen::VectorXcd y(static_cast<Eigen::Index>(pts.m));
  for (std::size_t j = 0; j < pts.m; ++j)
    y[static_cast<Eigen::Index>(j)] = f(pts.point(j));

  WompConfig womp;
  womp.weakness = get_or<double>(params, "t", 1.0, "/params");
  womp.max_iterations = get_or<std::size_t>(
      params, "max_iterations", 2 * target.sparse.sparsity() + 4, "/params");
  womp.stop_tolerance =
      get_or<double>(params, "stop_tolerance", 1e-12, "/params");
  WompTrace trace = womp_run(phi, y, womp);

  json j;
  j["kind"] = "womp-recovery";
  j["dictionary"] = dict.descriptor();
  j["seed"] = spec.seed;
  j["m"] = pts.m;
  j["weakness"] = womp.weakness;
  j["target_support"] = json::array();
  for (std::size_t i : target.sparse.support) j["target_support"].push_back(i);
  j["trace"] = trace_to_json(trace);
  ctx.write_json("recover.json", j);
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  ctx.write_text("trace.csv", csv.str());
}

void run_lebesgue(const json& cfg, const json& params, const GlobalOpts& g,
                  RunContext& ctx) {
  reject_unknown(params,
                 {"target", "v", "c", "t", "compute_continuous", "quad_points"},
                 "/params");
  Dictionary dict = parse_dictionary(cfg);
  SamplingSpec spec = parse_sampling(cfg, g);
  Target target = parse_target(params, dict, "/params");
  auto v = get_required<std::size_t>(params, "v", "/params");
  if (v > dict.size()) config_fail("/params/v", "v exceeds N");
  LebesgueOptions opt;
  opt.expansion = get_or<std::size_t>(params, "c", 3, "/params");
  opt.weakness = get_or<double>(params, "t", 1.0, "/params");
  opt.compute_continuous =
      get_or<bool>(params, "compute_continuous", true, "/params");
  opt.support_cap = g.cap;
  PointSet pts = draw_from_spec(dict, spec, "/sampling");
  QuadratureRule quad = QuadratureRule::build(
      dict.domain(), quad_points_for(params, dict, "/params"));
  LebesgueReport rep =
      lebesgue_report(target_evaluator(dict, target), dict, pts, v, opt, quad);
  json j = lebesgue_to_json(rep);
  j["dictionary"] = dict.descriptor();
  j["seed"] = spec.seed;
  j["v"] = v;
  j["c"] = opt.expansion;
  ctx.write_json("lebesgue.json", j);
}

void run_ls_universal(const json& cfg, const json& params, const GlobalOpts& g,
                      RunContext& ctx) {
  reject_unknown(params, {"target", "v", "quad_points"}, "/params");
  Dictionary dict = parse_dictionary(cfg);
  SamplingSpec spec = parse_sampling(cfg, g);
  Target target = parse_target(params, dict, "/params");
  auto v = get_required<std::size_t>(params, "v", "/params");
  if (v > dict.size()) config_fail("/params/v", "v exceeds N");
  PointSet pts = draw_from_spec(dict, spec, "/sampling");
  QuadratureRule quad = QuadratureRule::build(
      dict.domain(), quad_points_for(params, dict, "/params"));
  RecoveryResult res = ls_universal(target_evaluator(dict, target), dict, v,
                                    pts, quad, g.cap);
  json j = recovery_to_json(res);
  j["dictionary"] = dict.descriptor();
  j["seed"] = spec.seed;
  j["v"] = v;
  ctx.write_json("ls_universal.json", j);
}

void run_block_greedy(const json& cfg, const json& params, const GlobalOpts& g,
                      RunContext& ctx) {
  reject_unknown(
      params, {"a", "b", "beta", "n", "j_max", "instance_seed", "full_support"},
      "/params");
  const json& d = require_key(cfg, "dictionary", "/");
  reject_unknown(d, {"family", "d"}, "/dictionary");
  std::string family = get_required<std::string>(d, "family", "/dictionary");
  if (family != "trig")
    config_fail("/dictionary/family", "block-greedy runs on trig systems");
  int dim = get_or<int>(d, "d", 1, "/dictionary");

  double a = get_required<double>(params, "a", "/params");
  double b = get_or<double>(params, "b", 0.0, "/params");
  double beta = get_or<double>(params, "beta", a / 2.0, "/params");
  auto n = get_required<std::size_t>(params, "n", "/params");
  auto j_max = get_required<std::size_t>(params, "j_max", "/params");
  auto inst_seed = get_or<std::uint64_t>(params, "instance_seed", 1, "/params");
  bool full = get_or<bool>(params, "full_support", true, "/params");

  SamplingSpec spec = parse_sampling(cfg, g);
  ClassInstance inst =
      generate_class_instance(dim, a, b, j_max, inst_seed, full);
  if (!spec.m) config_fail("/sampling", "sampling.m is required");
  PointSet pts = draw_points(*spec.m, Domain::torus(dim), spec.mode, spec.seed);
  BlockGreedyResult res =
      block_greedy(inst.grid, inst.coefficients, a, beta, n, pts);

  json j;
  j["kind"] = "block-greedy";
  j["d"] = dim;
  j["a"] = a;
  j["b"] = b;
  j["beta"] = beta;
  j["n"] = n;
  j["j_max"] = j_max;
  j["instance_seed"] = inst_seed;
  j["seed"] = spec.seed;
  j["m"] = pts.m;
  j["term_count"] = res.term_count;
  j["error_mixed"] = res.error_mixed;
  j["steps_per_level"] = json::array();
  for (std::size_t s : res.steps_per_level) j["steps_per_level"].push_back(s);
  ctx.write_json("blockgreedy.json", j);
}

void run_lowerbound(const json& cfg, const json& params, const GlobalOpts& g,
                    RunContext& ctx) {
  reject_unknown(params, {"C1"}, "/params");
  Dictionary dict = parse_dictionary(cfg);
  if (dict.family() != DictionaryFamily::Sine)
    config_fail("/dictionary/family", "lowerbound runs on the sine system");
  SamplingSpec spec = parse_sampling(cfg, g);
  double c1 = get_or<double>(params, "C1", 0.5, "/params");
  PointSet pts = draw_from_spec(dict, spec, "/sampling");
  std::span<const double> xs(pts.coords.data(), pts.m);
  auto cert = sine_failure_certificate(xs, static_cast<int>(dict.size()), c1,
                                       dict.sine_scale());
  json j;
  j["kind"] = "lowerbound";
  j["dictionary"] = dict.descriptor();
  j["seed"] = spec.seed;
  j["m"] = pts.m;
  j["threshold_m"] =
      min_m_threshold(static_cast<int>(dict.size()), c1, dict.sine_scale());
  if (cert) {
    j["certificate"] = failure_to_json(*cert, xs);
    // cross-check through the discretization module
    UniversalCertificate one = one_sided_check(dict, 1, pts, c1);
    j["one_sided_confirms_failure"] = !one.holds;
  } else {
    j["certificate"] = nullptr;
  }
  ctx.write_json("lowerbound.json", j);
}

void run_entropy(const json& cfg, const json& params, const GlobalOpts& g,
                 RunContext& ctx) {
  reject_unknown(params, {"v", "p", "n_members", "k_max", "grid_points"},
                 "/params");
  Dictionary dict = parse_dictionary(cfg);
  SamplingSpec spec = parse_sampling(cfg, g);
  auto v = get_required<std::size_t>(params, "v", "/params");
  if (v == 0 || v > dict.size()) config_fail("/params/v", "need 1 <= v <= N");
  double p = get_or<double>(params, "p", 2.0, "/params");
  auto n_members = get_required<std::size_t>(params, "n_members", "/params");
  auto k_max = get_required<std::size_t>(params, "k_max", "/params");
  int grid_points = get_or<int>(params, "grid_points", 2048, "/params");

  FunctionCloud cloud =
      generate_cloud(dict, v, p, n_members, spec.seed, grid_points);
  EntropyEstimate est = entropy_numbers(cloud, k_max);
  std::ostringstream csv;
  write_entropy_csv(csv, est);
  ctx.write_text("entropy.csv", csv.str());
  json j;
  j["kind"] = "entropy";
  j["dictionary"] = dict.descriptor();
  j["seed"] = spec.seed;
  j["v"] = v;
  j["p"] = p;
  j["n_members"] = n_members;
  j["eps_k"] = json::array();
  for (double e : est.eps_k) j["eps_k"].push_back(e);
  ctx.write_json("entropy.json", j);
}

int run_command(const fs::path& config_path, const GlobalOpts& g) {
  std::ifstream is(config_path, std::ios::binary);
  if (!is) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return 2;
  }
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::cerr << "error: " << config_path.string() << ":" << line << ":"
              << col << ": " << e.what() << "\n";
    return 2;
  }

  auto started = std::chrono::steady_clock::now();
  RunContext ctx;
  try {
    if (!cfg.is_object()) config_fail("/", "config must be an object");
    reject_unknown(
        cfg, {"subcommand", "dictionary", "sampling", "params", "output_dir"},
        "/");
    std::string sub = get_required<std::string>(cfg, "subcommand", "/");
    json params = cfg.contains("params") ? cfg.at("params") : json::object();
    if (!params.is_object()) config_fail("/params", "must be an object");

    ctx.out_dir = g.out ? fs::path(*g.out)
                        : fs::path(get_or<std::string>(cfg, "output_dir",
                                                       "out", "/"));

    if (sub == "discretize-check")
      run_discretize_check(cfg, params, g, ctx);
    else if (sub == "sweep-m")
      run_sweep_m(cfg, params, g, ctx);
    else if (sub == "rip")
      run_rip(cfg, params, g, ctx);
    else if (sub == "recover")
      run_recover(cfg, params, g, ctx);
    else if (sub == "lebesgue")
      run_lebesgue(cfg, params, g, ctx);
    else if (sub == "ls-universal")
      run_ls_universal(cfg, params, g, ctx);
    else if (sub == "block-greedy")
      run_block_greedy(cfg, params, g, ctx);
    else if (sub == "lowerbound")
      run_lowerbound(cfg, params, g, ctx);
    else if (sub == "entropy")
      run_entropy(cfg, params, g, ctx);
    else
      config_fail("/subcommand", "unknown subcommand '" + sub + "'");

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    json manifest;
    manifest["config_hash"] = hex64(fnv1a64(cfg.dump()));
    manifest["version"] = std::string(kVersion);
    std::uint64_t seed = 0;
    if (g.seed)
      seed = *g.seed;
    else if (cfg.contains("sampling") && cfg["sampling"].contains("seed"))
      seed = cfg["sampling"]["seed"].get<std::uint64_t>();
    manifest["seed"] = seed;
    manifest["wall_clock_ms"] = elapsed;
    manifest["outputs"] = json::array();
    for (const std::string& o : ctx.outputs) manifest["outputs"].push_back(o);
    ctx.write_text("manifest.json", manifest.dump(2) + "\n");
    return 0;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cap_exceeded_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const internal_inconsistency_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------------
// report: merge every manifest found in or one level below the directory
// ---------------------------------------------------------------------

int run_report(const fs::path& dir, const GlobalOpts& g) {
  fs::path out = g.out ? fs::path(*g.out) : dir;
  std::vector<fs::path> run_dirs;
  if (fs::exists(dir / "manifest.json")) run_dirs.push_back(dir);
  if (fs::exists(dir))
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_directory() && fs::exists(entry.path() / "manifest.json"))
        run_dirs.push_back(entry.path());
  std::sort(run_dirs.begin(), run_dirs.end());

  // sweep rows keyed by (dictionary, m): trials and successes accumulate
  std::map<std::pair<std::string, std::size_t>,
           std::pair<std::size_t, std::size_t>>
      sweep_rows;
  std::vector<std::string> recovery_lines;
  std::vector<std::string> entropy_lines;
  std::vector<std::string> certificate_lines;

  for (const fs::path& rd : run_dirs) {
    json manifest;
    try {
      std::ifstream ms(rd / "manifest.json");
      manifest = json::parse(ms);
    } catch (const std::exception&) {
      std::cerr << "warning: skipping corrupt manifest in " << rd << "\n";
      continue;
    }
    if (!manifest.contains("outputs")) {
      std::cerr << "warning: manifest without outputs in " << rd << "\n";
      continue;
    }
    for (const auto& name : manifest["outputs"]) {
      fs::path p = rd / name.get<std::string>();
      if (p.extension() != ".json") continue;
      json j;
      try {
        std::ifstream fin(p);
        j = json::parse(fin);
      } catch (const std::exception&) {
        std::cerr << "warning: skipping corrupt output " << p << "\n";
        continue;
      }
      std::string kind = j.value("kind", "");
      if (kind == "success-sweep" || kind == "empirical-min-m") {
        std::string dict = j.value("dictionary", "?");
        const json& rows = j.contains("rows") ? j["rows"] : j["sweep"];
        for (const auto& row : rows) {
          auto& acc = sweep_rows[{dict, row["m"].get<std::size_t>()}];
          acc.first += row["trials"].get<std::size_t>();
          acc.second += row["successes"].get<std::size_t>();
        }
      } else if (kind == "universal-certificate" ||
                 kind == "one-sided-certificate") {
        certificate_lines.push_back(
            "| " + j.value("dictionary", "?") + " | " +
            std::to_string(j.value("m", std::size_t{0})) + " | " +
            std::to_string(j.value("v", std::size_t{0})) + " | " +
            (j.value("holds", false) ? "holds" : "fails") + " | " +
            format_double(j.value("c1_global", 0.0)) + " | " +
            format_double(j.value("c2_global", 0.0)) + " |");
      } else if (kind == "lowerbound") {
        bool has = !j["certificate"].is_null();
        certificate_lines.push_back(
            "| " + j.value("dictionary", "?") + " | " +
            std::to_string(j.value("m", std::size_t{0})) + " | 1 | " +
            (has ? "failure-certified" : "inconclusive") + " | | |");
      } else if (kind == "lebesgue-report") {
        recovery_lines.push_back(
            "| lebesgue | " + format_double(j.value("ratio_discrete", 0.0)) +
            " | " + format_double(j.value("ratio_continuous", 0.0)) + " |");
      } else if (kind == "recovery-result") {
        recovery_lines.push_back(
            "| ls-universal | " + format_double(j.value("err_discrete", 0.0)) +
            " | " + format_double(j.value("err_continuous", 0.0)) + " |");
      } else if (kind == "entropy") {
        std::string line = "| " + j.value("dictionary", "?") + " |";
        for (const auto& e : j["eps_k"])
          line += " " + format_double(e.get<double>());
        entropy_lines.push_back(line + " |");
      }
    }
  }

  std::string summary = "# Results summary\n";
  if (!sweep_rows.empty()) {
    summary += "\n## Success sweeps\n\n";
    summary +=
        "| dictionary | m | trials | successes | estimate | low | high |\n";
    summary += "|---|---|---|---|---|---|---|\n";
    std::string merged_csv =
        "dictionary,m,trials,successes,estimate,wilson_low,wilson_high\n";
    for (const auto& [key, acc] : sweep_rows) {
      double est =
          static_cast<double>(acc.second) / static_cast<double>(acc.first);
      double lo = wilson_low(acc.second, acc.first);
      double hi = wilson_high(acc.second, acc.first);
      summary += "| " + key.first + " | " + std::to_string(key.second) +
                 " | " + std::to_string(acc.first) + " | " +
                 std::to_string(acc.second) + " | " + format_double(est) +
                 " | " + format_double(lo) + " | " + format_double(hi) +
                 " |\n";
      merged_csv += key.first + "," + std::to_string(key.second) + "," +
                    std::to_string(acc.first) + "," +
                    std::to_string(acc.second) + "," + format_double(est) +
                    "," + format_double(lo) + "," + format_double(hi) + "\n";
    }
    fs::create_directories(out);
    std::ofstream mc(out / "merged_sweeps.csv", std::ios::binary);
    mc << merged_csv;
  }
  if (!certificate_lines.empty()) {
    summary += "\n## Certificates\n\n";
    summary += "| dictionary | m | v | status | c1_global | c2_global |\n";
    summary += "|---|---|---|---|---|---|\n";
    for (const std::string& line : certificate_lines) summary += line + "\n";
  }
  if (!recovery_lines.empty()) {
    summary +=
        "\n## Recovery\n\n| kind | discrete | continuous |\n|---|---|---|\n";
    for (const std::string& line : recovery_lines) summary += line + "\n";
  }
  if (!entropy_lines.empty()) {
    summary += "\n## Entropy estimates\n\n| dictionary | eps_k |\n|---|---|\n";
    for (const std::string& line : entropy_lines) summary += line + "\n";
  }

  fs::create_directories(out);
  std::ofstream os(out / "summary.md", std::ios::binary);
  os << summary;
  std::cout << "report: " << run_dirs.size() << " runs merged into "
            << (out / "summary.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"universal sampling discretization experiments"};
  app.require_subcommand(1);

  GlobalOpts g;
  std::uint64_t seed_arg = 0;

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  auto* seed_opt =
      run->add_option("--seed", seed_arg, "override the sampling seed");
  run->add_option("--max-cpu", g.max_cpu, "parallelism bound (0 = all cores)");
  run->add_option("--cap", g.cap, "combinatorial support cap");
  std::string out_arg;
  auto* out_opt =
      run->add_option("--out", out_arg, "override the output directory");

  std::string report_dir;
  CLI::App* report =
      app.add_subcommand("report", "merge results in a directory");
  report->add_option("dir", report_dir, "results directory")->required();
  std::string report_out;
  auto* report_out_opt =
      report->add_option("--out", report_out, "summary output directory");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (*seed_opt) g.seed = seed_arg;
    if (*out_opt) g.out = out_arg;
    return run_command(config_path, g);
  }
  if (report->parsed()) {
    if (*report_out_opt) g.out = report_out;
    return run_report(report_dir, g);
  }
  return 0;
}
