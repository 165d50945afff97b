#include "unidisc/serialize.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace unidisc {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string format_complex(cplx z) {
  return format_double(z.real()) + "," + format_double(z.imag());
}

void write_frequency_coefficients(std::ostream& os, const FrequencyGrid& grid,
                                  std::span<const cplx> values) {
  if (values.size() != grid.size())
    throw validation_error("write_frequency_coefficients: size mismatch");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& k = grid.vectors[i];
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (j) os << ',';
      os << k[j];
    }
    os << ' ' << format_complex(values[i]) << '\n';
  }
}

std::pair<FrequencyGrid, std::vector<cplx>> read_frequency_coefficients(
    std::istream& is, int dimension) {
  FrequencyGrid grid;
  grid.dimension = dimension;
  std::vector<cplx> values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string vec_part, val_part;
    if (!(ls >> vec_part >> val_part))
      throw validation_error("frequency coefficients: malformed line");
    std::vector<int> k;
    {
      std::istringstream vs(vec_part);
      std::string tok;
      while (std::getline(vs, tok, ',')) k.push_back(std::stoi(tok));
    }
    if (static_cast<int>(k.size()) != dimension)
      throw validation_error("frequency coefficients: dimension mismatch");
    double re = 0.0, im = 0.0;
    {
      std::istringstream vs(val_part);
      std::string tok;
      if (!std::getline(vs, tok, ','))
        throw validation_error("frequency coefficients: bad complex value");
      re = std::stod(tok);
      if (!std::getline(vs, tok, ','))
        throw validation_error("frequency coefficients: bad complex value");
      im = std::stod(tok);
    }
    grid.vectors.push_back(std::move(k));
    values.emplace_back(re, im);
  }
  return {std::move(grid), std::move(values)};
}

namespace {

const char* mode_name(SamplingMode mode) {
  switch (mode) {
    case SamplingMode::IidUniform:
      return "iid-uniform";
    case SamplingMode::Stratified:
      return "stratified";
    case SamplingMode::Equispaced:
      return "equispaced";
    case SamplingMode::Explicit:
      return "explicit";
  }
  return "?";
}

SamplingMode mode_from_name(const std::string& s) {
  if (s == "iid-uniform") return SamplingMode::IidUniform;
  if (s == "stratified") return SamplingMode::Stratified;
  if (s == "equispaced") return SamplingMode::Equispaced;
  if (s == "explicit") return SamplingMode::Explicit;
  throw validation_error("point set: unknown sampling mode '" + s + "'");
}

}  // namespace

void write_point_set_csv(std::ostream& os, const PointSet& points) {
  os << "# mode=" << mode_name(points.mode) << " seed=" << points.seed
     << " domain=" << points.domain.name() << " m=" << points.m << '\n';
  const int d = points.domain.dimension;
  for (int c = 0; c < d; ++c) {
    if (c) os << ',';
    os << 'x' << c;
  }
  os << '\n';
  for (std::size_t j = 0; j < points.m; ++j) {
    for (int c = 0; c < d; ++c) {
      if (c) os << ',';
      os << format_double(points.point(j)[c]);
    }
    os << '\n';
  }
}

PointSet read_point_set_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#')
    throw validation_error("point set: missing metadata line");
  std::istringstream meta(line.substr(1));
  std::string tok;
  std::string mode_s, domain_s;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  while (meta >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "mode") mode_s = val;
    else if (key == "seed") seed = std::stoull(val);
    else if (key == "domain") domain_s = val;
    else if (key == "m") m = std::stoull(val);
  }
  Domain domain;
  if (domain_s == "unit-interval") {
    domain = Domain::unit_interval();
  } else if (domain_s.rfind("torus-", 0) == 0) {
    domain = Domain::torus(std::stoi(domain_s.substr(6)));
  } else {
    throw validation_error("point set: unknown domain '" + domain_s + "'");
  }
  if (!std::getline(is, line))
    throw validation_error("point set: missing column header");

  std::vector<double> coords;
  coords.reserve(m * domain.dimension);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) coords.push_back(std::stod(cell));
  }
  PointSet ps = explicit_points(domain, std::move(coords));
  ps.mode = mode_from_name(mode_s);
  ps.seed = seed;
  if (ps.m != m) throw validation_error("point set: row count mismatch");
  return ps;
}

void write_sample_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& phi) {
  for (Eigen::Index j = 0; j < phi.rows(); ++j) {
    for (Eigen::Index i = 0; i < phi.cols(); ++i) {
      if (i) os << ',';
      os << format_complex(phi(j, i));
    }
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& sweep) {
  os << "m,trials,successes,estimate,wilson_low,wilson_high\n";
  for (const SweepEntry& e : sweep)
    os << e.m << ',' << e.trials << ',' << e.successes << ','
       << format_double(e.estimate) << ',' << format_double(e.wilson_low)
       << ',' << format_double(e.wilson_high) << '\n';
}

void write_entropy_csv(std::ostream& os, const EntropyEstimate& est) {
  os << "k,eps_k\n";
  for (std::size_t k = 0; k < est.eps_k.size(); ++k)
    os << k << ',' << format_double(est.eps_k[k]) << '\n';
}

void write_trace_csv(std::ostream& os, const WompTrace& trace) {
  os << "iteration,selected,residual_norm\n";
  os << "0,," << format_double(trace.residual_norms[0]) << '\n';
  for (std::size_t k = 0; k < trace.selected.size(); ++k)
    os << (k + 1) << ',' << trace.selected[k] << ','
       << format_double(trace.residual_norms[k + 1]) << '\n';
}

namespace {

ordered_json support_json(const std::vector<std::size_t>& support) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i : support) arr.push_back(i);
  return arr;
}

}  // namespace

ordered_json certificate_to_json(const UniversalCertificate& cert,
                                 const std::string& dictionary,
                                 std::uint64_t seed, std::size_t m) {
  ordered_json j;
  j["kind"] = cert.one_sided ? "one-sided-certificate" : "universal-certificate";
  j["dictionary"] = dictionary;
  j["seed"] = seed;
  j["m"] = m;
  j["v"] = cert.v;
  j["c1"] = cert.c1;
  if (!cert.one_sided) j["c2"] = cert.c2;
  j["holds"] = cert.holds;
  j["c1_global"] = cert.c1_global;
  j["c2_global"] = cert.c2_global;
  j["supports_checked"] = cert.supports_checked;
  j["randomized"] = cert.randomized;
  if (!cert.witness.empty()) j["witness"] = support_json(cert.witness);
  if (!cert.per_support.empty()) {
    ordered_json rows = ordered_json::array();
    for (const SupportExtremes& e : cert.per_support) {
      ordered_json row;
      row["support"] = support_json(e.support);
      row["lambda_min"] = e.lambda_min;
      row["lambda_max"] = e.lambda_max;
      rows.push_back(row);
    }
    j["per_support"] = rows;
  }
  return j;
}

ordered_json rip_to_json(const RIPReport& rep, const std::string& dictionary,
                         std::uint64_t seed, std::size_t m) {
  ordered_json j;
  j["kind"] = "rip-report";
  j["dictionary"] = dictionary;
  j["seed"] = seed;
  j["m"] = m;
  j["v"] = rep.v;
  j["delta"] = rep.delta;
  j["dictionary_orthonormal"] = rep.dictionary_orthonormal;
  j["witness"] = support_json(rep.witness);
  return j;
}

namespace {
ordered_json sweep_entry_json(const SweepEntry& e) {
  ordered_json j;
  j["m"] = e.m;
  j["trials"] = e.trials;
  j["successes"] = e.successes;
  j["estimate"] = e.estimate;
  j["wilson_low"] = e.wilson_low;
  j["wilson_high"] = e.wilson_high;
  return j;
}
}  // namespace

ordered_json sweep_to_json(const std::vector<SweepEntry>& sweep,
                           const std::string& dictionary,
                           std::uint64_t seed) {
  ordered_json j;
  j["kind"] = "success-sweep";
  j["dictionary"] = dictionary;
  j["seed"] = seed;
  ordered_json rows = ordered_json::array();
  for (const SweepEntry& e : sweep) rows.push_back(sweep_entry_json(e));
  j["rows"] = rows;
  return j;
}

ordered_json min_m_to_json(const MinMResult& res, const std::string& dictionary,
                           std::uint64_t seed) {
  ordered_json j;
  j["kind"] = "empirical-min-m";
  j["dictionary"] = dictionary;
  j["seed"] = seed;
  j["found"] = res.found;
  if (res.found) j["m_hat"] = res.m_hat;
  j["m_cap"] = res.m_cap;
  ordered_json rows = ordered_json::array();
  for (const SweepEntry& e : res.sweep) rows.push_back(sweep_entry_json(e));
  j["sweep"] = rows;
  return j;
}

ordered_json failure_to_json(const FailureCertificate& cert,
                             std::span<const double> points) {
  ordered_json j;
  j["kind"] = "sine-failure-certificate";
  j["N"] = cert.big_n;
  j["k"] = cert.k;
  j["c1"] = cert.c1;
  j["scale"] = cert.scale;
  ordered_json a = ordered_json::array();
  for (long long v : cert.numerators) a.push_back(v);
  j["a"] = a;
  ordered_json pts = ordered_json::array();
  for (double x : points) pts.push_back(x);
  j["points"] = pts;
  ordered_json errs = ordered_json::array();
  for (double e : cert.point_errors) errs.push_back(e);
  j["point_errors"] = errs;
  j["implied_mean_bound"] = cert.implied_mean_bound;
  j["discrete_mean"] = cert.discrete_mean;
  j["threshold"] = cert.threshold;
  return j;
}

ordered_json trace_to_json(const WompTrace& trace) {
  ordered_json j;
  j["selected"] = support_json(trace.selected);
  ordered_json norms = ordered_json::array();
  for (double r : trace.residual_norms) norms.push_back(r);
  j["residual_norms"] = norms;
  ordered_json coeffs = ordered_json::array();
  for (Eigen::Index i = 0; i < trace.coefficients.size(); ++i)
    coeffs.push_back(format_complex(trace.coefficients[i]));
  j["coefficients"] = coeffs;
  return j;
}

ordered_json recovery_to_json(const RecoveryResult& res) {
  ordered_json j;
  j["kind"] = "recovery-result";
  j["support"] = support_json(res.approximant.support);
  ordered_json coeffs = ordered_json::array();
  for (const cplx& v : res.approximant.values)
    coeffs.push_back(format_complex(v));
  j["coefficients"] = coeffs;
  j["err_discrete"] = res.err_discrete;
  j["err_continuous"] = res.err_continuous;
  j["err_mixed"] = res.err_mixed;
  return j;
}

ordered_json lebesgue_to_json(const LebesgueReport& rep) {
  ordered_json j;
  j["kind"] = "lebesgue-report";
  j["residual_discrete"] = rep.residual_discrete;
  j["sigma_v_discrete"] = rep.sigma_v_discrete;
  j["ratio_discrete"] = rep.ratio_discrete;
  j["residual_continuous"] = rep.residual_continuous;
  j["sigma_v_sup"] = rep.sigma_v_sup;
  j["ratio_continuous"] = rep.ratio_continuous;
  j["trace"] = trace_to_json(rep.trace);
  return j;
}

}  // namespace unidisc
