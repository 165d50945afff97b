#pragma once

#include <iosfwd>
#include <json.hpp>

#include "unidisc/discretization.hpp"
#include "unidisc/entropy.hpp"
#include "unidisc/lowerbound.hpp"
#include "unidisc/recovery.hpp"

namespace unidisc {

using ordered_json = nlohmann::ordered_json;

/// Shortest round-trip decimal representation; deterministic across runs.
std::string format_double(double x);
std::string format_complex(cplx z);  // "re,im"

/// Line-oriented text: per line one frequency vector (comma-separated
/// integers), a space, and one complex value as "re,im".
void write_frequency_coefficients(std::ostream& os, const FrequencyGrid& grid,
                                  std::span<const cplx> values);
std::pair<FrequencyGrid, std::vector<cplx>> read_frequency_coefficients(
    std::istream& is, int dimension);

/// CSV with a '#' metadata line (mode, seed, domain, m) and a column
/// header, then one point per row.
void write_point_set_csv(std::ostream& os, const PointSet& points);
PointSet read_point_set_csv(std::istream& is);

/// One sample row per line; each entry contributes a re and an im column.
void write_sample_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& phi);

void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& sweep);
void write_entropy_csv(std::ostream& os, const EntropyEstimate& est);
void write_trace_csv(std::ostream& os, const WompTrace& trace);

ordered_json certificate_to_json(const UniversalCertificate& cert,
                                 const std::string& dictionary,
                                 std::uint64_t seed, std::size_t m);
ordered_json rip_to_json(const RIPReport& rep, const std::string& dictionary,
                         std::uint64_t seed, std::size_t m);
ordered_json sweep_to_json(const std::vector<SweepEntry>& sweep,
                           const std::string& dictionary, std::uint64_t seed);
ordered_json min_m_to_json(const MinMResult& res, const std::string& dictionary,
                           std::uint64_t seed);
ordered_json failure_to_json(const FailureCertificate& cert,
                             std::span<const double> points);
ordered_json trace_to_json(const WompTrace& trace);
ordered_json recovery_to_json(const RecoveryResult& res);
ordered_json lebesgue_to_json(const LebesgueReport& rep);

}  // namespace unidisc
