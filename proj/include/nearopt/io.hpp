#pragma once
#include <optional>
#include <string>
#include <vector>

#include "nearopt/oracle.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/sampler.hpp"

namespace nearopt::io {

// Shortest round-trip decimal representation.
std::string fmt(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Points CSV: header = z names, one point per row.
std::string points_to_csv(const InnerApprox& inner);
InnerApprox points_from_csv(const std::string& csv);

// Halfspaces CSV: z-name normal columns, then offset and provenance. Box
// bounds travel as 'bound' rows so the file reconstructs a compact region.
std::string halfspaces_to_csv(const OuterApprox& outer);
OuterApprox halfspaces_from_csv(const std::string& csv);

// Trace CSV (deterministic columns; wall-clock timings go to a separate
// file so repeated runs are byte-identical).
std::string trace_to_csv(const std::vector<IterationRecord>& trace);
std::string timings_to_csv(const std::vector<IterationRecord>& trace);
std::vector<IterationRecord> trace_from_csv(const std::string& csv);

struct MetricsRow {
  int iter = 0;
  std::string method;
  std::optional<double> d_io, vol_inner, vol_outer, vol_ratio, d_to_reference;
};
std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> metrics_from_csv(const std::string& csv);

std::string samples_to_csv(const SampleBatch& batch,
                           const std::vector<std::string>& z_names);

}  // namespace nearopt::io
