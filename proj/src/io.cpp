#include "nearopt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nearopt::io {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line));
  }
  return rows;
}

double parse_double(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw InputError("trailing characters in number '" + s + "'");
    return v;
  } catch (const std::exception&) {
    throw InputError("malformed number '" + s + "' in CSV");
  }
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

std::string opt_str(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

}  // namespace

std::string points_to_csv(const InnerApprox& inner) {
  std::ostringstream os;
  for (int j = 0; j < inner.n_z(); ++j) os << (j ? "," : "") << inner.z_names[j];
  os << "\n";
  for (const auto& p : inner.points) {
    for (int j = 0; j < inner.n_z(); ++j) os << (j ? "," : "") << fmt(p[j]);
    os << "\n";
  }
  return os.str();
}

InnerApprox points_from_csv(const std::string& csv) {
  auto rows = parse_csv(csv);
  if (rows.empty()) throw InputError("points CSV has no header");
  InnerApprox inner;
  inner.z_names = rows[0];
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != inner.z_names.size())
      throw InputError("points CSV row " + std::to_string(r) + " has wrong arity");
    std::vector<double> p;
    for (const auto& f : rows[r]) p.push_back(parse_double(f));
    inner.points.push_back(std::move(p));
    inner.tags.push_back(PointTag{PointTag::kKnown, -1});
    inner.redundant.push_back(0);
  }
  return inner;
}

std::string halfspaces_to_csv(const OuterApprox& outer) {
  std::ostringstream os;
  for (int j = 0; j < outer.n_z(); ++j) os << outer.z_names[j] << ",";
  os << "offset,provenance\n";
  const int nz = outer.n_z();
  for (int j = 0; j < nz; ++j) {
    for (int t = 0; t < nz; ++t) os << (t == j ? "1" : "0") << ",";
    os << fmt(outer.z_upper[j]) << ",bound\n";
    for (int t = 0; t < nz; ++t) os << (t == j ? "-1" : "0") << ",";
    os << fmt(-outer.z_lower[j]) << ",bound\n";
  }
  for (const auto& h : outer.halfspaces) {
    for (int t = 0; t < nz; ++t) os << fmt(h.normal[t]) << ",";
    os << fmt(h.offset) << "," << to_string(h.provenance) << "\n";
  }
  return os.str();
}

OuterApprox halfspaces_from_csv(const std::string& csv) {
  auto rows = parse_csv(csv);
  if (rows.empty()) throw InputError("halfspaces CSV has no header");
  const auto& header = rows[0];
  if (header.size() < 3 || header[header.size() - 2] != "offset" ||
      header.back() != "provenance")
    throw InputError("halfspaces CSV header must end with offset,provenance");
  const int nz = static_cast<int>(header.size()) - 2;
  OuterApprox outer;
  outer.z_names.assign(header.begin(), header.begin() + nz);
  outer.z_lower.assign(nz, -kInf);
  outer.z_upper.assign(nz, kInf);
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw InputError("halfspaces CSV row " + std::to_string(r) + " has wrong arity");
    Halfspace h;
    for (int j = 0; j < nz; ++j) h.normal.push_back(parse_double(row[j]));
    h.offset = parse_double(row[nz]);
    auto prov = cut_provenance_from_string(row[nz + 1]);
    if (!prov)
      throw InputError("halfspaces CSV row " + std::to_string(r) +
                       ": unknown provenance '" + row[nz + 1] + "'");
    h.provenance = *prov;
    // unit +-e_j bound rows reconstruct the box
    if (h.provenance == CutProvenance::kBound) {
      int nonzero = -1, count = 0;
      for (int j = 0; j < nz; ++j)
        if (h.normal[j] != 0.0) {
          nonzero = j;
          ++count;
        }
      if (count == 1 && std::abs(std::abs(h.normal[nonzero]) - 1.0) < 1e-12) {
        if (h.normal[nonzero] > 0)
          outer.z_upper[nonzero] = std::min(outer.z_upper[nonzero], h.offset);
        else
          outer.z_lower[nonzero] = std::max(outer.z_lower[nonzero], -h.offset);
        continue;
      }
    }
    outer.halfspaces.push_back(std::move(h));
  }
  for (int j = 0; j < nz; ++j) {
    if (!std::isfinite(outer.z_lower[j]) || !std::isfinite(outer.z_upper[j]))
      throw InputError("halfspaces CSV does not bound dimension " +
                       std::to_string(j) + " (missing bound rows)");
  }
  return outer;
}

std::string trace_to_csv(const std::vector<IterationRecord>& trace) {
  std::ostringstream os;
  os << "iter,method,d_IO,bound,trial_feasible,cuts_added,inner_m,outer_k\n";
  for (const auto& r : trace) {
    os << r.iteration << "," << r.method << ",";
    os << (r.has_metric ? fmt(r.d_io) : "") << ",";
    os << (r.has_metric && std::isfinite(r.bound) ? fmt(r.bound) : "") << ",";
    os << (r.trial_feasible < 0 ? "" : std::to_string(r.trial_feasible)) << ",";
    os << r.cuts_added << "," << r.inner_m << "," << r.outer_k << "\n";
  }
  return os.str();
}

std::string timings_to_csv(const std::vector<IterationRecord>& trace) {
  std::ostringstream os;
  os << "iter,t_step2_ms,t_step3_ms,t_step4_ms,cum_ms\n";
  for (const auto& r : trace) {
    os << r.iteration << "," << fmt(r.t_step2_ms) << "," << fmt(r.t_step3_ms) << ","
       << fmt(r.t_step4_ms) << "," << fmt(r.cum_ms) << "\n";
  }
  return os.str();
}

std::vector<IterationRecord> trace_from_csv(const std::string& csv) {
  auto rows = parse_csv(csv);
  if (rows.empty()) throw InputError("trace CSV has no header");
  std::vector<IterationRecord> out;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 8)
      throw InputError("trace CSV row " + std::to_string(r) + " has wrong arity");
    IterationRecord rec;
    rec.iteration = static_cast<int>(parse_double(row[0]));
    rec.method = row[1];
    if (auto v = parse_opt(row[2])) {
      rec.d_io = *v;
      rec.has_metric = true;
    }
    if (auto v = parse_opt(row[3])) rec.bound = *v;
    rec.trial_feasible = row[4].empty() ? -1 : static_cast<int>(parse_double(row[4]));
    rec.cuts_added = static_cast<int>(parse_double(row[5]));
    rec.inner_m = static_cast<int>(parse_double(row[6]));
    rec.outer_k = static_cast<int>(parse_double(row[7]));
    out.push_back(std::move(rec));
  }
  return out;
}

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os << "iter,method,d_IO,vol_inner,vol_outer,vol_ratio,d_to_reference\n";
  for (const auto& r : rows) {
    os << r.iter << "," << r.method << "," << opt_str(r.d_io) << ","
       << opt_str(r.vol_inner) << "," << opt_str(r.vol_outer) << ","
       << opt_str(r.vol_ratio) << "," << opt_str(r.d_to_reference) << "\n";
  }
  return os.str();
}

std::vector<MetricsRow> metrics_from_csv(const std::string& csv) {
  auto rows = parse_csv(csv);
  if (rows.empty()) throw InputError("metrics CSV has no header");
  std::vector<MetricsRow> out;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 7)
      throw InputError("metrics CSV row " + std::to_string(r) + " has wrong arity");
    MetricsRow m;
    m.iter = static_cast<int>(parse_double(row[0]));
    m.method = row[1];
    m.d_io = parse_opt(row[2]);
    m.vol_inner = parse_opt(row[3]);
    m.vol_outer = parse_opt(row[4]);
    m.vol_ratio = parse_opt(row[5]);
    m.d_to_reference = parse_opt(row[6]);
    out.push_back(std::move(m));
  }
  return out;
}

std::string samples_to_csv(const SampleBatch& batch,
                           const std::vector<std::string>& z_names) {
  std::ostringstream os;
  const bool diverse = batch.method == SampleBatch::kDiverse;
  for (size_t j = 0; j < z_names.size(); ++j) os << (j ? "," : "") << z_names[j];
  if (diverse) os << ",delta";
  os << "\n";
  for (size_t i = 0; i < batch.points.size(); ++i) {
    for (size_t j = 0; j < z_names.size(); ++j)
      os << (j ? "," : "") << fmt(batch.points[i][j]);
    if (diverse) os << "," << fmt(batch.deltas[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace nearopt::io
