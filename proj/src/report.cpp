#include "aqurate/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace aqurate {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string factor(const std::optional<double>& v) {
  if (!v) return "N/A";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fx", *v);
  return buf;
}

}  // namespace

std::string characterization_csv(const std::vector<CharacterizationPoint>& points) {
  std::string out = "vin_volts,probability,n_samples\n";
  for (const auto& p : points) out += csv_line({fmt(p.vin), fmt(p.probability), fmt(p.n_samples)});
  return out;
}

std::string staircase_trace_csv(const Characterization& ch, double f_clk) {
  std::string out = "time_ns,vin_volts,bit\n";
  std::size_t cycle = 0;
  const double period_ns = 1e9 / f_clk;
  for (std::size_t s = 0; s < ch.points.size(); ++s) {
    for (unsigned char b : ch.bits[s]) {
      out += csv_line({fmt(static_cast<double>(cycle) * period_ns), fmt(ch.points[s].vin),
                       b ? "1" : "0"});
      ++cycle;
    }
  }
  return out;
}

std::string calibration_csv(const Calibration& cal) {
  std::string out = "vin_volts,probability\n";
  for (const auto& p : cal.points) out += csv_line({fmt(p.vin), fmt(p.probability)});
  return out;
}

Calibration parse_calibration(const CsvTable& table) {
  const auto v = table.column("vin_volts");
  const auto p = table.column("probability");
  if (!v || !p) throw std::invalid_argument("calibration csv needs vin_volts,probability");
  Calibration cal;
  for (const auto& row : table.rows) cal.points.push_back({parse_double(row[*v]), parse_double(row[*p])});
  cal.validate();
  return cal;
}

std::string results_csv(const TrialReport& report) {
  std::string out = "trial,algorithm,sparsity_rate,m,normalized_error,iterations\n";
  for (const ResultRow& r : report.results) {
    if (r.warmup) continue;
    out += csv_line({fmt(r.trial), std::string(to_string(r.solver)), fmt(r.rate), fmt(r.m),
                     fmt(r.error), fmt(r.iterations)});
  }
  return out;
}

std::string frames_csv(const TrialReport& report) {
  std::string out = "trial,sparsity_rate,frame,warmup,s_hat,probability,v_sr,m,k,failed\n";
  for (const FrameRow& f : report.frames) {
    const FrameMetrics& m = f.metrics;
    out += csv_line({fmt(f.trial), fmt(f.rate), fmt(m.frame), f.warmup ? "1" : "0",
                     fmt(m.s_hat_used), fmt(m.probability), fmt(m.v_sr), fmt(m.m), fmt(m.k),
                     m.failed ? "1" : "0"});
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
  std::string out = "algorithm,sparsity_rate,mean_normalized_error,std_error,frames,trials\n";
  for (const SummaryRow& s : summary)
    out += csv_line({std::string(to_string(s.solver)), fmt(s.rate), fmt(s.mean_error),
                     fmt(s.std_error), fmt(s.frames), fmt(s.trials)});
  return out;
}

std::string summary_table(const std::vector<SummaryRow>& summary) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %8s %12s %10s %8s\n", "solver", "rate", "mean_error",
                "std_error", "frames");
  os << line;
  for (const SummaryRow& s : summary) {
    std::snprintf(line, sizeof line, "%-8s %8.4f %12.6f %10.6f %8zu\n",
                  std::string(to_string(s.solver)).c_str(), s.rate, s.mean_error, s.std_error,
                  s.frames);
    os << line;
  }
  return os.str();
}

std::string signal_csv(const SparseSignal& sig) {
  std::string out = "index,x\n";
  for (Eigen::Index i = 0; i < sig.x.size(); ++i)
    out += csv_line({fmt(static_cast<std::size_t>(i)), fmt(sig.x[i])});
  return out;
}

std::string measurements_csv(const MeasurementSet& y) {
  std::string out = "instant,value\n";
  for (std::size_t i = 0; i < y.instants.size(); ++i)
    out += csv_line({fmt(y.instants[i]), fmt(y.values[static_cast<Eigen::Index>(i)])});
  return out;
}

std::string aclk_trace_csv(const std::vector<AClkTrace>& traces) {
  std::string out = "frame_id,cycle_index\n";
  for (const AClkTrace& t : traces)
    for (std::size_t k : t.instants) out += csv_line({fmt(t.frame_id), fmt(k)});
  return out;
}

std::vector<ScalingEntry> parse_scaling_entries(const CsvTable& table) {
  if (table.header.empty()) return {};
  const char* required[] = {"name", "node_nm", "v_nominal", "power_watts", "area"};
  for (const char* col : required)
    if (!table.column(col)) throw std::invalid_argument(std::string("scaling entries: missing column ") + col);
  const auto c_name = *table.column("name");
  const auto c_node = *table.column("node_nm");
  const auto c_v = *table.column("v_nominal");
  const auto c_p = *table.column("power_watts");
  const auto c_a = *table.column("area");
  const auto c_pf = table.column("power_factor");
  const auto c_af = table.column("area_factor");

  std::vector<ScalingEntry> entries;
  for (const auto& row : table.rows) {
    ScalingEntry e;
    e.name = row[c_name];
    try {
      e.node_nm = parse_double(row[c_node]);
      e.v_nominal = parse_double(row[c_v]);
      e.power_watts = parse_optional_double(row[c_p]);
      e.area = parse_optional_double(row[c_a]);
      if (c_pf) e.power_factor = parse_optional_double(row[*c_pf]);
      if (c_af) e.area_factor = parse_optional_double(row[*c_af]);
    } catch (const std::runtime_error& err) {
      throw std::invalid_argument("scaling entry '" + e.name + "': " + err.what());
    }
    e.validate();
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string scaling_entries_csv(const std::vector<ScalingEntry>& entries) {
  std::string out = "name,node_nm,v_nominal,power_watts,area,power_factor,area_factor\n";
  for (const ScalingEntry& e : entries)
    out += csv_line({e.name, fmt(e.node_nm), fmt(e.v_nominal), fmt_opt(e.power_watts),
                     fmt_opt(e.area), fmt_opt(e.power_factor), fmt_opt(e.area_factor)});
  return out;
}

std::string scaling_csv(const std::vector<ReportRow>& rows, ReportMode mode) {
  std::string out = mode == ReportMode::Forward
                        ? "design,node_nm,v_nominal,power_norm,area_norm,source\n"
                        : "design,node_nm,v_nominal,power_norm,area_norm,power_watts,area,source\n";
  for (const ReportRow& r : rows) {
    std::vector<std::string> fields{r.name, fmt(r.node_nm), fmt(r.v_nominal),
                                    r.power_norm ? fmt(*r.power_norm) : "N/A",
                                    r.area_norm ? fmt(*r.area_norm) : "N/A"};
    if (mode == ReportMode::Inverse) {
      fields.push_back(r.power_watts ? fmt(*r.power_watts) : "N/A");
      fields.push_back(r.area ? fmt(*r.area) : "N/A");
    }
    fields.push_back(r.note);
    out += csv_line(fields);
  }
  return out;
}

std::string scaling_table(const std::vector<ReportRow>& rows, ReportMode mode) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Design", "Technology", "Power_norm", "Area_norm"};
  if (mode == ReportMode::Inverse) {
    header.push_back("Power_x (uW)");
    header.push_back("Area_x");
  }
  cells.push_back(header);
  for (const ReportRow& r : rows) {
    char tech[64];
    std::snprintf(tech, sizeof tech, "%gnm (%gV)", r.node_nm, r.v_nominal);
    std::vector<std::string> line{r.name, tech, factor(r.power_norm), factor(r.area_norm)};
    if (mode == ReportMode::Inverse) {
      char buf[32];
      if (r.power_watts) {
        std::snprintf(buf, sizeof buf, "%.2f", *r.power_watts * 1e6);
        line.emplace_back(buf);
      } else {
        line.emplace_back("N/A");
      }
      if (r.area) {
        std::snprintf(buf, sizeof buf, "%.1f", *r.area);
        line.emplace_back(buf);
      } else {
        line.emplace_back("N/A");
      }
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out += line[c];
      if (c + 1 < line.size()) out += std::string(width[c] - line[c].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace aqurate
