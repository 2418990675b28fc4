#pragma once

// Technology normalization of clock-generator power and area
// (general scaling: power ~ 1/U^2, area ~ 1/S^2) and the comparison table.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace aqurate {

struct ScalingEntry {
  std::string name;
  double node_nm = 0.0;
  double v_nominal = 0.0;
  std::optional<double> power_watts;
  std::optional<double> area;  // absolute area or transistor count at the entry's node
  // Published normalized factors, used when raw values are unavailable.
  std::optional<double> power_factor;
  std::optional<double> area_factor;

  void validate() const;
};

/// (P_x / P_ref) (V_ref / V_x)^2
double power_norm(const ScalingEntry& x, const ScalingEntry& ref);
/// (A_x / A_ref) (node_ref / node_x)^2
double area_norm(const ScalingEntry& x, const ScalingEntry& ref);

double voltage_factor(double v_ref, double v_x);
double node_factor(double node_ref_nm, double node_x_nm);

enum class ReportMode { Forward, Inverse };

struct ReportRow {
  std::string name;
  double node_nm = 0.0;
  double v_nominal = 0.0;
  std::optional<double> power_norm;
  std::optional<double> area_norm;
  // Inverse mode only: raw values back-solved from published factors.
  std::optional<double> power_watts;
  std::optional<double> area;
  std::string note;
};

std::vector<ReportRow> table_report(const std::vector<ScalingEntry>& entries,
                                    const ScalingEntry& ref, ReportMode mode = ReportMode::Forward);

/// Table rows for the published comparison; the last entry is the reference.
std::vector<ScalingEntry> bundled_entries();
ScalingEntry aqr_reference();

struct NetlistComponent {
  std::string name;
  std::size_t transistors = 0;
};

struct AqrNetlist {
  std::vector<NetlistComponent> components;

  static AqrNetlist standard();
  AqrNetlist without(const std::string& name) const;
};

std::size_t transistor_count(const AqrNetlist& netlist);

}  // namespace aqurate
