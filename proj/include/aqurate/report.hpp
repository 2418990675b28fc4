#pragma once

// Text renderings of results. Every CSV starts with a fixed header line and
// uses shortest round-trip number formatting.

#include <string>
#include <vector>

#include "aqurate/clockgen.hpp"
#include "aqurate/csv.hpp"
#include "aqurate/device.hpp"
#include "aqurate/pipeline.hpp"
#include "aqurate/scaling.hpp"
#include "aqurate/signals.hpp"
#include "aqurate/sre.hpp"

namespace aqurate {

// vin_volts,probability,n_samples
std::string characterization_csv(const std::vector<CharacterizationPoint>& points);
// time_ns,vin_volts,bit
std::string staircase_trace_csv(const Characterization& ch, double f_clk);
// vin_volts,probability
std::string calibration_csv(const Calibration& cal);
Calibration parse_calibration(const CsvTable& table);

// trial,algorithm,sparsity_rate,m,normalized_error,iterations (steady-state frames)
std::string results_csv(const TrialReport& report);
// trial,sparsity_rate,frame,warmup,s_hat,probability,v_sr,m,k,failed
std::string frames_csv(const TrialReport& report);
// algorithm,sparsity_rate,mean_normalized_error,std_error,frames,trials
std::string summary_csv(const std::vector<SummaryRow>& summary);
std::string summary_table(const std::vector<SummaryRow>& summary);

// index,x
std::string signal_csv(const SparseSignal& sig);
// instant,value
std::string measurements_csv(const MeasurementSet& y);
// frame_id,cycle_index
std::string aclk_trace_csv(const std::vector<AClkTrace>& traces);

/// Columns name,node_nm,v_nominal,power_watts,area are required;
/// power_factor and area_factor are optional. Empty or N/A means absent.
std::vector<ScalingEntry> parse_scaling_entries(const CsvTable& table);
std::string scaling_entries_csv(const std::vector<ScalingEntry>& entries);
std::string scaling_csv(const std::vector<ReportRow>& rows, ReportMode mode);
/// Aligned Design / Technology / Power_norm / Area_norm table.
std::string scaling_table(const std::vector<ReportRow>& rows, ReportMode mode);

}  // namespace aqurate
