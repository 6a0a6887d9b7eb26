#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riscb/scenario.hpp"

namespace riscb {

struct TrialRecord {
  int trial_id = 0;
  std::string scheme;
  double rate_bps_hz = 0.0;
  double effective_rate_bps_hz = 0.0;
  double received_power_mw = 0.0;
  int tau_slots = 0;
  int chosen_rp_index = -1;
  // Diagnostic only; excluded from emitted files so output stays a pure
  // function of (config, seed).
  double wall_time_ms = 0.0;
};

// Full P1-P2-P3 pipeline (codebook scheme only) over all configured trials.
std::vector<TrialRecord> run_codebook_pipeline(const ScenarioConfig& cfg);

// One benchmark scheme over all configured trials.
std::vector<TrialRecord> run_baseline_pipeline(const ScenarioConfig& cfg,
                                               Scheme scheme);

// Every scheme listed in the config. Within a trial all schemes see the same
// channel realization and independent estimation noise; records are ordered
// by (trial, scheme order as configured).
std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg);

enum class SweepAxis { codebook_size, num_elements, coherence_time, pilot_power };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepRow {
  std::string axis;
  double axis_value = 0.0;
  std::string scheme;
  int n_trials = 0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  double mean_effective_rate = 0.0;
  double stderr_effective_rate = 0.0;
  double mean_received_power_mw = 0.0;
  double stderr_received_power_mw = 0.0;
  int tau_slots = 0;
};

// One aggregated row per (axis value, scheme), ordered by (axis value,
// scheme order as configured).
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                            const std::vector<double>& values);

enum class EmitFormat { csv, jsonl };

void emit_results(const std::vector<TrialRecord>& records, std::ostream& out,
                  EmitFormat format);
void emit_results(const std::vector<TrialRecord>& records,
                  const std::filesystem::path& path, EmitFormat format);
std::vector<TrialRecord> parse_results_csv(std::istream& in);
std::vector<TrialRecord> parse_results_csv(const std::filesystem::path& path);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path);

}  // namespace riscb
