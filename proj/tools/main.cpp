// riscb command line: run scenarios, sweep axes, manage codebooks and
// evaluate the overhead calculators. All output is deterministic given
// (config, seed).

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>

#include "riscb/estimation.hpp"
#include "riscb/harness.hpp"
#include "riscb/metrics.hpp"

namespace {

using namespace riscb;

struct CommonOverrides {
  std::optional<std::string> config_path;
  std::optional<int> elements, levels, codebook_size, subcarriers, pilots;
  std::optional<int> trials, workers, coherence;
  std::optional<double> tx_power, pilot_power, noise_power;
  std::optional<std::string> kind, codebook_file, learner, objective, schemes;
  std::optional<std::uint64_t> seed;
};

void add_common_options(CLI::App* cmd, CommonOverrides& ov) {
  cmd->add_option("-c,--config", ov.config_path, "Scenario config file");
  cmd->add_option("-M,--elements", ov.elements, "RIS elements");
  cmd->add_option("-B,--levels", ov.levels, "Phase levels per element");
  cmd->add_option("-Q,--codebook-size", ov.codebook_size, "Codebook cardinality");
  cmd->add_option("--subcarriers", ov.subcarriers, "OFDM subcarriers");
  cmd->add_option("--pilots-per-subframe", ov.pilots, "Pilot repetitions per subframe");
  cmd->add_option("--tx-power-dbm", ov.tx_power, "Downlink transmit power [dBm]");
  cmd->add_option("--pilot-power-dbm", ov.pilot_power, "Uplink pilot power [dBm]");
  cmd->add_option("--noise-power-dbm", ov.noise_power, "Noise power per subcarrier [dBm]");
  cmd->add_option("--codebook-kind", ov.kind, "random | sdm | dft | full");
  cmd->add_option("--codebook-file", ov.codebook_file,
                  "Use an exported codebook instead of generating one");
  cmd->add_option("--learner", ov.learner, "rote | fusion");
  cmd->add_option("--objective", ov.objective, "rate | power");
  cmd->add_option("--schemes", ov.schemes,
                  "Comma list of codebook,ao,random,oracle");
  cmd->add_option("-T,--coherence-slots", ov.coherence, "Coherence time [slots]");
  cmd->add_option("-n,--trials", ov.trials, "Monte Carlo trials");
  cmd->add_option("-s,--seed", ov.seed, "Master seed");
  cmd->add_option("-j,--workers", ov.workers, "Worker threads");
}

ScenarioConfig resolve_config(const CommonOverrides& ov) {
  ScenarioConfig cfg;
  if (ov.config_path) cfg = load_scenario(*ov.config_path);
  if (ov.elements) cfg.num_elements = *ov.elements;
  if (ov.levels) cfg.phase_levels = *ov.levels;
  if (ov.codebook_size) cfg.codebook_size = *ov.codebook_size;
  if (ov.subcarriers) cfg.n_subcarriers = *ov.subcarriers;
  if (ov.pilots) cfg.pilots_per_subframe = *ov.pilots;
  if (ov.tx_power) cfg.tx_power_dbm = *ov.tx_power;
  if (ov.pilot_power) cfg.pilot_power_dbm = *ov.pilot_power;
  if (ov.noise_power) cfg.noise_power_dbm = *ov.noise_power;
  if (ov.kind) cfg.codebook_kind = codebook_kind_from_string(*ov.kind);
  if (ov.codebook_file) cfg.codebook_file = *ov.codebook_file;
  if (ov.learner) cfg.learner = learner_from_string(*ov.learner);
  if (ov.objective) {
    if (*ov.objective == "rate") cfg.objective = PbfObjective::achievable_rate;
    else if (*ov.objective == "power") cfg.objective = PbfObjective::received_power;
    else throw std::invalid_argument("unknown objective: " + *ov.objective);
  }
  if (ov.schemes) {
    std::vector<Scheme> parsed;
    std::stringstream ss(*ov.schemes);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) parsed.push_back(scheme_from_string(item));
    if (parsed.empty()) throw std::invalid_argument("empty scheme list");
    cfg.schemes = parsed;
  }
  if (ov.coherence) cfg.coherence_slots = *ov.coherence;
  if (ov.trials) cfg.n_trials = *ov.trials;
  if (ov.seed) cfg.master_seed = *ov.seed;
  if (ov.workers) cfg.workers = *ov.workers;
  cfg.validate();
  return cfg;
}

EmitFormat format_from_string(const std::string& name) {
  if (name == "csv") return EmitFormat::csv;
  if (name == "jsonl") return EmitFormat::jsonl;
  throw std::invalid_argument("unknown format: " + name);
}

void print_scheme_summary(const std::vector<TrialRecord>& records,
                          const std::vector<Scheme>& schemes) {
  for (Scheme s : schemes) {
    const std::string name = to_string(s);
    int n = 0, tau = 0;
    double rate = 0.0, eff = 0.0, power = 0.0;
    for (const auto& r : records) {
      if (r.scheme != name) continue;
      ++n;
      rate += r.rate_bps_hz;
      eff += r.effective_rate_bps_hz;
      power += r.received_power_mw;
      tau = r.tau_slots;
    }
    if (n == 0) continue;
    std::cout << name << ": mean rate " << rate / n << " b/s/Hz, effective "
              << eff / n << " b/s/Hz, received power "
              << linear_to_db(power / n) << " dBm, tau " << tau << " slots ("
              << n << " trials)\n";
  }
}

std::vector<double> parse_value_list(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw std::invalid_argument("empty value list");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS codebook-based passive beamforming simulator"};
  app.require_subcommand(1);

  CommonOverrides run_ov;
  std::string run_out, run_format = "csv";
  auto* run_cmd = app.add_subcommand("run", "Run one scenario over all trials");
  add_common_options(run_cmd, run_ov);
  run_cmd->add_option("-o,--out", run_out, "Results file (stdout if omitted)");
  run_cmd->add_option("--format", run_format, "csv | jsonl");

  CommonOverrides sweep_ov;
  std::string sweep_axis, sweep_values, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one axis, aggregated CSV");
  add_common_options(sweep_cmd, sweep_ov);
  sweep_cmd->add_option("-a,--axis", sweep_axis, "Q | M | T | pilot_power")
      ->required();
  sweep_cmd->add_option("-v,--values", sweep_values, "Comma list of axis values")
      ->required();
  sweep_cmd->add_option("-o,--out", sweep_out, "Output CSV (stdout if omitted)");

  auto* cb_cmd = app.add_subcommand("codebook", "Generate or inspect codebooks");
  cb_cmd->require_subcommand(1);
  int cb_elements = 8, cb_levels = 4, cb_size = 16;
  std::uint64_t cb_seed = 1;
  std::string cb_kind = "random", cb_out, cb_in;
  auto* cb_gen = cb_cmd->add_subcommand("gen", "Generate and export a codebook");
  cb_gen->add_option("-M,--elements", cb_elements, "RIS elements");
  cb_gen->add_option("-B,--levels", cb_levels, "Phase levels");
  cb_gen->add_option("-Q,--size", cb_size, "Cardinality");
  cb_gen->add_option("-k,--kind", cb_kind, "random | sdm | dft | full");
  cb_gen->add_option("-s,--seed", cb_seed, "Generation seed");
  cb_gen->add_option("-o,--out", cb_out, "Output file (stdout if omitted)");
  auto* cb_info = cb_cmd->add_subcommand("info", "Inspect an exported codebook");
  cb_info->add_option("-i,--in", cb_in, "Codebook file")->required();

  auto* oh_cmd = app.add_subcommand("overhead", "Pilot and signaling calculators");
  oh_cmd->require_subcommand(1);
  int oh_users = 1, oh_elements = 1, oh_antennas = 1;
  auto* oh_pilots = oh_cmd->add_subcommand(
      "pilots", "Three-phase channel estimation pilot slots");
  oh_pilots->add_option("-K,--users", oh_users, "Users")->required();
  oh_pilots->add_option("-M,--elements", oh_elements, "RIS elements")->required();
  oh_pilots->add_option("-N,--antennas", oh_antennas, "BS antennas")->required();
  int bits_elements = 1, bits_levels = 2, bits_size = 1;
  auto* oh_bits = oh_cmd->add_subcommand("bits", "Control signaling bits");
  oh_bits->add_option("-M,--elements", bits_elements, "RIS elements")->required();
  oh_bits->add_option("-B,--levels", bits_levels, "Phase levels")->required();
  oh_bits->add_option("-Q,--size", bits_size, "Codebook cardinality")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ScenarioConfig cfg = resolve_config(run_ov);
      const auto records = run_scenario(cfg);
      const EmitFormat format = format_from_string(run_format);
      if (run_out.empty()) {
        emit_results(records, std::cout, format);
      } else {
        emit_results(records, run_out, format);
        std::cout << "wrote " << records.size() << " records to " << run_out
                  << "\n";
        print_scheme_summary(records, cfg.schemes);
      }
    } else if (*sweep_cmd) {
      const ScenarioConfig cfg = resolve_config(sweep_ov);
      const SweepAxis axis = sweep_axis_from_string(sweep_axis);
      const auto rows = sweep(cfg, axis, parse_value_list(sweep_values));
      if (sweep_out.empty()) {
        write_sweep_csv(rows, std::cout);
      } else {
        write_sweep_csv(rows, sweep_out);
        std::cout << "wrote " << rows.size() << " rows to " << sweep_out << "\n";
      }
    } else if (*cb_gen) {
      Codebook cb;
      const CodebookKind kind = codebook_kind_from_string(cb_kind);
      switch (kind) {
        case CodebookKind::random:
          cb = gen_random_codebook(cb_elements, cb_levels, cb_size, cb_seed);
          break;
        case CodebookKind::sdm:
          cb = gen_sdm_codebook(cb_elements, cb_levels, cb_size, cb_seed);
          break;
        case CodebookKind::dft:
          cb = gen_dft_codebook(cb_elements, cb_levels, cb_size);
          break;
        case CodebookKind::full:
          cb = gen_full_codebook(cb_elements, cb_levels);
          break;
      }
      if (cb_out.empty()) {
        save_codebook(cb, std::cout);
      } else {
        save_codebook(cb, cb_out);
        std::cout << "wrote " << cb.size() << " patterns to " << cb_out << "\n";
      }
    } else if (*cb_info) {
      const Codebook cb = load_codebook(cb_in);
      std::cout << "elements " << cb.elements() << ", levels " << cb.levels()
                << ", size " << cb.size() << ", kind " << to_string(cb.kind)
                << ", seed " << cb.generation_seed << "\n";
      if (cb.size() >= 2)
        std::cout << "sum pairwise distance " << sum_pairwise_distance(cb)
                  << "\n";
    } else if (*oh_pilots) {
      const auto oh = three_phase_overhead(oh_users, oh_elements, oh_antennas);
      std::cout << "phase1 " << oh.phase1_slots << ", phase2 " << oh.phase2_slots
                << ", phase3 " << oh.phase3_slots << ", total " << oh.total()
                << "\n";
    } else if (*oh_bits) {
      std::cout << "per-element "
                << control_signaling_bits(SignalingScheme::per_element,
                                          bits_elements, bits_levels, bits_size)
                << " bits, codebook "
                << control_signaling_bits(SignalingScheme::codebook,
                                          bits_elements, bits_levels, bits_size)
                << " bits, fusion "
                << control_signaling_bits(SignalingScheme::fusion, bits_elements,
                                          bits_levels, bits_size)
                << " bits\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
