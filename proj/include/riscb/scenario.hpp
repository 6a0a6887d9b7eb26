#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riscb/channel.hpp"
#include "riscb/codebook.hpp"
#include "riscb/pbf.hpp"

namespace riscb {

enum class Learner { rote, fusion };
enum class Scheme { codebook, ao, random_phase, oracle };

std::string to_string(Learner l);
std::string to_string(Scheme s);
Learner learner_from_string(const std::string& name);
Scheme scheme_from_string(const std::string& name);

// Full experiment parameterization. Defaults describe the documented desk
// scenario; every field can come from a config file or CLI override.
struct ScenarioConfig {
  int num_elements = 32;       // M
  int phase_levels = 4;        // B
  int codebook_size = 16;      // Q
  int n_subcarriers = 64;
  int pilots_per_subframe = 1; // K

  double tx_power_dbm = 10.0;
  double pilot_power_dbm = -20.0;
  double noise_power_dbm = -100.0;

  FadingParams fading;

  CodebookKind codebook_kind = CodebookKind::random;
  // When set, the codebook is loaded from this exported file instead of
  // generated; its size replaces codebook_size and it must match M and B.
  std::string codebook_file;
  Learner learner = Learner::rote;
  PbfObjective objective = PbfObjective::achievable_rate;
  std::vector<Scheme> schemes = {Scheme::codebook, Scheme::ao,
                                 Scheme::random_phase};

  int coherence_slots = 2000;  // T
  int n_trials = 1000;
  std::uint64_t master_seed = 1;
  int workers = 1;

  void validate() const;  // throws std::invalid_argument with a message
};

ScenarioConfig load_scenario(std::istream& in);
ScenarioConfig load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioConfig& cfg, std::ostream& out);

}  // namespace riscb
