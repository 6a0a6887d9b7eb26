#include "riscb/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace riscb {

std::string to_string(Learner l) {
  return l == Learner::rote ? "rote" : "fusion";
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::codebook: return "codebook";
    case Scheme::ao: return "ao";
    case Scheme::random_phase: return "random";
    case Scheme::oracle: return "oracle";
  }
  return "codebook";
}

Learner learner_from_string(const std::string& name) {
  if (name == "rote") return Learner::rote;
  if (name == "fusion") return Learner::fusion;
  throw std::invalid_argument("unknown learner: " + name);
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "codebook") return Scheme::codebook;
  if (name == "ao") return Scheme::ao;
  if (name == "random") return Scheme::random_phase;
  if (name == "oracle") return Scheme::oracle;
  throw std::invalid_argument("unknown scheme: " + name);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

struct KeyValueSections {
  std::map<std::string, std::string> values;  // "section.key" -> value

  static KeyValueSections parse(std::istream& in) {
    KeyValueSections kv;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      // Trailing comments start at a '#' or ';' that opens the line or
      // follows whitespace.
      for (std::size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') &&
            (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
          line.erase(i);
          break;
        }
      }
      const std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw std::invalid_argument("config line " + std::to_string(line_no) +
                                      ": malformed section header");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": expected key = value");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": empty key");
      kv.values[section + "." + key] = value;
    }
    return kv;
  }
};

int parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    if (r < INT32_MIN || r > INT32_MAX) throw std::out_of_range("int range");
    return static_cast<int>(r);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::uint64_t r = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad unsigned integer for " + key + ": " + v);
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

std::vector<Scheme> parse_schemes(const std::string& v) {
  std::vector<Scheme> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string name = trim(item);
    if (name.empty()) continue;
    out.push_back(scheme_from_string(name));
  }
  if (out.empty()) throw std::invalid_argument("config: empty scheme list");
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (num_elements < 1)
    throw std::invalid_argument("scenario: elements must be >= 1");
  if (phase_levels < 2)
    throw std::invalid_argument("scenario: phase_levels must be >= 2");
  if (codebook_size < 1)
    throw std::invalid_argument("scenario: codebook_size must be >= 1");
  if (n_subcarriers < 1)
    throw std::invalid_argument("scenario: subcarriers must be >= 1");
  if (pilots_per_subframe < 1)
    throw std::invalid_argument("scenario: pilots_per_subframe must be >= 1");
  if (coherence_slots < 1)
    throw std::invalid_argument("scenario: coherence_slots must be >= 1");
  if (n_trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("scenario: workers must be >= 1");
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(pilot_power_dbm) ||
      !std::isfinite(noise_power_dbm))
    throw std::invalid_argument("scenario: powers must be finite");
  fading.validate();

  const int min_sc = std::max(fading.direct.num_taps,
                              fading.incident.num_taps + fading.reflected.num_taps - 1);
  if (n_subcarriers < min_sc)
    throw std::invalid_argument(
        "scenario: subcarriers must cover the longest impulse response (" +
        std::to_string(min_sc) + ")");

  if (codebook_file.empty()) {
    if (codebook_kind == CodebookKind::sdm) {
      double space = std::pow(static_cast<double>(phase_levels), num_elements);
      if (codebook_size < 2 || static_cast<double>(codebook_size) > space)
        throw std::invalid_argument(
            "scenario: sdm codebook needs 2 <= Q <= B^M distinct patterns");
    }
    if (codebook_kind == CodebookKind::dft) {
      if (codebook_size > num_elements)
        throw std::invalid_argument("scenario: dft codebook needs Q <= M");
      if (phase_levels % num_elements != 0)
        throw std::invalid_argument(
            "scenario: dft codebook needs phase_levels to be a multiple of M");
    }
    if (codebook_kind == CodebookKind::full) {
      const double space = std::pow(static_cast<double>(phase_levels), num_elements);
      if (space > static_cast<double>(1 << 20))
        throw std::invalid_argument("scenario: full codebook B^M too large");
    }
  }

  // Every configured scheme must fit its training into the coherence block.
  // A file-backed codebook's size is only known once loaded; its overhead is
  // checked when the records are built.
  for (Scheme s : schemes) {
    int tau = 0;
    if (s == Scheme::codebook) {
      if (!codebook_file.empty()) continue;
      const int q = codebook_kind == CodebookKind::full
                        ? static_cast<int>(std::pow(
                              static_cast<double>(phase_levels), num_elements))
                        : codebook_size;
      tau = q * pilots_per_subframe;
    } else if (s == Scheme::ao) {
      tau = (num_elements + 1) * pilots_per_subframe;
    } else if (s == Scheme::random_phase) {
      tau = pilots_per_subframe;
    }
    if (tau > coherence_slots)
      throw std::invalid_argument("scenario: training overhead of scheme '" +
                                  to_string(s) + "' (" + std::to_string(tau) +
                                  " slots) exceeds coherence_slots");
  }
}

ScenarioConfig load_scenario(std::istream& in) {
  const auto kv = KeyValueSections::parse(in);
  ScenarioConfig cfg;
  for (const auto& [full_key, value] : kv.values) {
    if (full_key == "scenario.elements") cfg.num_elements = parse_int(value, full_key);
    else if (full_key == "scenario.phase_levels") cfg.phase_levels = parse_int(value, full_key);
    else if (full_key == "scenario.codebook_size") cfg.codebook_size = parse_int(value, full_key);
    else if (full_key == "scenario.subcarriers") cfg.n_subcarriers = parse_int(value, full_key);
    else if (full_key == "scenario.pilots_per_subframe") cfg.pilots_per_subframe = parse_int(value, full_key);
    else if (full_key == "scenario.tx_power_dbm") cfg.tx_power_dbm = parse_double(value, full_key);
    else if (full_key == "scenario.pilot_power_dbm") cfg.pilot_power_dbm = parse_double(value, full_key);
    else if (full_key == "scenario.noise_power_dbm") cfg.noise_power_dbm = parse_double(value, full_key);
    else if (full_key == "scenario.codebook_kind") cfg.codebook_kind = codebook_kind_from_string(value);
    else if (full_key == "scenario.codebook_file") cfg.codebook_file = value;
    else if (full_key == "scenario.learner") cfg.learner = learner_from_string(value);
    else if (full_key == "scenario.objective")
      cfg.objective = value == "power" ? PbfObjective::received_power
                    : value == "rate"  ? PbfObjective::achievable_rate
                    : throw std::invalid_argument("config: unknown objective " + value);
    else if (full_key == "scenario.schemes") cfg.schemes = parse_schemes(value);
    else if (full_key == "scenario.coherence_slots") cfg.coherence_slots = parse_int(value, full_key);
    else if (full_key == "scenario.trials") cfg.n_trials = parse_int(value, full_key);
    else if (full_key == "scenario.seed") cfg.master_seed = parse_u64(value, full_key);
    else if (full_key == "scenario.workers") cfg.workers = parse_int(value, full_key);
    else if (full_key == "fading.direct_k") cfg.fading.direct.rician_k = parse_double(value, full_key);
    else if (full_key == "fading.incident_k") cfg.fading.incident.rician_k = parse_double(value, full_key);
    else if (full_key == "fading.reflected_k") cfg.fading.reflected.rician_k = parse_double(value, full_key);
    else if (full_key == "fading.direct_exponent") cfg.fading.direct.pathloss_exponent = parse_double(value, full_key);
    else if (full_key == "fading.incident_exponent") cfg.fading.incident.pathloss_exponent = parse_double(value, full_key);
    else if (full_key == "fading.reflected_exponent") cfg.fading.reflected.pathloss_exponent = parse_double(value, full_key);
    else if (full_key == "fading.direct_taps") cfg.fading.direct.num_taps = parse_int(value, full_key);
    else if (full_key == "fading.incident_taps") cfg.fading.incident.num_taps = parse_int(value, full_key);
    else if (full_key == "fading.reflected_taps") cfg.fading.reflected.num_taps = parse_int(value, full_key);
    else if (full_key == "fading.pdp_decay") cfg.fading.pdp_decay = parse_double(value, full_key);
    else if (full_key == "fading.bs_x") cfg.fading.bs_pos.x = parse_double(value, full_key);
    else if (full_key == "fading.bs_y") cfg.fading.bs_pos.y = parse_double(value, full_key);
    else if (full_key == "fading.bs_z") cfg.fading.bs_pos.z = parse_double(value, full_key);
    else if (full_key == "fading.ris_x") cfg.fading.ris_pos.x = parse_double(value, full_key);
    else if (full_key == "fading.ris_y") cfg.fading.ris_pos.y = parse_double(value, full_key);
    else if (full_key == "fading.ris_z") cfg.fading.ris_pos.z = parse_double(value, full_key);
    else if (full_key == "fading.ue_x") cfg.fading.ue_pos.x = parse_double(value, full_key);
    else if (full_key == "fading.ue_y") cfg.fading.ue_pos.y = parse_double(value, full_key);
    else if (full_key == "fading.ue_z") cfg.fading.ue_pos.z = parse_double(value, full_key);
    else if (full_key == "fading.reference_distance_m") cfg.fading.reference_distance_m = parse_double(value, full_key);
    else if (full_key == "fading.reference_gain_db") cfg.fading.reference_gain_db = parse_double(value, full_key);
    else if (full_key == "fading.direct_blocked") cfg.fading.direct_blocked = parse_bool(value, full_key);
    else if (full_key == "fading.element_spacing_wl") cfg.fading.element_spacing_wl = parse_double(value, full_key);
    else if (full_key == "fading.ris_cols") cfg.fading.ris_cols = parse_int(value, full_key);
    else if (full_key == "fading.incident_azimuth_deg") cfg.fading.incident_azimuth_rad = to_rad(parse_double(value, full_key));
    else if (full_key == "fading.incident_elevation_deg") cfg.fading.incident_elevation_rad = to_rad(parse_double(value, full_key));
    else if (full_key == "fading.reflected_azimuth_deg") cfg.fading.reflected_azimuth_rad = to_rad(parse_double(value, full_key));
    else if (full_key == "fading.reflected_elevation_deg") cfg.fading.reflected_elevation_rad = to_rad(parse_double(value, full_key));
    else throw std::invalid_argument("config: unknown key " + full_key);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return load_scenario(in);
}

void save_scenario(const ScenarioConfig& cfg, std::ostream& out) {
  out << "[scenario]\n";
  out << "elements = " << cfg.num_elements << "\n";
  out << "phase_levels = " << cfg.phase_levels << "\n";
  out << "codebook_size = " << cfg.codebook_size << "\n";
  out << "codebook_kind = " << to_string(cfg.codebook_kind) << "\n";
  if (!cfg.codebook_file.empty())
    out << "codebook_file = " << cfg.codebook_file << "\n";
  out << "learner = " << to_string(cfg.learner) << "\n";
  out << "objective = "
      << (cfg.objective == PbfObjective::received_power ? "power" : "rate") << "\n";
  out << "subcarriers = " << cfg.n_subcarriers << "\n";
  out << "pilots_per_subframe = " << cfg.pilots_per_subframe << "\n";
  out << "tx_power_dbm = " << cfg.tx_power_dbm << "\n";
  out << "pilot_power_dbm = " << cfg.pilot_power_dbm << "\n";
  out << "noise_power_dbm = " << cfg.noise_power_dbm << "\n";
  out << "coherence_slots = " << cfg.coherence_slots << "\n";
  out << "trials = " << cfg.n_trials << "\n";
  out << "seed = " << cfg.master_seed << "\n";
  out << "workers = " << cfg.workers << "\n";
  out << "schemes = ";
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
    out << (i ? "," : "") << to_string(cfg.schemes[i]);
  out << "\n\n[fading]\n";
  out << "direct_k = " << cfg.fading.direct.rician_k << "\n";
  out << "incident_k = " << cfg.fading.incident.rician_k << "\n";
  out << "reflected_k = " << cfg.fading.reflected.rician_k << "\n";
  out << "direct_exponent = " << cfg.fading.direct.pathloss_exponent << "\n";
  out << "incident_exponent = " << cfg.fading.incident.pathloss_exponent << "\n";
  out << "reflected_exponent = " << cfg.fading.reflected.pathloss_exponent << "\n";
  out << "direct_taps = " << cfg.fading.direct.num_taps << "\n";
  out << "incident_taps = " << cfg.fading.incident.num_taps << "\n";
  out << "reflected_taps = " << cfg.fading.reflected.num_taps << "\n";
  out << "pdp_decay = " << cfg.fading.pdp_decay << "\n";
  out << "bs_x = " << cfg.fading.bs_pos.x << "\n";
  out << "bs_y = " << cfg.fading.bs_pos.y << "\n";
  out << "bs_z = " << cfg.fading.bs_pos.z << "\n";
  out << "ris_x = " << cfg.fading.ris_pos.x << "\n";
  out << "ris_y = " << cfg.fading.ris_pos.y << "\n";
  out << "ris_z = " << cfg.fading.ris_pos.z << "\n";
  out << "ue_x = " << cfg.fading.ue_pos.x << "\n";
  out << "ue_y = " << cfg.fading.ue_pos.y << "\n";
  out << "ue_z = " << cfg.fading.ue_pos.z << "\n";
  out << "reference_distance_m = " << cfg.fading.reference_distance_m << "\n";
  out << "reference_gain_db = " << cfg.fading.reference_gain_db << "\n";
  out << "direct_blocked = " << (cfg.fading.direct_blocked ? "true" : "false") << "\n";
  out << "element_spacing_wl = " << cfg.fading.element_spacing_wl << "\n";
  out << "ris_cols = " << cfg.fading.ris_cols << "\n";
  out << "incident_azimuth_deg = " << to_deg(cfg.fading.incident_azimuth_rad) << "\n";
  out << "incident_elevation_deg = " << to_deg(cfg.fading.incident_elevation_rad) << "\n";
  out << "reflected_azimuth_deg = " << to_deg(cfg.fading.reflected_azimuth_rad) << "\n";
  out << "reflected_elevation_deg = " << to_deg(cfg.fading.reflected_elevation_rad) << "\n";
}

}  // namespace riscb
