#include "riscb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "riscb/estimation.hpp"
#include "riscb/metrics.hpp"

namespace riscb {

namespace {

struct TrialContext {
  const ScenarioConfig& cfg;
  const Codebook& codebook;
  const TrainingDesign& ao_design;
  PilotConfig pilot;
  double tx_power_mw;
  double noise_power_mw;
};

Codebook build_codebook(const ScenarioConfig& cfg) {
  if (!cfg.codebook_file.empty()) {
    Codebook cb = load_codebook(std::filesystem::path(cfg.codebook_file));
    if (cb.elements() != cfg.num_elements || cb.levels() != cfg.phase_levels)
      throw std::invalid_argument(
          "codebook file " + cfg.codebook_file + " holds M=" +
          std::to_string(cb.elements()) + ", B=" + std::to_string(cb.levels()) +
          " patterns; the scenario needs M=" + std::to_string(cfg.num_elements) +
          ", B=" + std::to_string(cfg.phase_levels));
    return cb;
  }
  const std::uint64_t seed =
      derive_seed(cfg.master_seed, stream_purpose::kCodebookGen, 0);
  switch (cfg.codebook_kind) {
    case CodebookKind::random:
      return gen_random_codebook(cfg.num_elements, cfg.phase_levels,
                                 cfg.codebook_size, seed);
    case CodebookKind::sdm:
      return gen_sdm_codebook(cfg.num_elements, cfg.phase_levels,
                              cfg.codebook_size, seed);
    case CodebookKind::dft:
      return gen_dft_codebook(cfg.num_elements, cfg.phase_levels,
                              cfg.codebook_size);
    case CodebookKind::full:
      return gen_full_codebook(cfg.num_elements, cfg.phase_levels);
  }
  throw std::invalid_argument("unknown codebook kind");
}

double objective_of(const CVec& h, const TrialContext& ctx) {
  if (ctx.cfg.objective == PbfObjective::achievable_rate)
    return achievable_rate(h, ctx.tx_power_mw, ctx.noise_power_mw);
  return received_power(h, ctx.tx_power_mw);
}

TrialRecord make_record(const TrialContext& ctx, int trial_id,
                        const std::string& scheme, const CVec& h_true,
                        int tau, int rp_index) {
  const RateResult rr = make_rate_result(
      achievable_rate(h_true, ctx.tx_power_mw, ctx.noise_power_mw), tau,
      ctx.cfg.coherence_slots);
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.scheme = scheme;
  rec.rate_bps_hz = rr.rate_bps_hz;
  rec.effective_rate_bps_hz = rr.effective_rate_bps_hz;
  rec.received_power_mw = received_power(h_true, ctx.tx_power_mw);
  rec.tau_slots = rr.tau_slots;
  rec.chosen_rp_index = rp_index;
  return rec;
}

TrialRecord run_codebook_trial(const TrialContext& ctx, int trial_id,
                               const CascadedResponse& truth) {
  RandomStream est_rng(derive_seed(ctx.cfg.master_seed,
                                   stream_purpose::kCompositeEstimation,
                                   static_cast<std::uint64_t>(trial_id)));
  const Codebook& cb = ctx.codebook;
  std::vector<LabeledSample> samples;
  samples.reserve(static_cast<std::size_t>(cb.size()));
  for (int q = 0; q < cb.size(); ++q) {
    const CVec h_true = truth.compose(cb.patterns[static_cast<std::size_t>(q)]);
    const auto est = estimate_composite(h_true, ctx.pilot, est_rng, q);
    samples.push_back({q, objective_of(est.h_hat, ctx)});
  }
  const LearnResult learned = ctx.cfg.learner == Learner::rote
                                  ? rote_learn(samples, cb)
                                  : fusion_learn(samples, cb);
  const int tau = training_overhead(TrainingScheme::codebook, ctx.cfg.num_elements,
                                    cb.size(), ctx.cfg.pilots_per_subframe);
  const CVec h_true = truth.compose(learned.pattern);
  return make_record(ctx, trial_id, "codebook", h_true, tau, learned.chosen_index);
}

TrialRecord run_ao_trial(const TrialContext& ctx, int trial_id,
                         const ChannelRealization& ch,
                         const CascadedResponse& truth) {
  RandomStream est_rng(derive_seed(ctx.cfg.master_seed,
                                   stream_purpose::kCascadedEstimation,
                                   static_cast<std::uint64_t>(trial_id)));
  const auto est = estimate_cascaded_ls(ch, ctx.ao_design, ctx.pilot, est_rng);

  AoOptions opts;
  opts.objective = ctx.cfg.objective;
  opts.tx_power_mw = ctx.tx_power_mw;
  opts.noise_power_mw = ctx.noise_power_mw;
  const ReflectionPattern init =
      matched_phase_init(est.response, ctx.cfg.phase_levels);
  const AoResult ao = ao_optimize(est.response, ctx.cfg.phase_levels, init, opts);

  const int tau = training_overhead(TrainingScheme::cascaded_ce,
                                    ctx.cfg.num_elements, ctx.cfg.codebook_size,
                                    ctx.cfg.pilots_per_subframe);
  const CVec h_true = truth.compose(ao.pattern);
  return make_record(ctx, trial_id, "ao", h_true, tau, -1);
}

TrialRecord run_random_trial(const TrialContext& ctx, int trial_id,
                             const CascadedResponse& truth) {
  RandomStream rng(derive_seed(ctx.cfg.master_seed,
                               stream_purpose::kRandomBaseline,
                               static_cast<std::uint64_t>(trial_id)));
  const ReflectionPattern rp =
      random_phase_baseline(ctx.cfg.num_elements, ctx.cfg.phase_levels, rng);
  const int tau = training_overhead(TrainingScheme::random_phase,
                                    ctx.cfg.num_elements, ctx.cfg.codebook_size,
                                    ctx.cfg.pilots_per_subframe);
  const CVec h_true = truth.compose(rp);
  return make_record(ctx, trial_id, "random", h_true, tau, -1);
}

// Per-subcarrier triangle-inequality bound: no legitimate pattern can exceed
// |h_d[k]| + sum_m |g_m[k]| on any subcarrier. For single-tap channels this
// is met with equality by continuous phase alignment.
TrialRecord run_oracle_trial(const TrialContext& ctx, int trial_id,
                             const CascadedResponse& truth) {
  const int n_sc = truth.subcarriers();
  CVec h_bound(static_cast<std::size_t>(n_sc));
  for (int k = 0; k < n_sc; ++k) {
    double amp = std::abs(truth.direct[static_cast<std::size_t>(k)]);
    for (int m = 0; m < truth.elements(); ++m)
      amp += std::abs(truth.per_element(m, k));
    h_bound[static_cast<std::size_t>(k)] = {amp, 0.0};
  }
  return make_record(ctx, trial_id, "oracle", h_bound, 0, -1);
}

TrialRecord run_scheme_trial(const TrialContext& ctx, Scheme scheme,
                             int trial_id, const ChannelRealization& ch,
                             const CascadedResponse& truth) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  switch (scheme) {
    case Scheme::codebook: rec = run_codebook_trial(ctx, trial_id, truth); break;
    case Scheme::ao: rec = run_ao_trial(ctx, trial_id, ch, truth); break;
    case Scheme::random_phase: rec = run_random_trial(ctx, trial_id, truth); break;
    case Scheme::oracle: rec = run_oracle_trial(ctx, trial_id, truth); break;
  }
  rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return rec;
}

// Runs fn(trial) for every trial on the configured worker pool. Output slots
// are preallocated per trial, so scheduling never affects results.
template <typename Fn>
void parallel_trials(int n_trials, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (int t = 0; t < n_trials; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const int n_workers = std::min(workers, n_trials);
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1))
          fn(t);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
        next.store(n_trials);  // drain remaining work
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool needs_codebook(const std::vector<Scheme>& schemes) {
  return std::find(schemes.begin(), schemes.end(), Scheme::codebook) !=
         schemes.end();
}

bool needs_ao(const std::vector<Scheme>& schemes) {
  return std::find(schemes.begin(), schemes.end(), Scheme::ao) != schemes.end();
}

std::vector<TrialRecord> run_schemes(const ScenarioConfig& cfg,
                                     const std::vector<Scheme>& schemes) {
  cfg.validate();
  const Codebook cb = needs_codebook(schemes)
                          ? build_codebook(cfg)
                          : Codebook{};
  const TrainingDesign design = needs_ao(schemes)
                                    ? TrainingDesign::canonical(cfg.num_elements)
                                    : TrainingDesign{};
  TrialContext ctx{cfg, cb, design,
                   PilotConfig{cfg.pilot_power_dbm, cfg.noise_power_dbm,
                               cfg.pilots_per_subframe, cfg.n_subcarriers},
                   db_to_linear(cfg.tx_power_dbm),
                   db_to_linear(cfg.noise_power_dbm)};

  std::vector<TrialRecord> records(
      static_cast<std::size_t>(cfg.n_trials) * schemes.size());
  parallel_trials(cfg.n_trials, cfg.workers, [&](int trial) {
    RandomStream ch_rng(derive_seed(cfg.master_seed, stream_purpose::kChannel,
                                    static_cast<std::uint64_t>(trial)));
    const ChannelRealization ch =
        draw_channel(cfg.fading, cfg.num_elements, ch_rng);
    const CascadedResponse truth = frequency_response(ch, cfg.n_subcarriers);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      try {
        records[static_cast<std::size_t>(trial) * schemes.size() + s] =
            run_scheme_trial(ctx, schemes[s], trial, ch, truth);
      } catch (const std::exception& e) {
        throw std::runtime_error("trial " + std::to_string(trial) +
                                 ", scheme " + to_string(schemes[s]) + ": " +
                                 e.what());
      }
    }
  });
  return records;
}

}  // namespace

std::vector<TrialRecord> run_codebook_pipeline(const ScenarioConfig& cfg) {
  return run_schemes(cfg, {Scheme::codebook});
}

std::vector<TrialRecord> run_baseline_pipeline(const ScenarioConfig& cfg,
                                               Scheme scheme) {
  if (scheme == Scheme::codebook)
    throw std::invalid_argument(
        "run_baseline_pipeline: codebook is not a baseline scheme");
  return run_schemes(cfg, {scheme});
}

std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg) {
  return run_schemes(cfg, cfg.schemes);
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::codebook_size: return "Q";
    case SweepAxis::num_elements: return "M";
    case SweepAxis::coherence_time: return "T";
    case SweepAxis::pilot_power: return "pilot_power";
  }
  return "Q";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "Q") return SweepAxis::codebook_size;
  if (name == "M") return SweepAxis::num_elements;
  if (name == "T") return SweepAxis::coherence_time;
  if (name == "pilot_power") return SweepAxis::pilot_power;
  throw std::invalid_argument("unknown sweep axis: " + name +
                              " (expected Q, M, T or pilot_power)");
}

namespace {

ScenarioConfig with_axis_value(const ScenarioConfig& base, SweepAxis axis,
                               double value) {
  ScenarioConfig cfg = base;
  switch (axis) {
    case SweepAxis::codebook_size:
    case SweepAxis::num_elements:
    case SweepAxis::coherence_time: {
      const int iv = static_cast<int>(std::llround(value));
      if (std::abs(value - iv) > 1e-9)
        throw std::invalid_argument("sweep: axis " + to_string(axis) +
                                    " takes integer values");
      if (axis == SweepAxis::codebook_size) cfg.codebook_size = iv;
      else if (axis == SweepAxis::num_elements) cfg.num_elements = iv;
      else cfg.coherence_slots = iv;
      break;
    }
    case SweepAxis::pilot_power:
      cfg.pilot_power_dbm = value;
      break;
  }
  return cfg;
}

struct Accumulator {
  int n = 0;
  double sum = 0.0, sum_sq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double stderr_mean() const {
    if (n < 2) return 0.0;
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                            const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: no axis values");
  if (!cfg.codebook_file.empty() && (axis == SweepAxis::codebook_size ||
                                     axis == SweepAxis::num_elements))
    throw std::invalid_argument(
        "sweep: a file-backed codebook fixes Q and M; sweep T or pilot_power "
        "instead");
  std::vector<SweepRow> rows;
  for (double value : values) {
    const ScenarioConfig point = with_axis_value(cfg, axis, value);
    const auto records = run_scenario(point);
    for (Scheme s : point.schemes) {
      const std::string name = to_string(s);
      Accumulator rate, eff, power;
      int tau = 0;
      for (const auto& rec : records) {
        if (rec.scheme != name) continue;
        rate.add(rec.rate_bps_hz);
        eff.add(rec.effective_rate_bps_hz);
        power.add(rec.received_power_mw);
        tau = rec.tau_slots;
      }
      SweepRow row;
      row.axis = to_string(axis);
      row.axis_value = value;
      row.scheme = name;
      row.n_trials = rate.n;
      row.mean_rate = rate.mean();
      row.stderr_rate = rate.stderr_mean();
      row.mean_effective_rate = eff.mean();
      row.stderr_effective_rate = eff.stderr_mean();
      row.mean_received_power_mw = power.mean();
      row.stderr_received_power_mw = power.stderr_mean();
      row.tau_slots = tau;
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("results file: bad ") + what + ": " + s);
  }
}

constexpr const char* kRecordHeader =
    "trial_id,scheme,rate_bps_hz,effective_rate_bps_hz,received_power_mw,"
    "tau_slots,chosen_rp_index";

}  // namespace

void emit_results(const std::vector<TrialRecord>& records, std::ostream& out,
                  EmitFormat format) {
  // Rows are written in (scheme, trial) order regardless of how the records
  // were produced, so files compare byte for byte across runs.
  std::vector<const TrialRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const TrialRecord* a, const TrialRecord* b) {
                     if (a->scheme != b->scheme) return a->scheme < b->scheme;
                     return a->trial_id < b->trial_id;
                   });

  if (format == EmitFormat::csv) {
    out << kRecordHeader << "\n";
    for (const TrialRecord* r : ordered) {
      out << r->trial_id << ',' << r->scheme << ','
          << format_double(r->rate_bps_hz) << ','
          << format_double(r->effective_rate_bps_hz) << ','
          << format_double(r->received_power_mw) << ',' << r->tau_slots << ','
          << r->chosen_rp_index << "\n";
    }
  } else {
    for (const TrialRecord* r : ordered) {
      out << "{\"trial_id\":" << r->trial_id << ",\"scheme\":\"" << r->scheme
          << "\",\"rate_bps_hz\":" << format_double(r->rate_bps_hz)
          << ",\"effective_rate_bps_hz\":"
          << format_double(r->effective_rate_bps_hz)
          << ",\"received_power_mw\":" << format_double(r->received_power_mw)
          << ",\"tau_slots\":" << r->tau_slots
          << ",\"chosen_rp_index\":" << r->chosen_rp_index << "}\n";
    }
  }
}

void emit_results(const std::vector<TrialRecord>& records,
                  const std::filesystem::path& path, EmitFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  emit_results(records, out, format);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<TrialRecord> parse_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("results file: empty");
  if (line != kRecordHeader)
    throw std::runtime_error("results file: unexpected header: " + line);
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw std::runtime_error("results file: expected 7 fields, got " +
                               std::to_string(fields.size()));
    TrialRecord r;
    r.trial_id = static_cast<int>(parse_double_field(fields[0], "trial_id"));
    r.scheme = fields[1];
    r.rate_bps_hz = parse_double_field(fields[2], "rate");
    r.effective_rate_bps_hz = parse_double_field(fields[3], "effective rate");
    r.received_power_mw = parse_double_field(fields[4], "received power");
    r.tau_slots = static_cast<int>(parse_double_field(fields[5], "tau"));
    r.chosen_rp_index = static_cast<int>(parse_double_field(fields[6], "rp index"));
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TrialRecord> parse_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file " + path.string());
  return parse_results_csv(in);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "axis,axis_value,scheme,n_trials,mean_rate_bps_hz,stderr_rate_bps_hz,"
         "mean_effective_rate_bps_hz,stderr_effective_rate_bps_hz,"
         "mean_received_power_mw,stderr_received_power_mw,tau_slots\n";
  for (const auto& r : rows) {
    out << r.axis << ',' << format_double(r.axis_value) << ',' << r.scheme << ','
        << r.n_trials << ',' << format_double(r.mean_rate) << ','
        << format_double(r.stderr_rate) << ','
        << format_double(r.mean_effective_rate) << ','
        << format_double(r.stderr_effective_rate) << ','
        << format_double(r.mean_received_power_mw) << ','
        << format_double(r.stderr_received_power_mw) << ',' << r.tau_slots
        << "\n";
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  write_sweep_csv(rows, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace riscb
