#include "riscb/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace riscb {

namespace {

// B^M with saturation, for feasibility checks.
std::uint64_t pattern_space_size(int num_elements, int num_levels) {
  std::uint64_t total = 1;
  for (int m = 0; m < num_elements; ++m) {
    if (total > (1ull << 62) / static_cast<std::uint64_t>(num_levels))
      return 1ull << 62;
    total *= static_cast<std::uint64_t>(num_levels);
  }
  return total;
}

void check_common(int num_elements, int num_levels, int size) {
  if (num_elements < 1)
    throw std::invalid_argument("codebook: need at least one element");
  if (num_levels < 2)
    throw std::invalid_argument("codebook: need at least 2 phase levels");
  if (size < 1) throw std::invalid_argument("codebook: size must be >= 1");
}

}  // namespace

std::string to_string(CodebookKind kind) {
  switch (kind) {
    case CodebookKind::random: return "random";
    case CodebookKind::sdm: return "sdm";
    case CodebookKind::dft: return "dft";
    case CodebookKind::full: return "full";
  }
  return "random";
}

CodebookKind codebook_kind_from_string(const std::string& name) {
  if (name == "random") return CodebookKind::random;
  if (name == "sdm") return CodebookKind::sdm;
  if (name == "dft") return CodebookKind::dft;
  if (name == "full") return CodebookKind::full;
  throw std::invalid_argument("unknown codebook kind: " + name);
}

Codebook gen_random_codebook(int num_elements, int num_levels, int size,
                             std::uint64_t seed) {
  check_common(num_elements, num_levels, size);
  RandomStream rng(seed);
  Codebook cb;
  cb.kind = CodebookKind::random;
  cb.generation_seed = seed;
  cb.patterns.reserve(static_cast<std::size_t>(size));
  for (int q = 0; q < size; ++q)
    cb.patterns.push_back(
        ReflectionPattern::uniform_random(num_elements, num_levels, rng));
  return cb;
}

namespace {

double pair_sq_dist(const std::vector<int>& a, const std::vector<int>& b,
                    const std::vector<Complex>& level_coeff) {
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m)
    s += std::norm(level_coeff[static_cast<std::size_t>(a[m])] -
                   level_coeff[static_cast<std::size_t>(b[m])]);
  return s;
}

double sum_distance(const std::vector<std::vector<int>>& idx,
                    const std::vector<Complex>& level_coeff) {
  double total = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      total += std::sqrt(pair_sq_dist(idx[i], idx[j], level_coeff));
  return total;
}

}  // namespace

Codebook gen_sdm_codebook(int num_elements, int num_levels, int size,
                          std::uint64_t seed, int max_sweeps, SdmStats* stats) {
  check_common(num_elements, num_levels, size);
  if (size < 2) throw std::invalid_argument("sdm codebook: size must be >= 2");
  const std::uint64_t space = pattern_space_size(num_elements, num_levels);
  if (static_cast<std::uint64_t>(size) > space)
    throw std::invalid_argument(
        "sdm codebook: size exceeds the number of distinct patterns");

  RandomStream rng(seed);
  std::vector<Complex> level_coeff(static_cast<std::size_t>(num_levels));
  for (int b = 0; b < num_levels; ++b) {
    const double ang = kTwoPi * b / num_levels;
    level_coeff[static_cast<std::size_t>(b)] = {std::cos(ang), std::sin(ang)};
  }

  // Distinct random initialization.
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> idx;
  idx.reserve(static_cast<std::size_t>(size));
  if (space <= 4096) {
    // Dense regime: enumerate and sample without replacement.
    std::vector<std::vector<int>> all;
    all.reserve(static_cast<std::size_t>(space));
    std::vector<int> cur(static_cast<std::size_t>(num_elements), 0);
    for (std::uint64_t v = 0; v < space; ++v) {
      all.push_back(cur);
      for (int m = 0; m < num_elements; ++m) {
        if (++cur[static_cast<std::size_t>(m)] < num_levels) break;
        cur[static_cast<std::size_t>(m)] = 0;
      }
    }
    for (int q = 0; q < size; ++q) {
      const int pick = rng.uniform_int(static_cast<int>(all.size()));
      idx.push_back(all[static_cast<std::size_t>(pick)]);
      all.erase(all.begin() + pick);
    }
  } else {
    while (static_cast<int>(idx.size()) < size) {
      std::vector<int> cand(static_cast<std::size_t>(num_elements));
      for (auto& v : cand) v = rng.uniform_int(num_levels);
      if (seen.insert(cand).second) idx.push_back(std::move(cand));
    }
  }

  // Squared distances between current coefficient vectors.
  std::vector<std::vector<double>> sq(static_cast<std::size_t>(size),
                                      std::vector<double>(static_cast<std::size_t>(size), 0.0));
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j)
      sq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          sq[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
              pair_sq_dist(idx[static_cast<std::size_t>(i)],
                           idx[static_cast<std::size_t>(j)], level_coeff);

  SdmStats local;
  SdmStats& st = stats ? *stats : local;
  st = SdmStats{};
  st.objective_trace.push_back(sum_distance(idx, level_coeff));

  constexpr double kDuplicateSq = 1e-9;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (int q = 0; q < size; ++q) {
      auto& row = idx[static_cast<std::size_t>(q)];
      for (int m = 0; m < num_elements; ++m) {
        const int cur_level = row[static_cast<std::size_t>(m)];
        int best_level = cur_level;
        double best_obj = 0.0;
        std::vector<double> best_sq;
        // Objective restricted to the pairs that involve pattern q.
        for (int j = 0; j < size; ++j)
          if (j != q)
            best_obj += std::sqrt(
                sq[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)]);

        for (int b = 0; b < num_levels; ++b) {
          if (b == cur_level) continue;
          double obj = 0.0;
          std::vector<double> new_sq(static_cast<std::size_t>(size), 0.0);
          bool duplicate = false;
          for (int j = 0; j < size && !duplicate; ++j) {
            if (j == q) continue;
            const auto& other = idx[static_cast<std::size_t>(j)];
            const double delta =
                std::norm(level_coeff[static_cast<std::size_t>(b)] -
                          level_coeff[static_cast<std::size_t>(
                              other[static_cast<std::size_t>(m)])]) -
                std::norm(level_coeff[static_cast<std::size_t>(cur_level)] -
                          level_coeff[static_cast<std::size_t>(
                              other[static_cast<std::size_t>(m)])]);
            const double s =
                sq[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)] +
                delta;
            if (s < kDuplicateSq) duplicate = true;
            new_sq[static_cast<std::size_t>(j)] = std::max(s, 0.0);
            obj += std::sqrt(new_sq[static_cast<std::size_t>(j)]);
          }
          if (!duplicate && obj > best_obj + 1e-12) {
            best_obj = obj;
            best_level = b;
            best_sq = std::move(new_sq);
          }
        }
        if (best_level != cur_level) {
          row[static_cast<std::size_t>(m)] = best_level;
          for (int j = 0; j < size; ++j) {
            if (j == q) continue;
            sq[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)] =
                sq[static_cast<std::size_t>(j)][static_cast<std::size_t>(q)] =
                    best_sq[static_cast<std::size_t>(j)];
          }
          changed = true;
        }
      }
    }
    st.sweeps = sweep + 1;
    st.objective_trace.push_back(sum_distance(idx, level_coeff));
    if (!changed) {
      st.converged = true;
      break;
    }
  }

  Codebook cb;
  cb.kind = CodebookKind::sdm;
  cb.generation_seed = seed;
  cb.patterns.reserve(static_cast<std::size_t>(size));
  for (auto& row : idx) cb.patterns.emplace_back(row, num_levels);
  return cb;
}

Codebook gen_dft_codebook(int num_elements, int num_levels, int size) {
  check_common(num_elements, num_levels, size);
  if (size > num_elements)
    throw std::invalid_argument("dft codebook: size must not exceed M");
  if (num_levels % num_elements != 0)
    throw std::invalid_argument(
        "dft codebook: phase levels must be a multiple of M to represent "
        "all order-M DFT phases");

  const int scale = num_levels / num_elements;
  Codebook cb;
  cb.kind = CodebookKind::dft;
  cb.patterns.reserve(static_cast<std::size_t>(size));
  for (int q = 0; q < size; ++q) {
    std::vector<int> idx(static_cast<std::size_t>(num_elements));
    for (int m = 0; m < num_elements; ++m) {
      // Phase -2*pi*q*m/M as a grid index, exactly.
      const int steps = (q * m) % num_elements;
      idx[static_cast<std::size_t>(m)] =
          (num_levels - steps * scale) % num_levels;
    }
    cb.patterns.emplace_back(std::move(idx), num_levels);
  }
  return cb;
}

Codebook gen_full_codebook(int num_elements, int num_levels) {
  check_common(num_elements, num_levels, 1);
  const std::uint64_t space = pattern_space_size(num_elements, num_levels);
  if (space > (1ull << 20))
    throw std::invalid_argument("full codebook: B^M too large to enumerate");
  Codebook cb;
  cb.kind = CodebookKind::full;
  cb.patterns.reserve(static_cast<std::size_t>(space));
  std::vector<int> cur(static_cast<std::size_t>(num_elements), 0);
  for (std::uint64_t v = 0; v < space; ++v) {
    cb.patterns.emplace_back(cur, num_levels);
    for (int m = 0; m < num_elements; ++m) {
      if (++cur[static_cast<std::size_t>(m)] < num_levels) break;
      cur[static_cast<std::size_t>(m)] = 0;
    }
  }
  return cb;
}

double sum_pairwise_distance(const Codebook& cb) {
  if (cb.size() < 2)
    throw std::invalid_argument("sum_pairwise_distance: need at least 2 patterns");
  double total = 0.0;
  std::vector<CVec> coeffs;
  coeffs.reserve(cb.patterns.size());
  for (const auto& p : cb.patterns) coeffs.push_back(p.coefficients());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (std::size_t j = i + 1; j < coeffs.size(); ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < coeffs[i].size(); ++m)
        s += std::norm(coeffs[i][m] - coeffs[j][m]);
      total += std::sqrt(s);
    }
  }
  return total;
}

void save_codebook(const Codebook& cb, std::ostream& out) {
  out << "riscb-codebook v1\n";
  out << "elements " << cb.elements() << "\n";
  out << "levels " << cb.levels() << "\n";
  out << "size " << cb.size() << "\n";
  out << "kind " << to_string(cb.kind) << "\n";
  out << "seed " << cb.generation_seed << "\n";
  for (const auto& p : cb.patterns) {
    const auto& idx = p.indices();
    for (std::size_t m = 0; m < idx.size(); ++m)
      out << (m ? " " : "") << idx[m];
    out << "\n";
  }
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  save_codebook(cb, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Codebook load_codebook(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "riscb-codebook v1")
    throw std::runtime_error("codebook file: bad magic line");

  int elements = 0, levels = 0, size = 0;
  std::string kind_name;
  std::uint64_t seed = 0;
  for (int i = 0; i < 5; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("codebook file: truncated header");
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "elements") ls >> elements;
    else if (key == "levels") ls >> levels;
    else if (key == "size") ls >> size;
    else if (key == "kind") ls >> kind_name;
    else if (key == "seed") ls >> seed;
    else throw std::runtime_error("codebook file: unknown header key " + key);
    if (!ls) throw std::runtime_error("codebook file: bad header value in " + key);
  }
  if (elements < 1 || levels < 2 || size < 1)
    throw std::runtime_error("codebook file: invalid header dimensions");

  Codebook cb;
  cb.kind = codebook_kind_from_string(kind_name);
  cb.generation_seed = seed;
  cb.patterns.reserve(static_cast<std::size_t>(size));
  for (int q = 0; q < size; ++q) {
    if (!std::getline(in, line))
      throw std::runtime_error("codebook file: missing pattern rows");
    std::istringstream ls(line);
    std::vector<int> idx(static_cast<std::size_t>(elements));
    for (auto& v : idx) {
      if (!(ls >> v))
        throw std::runtime_error("codebook file: short pattern row");
    }
    int extra;
    if (ls >> extra) throw std::runtime_error("codebook file: long pattern row");
    cb.patterns.emplace_back(std::move(idx), levels);
  }
  return cb;
}

Codebook load_codebook(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_codebook(in);
}

}  // namespace riscb
