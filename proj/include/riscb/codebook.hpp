#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "riscb/pattern.hpp"

namespace riscb {

enum class CodebookKind { random, sdm, dft, full };

std::string to_string(CodebookKind kind);
CodebookKind codebook_kind_from_string(const std::string& name);

// Ordered set of Q reflection patterns sharing the same M and B, plus the
// metadata needed to regenerate it.
struct Codebook {
  std::vector<ReflectionPattern> patterns;
  CodebookKind kind = CodebookKind::random;
  std::uint64_t generation_seed = 0;

  int size() const { return static_cast<int>(patterns.size()); }
  int elements() const { return patterns.empty() ? 0 : patterns.front().size(); }
  int levels() const { return patterns.empty() ? 0 : patterns.front().levels(); }
};

// Q patterns with i.i.d. uniform phase indices.
Codebook gen_random_codebook(int num_elements, int num_levels, int size,
                             std::uint64_t seed);

struct SdmStats {
  std::vector<double> objective_trace;  // after init, then after each sweep
  int sweeps = 0;
  bool converged = false;
};

// Q distinct patterns maximizing the sum of pairwise Euclidean distances
// between coefficient vectors, by greedy coordinate ascent from a random
// distinct initialization. Monotone in the objective; stops after a full
// sweep without change or after max_sweeps.
Codebook gen_sdm_codebook(int num_elements, int num_levels, int size,
                          std::uint64_t seed, int max_sweeps = 100,
                          SdmStats* stats = nullptr);

// First Q columns of the order-M DFT as patterns; pattern q has
// coefficient exp(-j*2*pi*q*m/M) at element m. Requires Q <= M and
// num_levels a multiple of M so every DFT phase lands on the grid.
Codebook gen_dft_codebook(int num_elements, int num_levels, int size);

// All B^M patterns in lexicographic index order (element 0 fastest).
Codebook gen_full_codebook(int num_elements, int num_levels);

// Sum over all unordered pairs of || coeff_i - coeff_j ||_2.
double sum_pairwise_distance(const Codebook& cb);

// Text export/import: header lines then one row of phase indices per pattern.
void save_codebook(const Codebook& cb, std::ostream& out);
void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(std::istream& in);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace riscb
