#ifndef ENPAVE_FIBER_HPP
#define ENPAVE_FIBER_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "enpave/combinatorics.hpp"
#include "enpave/gf.hpp"
#include "enpave/normal_form.hpp"
#include "enpave/qpoly.hpp"

namespace enpave {

/// A partial flag W_0 = 0 < W_1 < ... < W_m = V.
using Flag = std::vector<SubspaceGF>;

/// Number of flags of the given shape with x(W_i) in W_{i-1} and v in W_j,
/// by plain recursion over W_1 in ker x and the quotient V / W_1.
/// Throws std::invalid_argument on field or shape mismatch.
std::uint64_t count_fiber(const VectorGF& v, const MatrixGF& x, const FlagShape& shape);

/// Same count restricted to flags whose members are all graded for the
/// pair's labels (the lambda-fixed locus when the labels are lambda-weights).
std::uint64_t count_lambda_fixed(const GradedPair& pair, const FlagShape& shape);

/// Visits every flag of the fiber, in original coordinates. When labels is
/// non-null only graded flags are visited.
void for_each_fiber_flag(const VectorGF& v, const MatrixGF& x, const FlagShape& shape,
                         const std::vector<int>* labels,
                         const std::function<void(const Flag&)>& visit);

/// Memoized fiber counts keyed on (orbit type of the remaining pair, remaining
/// steps, marker, p). Safe for concurrent use: lookups take a shared lock,
/// inserts are idempotent, and no lock is held while a count is computed.
class FiberCounter {
 public:
  static constexpr int kCacheVersion = 1;

  struct Stats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::size_t entries = 0;
  };

  std::uint64_t count(const VectorGF& v, const MatrixGF& x, const FlagShape& shape);
  std::uint64_t count(const NormalPair& np, const FlagShape& shape) {
    return count(np.v, np.x, shape);
  }

  Stats stats() const;
  void clear();

  /// Line-delimited JSON: a header line then one entry per line.
  /// load() returns the number of entries read; a missing file reads as empty.
  std::size_t load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  struct Key {
    std::uint32_t p;
    std::vector<int> mu;
    std::vector<int> nu;
    std::vector<int> steps;
    int marker;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  std::uint64_t count_rec(const VectorGF& v, const MatrixGF& x, std::span<const int> steps,
                          int marker);

  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, std::uint64_t, KeyHash> table_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

/// dim of the partial flag variety: sum over i < k of d_i d_k, d_i = r_i - r_{i-1}.
int fiber_dimension_bound(const FlagShape& shape);

/// n^2 minus the dimension of the stabilizer {y : y v = 0, y x = x y} of the
/// normal pair, solved over GF(101) and GF(10007). Throws std::runtime_error
/// if the two primes disagree.
int orbit_dimension(const Bipartition& b);

/// The fiber of pi over the normal point of `small` is nonempty over GF(p).
bool closure_contains(const Bipartition& big, const Bipartition& small, PrimeField field,
                      FiberCounter& counter);

/// Point counts over a prime schedule, the interpolated polynomial and the
/// held-out validation.
struct SampledPolynomial {
  int degree_bound = 0;
  std::map<std::uint32_t, std::uint64_t> counts;
  std::uint32_t holdout = 0;
  std::uint64_t holdout_count = 0;
  InterpolationResult fit;
  bool holdout_ok = false;

  /// Integral fit, nonnegative coefficients, held-out prime reproduced.
  bool certifies_paving() const;
  nlohmann::json to_json() const;
};

SampledPolynomial sample_polynomial(const std::function<std::uint64_t(PrimeField)>& count,
                                    int degree_bound, const PrimeSchedule& schedule);

/// Counting polynomial of the fiber of pi_{big} over the normal point of small.
SampledPolynomial fiber_polynomial(const Bipartition& big, const Bipartition& small,
                                   const PrimeSchedule& schedule, FiberCounter& counter);

}  // namespace enpave

#endif  // ENPAVE_FIBER_HPP
