#ifndef ENPAVE_CHECKS_HPP
#define ENPAVE_CHECKS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "enpave/combinatorics.hpp"
#include "enpave/fiber.hpp"
#include "enpave/normal_form.hpp"
#include "enpave/qpoly.hpp"

namespace enpave {

enum class Verdict { pass, fail, budget_exhausted };

std::string to_string(Verdict v);

/// Outcome of one named verification. A fail always carries a witness.
struct CheckReport {
  std::string name;
  nlohmann::json inputs = nlohmann::json::object();
  Verdict verdict = Verdict::fail;
  nlohmann::json witness = nlohmann::json::object();
  std::vector<std::string> notes;
  double millis = 0.0;

  bool passed() const { return verdict == Verdict::pass; }
  /// Timing is omitted unless requested so reports stay reproducible.
  nlohmann::json to_json(bool with_timing = false) const;
  /// 16 hex digits of FNV-1a over the serialized witness.
  std::string witness_digest() const;
};

struct CheckOptions {
  PrimeSchedule schedule;
  std::uint64_t search_budget = 10'000'000;
};

/// The fiber of pi_{big} over the normal point of small has a counting
/// polynomial with nonnegative integer coefficients that reproduces a
/// held-out prime. Requires closure containment (std::invalid_argument).
CheckReport check_polynomial_count(const Bipartition& big, const Bipartition& small,
                                   const CheckOptions& options, FiberCounter& counter);

/// Splits the fiber by P-orbit, identified by the profile
/// dim(W_i cap V^{>=w}). Piece counts must add up to the fiber count at every
/// prime in `primes`; each piece must be polynomial with nonnegative integer
/// coefficients. `primes` is extended with further primes when the fit needs
/// more samples.
CheckReport check_alpha_partition(const Bipartition& big, const Bipartition& small,
                                  std::vector<std::uint32_t> primes, FiberCounter& counter);

struct DecompositionSearch {
  std::optional<Decomposition> found;
  std::uint64_t nodes = 0;
  bool exhausted = false;
};

/// Brute-force search for a nontrivial x-stable graded splitting V = V1 + V2
/// with v in V1, choosing a complementary pair in each weight space.
DecompositionSearch search_decomposition(const GradedPair& pair, std::uint64_t budget);

/// Search result agrees with is_distinguished; for non-distinguished inputs the
/// explicit decomposition is also validated.
CheckReport check_distinguished_lemma(const Bipartition& b, PrimeField field,
                                      std::uint64_t budget = 10'000'000);

/// Product formula for the (chi, lambda)-fixed flags of the resolution of
/// `big` over the normal point of the non-distinguished b, profile by profile.
CheckReport check_split_product(const Bipartition& b, const Bipartition& big, PrimeField field);

/// For distinguished b with alpha nonempty: kernel weight spaces are lines and
/// the lambda-fixed count equals the sum over r_1-sets of kernel lines of the
/// lambda-fixed counts of the quotient pairs.
CheckReport check_kernel_recursion(const Bipartition& b, const FlagShape& shape, PrimeField field);

/// For the regular nilpotent (empty; (n)): every lambda-fixed fiber, over all
/// flag shapes and markers, has at most one point.
CheckReport check_regular_fixed_points(int n, PrimeField field);

/// 2 deg(fiber polynomial) <= dim O_big - dim O_small for every small in the closure.
CheckReport check_semismall(const Bipartition& big, const CheckOptions& options,
                            FiberCounter& counter);

/// The fiber and its lambda-fixed locus have counting polynomials with the
/// same value at q = 1 (same number of cells).
CheckReport check_euler_bridge(const Bipartition& big, const Bipartition& small,
                               const CheckOptions& options, FiberCounter& counter);

/// The fiber of pi_b over the normal point of b is a single point at every listed prime.
CheckReport check_birational(const Bipartition& b, const std::vector<std::uint32_t>& primes,
                             FiberCounter& counter);

}  // namespace enpave

#endif  // ENPAVE_CHECKS_HPP
