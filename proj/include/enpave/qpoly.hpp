#ifndef ENPAVE_QPOLY_HPP
#define ENPAVE_QPOLY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enpave {

/// Integer polynomial c_0 + c_1 q + ... + c_d q^d, trailing zeros trimmed.
class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(std::vector<long long> coefficients);

  const std::vector<long long>& coefficients() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool has_nonnegative_coefficients() const;
  long long coefficient_sum() const;
  /// Exact value at q; throws std::overflow_error past 64 bits.
  long long evaluate(long long q) const;
  /// "q^3+2q^2+2q+1", "q+1", "1", "0".
  std::string to_string() const;

  friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

 private:
  std::vector<long long> coeffs_;
};

struct InterpolationResult {
  std::optional<QPolynomial> polynomial;
  std::string failure;  // set when polynomial is empty

  bool ok() const { return polynomial.has_value(); }
};

/// Fits the unique polynomial of degree <= degree_bound through the first
/// degree_bound + 1 samples (by prime) using exact rational arithmetic, then
/// requires exact agreement on the remaining samples. Non-integral
/// coefficients or disagreement are reported in the result. Throws
/// std::invalid_argument for fewer than degree_bound + 1 samples.
InterpolationResult interpolate_qpoly(const std::map<std::uint32_t, std::uint64_t>& samples,
                                      int degree_bound);

/// The first k primes.
std::vector<std::uint32_t> first_primes(std::size_t k);
std::uint32_t next_prime_after(std::uint32_t p);

/// Ordered list of sampling primes plus an optional fixed held-out prime.
class PrimeSchedule {
 public:
  PrimeSchedule() = default;
  /// Throws std::invalid_argument on repeated or non-prime entries, or a
  /// held-out prime that also appears in the schedule.
  PrimeSchedule(std::vector<std::uint32_t> primes, std::optional<std::uint32_t> holdout);

  /// Default schedule 2, 3, 5, 7, ... generated on demand.
  static PrimeSchedule standard() { return PrimeSchedule{}; }

  bool explicit_list() const { return !primes_.empty(); }
  /// The first count primes of the schedule. Throws std::invalid_argument
  /// when an explicit schedule is too short.
  std::vector<std::uint32_t> take(std::size_t count) const;
  /// Validation prime for a fit that used take(count).
  std::uint32_t holdout_for(std::size_t count) const;

 private:
  std::vector<std::uint32_t> primes_;
  std::optional<std::uint32_t> holdout_;
};

}  // namespace enpave

#endif  // ENPAVE_QPOLY_HPP
