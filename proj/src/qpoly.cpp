#include "enpave/qpoly.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "enpave/gf.hpp"

namespace enpave {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

QPolynomial::QPolynomial(std::vector<long long> coefficients) : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

bool QPolynomial::has_nonnegative_coefficients() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](long long c) { return c >= 0; });
}

long long QPolynomial::coefficient_sum() const {
  long long s = 0;
  for (long long c : coeffs_) s += c;
  return s;
}

long long QPolynomial::evaluate(long long q) const {
  cpp_int acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q + *it;
  if (acc > std::numeric_limits<long long>::max() || acc < std::numeric_limits<long long>::min())
    throw std::overflow_error("QPolynomial::evaluate overflow");
  return static_cast<long long>(acc);
}

std::string QPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int d = degree(); d >= 0; --d) {
    long long c = coeffs_[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    if (!out.empty()) out += c > 0 ? "+" : "-";
    else if (c < 0) out += "-";
    long long a = c < 0 ? -c : c;
    if (d == 0 || a != 1) out += std::to_string(a);
    if (d >= 1) out += "q";
    if (d >= 2) out += "^" + std::to_string(d);
  }
  return out;
}

InterpolationResult interpolate_qpoly(const std::map<std::uint32_t, std::uint64_t>& samples,
                                      int degree_bound) {
  if (degree_bound < 0) throw std::invalid_argument("interpolate_qpoly: negative degree bound");
  const std::size_t need = static_cast<std::size_t>(degree_bound) + 1;
  if (samples.size() < need)
    throw std::invalid_argument("interpolate_qpoly: need " + std::to_string(need) +
                                " samples, got " + std::to_string(samples.size()));

  std::vector<cpp_int> xs;
  std::vector<cpp_rational> dd;
  for (auto it = samples.begin(); xs.size() < need; ++it) {
    xs.emplace_back(it->first);
    dd.emplace_back(cpp_int(it->second));
  }
  // Newton divided differences, in place.
  for (std::size_t level = 1; level < need; ++level)
    for (std::size_t i = need - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / cpp_rational(xs[i] - xs[i - level]);

  // Expand the Newton form into monomial coefficients.
  std::vector<cpp_rational> coeffs(need, cpp_rational(0));
  for (std::size_t i = need; i-- > 0;) {
    // coeffs := coeffs * (q - xs[i]) + dd[i]
    std::vector<cpp_rational> next(need, cpp_rational(0));
    for (std::size_t d = 0; d < need; ++d) {
      if (coeffs[d] == 0) continue;
      if (d + 1 < need) next[d + 1] += coeffs[d];
      next[d] -= coeffs[d] * cpp_rational(xs[i]);
    }
    next[0] += dd[i];
    coeffs = std::move(next);
  }

  InterpolationResult result;
  std::vector<long long> ints;
  for (std::size_t d = 0; d < need; ++d) {
    if (denominator(coeffs[d]) != 1) {
      result.failure = "non-integral coefficient of q^" + std::to_string(d) + ": " +
                       coeffs[d].str();
      return result;
    }
    cpp_int num = numerator(coeffs[d]);
    if (num > std::numeric_limits<long long>::max() || num < std::numeric_limits<long long>::min()) {
      result.failure = "coefficient of q^" + std::to_string(d) + " exceeds 64 bits";
      return result;
    }
    ints.push_back(static_cast<long long>(num));
  }
  QPolynomial poly(std::move(ints));
  std::size_t idx = 0;
  for (const auto& [q, count] : samples) {
    if (idx++ < need) continue;
    cpp_int value = 0;
    for (auto it = poly.coefficients().rbegin(); it != poly.coefficients().rend(); ++it)
      value = value * q + *it;
    if (value != cpp_int(count)) {
      result.failure = "polynomial " + poly.to_string() + " predicts " + value.str() + " at q=" +
                       std::to_string(q) + " but the sample is " + std::to_string(count);
      return result;
    }
  }
  result.polynomial = std::move(poly);
  return result;
}

std::vector<std::uint32_t> first_primes(std::size_t k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 2; out.size() < k; ++c)
    if (is_prime(c)) out.push_back(c);
  return out;
}

std::uint32_t next_prime_after(std::uint32_t p) {
  std::uint32_t c = p + 1;
  while (!is_prime(c)) ++c;
  return c;
}

PrimeSchedule::PrimeSchedule(std::vector<std::uint32_t> primes, std::optional<std::uint32_t> holdout)
    : primes_(std::move(primes)), holdout_(holdout) {
  std::set<std::uint32_t> seen;
  for (auto p : primes_) {
    if (!is_prime(p)) throw std::invalid_argument("schedule entry is not prime: " + std::to_string(p));
    if (!seen.insert(p).second)
      throw std::invalid_argument("schedule repeats prime " + std::to_string(p));
  }
  if (holdout_) {
    if (!is_prime(*holdout_))
      throw std::invalid_argument("held-out value is not prime: " + std::to_string(*holdout_));
    if (seen.count(*holdout_))
      throw std::invalid_argument("held-out prime " + std::to_string(*holdout_) +
                                  " also appears in the schedule");
  }
}

std::vector<std::uint32_t> PrimeSchedule::take(std::size_t count) const {
  if (primes_.empty()) {
    auto ps = first_primes(count + (holdout_ ? 1 : 0));
    if (holdout_) {
      ps.erase(std::remove(ps.begin(), ps.end(), *holdout_), ps.end());
      ps.resize(count);
    }
    return ps;
  }
  if (primes_.size() < count)
    throw std::invalid_argument("prime schedule has " + std::to_string(primes_.size()) +
                                " primes but " + std::to_string(count) + " are needed");
  return {primes_.begin(), primes_.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::uint32_t PrimeSchedule::holdout_for(std::size_t count) const {
  if (holdout_) return *holdout_;
  auto used = take(count);
  std::uint32_t candidate = used.empty() ? 2 : *std::max_element(used.begin(), used.end());
  if (used.empty()) return candidate;
  do {
    candidate = next_prime_after(candidate);
  } while (std::find(primes_.begin(), primes_.end(), candidate) != primes_.end());
  return candidate;
}

}  // namespace enpave
