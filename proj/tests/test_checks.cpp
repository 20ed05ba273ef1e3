#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "enpave/checks.hpp"

using namespace enpave;

namespace {

Bipartition bp(std::vector<int> mu, std::vector<int> nu) {
  return Bipartition{Partition(std::move(mu)), Partition(std::move(nu))};
}

std::string label(const CheckReport& r) { return r.name + " " + r.inputs.dump(); }

}  // namespace

TEST_CASE("polynomial count") {
  FiberCounter counter;
  CheckOptions opts;
  auto r = check_polynomial_count(bp({}, {2}), bp({}, {1, 1}), opts, counter);
  CHECK(r.passed());
  CHECK(r.witness.at("polynomial_text") == "q+1");

  auto full = check_polynomial_count(bp({}, {3}), bp({}, {1, 1, 1}), opts, counter);
  CHECK(full.passed());
  CHECK(full.witness.at("polynomial_text") == "q^3+2q^2+2q+1");

  for (int n = 1; n <= 3; ++n)
    for (const auto& b : bipartitions(n)) {
      auto own = check_polynomial_count(b, b, opts, counter);
      CHECK(own.passed());
      CHECK(own.witness.at("polynomial_text") == "1");
    }

  CHECK_THROWS_AS(check_polynomial_count(bp({}, {2}), bp({1}, {1}), opts, counter),
                  std::invalid_argument);
}

TEST_CASE("failing reports carry a witness") {
  FiberCounter counter;
  CheckOptions opts;
  opts.schedule = PrimeSchedule({2, 3}, 7);  // degree bound 3 needs four primes
  CHECK_THROWS_AS(check_polynomial_count(bp({}, {3}), bp({}, {1, 1, 1}), opts, counter),
                  std::invalid_argument);

  CheckReport r;
  r.name = "x";
  CHECK_FALSE(r.passed());
  CHECK(r.witness_digest().size() == 16);
  auto j = r.to_json();
  CHECK(j.at("verdict") == "fail");
  CHECK_FALSE(j.contains("millis"));
  CHECK(r.to_json(true).contains("millis"));
}

TEST_CASE("birational") {
  FiberCounter counter;
  for (int n = 0; n <= 3; ++n)
    for (const auto& b : bipartitions(n)) CHECK(check_birational(b, {2, 3}, counter).passed());
}

TEST_CASE("alpha partition") {
  FiberCounter counter;
  auto own = check_alpha_partition(bp({1}, {1}), bp({1}, {1}), {2, 3, 5}, counter);
  CHECK(own.passed());
  CHECK(own.witness.at("pieces").size() == 1);

  auto p1 = check_alpha_partition(bp({}, {2}), bp({}, {1, 1}), {2}, counter);
  CHECK(p1.passed());
  const auto& at2 = p1.witness.at("sums").at("2");
  CHECK(at2.at("total") == 3);
  // all weights are -1 over (0, 0), so P is the whole group and P^1 is one orbit
  CHECK(at2.at("pieces") == 1);
  CHECK(p1.witness.at("pieces").at(0).at("polynomial") == "q+1");

  // with a nontrivial filtration the fiber splits into several P-orbits
  auto p2 = check_alpha_partition(bp({}, {3}), bp({}, {1, 1, 1}), {2, 3}, counter);
  CHECK(p2.passed());
  auto p3 = check_alpha_partition(bp({}, {3}), bp({}, {2, 1}), {2, 3}, counter);
  CHECK(p3.passed());
  REQUIRE(p3.witness.at("pieces").size() == 2);
  CHECK(p3.witness.at("pieces").at(0).at("polynomial") == "q");
  CHECK(p3.witness.at("pieces").at(1).at("polynomial") == "q+1");
  CHECK_FALSE(p1.notes.empty());  // prime list was extended

  for (int n = 1; n <= 3; ++n)
    for (const auto& big : bipartitions(n))
      for (const auto& small : bipartitions(n)) {
        auto r = check_alpha_partition(big, small, {2, 3, 5}, counter);
        CHECK_MESSAGE(r.passed(), label(r));
      }
}

TEST_CASE("decomposition search") {
  PrimeField f2(2);
  auto none = search_decomposition(normal_pair(bp({}, {3}), f2).graded(), 1'000'000);
  CHECK_FALSE(none.found);
  CHECK_FALSE(none.exhausted);

  auto np = normal_pair(bp({2, 2}, {1}), f2);
  auto some = search_decomposition(np.graded(), 1'000'000);
  REQUIRE(some.found);
  CHECK(decomposition_defects(np.graded(), *some.found).empty());

  auto tiny = search_decomposition(normal_pair(bp({2, 1}, {1, 1}), f2).graded(), 1);
  CHECK((tiny.exhausted || tiny.found));
}

TEST_CASE("distinguished lemma") {
  PrimeField f2(2);
  auto reg = check_distinguished_lemma(bp({}, {3}), f2);
  CHECK(reg.passed());
  CHECK(reg.witness.at("decomposition_found") == false);

  auto b = check_distinguished_lemma(bp({2, 2}, {1}), f2);
  CHECK(b.passed());
  CHECK(b.witness.at("explicit").at("construction") == "b");

  for (int n = 1; n <= 4; ++n)
    for (const auto& bb : bipartitions(n)) {
      auto r = check_distinguished_lemma(bb, f2);
      CHECK_MESSAGE(r.passed(), label(r));
    }

  auto starved = check_distinguished_lemma(bp({}, {4}), f2, 1);
  CHECK(starved.verdict == Verdict::budget_exhausted);
}

TEST_CASE("split product") {
  PrimeField f2(2), f3(3);
  auto r = check_split_product(bp({1, 1}, {}), bp({1, 1}, {}), f2);
  CHECK(r.passed());
  CHECK(r.witness.at("fixed_total") == r.witness.at("product_total"));

  int runs = 0;
  for (auto f : {f2, f3})
    for (int n = 1; n <= 3; ++n)
      for (const auto& b : bipartitions(n)) {
        if (is_distinguished(b)) continue;
        for (const auto& big : bipartitions(n)) {
          auto rep = check_split_product(b, big, f);
          CHECK_MESSAGE(rep.passed(), label(rep));
          ++runs;
        }
      }
  CHECK(runs > 0);
  CHECK_THROWS(check_split_product(bp({}, {2}), bp({}, {2}), f2));
}

TEST_CASE("kernel recursion") {
  PrimeField f2(2), f3(3);
  auto r = check_kernel_recursion(bp({2}, {1}), flag_shape(bp({2}, {1})), f2);
  CHECK(r.passed());
  // agrees with a direct lambda-fixed count
  auto np = normal_pair(bp({2}, {1}), f2);
  CHECK(r.witness.at("lambda_fixed") == count_lambda_fixed(np.graded(), flag_shape(bp({2}, {1}))));

  // r_1 larger than the number of kernel lines: both sides vanish
  auto wide = check_kernel_recursion(bp({2}, {1}), FlagShape({0, 2, 3}, 1), f2);
  CHECK(wide.passed());
  CHECK(wide.witness.at("kernel_lines") == 1);
  CHECK(wide.witness.at("lambda_fixed") == 0);

  CHECK_THROWS_AS(check_kernel_recursion(bp({}, {3}), FlagShape::full(3, 0), f2),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_kernel_recursion(bp({2, 2}, {1}), FlagShape::full(5, 0), f2),
                  std::invalid_argument);

  for (auto f : {f2, f3})
    for (int n = 1; n <= 3; ++n)
      for (const auto& b : bipartitions(n)) {
        if (!is_distinguished(b) || b.mu.length() == 0) continue;
        for (const auto& big : bipartitions(n)) {
          auto rep = check_kernel_recursion(b, flag_shape(big), f);
          CHECK_MESSAGE(rep.passed(), label(rep));
        }
      }
}

TEST_CASE("regular nilpotent fixed points") {
  for (int n = 1; n <= 4; ++n) CHECK(check_regular_fixed_points(n, PrimeField(3)).passed());
}

TEST_CASE("semismall") {
  FiberCounter counter;
  CheckOptions opts;
  auto r = check_semismall(bp({}, {2}), opts, counter);
  CHECK(r.passed());
  bool saw_relevant_zero = false;
  for (const auto& s : r.witness.at("strata"))
    if (s.at("small") == nlohmann::json{{"mu", nlohmann::json::array()}, {"nu", {1, 1}}}) {
      CHECK(s.at("fiber_degree") == 1);
      CHECK(s.at("relevant") == true);
      saw_relevant_zero = true;
    }
  CHECK(saw_relevant_zero);
  for (int n = 1; n <= 3; ++n)
    for (const auto& b : bipartitions(n)) CHECK(check_semismall(b, opts, counter).passed());
}

TEST_CASE("euler bridge") {
  FiberCounter counter;
  CheckOptions opts;
  for (int n = 1; n <= 3; ++n)
    for (const auto& big : bipartitions(n))
      for (const auto& small : bipartitions(n)) {
        if (!closure_contains(big, small, PrimeField(2), counter)) continue;
        auto r = check_euler_bridge(big, small, opts, counter);
        CHECK_MESSAGE(r.passed(), label(r));
      }
}

TEST_CASE("reports are reproducible") {
  FiberCounter a, b;
  CheckOptions opts;
  auto r1 = check_semismall(bp({1}, {1, 1}), opts, a);
  auto r2 = check_semismall(bp({1}, {1, 1}), opts, b);
  CHECK(r1.to_json().dump() == r2.to_json().dump());
  CHECK(r1.witness_digest() == r2.witness_digest());
}
