#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <stdexcept>

#include "enpave/fiber.hpp"
#include "enpave/parallel.hpp"

using namespace enpave;

namespace {

Bipartition bp(std::vector<int> mu, std::vector<int> nu) {
  return Bipartition{Partition(std::move(mu)), Partition(std::move(nu))};
}

// Direct enumeration of all chains W_1 < ... < W_{m-1} in V, testing the
// fiber conditions on each full flag. Shares only the subspace walker with
// the library recursion.
std::uint64_t brute_force_count(const VectorGF& v, const MatrixGF& x, const FlagShape& shape) {
  const auto& f = x.field();
  const auto n = x.rows();
  const auto& dims = shape.dims();
  std::uint64_t total = 0;
  Flag flag{SubspaceGF::zero(f, n)};
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (i == dims.size()) {
      for (std::size_t k = 1; k < flag.size(); ++k)
        if (!flag[k - 1].contains(image_of(x, flag[k]))) return;
      if (!flag[static_cast<std::size_t>(shape.marker())].contains(v)) return;
      ++total;
      return;
    }
    for_each_subspace(SubspaceGF::full(f, n), static_cast<std::size_t>(dims[i]),
                      [&](const SubspaceGF& w) {
                        if (!w.contains(flag.back())) return;
                        flag.push_back(w);
                        extend(i + 1);
                        flag.pop_back();
                      });
  };
  extend(1);
  return total;
}

std::vector<FlagShape> all_shapes(int n) {
  std::vector<FlagShape> out;
  if (n == 0) {
    out.emplace_back(std::vector<int>{0}, 0);
    return out;
  }
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> dims{0};
    for (int k = 1; k < n; ++k)
      if (mask & (1u << (k - 1))) dims.push_back(k);
    dims.push_back(n);
    for (int j = 0; j < static_cast<int>(dims.size()); ++j) out.emplace_back(dims, j);
  }
  return out;
}

MatrixGF permutation_matrix(const PrimeField& f, const std::vector<std::size_t>& perm) {
  MatrixGF m(f, perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) m(perm[i], i) = 1;
  return m;
}

}  // namespace

TEST_CASE("fiber count examples") {
  PrimeField f2(2), f3(3);
  MatrixGF zero2(f2, 2, 2);
  CHECK(count_fiber(VectorGF(2, 0), zero2, FlagShape({0, 1, 2}, 0)) == 3);

  // subregular nilpotent in n = 3: Jordan type (2,1)
  auto sub2 = normal_pair(bp({}, {2, 1}), f2);
  auto sub3 = normal_pair(bp({}, {2, 1}), f3);
  CHECK(count_fiber(sub2.v, sub2.x, FlagShape::full(3, 0)) == 5);
  CHECK(count_fiber(sub3.v, sub3.x, FlagShape::full(3, 0)) == 7);

  MatrixGF zero3(f2, 3, 3);
  CHECK(count_fiber(VectorGF(3, 0), zero3, FlagShape::full(3, 0)) == 21);
  CHECK(count_fiber(VectorGF(3, 0), MatrixGF(f3, 3, 3), FlagShape::full(3, 0)) == 52);

  // v != 0 cannot lie in W_0
  CHECK(count_fiber(VectorGF{1, 0}, zero2, FlagShape({0, 1, 2}, 0)) == 0);

  CHECK_THROWS_AS(count_fiber(VectorGF(2, 0), zero2, FlagShape({0, 3}, 0)), std::invalid_argument);
  CHECK_THROWS_AS(count_fiber(VectorGF(3, 0), zero2, FlagShape({0, 2}, 0)), std::invalid_argument);
}

TEST_CASE("recursion agrees with direct flag enumeration") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int n = 0; n <= 3; ++n)
      for (const auto& b : bipartitions(n)) {
        auto np = normal_pair(b, f);
        for (const auto& shape : all_shapes(n))
          CHECK_MESSAGE(count_fiber(np.v, np.x, shape) == brute_force_count(np.v, np.x, shape),
                        (b.to_string() + " " + shape.to_string()));
      }
  }
}

TEST_CASE("birationality over the own orbit") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int n = 0; n <= 4; ++n)
      for (const auto& b : bipartitions(n)) {
        auto np = normal_pair(b, f);
        CHECK_MESSAGE(count_fiber(np.v, np.x, flag_shape(b)) == 1, b.to_string());
      }
  }
}

TEST_CASE("trivial flag: one step") {
  // With W_1 = V, x(V) in W_0 = 0 forces x = 0; v in W_1 always holds.
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int n = 1; n <= 4; ++n)
      for (const auto& b : bipartitions(n)) {
        auto np = normal_pair(b, f);
        FlagShape one({0, n}, 1);
        CHECK(count_fiber(np.v, np.x, one) == (np.x.is_zero() ? 1u : 0u));
      }
  }
}

TEST_CASE("memoized counts agree with the plain recursion") {
  PrimeField f2(2);
  FiberCounter counter;
  for (int n = 0; n <= 4; ++n)
    for (const auto& b : bipartitions(n)) {
      auto np = normal_pair(b, f2);
      CHECK(counter.count(np, flag_shape(b)) == count_fiber(np.v, np.x, flag_shape(b)));
      for (const auto& big : bipartitions(n))
        CHECK(counter.count(np, flag_shape(big)) == count_fiber(np.v, np.x, flag_shape(big)));
    }
  auto before = counter.stats();
  CHECK(before.entries > 0);
  CHECK(before.misses > 0);
  auto np = normal_pair(bp({2}, {1, 1}), f2);
  counter.count(np, FlagShape::full(4, 2));
  counter.count(np, FlagShape::full(4, 2));
  auto after = counter.stats();
  CHECK(after.hits > before.hits);

  counter.clear();
  CHECK(counter.stats().entries == 0);
}

TEST_CASE("counts are invariant under change of basis") {
  std::mt19937 rng(17);
  PrimeField f2(2);
  for (int n = 1; n <= 4; ++n)
    for (const auto& b : bipartitions(n)) {
      auto np = normal_pair(b, f2);
      std::vector<std::size_t> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      for (int t = 0; t < 3; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        auto g = permutation_matrix(f2, perm);
        auto v = g.apply(np.v);
        auto x = g * np.x * g.inverse();
        for (const auto& big : bipartitions(n))
          CHECK(count_fiber(v, x, flag_shape(big)) == count_fiber(np.v, np.x, flag_shape(big)));
      }
    }
}

TEST_CASE("lambda-fixed counts") {
  PrimeField f3(3);
  for (int n = 1; n <= 4; ++n) {
    auto reg = normal_pair(bp({}, {n}), f3);
    for (const auto& shape : all_shapes(n)) {
      auto c = count_lambda_fixed(reg.graded(), shape);
      CHECK(c <= 1);
    }
  }
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int n = 0; n <= 3; ++n)
      for (const auto& b : bipartitions(n)) {
        auto np = normal_pair(b, f);
        for (const auto& shape : all_shapes(n)) {
          auto fixed = count_lambda_fixed(np.graded(), shape);
          CHECK(fixed <= count_fiber(np.v, np.x, shape));
          std::uint64_t visited = 0;
          for_each_fiber_flag(np.v, np.x, shape, &np.weights, [&](const Flag& flag) {
            ++visited;
            for (const auto& w : flag) CHECK(is_graded(w, np.weights));
          });
          CHECK(visited == fixed);
        }
      }
  }
}

TEST_CASE("fiber flags satisfy the defining conditions") {
  PrimeField f3(3);
  auto np = normal_pair(bp({1}, {1, 1}), f3);
  for (const auto& shape : all_shapes(3)) {
    std::uint64_t visited = 0;
    for_each_fiber_flag(np.v, np.x, shape, nullptr, [&](const Flag& flag) {
      ++visited;
      REQUIRE(flag.size() == shape.dims().size());
      for (std::size_t k = 0; k < flag.size(); ++k)
        CHECK(static_cast<int>(flag[k].dim()) == shape.dims()[k]);
      for (std::size_t k = 1; k < flag.size(); ++k) {
        CHECK(flag[k].contains(flag[k - 1]));
        CHECK(flag[k - 1].contains(image_of(np.x, flag[k])));
      }
      CHECK(flag[static_cast<std::size_t>(shape.marker())].contains(np.v));
    });
    CHECK(visited == count_fiber(np.v, np.x, shape));
  }
}

TEST_CASE("fiber dimension bound") {
  CHECK(fiber_dimension_bound(FlagShape::full(3, 0)) == 3);
  CHECK(fiber_dimension_bound(FlagShape({0, 4}, 0)) == 0);
  CHECK(fiber_dimension_bound(FlagShape({0, 1, 2, 5, 7, 9, 10}, 3)) == 40);
}

TEST_CASE("orbit dimension") {
  CHECK(orbit_dimension(bp({}, {1, 1})) == 0);
  CHECK(orbit_dimension(bp({1}, {})) == 1);
  CHECK(orbit_dimension(bp({}, {2})) == 2);
  // the open orbit is dense in V x N: n + n^2 - n
  for (int n = 1; n <= 5; ++n) CHECK(orbit_dimension(bp({n}, {})) == n * n);
}

TEST_CASE("closure containment") {
  PrimeField f2(2);
  FiberCounter counter;
  CHECK_FALSE(closure_contains(bp({}, {2}), bp({1}, {1}), f2, counter));
  CHECK(closure_contains(bp({}, {2}), bp({}, {1, 1}), f2, counter));
  CHECK(closure_contains(bp({1}, {}), bp({}, {1}), f2, counter));
  CHECK_FALSE(closure_contains(bp({}, {1}), bp({1}, {}), f2, counter));

  for (int n = 0; n <= 4; ++n) {
    auto all = bipartitions(n);
    for (const auto& big : all) {
      CHECK(closure_contains(big, big, f2, counter));
      for (const auto& small : all) {
        if (big == small || !closure_contains(big, small, f2, counter)) continue;
        CHECK_MESSAGE(orbit_dimension(big) > orbit_dimension(small),
                      (big.to_string() + " > " + small.to_string()));
        CHECK_FALSE(closure_contains(small, big, f2, counter));
      }
    }
  }
}

TEST_CASE("fiber polynomials and held-out prime") {
  FiberCounter counter;
  auto s = fiber_polynomial(bp({}, {2}), bp({}, {1, 1}), PrimeSchedule::standard(), counter);
  REQUIRE(s.fit.ok());
  CHECK(s.fit.polynomial->to_string() == "q+1");
  CHECK(s.degree_bound == 1);
  CHECK(s.holdout == 5);
  CHECK(s.holdout_count == 6);
  CHECK(s.holdout_ok);
  CHECK(s.certifies_paving());

  auto full = fiber_polynomial(bp({}, {3}), bp({}, {1, 1, 1}), PrimeSchedule::standard(), counter);
  REQUIRE(full.fit.ok());
  CHECK(full.fit.polynomial->to_string() == "q^3+2q^2+2q+1");
  CHECK(full.counts.at(2) == 21);
  CHECK(full.counts.at(3) == 52);
  CHECK(full.certifies_paving());

  auto sub = fiber_polynomial(bp({}, {3}), bp({}, {2, 1}), PrimeSchedule::standard(), counter);
  REQUIRE(sub.fit.ok());
  CHECK(sub.fit.polynomial->to_string() == "2q+1");

  for (int n = 1; n <= 3; ++n)
    for (const auto& big : bipartitions(n))
      for (const auto& small : bipartitions(n)) {
        auto sp = fiber_polynomial(big, small, PrimeSchedule::standard(), counter);
        CHECK_MESSAGE(sp.certifies_paving(), (big.to_string() + " over " + small.to_string()));
        // evaluate against a fresh, unmemoized count at the held-out prime
        auto np = normal_pair(small, PrimeField(sp.holdout));
        CHECK(static_cast<std::uint64_t>(sp.fit.polynomial->evaluate(sp.holdout)) ==
              count_fiber(np.v, np.x, flag_shape(big)));
      }

  auto j = s.to_json();
  CHECK(j.at("holdout").at("prime") == 5);
  CHECK(j.at("holdout").at("ok") == true);
}

TEST_CASE("cache persistence") {
  auto dir = std::filesystem::temp_directory_path() / "enpave_test_cache";
  std::filesystem::create_directories(dir);
  auto path = dir / "counts.jsonl";
  std::filesystem::remove(path);

  FiberCounter a;
  CHECK(a.load(path) == 0);
  PrimeField f3(3);
  for (const auto& b : bipartitions(3)) a.count(normal_pair(b, f3), FlagShape::full(3, 1));
  a.save(path);

  FiberCounter b;
  auto loaded = b.load(path);
  CHECK(loaded == a.stats().entries);
  for (const auto& bb : bipartitions(3))
    CHECK(b.count(normal_pair(bb, f3), FlagShape::full(3, 1)) ==
          a.count(normal_pair(bb, f3), FlagShape::full(3, 1)));
  CHECK(b.stats().misses == 0);

  // saving twice gives identical bytes
  auto path2 = dir / "counts2.jsonl";
  b.save(path2);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(path) == slurp(path2));

  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{\"format\":\"something-else\",\"version\":1}\n";
  }
  FiberCounter c;
  CHECK_THROWS(c.load(dir / "bad.jsonl"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("results do not depend on the number of threads") {
  std::vector<std::pair<Bipartition, Bipartition>> pairs;
  for (int n = 1; n <= 3; ++n)
    for (const auto& big : bipartitions(n))
      for (const auto& small : bipartitions(n)) pairs.emplace_back(big, small);

  auto run = [&](unsigned jobs) {
    FiberCounter counter;
    auto out = parallel_map(pairs.size(), jobs, [&](std::size_t i) {
      return fiber_polynomial(pairs[i].first, pairs[i].second, PrimeSchedule::standard(), counter)
          .to_json()
          .dump();
    });
    return out;
  };
  auto one = run(1);
  CHECK(run(4) == one);
  CHECK(run(8) == one);
}

TEST_CASE("parallel_map propagates exceptions") {
  CHECK_THROWS_AS(parallel_map(10, 3,
                               [](std::size_t i) -> int {
                                 if (i == 5) throw std::runtime_error("boom");
                                 return static_cast<int>(i);
                               }),
                  std::runtime_error);
  auto squares = parallel_map(6, 3, [](std::size_t i) { return i * i; });
  CHECK(squares == std::vector<std::size_t>{0, 1, 4, 9, 16, 25});
}
