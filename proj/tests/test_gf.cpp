#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "enpave/gf.hpp"

using namespace enpave;

namespace {

VectorGF random_vector(std::mt19937& rng, const PrimeField& f, std::size_t n) {
  std::uniform_int_distribution<Elem> d(0, f.p() - 1);
  VectorGF u(n);
  for (auto& e : u) e = d(rng);
  return u;
}

SubspaceGF random_span(std::mt19937& rng, const PrimeField& f, std::size_t n, std::size_t k) {
  std::vector<VectorGF> gens;
  for (std::size_t i = 0; i < k; ++i) gens.push_back(random_vector(rng, f, n));
  return SubspaceGF::span(f, n, gens);
}

// Jordan string of length n: e_j -> e_{j-1}, e_1 -> 0.
MatrixGF shift(const PrimeField& f, std::size_t n) {
  MatrixGF m(f, n, n);
  for (std::size_t k = 1; k < n; ++k) m(k - 1, k) = 1;
  return m;
}

// Counts d-dimensional subspaces of GF(p)^m by collecting spans of all
// d-tuples of vectors. Independent of the pivot-pattern walker.
std::size_t brute_force_subspace_count(std::uint32_t p, std::size_t m, std::size_t d) {
  PrimeField f(p);
  std::vector<VectorGF> all;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= p;
  for (std::size_t code = 0; code < total; ++code) {
    VectorGF u(m);
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = static_cast<Elem>(c % p);
      c /= p;
    }
    all.push_back(u);
  }
  std::unordered_set<SubspaceGF> seen;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<VectorGF> gens;
    for (auto i : idx) gens.push_back(all[i]);
    auto s = SubspaceGF::span(f, m, gens);
    if (s.dim() == d) seen.insert(s);
    std::size_t k = 0;
    while (k < d && ++idx[k] == all.size()) idx[k++] = 0;
    if (k == d) break;
  }
  return seen.size();
}

}  // namespace

TEST_CASE("prime field arithmetic") {
  CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
  PrimeField f(7);
  CHECK(f.add(5, 4) == 2);
  CHECK(f.sub(2, 5) == 4);
  CHECK(f.mul(3, 5) == 1);
  CHECK(f.inv(3) == 5);
  CHECK(f.from_int(-1) == 6);
  CHECK(f.pow(3, 6) == 1);
  for (Elem a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
  PrimeField big(10007);
  for (Elem a = 1; a < 200; ++a) CHECK(big.mul(a, big.inv(a)) == 1);
}

TEST_CASE("rank, kernel and image examples") {
  PrimeField f2(2);
  auto k = MatrixGF(f2, 2, 2).kernel();
  CHECK(k.dim() == 2);
  CHECK(k == SubspaceGF::full(f2, 2));

  for (std::size_t n = 0; n <= 6; ++n) CHECK(MatrixGF::identity(f2, n).rank() == n);

  for (std::size_t n = 1; n <= 6; ++n) {
    auto ker = shift(f2, n).kernel();
    CHECK(ker.dim() == 1);
    VectorGF e1(n, 0);
    e1[0] = 1;
    CHECK(ker.contains(e1));
    CHECK(shift(f2, n).image().dim() == n - 1);
  }

  PrimeField f3(3);
  auto m = MatrixGF::from_rows(f3, {{1, 2, 0}, {2, 1, 0}, {0, 0, 1}});
  CHECK(m.rank() == 2);  // row 2 = 2 * row 1 mod 3
  auto inv = MatrixGF::identity(f3, 3);
  CHECK(MatrixGF::from_rows(f3, {{1, 1, 0}, {0, 1, 0}, {0, 0, 2}}).inverse() *
            MatrixGF::from_rows(f3, {{1, 1, 0}, {0, 1, 0}, {0, 0, 2}}) ==
        inv);
  CHECK_THROWS_AS(m.inverse(), std::domain_error);
}

TEST_CASE("rank-nullity on random matrices") {
  std::mt19937 rng(7);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeField f(p);
    for (int t = 0; t < 200; ++t) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      MatrixGF m(f, r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<Elem>(rng() % p);
      auto ker = m.kernel();
      CHECK(ker.dim() + m.rank() == c);
      CHECK(m.image().dim() == m.rank());
      for (std::size_t i = 0; i < ker.dim(); ++i) CHECK(is_zero_vector(m.apply(ker.basis_vector(i))));
    }
  }
}

TEST_CASE("subspace operations") {
  PrimeField f2(2);
  std::vector<std::size_t> a0{0}, a1{1};
  auto x_axis = SubspaceGF::coordinate(f2, 2, a0);
  auto y_axis = SubspaceGF::coordinate(f2, 2, a1);
  CHECK(sum(x_axis, y_axis) == SubspaceGF::full(f2, 2));
  CHECK(intersect(x_axis, y_axis).dim() == 0);

  std::mt19937 rng(11);
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int t = 0; t < 300; ++t) {
      std::size_t n = 1 + rng() % 6;
      auto s = random_span(rng, f, n, rng() % (n + 1));
      auto u = random_span(rng, f, n, rng() % (n + 1));
      CHECK(intersect(s, s) == s);
      auto i = intersect(s, u);
      auto su = sum(s, u);
      CHECK(s.dim() + u.dim() == su.dim() + i.dim());
      CHECK(s.contains(i));
      CHECK(u.contains(i));
      CHECK(su.contains(s));
      CHECK(su.contains(u));

      auto q = quotient_map(s);
      CHECK(q.rows() == n - s.dim());
      CHECK(q.rank() == n - s.dim());  // surjective
      CHECK(q.kernel() == s);
    }
  }

  for (std::size_t n = 0; n <= 5; ++n) {
    auto q = quotient_map(SubspaceGF::zero(f2, n));
    CHECK(q.rows() == n);
    CHECK(q.rank() == n);
  }
}

TEST_CASE("reduce and coordinates") {
  std::mt19937 rng(5);
  PrimeField f(3);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + rng() % 6;
    auto s = random_span(rng, f, n, rng() % (n + 1));
    auto u = random_vector(rng, f, n);
    auto r = s.reduce(u);
    for (auto piv : s.pivots()) CHECK(r[piv] == 0);
    // u - r lies in s
    VectorGF d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = f.sub(u[i], r[i]);
    CHECK(s.contains(d));
    auto c = s.coordinates(d);
    VectorGF back(n, 0);
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t k = 0; k < n; ++k) back[k] = f.add(back[k], f.mul(c[i], s.basis()(i, k)));
    CHECK(back == d);
    CHECK(s.complement_coordinates().size() == n - s.dim());
  }
}

TEST_CASE("restriction and induced maps") {
  PrimeField f(2);
  auto x = shift(f, 4);
  std::vector<std::size_t> first_two{0, 1};
  auto w = SubspaceGF::coordinate(f, 4, first_two);  // x-stable
  CHECK(restrict_map(x, w) == shift(f, 2));
  CHECK(induced_map(x, w) == shift(f, 2));
  std::vector<std::size_t> last{3};
  CHECK_THROWS(restrict_map(x, SubspaceGF::coordinate(f, 4, last)));
}

TEST_CASE("subspace enumeration matches Gaussian binomials") {
  PrimeField f2(2), f3(3);
  CHECK(subspaces(SubspaceGF::full(f2, 2), 1).size() == 3);
  CHECK(subspaces(SubspaceGF::full(f3, 2), 1).size() == 4);
  for (std::size_t m = 0; m <= 4; ++m) {
    auto zero = subspaces(SubspaceGF::full(f3, m), 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0] == SubspaceGF::zero(f3, m));
  }

  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (unsigned m = 0; m <= 5; ++m)
      for (unsigned d = 0; d <= m; ++d) {
        std::unordered_set<SubspaceGF> seen;
        std::size_t visits = 0;
        for_each_subspace(SubspaceGF::full(f, m), d, [&](const SubspaceGF& s) {
          ++visits;
          CHECK(s.dim() == d);
          seen.insert(s);
        });
        CHECK(visits == gaussian_binomial(m, d, p));
        CHECK(seen.size() == visits);
      }
  }
}

TEST_CASE("enumeration inside a proper subspace") {
  std::mt19937 rng(3);
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int t = 0; t < 30; ++t) {
      auto amb = random_span(rng, f, 5, 1 + rng() % 4);
      for (std::size_t d = 0; d <= amb.dim(); ++d) {
        std::unordered_set<SubspaceGF> seen;
        for_each_subspace(amb, d, [&](const SubspaceGF& s) {
          CHECK(amb.contains(s));
          CHECK(s.dim() == d);
          seen.insert(s);
        });
        CHECK(seen.size() == gaussian_binomial(static_cast<unsigned>(amb.dim()),
                                               static_cast<unsigned>(d), p));
      }
    }
  }
}

TEST_CASE("early stop of the walk") {
  PrimeField f(2);
  int seen = 0;
  bool finished = for_each_subspace(SubspaceGF::full(f, 4), 2, [&](const SubspaceGF&) {
    return ++seen < 5;
  });
  CHECK_FALSE(finished);
  CHECK(seen == 5);
}

TEST_CASE("gaussian binomial") {
  CHECK(gaussian_binomial(2, 1, 2) == 3);
  CHECK(gaussian_binomial(4, 2, 2) == 35);
  CHECK(brute_force_subspace_count(2, 4, 2) == 35);
  CHECK(brute_force_subspace_count(3, 3, 1) == gaussian_binomial(3, 1, 3));
  for (unsigned m = 0; m <= 8; ++m) CHECK(gaussian_binomial(m, 0, 5) == 1);
  CHECK(gaussian_binomial(3, 4, 2) == 0);
  CHECK_THROWS_AS(gaussian_binomial(60, 30, 10007), std::overflow_error);
}

TEST_CASE("canonical form of random spans") {
  std::mt19937 rng(2024);
  int trials = 0;
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int t = 0; t < 600; ++t, ++trials) {
      std::size_t n = 1 + rng() % 6;
      auto s = random_span(rng, f, n, rng() % (n + 2));
      // re-canonicalising is idempotent
      std::vector<VectorGF> basis;
      for (std::size_t i = 0; i < s.dim(); ++i) basis.push_back(s.basis_vector(i));
      CHECK(SubspaceGF::span(f, n, basis) == s);
      CHECK(SubspaceGF::row_space(s.basis()) == s);

      // a different spanning set of the same space gives the same representation
      std::vector<VectorGF> mixed;
      for (std::size_t k = 0; k < s.dim() + 2; ++k) {
        VectorGF u(n, 0);
        for (std::size_t i = 0; i < s.dim(); ++i) {
          Elem c = static_cast<Elem>(rng() % p);
          for (std::size_t j = 0; j < n; ++j) u[j] = f.add(u[j], f.mul(c, basis[i][j]));
        }
        mixed.push_back(u);
      }
      mixed.insert(mixed.end(), basis.begin(), basis.end());
      std::shuffle(mixed.begin(), mixed.end(), rng);
      auto s2 = SubspaceGF::span(f, n, mixed);
      CHECK(s2 == s);
      CHECK(s2.hash() == s.hash());
      CHECK(s2.pivots() == s.pivots());
    }
  }
  CHECK(trials >= 1000);
}

TEST_CASE("rank agreement over two large primes") {
  std::mt19937 rng(99);
  PrimeField a(101), b(10007);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
    std::vector<std::vector<long long>> rows(r, std::vector<long long>(c));
    for (auto& row : rows)
      for (auto& e : row) e = static_cast<long long>(rng() % 3) - 1;
    CHECK(MatrixGF::from_rows(a, rows).rank() == MatrixGF::from_rows(b, rows).rank());
  }
}

TEST_CASE("subspace json round trip") {
  std::mt19937 rng(1);
  PrimeField f(5);
  for (int t = 0; t < 50; ++t) {
    auto s = random_span(rng, f, 5, rng() % 6);
    auto j = s.to_json();
    CHECK(SubspaceGF::from_json(j) == s);
    CHECK(SubspaceGF::from_json(nlohmann::json::parse(j.dump())) == s);
  }
}
