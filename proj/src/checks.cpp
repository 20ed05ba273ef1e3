#include "enpave/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>

namespace enpave {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

nlohmann::json CheckReport::to_json(bool with_timing) const {
  nlohmann::json j{{"check", name},
                   {"inputs", inputs},
                   {"verdict", to_string(verdict)},
                   {"witness", witness},
                   {"notes", notes}};
  if (with_timing) j["millis"] = millis;
  return j;
}

std::string CheckReport::witness_digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : witness.dump()) h = (h ^ c) * 0x100000001b3ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(CheckReport& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    report_.millis = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
  }

 private:
  CheckReport& report_;
  std::chrono::steady_clock::time_point start_;
};

nlohmann::json bip_json(const Bipartition& b) {
  return {{"mu", b.mu.parts()}, {"nu", b.nu.parts()}};
}

void finish(CheckReport& r, bool ok) {
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  if (!ok && r.witness.empty()) r.witness["reason"] = "unspecified failure";
}

std::vector<std::uint32_t> extend_primes(std::vector<std::uint32_t> primes, std::size_t want) {
  std::uint32_t last = primes.empty() ? 1 : *std::max_element(primes.begin(), primes.end());
  while (primes.size() < want) {
    last = next_prime_after(last);
    primes.push_back(last);
  }
  return primes;
}

std::size_t intersection_dim_with_coordinates(const SubspaceGF& w,
                                              const std::vector<std::size_t>& coords) {
  return intersect(w, SubspaceGF::coordinate(w.field(), w.ambient_dim(), coords)).dim();
}

}  // namespace

// ------------------------------------------------------------ polynomial

CheckReport check_polynomial_count(const Bipartition& big, const Bipartition& small,
                                   const CheckOptions& options, FiberCounter& counter) {
  CheckReport r;
  r.name = "polynomial_count";
  r.inputs = {{"big", bip_json(big)}, {"small", bip_json(small)}};
  Stopwatch sw(r);
  if (!closure_contains(big, small, PrimeField(2), counter))
    throw std::invalid_argument("check_polynomial_count: " + small.to_string() +
                                " is not in the closure of " + big.to_string());
  SampledPolynomial poly = fiber_polynomial(big, small, options.schedule, counter);
  r.witness = poly.to_json();
  if (!poly.fit.ok()) r.witness["reason"] = "interpolation failed: " + poly.fit.failure;
  else if (!poly.fit.polynomial->has_nonnegative_coefficients())
    r.witness["reason"] = "negative coefficient";
  else if (!poly.holdout_ok)
    r.witness["reason"] = "held-out prime not reproduced";
  finish(r, poly.certifies_paving());
  return r;
}

// --------------------------------------------------------- alpha partition

CheckReport check_alpha_partition(const Bipartition& big, const Bipartition& small,
                                  std::vector<std::uint32_t> primes, FiberCounter& counter) {
  CheckReport r;
  r.name = "alpha_partition";
  r.inputs = {{"big", bip_json(big)}, {"small", bip_json(small)}, {"primes", primes}};
  Stopwatch sw(r);
  if (primes.empty()) throw std::invalid_argument("check_alpha_partition: no primes");
  const FlagShape shape = flag_shape(big);
  const int bound = fiber_dimension_bound(shape);
  const std::size_t given = primes.size();
  primes = extend_primes(std::move(primes), static_cast<std::size_t>(bound) + 2);
  if (primes.size() > given)
    r.notes.push_back("prime list extended to " + std::to_string(primes.size()) +
                      " primes for per-piece interpolation");

  // profile -> prime -> count
  std::map<std::vector<int>, std::map<std::uint32_t, std::uint64_t>> pieces;
  nlohmann::json sums = nlohmann::json::object();
  bool ok = true;
  for (auto p : primes) {
    const PrimeField field(p);
    NormalPair np = normal_pair(small, field);
    // P preserves the filtration V^{>=w}.
    std::vector<std::vector<std::size_t>> filtration;
    for (int w : distinct_weights(np.weights)) {
      std::vector<std::size_t> coords;
      for (std::size_t i = 0; i < np.dim(); ++i)
        if (np.weights[i] >= w) coords.push_back(i);
      filtration.push_back(std::move(coords));
    }
    std::map<std::vector<int>, std::uint64_t> local;
    std::uint64_t enumerated = 0;
    for_each_fiber_flag(np.v, np.x, shape, nullptr, [&](const Flag& flag) {
      std::vector<int> profile;
      for (std::size_t i = 1; i + 1 < flag.size(); ++i)
        for (const auto& coords : filtration)
          profile.push_back(static_cast<int>(intersection_dim_with_coordinates(flag[i], coords)));
      ++local[profile];
      ++enumerated;
    });
    const std::uint64_t total = counter.count(np, shape);
    std::uint64_t piece_sum = 0;
    for (const auto& [profile, c] : local) {
      pieces[profile][p] = c;
      piece_sum += c;
    }
    sums[std::to_string(p)] = {{"total", total}, {"piece_sum", piece_sum}, {"pieces", local.size()}};
    if (piece_sum != total || enumerated != total) {
      ok = false;
      r.witness["reason"] = "piece counts do not add up to the fiber count at p=" + std::to_string(p);
    }
  }
  nlohmann::json piece_json = nlohmann::json::array();
  for (auto& [profile, by_prime] : pieces) {
    for (auto p : primes) by_prime.try_emplace(p, 0);
    InterpolationResult fit = interpolate_qpoly(by_prime, bound);
    nlohmann::json pj{{"profile", profile}};
    if (fit.ok()) {
      pj["polynomial"] = fit.polynomial->to_string();
      if (!fit.polynomial->has_nonnegative_coefficients()) {
        ok = false;
        r.witness["reason"] = "piece polynomial has a negative coefficient";
      }
    } else {
      pj["failure"] = fit.failure;
      ok = false;
      r.witness["reason"] = "piece count is not polynomial";
    }
    piece_json.push_back(std::move(pj));
  }
  r.witness["sums"] = sums;
  r.witness["pieces"] = piece_json;
  finish(r, ok);
  return r;
}

// ---------------------------------------------------- distinguished lemma

DecompositionSearch search_decomposition(const GradedPair& pair, std::uint64_t budget) {
  DecompositionSearch out;
  const auto& f = pair.field();
  const std::size_t n = pair.dim();
  auto ws = distinct_weights(pair.weights);
  std::reverse(ws.begin(), ws.end());  // x raises weight, so fix the top first

  struct Choice {
    int weight;
    SubspaceGF a;
    SubspaceGF b;
  };
  std::vector<Choice> chosen;
  chosen.reserve(ws.size());  // `above` pointers must stay valid
  auto chosen_at = [&](int w) -> const Choice* {
    for (const auto& c : chosen)
      if (c.weight == w) return &c;
    return nullptr;
  };
  auto assemble = [&](bool first) {
    std::vector<VectorGF> gens;
    for (const auto& c : chosen) {
      const SubspaceGF& s = first ? c.a : c.b;
      for (std::size_t i = 0; i < s.dim(); ++i) gens.push_back(s.basis_vector(i));
    }
    return SubspaceGF::span(f, n, gens);
  };

  std::function<bool(std::size_t)> rec = [&](std::size_t idx) -> bool {
    if (idx == ws.size()) {
      Decomposition d{assemble(true), assemble(false), 's', 0};
      if (d.v1.dim() == 0 || d.v2.dim() == 0) return false;
      if (!decomposition_defects(pair, d).empty()) return false;
      out.found = std::move(d);
      return true;
    }
    const int w = ws[idx];
    const SubspaceGF space = weight_space(f, pair.weights, w);
    std::vector<std::size_t> space_coords = space.pivots();
    const Choice* above = chosen_at(w + 1);
    for (std::size_t d = 0; d <= space.dim(); ++d) {
      bool stop = false;
      for_each_subspace(space, d, [&](const SubspaceGF& a) -> bool {
        if (w == 0 && !a.contains(pair.v)) return true;
        if (above && !above->a.contains(image_of(pair.x, a))) return true;
        // complements of a inside the weight space: graphs of maps into a
        std::vector<std::size_t> free;
        for (auto c : space_coords)
          if (!std::binary_search(a.pivots().begin(), a.pivots().end(), c)) free.push_back(c);
        const std::size_t cells = free.size() * d;
        std::vector<Elem> phi(cells, 0);
        while (true) {
          if (++out.nodes > budget) {
            out.exhausted = true;
            stop = true;
            return false;
          }
          std::vector<VectorGF> gens;
          for (std::size_t t = 0; t < free.size(); ++t) {
            VectorGF u(n, 0);
            u[free[t]] = 1;
            for (std::size_t s = 0; s < d; ++s) {
              Elem coef = phi[t * d + s];
              if (!coef) continue;
              for (std::size_t k = 0; k < n; ++k)
                u[k] = f.add(u[k], f.mul(coef, a.basis()(s, k)));
            }
            gens.push_back(std::move(u));
          }
          SubspaceGF b = SubspaceGF::span(f, n, gens);
          if (!above || above->b.contains(image_of(pair.x, b))) {
            chosen.push_back({w, a, b});
            bool done = rec(idx + 1);
            chosen.pop_back();
            if (done || out.exhausted) {
              stop = true;
              return false;
            }
          }
          std::size_t pos = 0;
          for (; pos < cells; ++pos) {
            if (++phi[pos] < f.p()) break;
            phi[pos] = 0;
          }
          if (pos == cells) return true;
        }
      });
      if (stop) return out.found.has_value();
    }
    return false;
  };
  rec(0);
  return out;
}

CheckReport check_distinguished_lemma(const Bipartition& b, PrimeField field,
                                      std::uint64_t budget) {
  CheckReport r;
  r.name = "distinguished_lemma";
  r.inputs = {{"bipartition", bip_json(b)}, {"p", field.p()}, {"budget", budget}};
  Stopwatch sw(r);
  NormalPair np = normal_pair(b, field);
  DecompositionSearch search = search_decomposition(np.graded(), budget);
  const bool predicate = is_distinguished(b);
  r.witness["predicate_distinguished"] = predicate;
  r.witness["search_nodes"] = search.nodes;
  if (search.exhausted && !search.found) {
    r.verdict = Verdict::budget_exhausted;
    r.witness["reason"] = "search budget exhausted before the space was covered";
    return r;
  }
  r.witness["decomposition_found"] = search.found.has_value();
  if (search.found) r.witness["found"] = search.found->to_json();
  bool ok = search.found.has_value() == !predicate;
  if (!ok) r.witness["reason"] = "search result disagrees with is_distinguished";
  if (!predicate) {
    Decomposition d = explicit_decomposition(np);
    auto defects = decomposition_defects(np.graded(), d);
    r.witness["explicit"] = d.to_json();
    r.witness["explicit_defects"] = defects;
    if (!defects.empty()) {
      ok = false;
      r.witness["reason"] = "explicit decomposition violates the splitting conditions";
    }
  }
  finish(r, ok);
  return r;
}

// ----------------------------------------------------------- split product

namespace {

std::vector<int> distinct_in_order(const std::vector<int>& xs) {
  std::vector<int> out;
  for (int x : xs)
    if (out.empty() || out.back() != x) out.push_back(x);
  return out;
}

// All splittings r_i = a_i + b_i with a, b nondecreasing, a_m = d1, b_m = d2.
void for_each_profile(const std::vector<int>& dims, int d1, int d2,
                      const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> a{0};
  std::function<void()> rec = [&]() {
    const std::size_t i = a.size();
    if (i == dims.size()) {
      if (a.back() == d1) visit(a);
      return;
    }
    const int prev_a = a.back();
    const int prev_b = dims[i - 1] - prev_a;
    for (int ai = prev_a; ai <= d1; ++ai) {
      const int bi = dims[i] - ai;
      if (bi < prev_b || bi > d2) continue;
      a.push_back(ai);
      rec();
      a.pop_back();
    }
  };
  rec();
}

MatrixGF block(const MatrixGF& m, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
  MatrixGF out(m.field(), rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(r0 + r, c0 + c);
  return out;
}

}  // namespace

CheckReport check_split_product(const Bipartition& b, const Bipartition& big, PrimeField field) {
  CheckReport r;
  r.name = "split_product";
  r.inputs = {{"bipartition", bip_json(b)}, {"big", bip_json(big)}, {"p", field.p()}};
  Stopwatch sw(r);
  if (b.n() != big.n()) throw std::invalid_argument("check_split_product: sizes differ");
  NormalPair np = normal_pair(b, field);
  Decomposition dec = explicit_decomposition(np);
  r.witness["decomposition"] = dec.to_json();

  // Weight-homogeneous basis: V1 first, then V2.
  std::vector<VectorGF> cols;
  std::vector<int> lambda;
  for (const SubspaceGF* part : {&dec.v1, &dec.v2})
    for (int w : distinct_weights(np.weights)) {
      SubspaceGF piece = intersect(*part, weight_space(field, np.weights, w));
      for (std::size_t i = 0; i < piece.dim(); ++i) {
        cols.push_back(piece.basis_vector(i));
        lambda.push_back(w);
      }
    }
  const std::size_t n = np.dim();
  const std::size_t d1 = dec.v1.dim();
  const std::size_t d2 = dec.v2.dim();
  if (cols.size() != n) throw std::logic_error("check_split_product: decomposition is not graded");
  MatrixGF basis = MatrixGF::from_columns(field, n, cols);
  MatrixGF inv = basis.inverse();
  MatrixGF x = inv * np.x * basis;
  VectorGF v = inv.apply(np.v);
  std::vector<int> joint(n);
  for (std::size_t i = 0; i < n; ++i) joint[i] = 2 * lambda[i] + (i < d1 ? 0 : 1);

  MatrixGF x1 = block(x, 0, 0, d1, d1);
  MatrixGF x2 = block(x, d1, d1, d2, d2);
  if (!block(x, 0, d1, d1, d2).is_zero() || !block(x, d1, 0, d2, d1).is_zero())
    throw std::logic_error("check_split_product: x does not preserve the splitting");
  VectorGF v1(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d1));
  std::vector<int> lambda1(lambda.begin(), lambda.begin() + static_cast<std::ptrdiff_t>(d1));
  std::vector<int> lambda2(lambda.begin() + static_cast<std::ptrdiff_t>(d1), lambda.end());

  const FlagShape shape = flag_shape(big);
  std::vector<std::size_t> first_coords(d1);
  for (std::size_t i = 0; i < d1; ++i) first_coords[i] = i;
  std::vector<std::size_t> second_coords(d2);
  for (std::size_t i = 0; i < d2; ++i) second_coords[i] = d1 + i;

  std::map<std::vector<int>, std::uint64_t> lhs;
  std::uint64_t enumerated = 0;
  bool ok = true;
  for_each_fiber_flag(v, x, shape, &joint, [&](const Flag& flag) {
    std::vector<int> a;
    for (const auto& w : flag) {
      const auto a_dim = intersection_dim_with_coordinates(w, first_coords);
      const auto b_dim = intersection_dim_with_coordinates(w, second_coords);
      if (a_dim + b_dim != w.dim()) {
        ok = false;
        r.witness["reason"] = "a (chi, lambda)-fixed flag is not split by V1 + V2";
      }
      a.push_back(static_cast<int>(a_dim));
    }
    ++lhs[a];
    ++enumerated;
  });
  const std::uint64_t total = count_lambda_fixed(GradedPair{v, x, joint}, shape);

  nlohmann::json rows = nlohmann::json::array();
  std::uint64_t rhs_total = 0;
  bool used_zero_marker = false;
  for_each_profile(shape.dims(), static_cast<int>(d1), static_cast<int>(d2),
                   [&](const std::vector<int>& a) {
    std::vector<int> bdims(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) bdims[i] = shape.dims()[i] - a[i];
    const auto rho1 = distinct_in_order(a);
    const auto rho2 = distinct_in_order(bdims);
    const int aj = a[static_cast<std::size_t>(shape.marker())];
    const int j1 = static_cast<int>(std::find(rho1.begin(), rho1.end(), aj) - rho1.begin());
    if (j1 == 0) used_zero_marker = true;
    const std::uint64_t left_factor =
        count_lambda_fixed(GradedPair{v1, x1, lambda1}, FlagShape(rho1, j1));
    const std::uint64_t right_factor =
        count_lambda_fixed(GradedPair{VectorGF(d2, 0), x2, lambda2}, FlagShape(rho2, 0));
    const std::uint64_t rhs = left_factor * right_factor;
    const std::uint64_t l = lhs.count(a) ? lhs.at(a) : 0;
    rhs_total += rhs;
    if (l != rhs) {
      ok = false;
      r.witness["reason"] = "profile count differs from the product of the factor counts";
    }
    rows.push_back({{"profile", a}, {"fixed", l}, {"rho1", rho1}, {"j1", j1}, {"rho2", rho2},
                    {"factor1", left_factor}, {"factor2", right_factor}});
  });
  // every enumerated flag must belong to some admissible profile
  std::uint64_t covered = 0;
  for (const auto& row : rows) covered += row["fixed"].get<std::uint64_t>();
  if (covered != enumerated || total != enumerated || rhs_total != total) {
    ok = false;
    r.witness["reason"] = "profile totals are inconsistent with the fixed-point count";
  }
  if (used_zero_marker)
    r.notes.push_back("profiles with dim(W_j cap V1) = 0 use marker j' = 0");
  r.witness["profiles"] = rows;
  r.witness["fixed_total"] = total;
  r.witness["product_total"] = rhs_total;
  finish(r, ok);
  return r;
}

// --------------------------------------------------------- kernel recursion

CheckReport check_kernel_recursion(const Bipartition& b, const FlagShape& shape, PrimeField field) {
  CheckReport r;
  r.name = "kernel_recursion";
  r.inputs = {{"bipartition", bip_json(b)}, {"dims", shape.dims()}, {"j", shape.marker()},
              {"p", field.p()}};
  Stopwatch sw(r);
  if (!is_distinguished(b) || b.mu.empty())
    throw std::invalid_argument("check_kernel_recursion: needs a distinguished pair with alpha nonempty");
  NormalPair np = normal_pair(b, field);
  const SubspaceGF ker = np.x.kernel();
  std::vector<SubspaceGF> lines;
  nlohmann::json mult = nlohmann::json::object();
  bool ok = true;
  for (int w : distinct_weights(np.weights)) {
    SubspaceGF piece = intersect(ker, weight_space(field, np.weights, w));
    if (piece.dim() == 0) continue;
    mult[std::to_string(w)] = piece.dim();
    if (piece.dim() != 1) {
      ok = false;
      r.witness["reason"] = "kernel weight space of weight " + std::to_string(w) + " is not a line";
    }
    lines.push_back(std::move(piece));
  }
  r.witness["kernel_weight_multiplicities"] = mult;

  std::uint64_t lhs = 0;
  for_each_fiber_flag(np.v, np.x, shape, &np.weights, [&](const Flag&) { ++lhs; });

  std::uint64_t rhs = 0;
  std::size_t subsets = 0;
  const std::size_t r1 = shape.length() > 0 ? static_cast<std::size_t>(shape.dims()[1]) : 0;
  if (shape.length() == 0) {
    rhs = 1;  // V = 0
  } else if (shape.marker() == 0 && !is_zero_vector(np.v)) {
    r.notes.push_back("marker 0 with v != 0: the fiber is empty");
  } else if (r1 <= lines.size()) {
    const FlagShape reduced = shape.reduced();
    std::vector<bool> pick(lines.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(r1), true);
    do {
      ++subsets;
      std::vector<VectorGF> gens;
      for (std::size_t i = 0; i < lines.size(); ++i)
        if (pick[i]) gens.push_back(lines[i].basis_vector(0));
      SubspaceGF w = SubspaceGF::span(field, np.dim(), gens);
      auto keep = w.complement_coordinates();
      VectorGF red = w.reduce(np.v);
      VectorGF vbar(keep.size());
      std::vector<int> wbar(keep.size());
      for (std::size_t i = 0; i < keep.size(); ++i) {
        vbar[i] = red[keep[i]];
        wbar[i] = np.weights[keep[i]];
      }
      rhs += count_lambda_fixed(GradedPair{vbar, induced_map(np.x, w), wbar}, reduced);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  r.witness["kernel_lines"] = lines.size();
  r.witness["subsets"] = subsets;
  r.witness["lambda_fixed"] = lhs;
  r.witness["recursion_sum"] = rhs;
  if (lhs != rhs) {
    ok = false;
    r.witness["reason"] = "lambda-fixed count differs from the kernel-line recursion";
  }
  finish(r, ok);
  return r;
}

CheckReport check_regular_fixed_points(int n, PrimeField field) {
  CheckReport r;
  r.name = "regular_fixed_points";
  r.inputs = {{"n", n}, {"p", field.p()}};
  Stopwatch sw(r);
  NormalPair np = normal_pair(Bipartition{Partition{}, Partition(n > 0 ? std::vector<int>{n}
                                                                        : std::vector<int>{})},
                              field);
  GradedPair pair = np.graded();
  bool ok = true;
  std::size_t shapes = 0;
  nlohmann::json bad = nlohmann::json::array();
  // every composition of n, every marker
  std::vector<int> dims{0};
  std::function<void()> rec = [&]() {
    if (dims.back() == n) {
      for (int j = 0; j < static_cast<int>(dims.size()); ++j) {
        FlagShape shape(dims, j);
        ++shapes;
        auto c = count_lambda_fixed(pair, shape);
        if (c > 1) {
          ok = false;
          bad.push_back({{"dims", dims}, {"j", j}, {"count", c}});
        }
      }
      return;
    }
    for (int next = dims.back() + 1; next <= n; ++next) {
      dims.push_back(next);
      rec();
      dims.pop_back();
    }
  };
  rec();
  r.witness["shapes"] = shapes;
  if (!ok) {
    r.witness["reason"] = "a lambda-fixed fiber over the regular nilpotent has several points";
    r.witness["violations"] = bad;
  }
  finish(r, ok);
  return r;
}

// --------------------------------------------------------------- semismall

CheckReport check_semismall(const Bipartition& big, const CheckOptions& options,
                            FiberCounter& counter) {
  CheckReport r;
  r.name = "semismall";
  r.inputs = {{"big", bip_json(big)}};
  Stopwatch sw(r);
  const int dim_big = orbit_dimension(big);
  bool ok = true;
  nlohmann::json strata = nlohmann::json::array();
  for (const auto& small : bipartitions(big.n())) {
    if (!closure_contains(big, small, PrimeField(2), counter)) continue;
    SampledPolynomial poly = fiber_polynomial(big, small, options.schedule, counter);
    const int dim_small = orbit_dimension(small);
    nlohmann::json row{{"small", bip_json(small)}, {"orbit_dim", dim_small}};
    if (!poly.fit.ok() || !poly.holdout_ok) {
      ok = false;
      row["failure"] = poly.fit.ok() ? "held-out prime not reproduced" : poly.fit.failure;
      r.witness["reason"] = "fiber count is not polynomial";
    } else {
      const int deg = poly.fit.polynomial->degree();
      row["fiber_degree"] = deg;
      row["polynomial"] = poly.fit.polynomial->to_string();
      if (2 * deg > dim_big - dim_small) {
        ok = false;
        r.witness["reason"] = "2 dim fiber exceeds the codimension of the stratum";
      }
      row["relevant"] = 2 * deg == dim_big - dim_small;
    }
    strata.push_back(std::move(row));
  }
  r.witness["orbit_dim"] = dim_big;
  r.witness["strata"] = strata;
  finish(r, ok);
  return r;
}

CheckReport check_euler_bridge(const Bipartition& big, const Bipartition& small,
                               const CheckOptions& options, FiberCounter& counter) {
  CheckReport r;
  r.name = "euler_bridge";
  r.inputs = {{"big", bip_json(big)}, {"small", bip_json(small)}};
  Stopwatch sw(r);
  const FlagShape shape = flag_shape(big);
  SampledPolynomial total = fiber_polynomial(big, small, options.schedule, counter);
  SampledPolynomial fixed = sample_polynomial(
      [&](PrimeField f) { return count_lambda_fixed(normal_pair(small, f).graded(), shape); },
      fiber_dimension_bound(shape), options.schedule);
  r.witness["fiber"] = total.to_json();
  r.witness["lambda_fixed"] = fixed.to_json();
  bool ok = total.certifies_paving() && fixed.certifies_paving();
  if (!ok) {
    r.witness["reason"] = "a counting polynomial failed to certify";
  } else if (total.fit.polynomial->coefficient_sum() != fixed.fit.polynomial->coefficient_sum()) {
    ok = false;
    r.witness["reason"] = "cell counts differ between the fiber and its lambda-fixed locus";
  }
  finish(r, ok);
  return r;
}

CheckReport check_birational(const Bipartition& b, const std::vector<std::uint32_t>& primes,
                             FiberCounter& counter) {
  CheckReport r;
  r.name = "birational";
  r.inputs = {{"bipartition", bip_json(b)}, {"primes", primes}};
  Stopwatch sw(r);
  bool ok = true;
  nlohmann::json counts = nlohmann::json::object();
  for (auto p : primes) {
    const PrimeField f(p);
    auto c = counter.count(normal_pair(b, f), flag_shape(b));
    counts[std::to_string(p)] = c;
    if (c != 1) ok = false;
  }
  r.witness["counts"] = counts;
  if (!ok) r.witness["reason"] = "fiber over the open orbit is not a single point";
  finish(r, ok);
  return r;
}

}  // namespace enpave
