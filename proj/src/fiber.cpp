#include "enpave/fiber.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace enpave {

namespace {

void validate(const VectorGF& v, const MatrixGF& x, const FlagShape& shape) {
  if (x.rows() != x.cols()) throw std::invalid_argument("fiber query: x is not square");
  if (v.size() != x.rows()) throw std::invalid_argument("fiber query: v and x disagree on dim V");
  if (static_cast<std::size_t>(shape.ambient_dim()) != x.rows())
    throw std::invalid_argument("fiber query: flag shape " + shape.to_string() +
                                " does not end at dim V = " + std::to_string(x.rows()));
  for (Elem e : v)
    if (e >= x.field().p()) throw std::invalid_argument("fiber query: v has entries outside GF(p)");
}

struct Quotient {
  VectorGF v;
  MatrixGF x;
  std::vector<int> labels;
  std::vector<std::size_t> keep;
};

Quotient quotient_by(const SubspaceGF& w, const VectorGF& v, const MatrixGF& x,
                     const std::vector<int>* labels) {
  auto keep = w.complement_coordinates();
  VectorGF red = w.reduce(v);
  VectorGF vbar(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) vbar[i] = red[keep[i]];
  std::vector<int> lbar;
  if (labels)
    for (auto c : keep) lbar.push_back((*labels)[c]);
  return {std::move(vbar), induced_map(x, w), std::move(lbar), std::move(keep)};
}

// Graded subspaces of dimension d inside a graded space, as sums of
// subspaces of its label components.
void for_each_graded_subspace(const SubspaceGF& space, const std::vector<int>& labels,
                              std::size_t d, const std::function<void(const SubspaceGF&)>& visit) {
  std::vector<SubspaceGF> pieces;
  for (int w : distinct_weights(labels)) {
    SubspaceGF piece = intersect(space, weight_space(space.field(), labels, w));
    if (piece.dim() > 0) pieces.push_back(std::move(piece));
  }
  std::vector<std::size_t> room(pieces.size() + 1, 0);
  for (std::size_t i = pieces.size(); i-- > 0;) room[i] = room[i + 1] + pieces[i].dim();
  std::vector<VectorGF> chosen;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx, std::size_t left) {
    if (left > room[idx]) return;
    if (idx == pieces.size()) {
      visit(SubspaceGF::span(space.field(), space.ambient_dim(), chosen));
      return;
    }
    for (std::size_t take = 0; take <= std::min(left, pieces[idx].dim()); ++take) {
      for_each_subspace(pieces[idx], take, [&](const SubspaceGF& s) {
        const std::size_t mark = chosen.size();
        for (std::size_t r = 0; r < s.dim(); ++r) chosen.push_back(s.basis_vector(r));
        rec(idx + 1, left - take);
        chosen.resize(mark);
      });
    }
  };
  rec(0, d);
}

void for_each_first_step(const SubspaceGF& ker, const std::vector<int>* labels, std::size_t d,
                         const std::function<void(const SubspaceGF&)>& visit) {
  if (labels)
    for_each_graded_subspace(ker, *labels, d, visit);
  else
    for_each_subspace(ker, d, visit);
}

std::uint64_t count_plain(const VectorGF& v, const MatrixGF& x, const std::vector<int>* labels,
                          std::span<const int> steps, int marker) {
  if (marker == 0 && !is_zero_vector(v)) return 0;
  if (steps.empty()) return 1;
  const SubspaceGF ker = x.kernel();
  std::uint64_t total = 0;
  for_each_first_step(ker, labels, static_cast<std::size_t>(steps[0]), [&](const SubspaceGF& w) {
    if (marker == 1 && !w.contains(v)) return;
    Quotient q = quotient_by(w, v, x, labels);
    total += count_plain(q.v, q.x, labels ? &q.labels : nullptr, steps.subspan(1),
                         std::max(marker - 1, 0));
  });
  return total;
}

void flags_rec(const VectorGF& v, const MatrixGF& x, const std::vector<int>* labels,
               std::span<const int> steps, int marker, const MatrixGF& lift, Flag& flag,
               const std::function<void(const Flag&)>& visit) {
  if (marker == 0 && !is_zero_vector(v)) return;
  if (steps.empty()) {
    visit(flag);
    return;
  }
  const SubspaceGF ker = x.kernel();
  for_each_first_step(ker, labels, static_cast<std::size_t>(steps[0]), [&](const SubspaceGF& w) {
    if (marker == 1 && !w.contains(v)) return;
    Quotient q = quotient_by(w, v, x, labels);
    std::vector<VectorGF> gens;
    const SubspaceGF& prev = flag.back();
    for (std::size_t i = 0; i < prev.dim(); ++i) gens.push_back(prev.basis_vector(i));
    for (std::size_t i = 0; i < w.dim(); ++i) gens.push_back(lift.apply(w.basis_vector(i)));
    flag.push_back(SubspaceGF::span(lift.field(), lift.rows(), gens));
    MatrixGF next_lift(lift.field(), lift.rows(), q.keep.size());
    for (std::size_t c = 0; c < q.keep.size(); ++c)
      for (std::size_t r = 0; r < lift.rows(); ++r) next_lift(r, c) = lift(r, q.keep[c]);
    flags_rec(q.v, q.x, labels ? &q.labels : nullptr, steps.subspan(1), std::max(marker - 1, 0),
              next_lift, flag, visit);
    flag.pop_back();
  });
}

}  // namespace

std::uint64_t count_fiber(const VectorGF& v, const MatrixGF& x, const FlagShape& shape) {
  validate(v, x, shape);
  const auto steps = shape.steps();
  return count_plain(v, x, nullptr, steps, shape.marker());
}

std::uint64_t count_lambda_fixed(const GradedPair& pair, const FlagShape& shape) {
  validate(pair.v, pair.x, shape);
  if (pair.weights.size() != pair.dim())
    throw std::invalid_argument("count_lambda_fixed: one weight per basis vector required");
  const auto steps = shape.steps();
  return count_plain(pair.v, pair.x, &pair.weights, steps, shape.marker());
}

void for_each_fiber_flag(const VectorGF& v, const MatrixGF& x, const FlagShape& shape,
                         const std::vector<int>* labels,
                         const std::function<void(const Flag&)>& visit) {
  validate(v, x, shape);
  if (labels && labels->size() != v.size())
    throw std::invalid_argument("for_each_fiber_flag: one label per basis vector required");
  const auto steps = shape.steps();
  Flag flag{SubspaceGF::zero(x.field(), x.rows())};
  flags_rec(v, x, labels, steps, shape.marker(), MatrixGF::identity(x.field(), x.rows()), flag,
            visit);
}

// ------------------------------------------------------------ FiberCounter

std::size_t FiberCounter::KeyHash::operator()(const Key& k) const {
  std::size_t h = 0xcbf29ce484222325ull ^ k.p;
  auto mix = [&](std::size_t x) { h = (h ^ x) * 0x100000001b3ull; };
  for (int x : k.mu) mix(static_cast<std::size_t>(x));
  mix(0xfeed);
  for (int x : k.nu) mix(static_cast<std::size_t>(x));
  mix(0xbeef);
  for (int x : k.steps) mix(static_cast<std::size_t>(x));
  mix(static_cast<std::size_t>(k.marker) + 0x51);
  return h;
}

std::uint64_t FiberCounter::count(const VectorGF& v, const MatrixGF& x, const FlagShape& shape) {
  validate(v, x, shape);
  const auto steps = shape.steps();
  return count_rec(v, x, steps, shape.marker());
}

std::uint64_t FiberCounter::count_rec(const VectorGF& v, const MatrixGF& x,
                                      std::span<const int> steps, int marker) {
  if (marker == 0 && !is_zero_vector(v)) return 0;
  if (steps.empty()) return 1;
  // one step left: W_1 = V, so x must vanish
  if (steps.size() == 1) return x.is_zero() ? 1 : 0;
  Bipartition type = classify_pair(v, x);
  Key key{x.field().p(), type.mu.parts(), type.nu.parts(),
          std::vector<int>(steps.begin(), steps.end()), marker};
  {
    std::shared_lock lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++misses_;
  const SubspaceGF ker = x.kernel();
  std::uint64_t total = 0;
  for_each_subspace(ker, static_cast<std::size_t>(steps[0]), [&](const SubspaceGF& w) {
    if (marker == 1 && !w.contains(v)) return;
    Quotient q = quotient_by(w, v, x, nullptr);
    total += count_rec(q.v, q.x, steps.subspan(1), std::max(marker - 1, 0));
  });
  std::unique_lock lock(mutex_);
  table_.emplace(std::move(key), total);
  return total;
}

FiberCounter::Stats FiberCounter::stats() const {
  std::shared_lock lock(mutex_);
  return {hits_.load(), misses_.load(), table_.size()};
}

void FiberCounter::clear() {
  std::unique_lock lock(mutex_);
  table_.clear();
  hits_ = 0;
  misses_ = 0;
}

std::size_t FiberCounter::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return 0;
  std::string line;
  if (!std::getline(in, line)) return 0;
  auto header = nlohmann::json::parse(line);
  if (header.value("format", "") != "enpave-fiber-cache" ||
      header.value("version", 0) != kCacheVersion)
    throw std::runtime_error("unsupported fiber cache format in " + path.string());
  std::size_t read = 0;
  std::unique_lock lock(mutex_);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    Key key{j.at("p").get<std::uint32_t>(), j.at("mu").get<std::vector<int>>(),
            j.at("nu").get<std::vector<int>>(), j.at("steps").get<std::vector<int>>(),
            j.at("j").get<int>()};
    table_.emplace(std::move(key), j.at("count").get<std::uint64_t>());
    ++read;
  }
  return read;
}

void FiberCounter::save(const std::filesystem::path& path) const {
  std::vector<std::pair<Key, std::uint64_t>> entries;
  {
    std::shared_lock lock(mutex_);
    entries.assign(table_.begin(), table_.end());
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.p, a.first.mu, a.first.nu, a.first.steps, a.first.marker) <
           std::tie(b.first.p, b.first.mu, b.first.nu, b.first.steps, b.first.marker);
  });
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write fiber cache " + path.string());
  out << nlohmann::json{{"format", "enpave-fiber-cache"}, {"version", kCacheVersion}}.dump() << '\n';
  for (const auto& [k, c] : entries)
    out << nlohmann::json{{"p", k.p}, {"mu", k.mu}, {"nu", k.nu}, {"steps", k.steps},
                          {"j", k.marker}, {"count", c}}
               .dump()
        << '\n';
}

// ---------------------------------------------------------------- helpers

int fiber_dimension_bound(const FlagShape& shape) {
  auto d = shape.steps();
  int total = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t k = i + 1; k < d.size(); ++k) total += d[i] * d[k];
  return total;
}

namespace {

int stabilizer_dim(const Bipartition& b, PrimeField field) {
  NormalPair np = normal_pair(b, field);
  const auto& f = np.field();
  const std::size_t n = np.dim();
  const auto& x = np.x;
  // unknown y_{ab} at a*n+b: (yx - xy) = 0 (n^2 rows), then y v = 0 (n rows).
  MatrixGF eq(f, n * n + n, n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t e = r * n + c;
      for (std::size_t k = 0; k < n; ++k) {
        if (x(k, c)) eq(e, r * n + k) = f.add(eq(e, r * n + k), x(k, c));
        if (x(r, k)) eq(e, k * n + c) = f.sub(eq(e, k * n + c), x(r, k));
      }
    }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (np.v[c]) eq(n * n + r, r * n + c) = np.v[c];
  return static_cast<int>(n * n - eq.rank());
}

}  // namespace

int orbit_dimension(const Bipartition& b) {
  const int small = stabilizer_dim(b, PrimeField(101));
  const int large = stabilizer_dim(b, PrimeField(10007));
  if (small != large)
    throw std::runtime_error("orbit_dimension: stabilizer ranks disagree between GF(101) and "
                             "GF(10007) for " + b.to_string());
  return b.n() * b.n() - small;
}

bool closure_contains(const Bipartition& big, const Bipartition& small, PrimeField field,
                      FiberCounter& counter) {
  if (big.n() != small.n()) throw std::invalid_argument("closure_contains: sizes differ");
  return counter.count(normal_pair(small, field), flag_shape(big)) > 0;
}

bool SampledPolynomial::certifies_paving() const {
  return fit.ok() && fit.polynomial->has_nonnegative_coefficients() && holdout_ok;
}

nlohmann::json SampledPolynomial::to_json() const {
  nlohmann::json counts_json = nlohmann::json::object();
  for (const auto& [p, c] : counts) counts_json[std::to_string(p)] = c;
  nlohmann::json j{{"degree_bound", degree_bound},
                   {"counts", counts_json},
                   {"holdout", {{"prime", holdout}, {"count", holdout_count}, {"ok", holdout_ok}}}};
  if (fit.ok()) {
    j["polynomial"] = fit.polynomial->coefficients();
    j["polynomial_text"] = fit.polynomial->to_string();
  } else {
    j["polynomial"] = nullptr;
    j["failure"] = fit.failure;
  }
  return j;
}

SampledPolynomial sample_polynomial(const std::function<std::uint64_t(PrimeField)>& count,
                                    int degree_bound, const PrimeSchedule& schedule) {
  SampledPolynomial out;
  out.degree_bound = degree_bound;
  const auto primes = schedule.take(static_cast<std::size_t>(degree_bound) + 1);
  for (auto p : primes) out.counts[p] = count(PrimeField(p));
  out.holdout = schedule.holdout_for(primes.size());
  out.holdout_count = count(PrimeField(out.holdout));
  out.fit = interpolate_qpoly(out.counts, degree_bound);
  if (out.fit.ok())
    out.holdout_ok = out.fit.polynomial->evaluate(out.holdout) ==
                     static_cast<long long>(out.holdout_count);
  return out;
}

SampledPolynomial fiber_polynomial(const Bipartition& big, const Bipartition& small,
                                   const PrimeSchedule& schedule, FiberCounter& counter) {
  if (big.n() != small.n()) throw std::invalid_argument("fiber_polynomial: sizes differ");
  const FlagShape shape = flag_shape(big);
  return sample_polynomial(
      [&](PrimeField f) { return counter.count(normal_pair(small, f), shape); },
      fiber_dimension_bound(shape), schedule);
}

}  // namespace enpave
