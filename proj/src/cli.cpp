#include "enpave/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enpave/checks.hpp"
#include "enpave/combinatorics.hpp"
#include "enpave/fiber.hpp"
#include "enpave/parallel.hpp"

namespace enpave {

namespace {

constexpr const char* kCacheEnv = "ENPAVE_CACHE_DIR";
constexpr const char* kCacheFile = "fiber_counts.jsonl";

const std::vector<std::string> kAllChecks = {"polynomial", "birational", "semismall",
                                             "alpha",      "distinguished", "split",
                                             "kernel",     "regular",   "euler"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = -1;
  std::string mu;
  std::string nu;
  std::string at;
  std::string primes;
  std::uint32_t holdout = 0;
  unsigned jobs = 1;
  std::string format;
  std::string cache;
  std::uint64_t budget = 10'000'000;
  std::string checks;
  int alpha_max_n = 3;
  bool timing = false;

  PrimeSchedule schedule() const {
    std::vector<std::uint32_t> ps;
    if (!primes.empty()) {
      std::stringstream ss(primes);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          std::size_t used = 0;
          unsigned long v = std::stoul(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
          ps.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::exception&) {
          throw UsageError("malformed --primes entry '" + tok + "'");
        }
      }
    }
    std::optional<std::uint32_t> h;
    if (holdout) h = holdout;
    try {
      return PrimeSchedule(std::move(ps), h);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<std::uint32_t> small_primes(std::size_t k) const { return schedule().take(k); }

  std::optional<std::filesystem::path> cache_path() const {
    if (!cache.empty()) return std::filesystem::path(cache);
    if (const char* dir = std::getenv(kCacheEnv); dir && *dir)
      return std::filesystem::path(dir) / kCacheFile;
    return std::nullopt;
  }

  std::set<std::string> selected_checks() const {
    if (checks.empty() || checks == "all") return {kAllChecks.begin(), kAllChecks.end()};
    std::set<std::string> out;
    std::stringstream ss(checks);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (std::find(kAllChecks.begin(), kAllChecks.end(), tok) == kAllChecks.end())
        throw UsageError("unknown check '" + tok + "'");
      out.insert(tok);
    }
    return out;
  }

  void validate(bool need_n) const {
    if (need_n && n < 0) throw UsageError("--n must be a nonnegative integer");
    if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
    if (budget == 0) throw UsageError("--budget must be positive");
    schedule();
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_ints(const std::vector<int>& xs, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

nlohmann::json bip_json(const Bipartition& b) {
  return {{"mu", b.mu.parts()}, {"nu", b.nu.parts()}};
}

Bipartition parse_bipartition(const std::string& text) {
  try {
    return Bipartition::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

class CacheSession {
 public:
  CacheSession(FiberCounter& counter, std::optional<std::filesystem::path> path)
      : counter_(counter), path_(std::move(path)) {
    if (path_) counter_.load(*path_);
  }
  void save() {
    if (path_) counter_.save(*path_);
  }

 private:
  FiberCounter& counter_;
  std::optional<std::filesystem::path> path_;
};

// Closure matrix over bipartitions of n at one prime: contains[big][small].
std::vector<std::vector<bool>> closure_matrix(const std::vector<Bipartition>& bips,
                                              std::uint32_t p, unsigned jobs,
                                              FiberCounter& counter) {
  const std::size_t m = bips.size();
  auto flat = parallel_map(m * m, jobs, [&](std::size_t k) -> bool {
    return closure_contains(bips[k / m], bips[k % m], PrimeField(p), counter);
  });
  std::vector<std::vector<bool>> out(m, std::vector<bool>(m));
  for (std::size_t k = 0; k < m * m; ++k) out[k / m][k % m] = flat[k];
  return out;
}

// ------------------------------------------------------------------ orbits

int cmd_orbits(const RunConfig& cfg, std::ostream& out) {
  const auto bips = bipartitions(cfg.n);
  auto dims = parallel_map(bips.size(), cfg.jobs,
                           [&](std::size_t i) { return orbit_dimension(bips[i]); });
  if (cfg.format == "csv") {
    out << "mu,nu,column_heights,dims,j,orbit_dim,distinguished\n";
    for (std::size_t i = 0; i < bips.size(); ++i) {
      const auto& b = bips[i];
      FlagShape shape = flag_shape(b);
      out << csv_field(b.mu.to_string()) << ',' << csv_field(b.nu.to_string()) << ','
          << csv_field(join_ints(diagram(b).column_heights)) << ','
          << csv_field(join_ints(shape.dims())) << ',' << shape.marker() << ',' << dims[i] << ','
          << (is_distinguished(b) ? "true" : "false") << '\n';
    }
    return kExitOk;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < bips.size(); ++i) {
    const auto& b = bips[i];
    FlagShape shape = flag_shape(b);
    rows.push_back({{"bipartition", bip_json(b)},
                    {"column_heights", diagram(b).column_heights},
                    {"dims", shape.dims()},
                    {"j", shape.marker()},
                    {"orbit_dim", dims[i]},
                    {"distinguished", is_distinguished(b)}});
  }
  out << nlohmann::json{{"schema", "enpave.orbits/1"}, {"n", cfg.n}, {"rows", rows}}.dump(2)
      << '\n';
  return kExitOk;
}

// -------------------------------------------------------------- fiber-poly

int cmd_fiber_poly(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.mu.empty() && cfg.nu.empty())
    throw UsageError("fiber-poly needs the resolution via --mu/--nu");
  const Bipartition big{Partition::parse(cfg.mu), Partition::parse(cfg.nu)};
  const Bipartition small = cfg.at.empty() ? big : parse_bipartition(cfg.at);
  if (big.n() != small.n()) throw UsageError("--at must have the same size as --mu/--nu");

  FiberCounter counter;
  CacheSession cache(counter, cfg.cache_path());
  SampledPolynomial poly;
  try {
    poly = fiber_polynomial(big, small, cfg.schedule(), counter);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cache.save();

  const bool ok = poly.certifies_paving();
  nlohmann::json witnesses = nlohmann::json::object();
  witnesses["degree_bound"] = poly.degree_bound;
  witnesses["holdout"] = {{"prime", poly.holdout}, {"count", poly.holdout_count},
                          {"ok", poly.holdout_ok}};
  if (!poly.fit.ok()) witnesses["failure"] = poly.fit.failure;
  if (poly.fit.ok() && poly.fit.polynomial->is_zero())
    witnesses["note"] = "empty fiber: the point is outside the image of the resolution";

  if (cfg.format == "csv") {
    out << "big,small,counts,holdout,holdout_count,polynomial,verdict\n";
    std::string counts;
    for (const auto& [p, c] : poly.counts)
      counts += (counts.empty() ? "" : " ") + std::to_string(p) + ":" + std::to_string(c);
    out << csv_field(big.to_string()) << ',' << csv_field(small.to_string()) << ','
        << csv_field(counts) << ',' << poly.holdout << ',' << poly.holdout_count << ','
        << (poly.fit.ok() ? poly.fit.polynomial->to_string() : "") << ','
        << (ok ? "pass" : "fail") << '\n';
  } else {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [p, c] : poly.counts) counts[std::to_string(p)] = c;
    nlohmann::json j{{"schema", "enpave.fiber-poly/1"},
                     {"inputs", {{"big", bip_json(big)},
                                 {"small", bip_json(small)},
                                 {"dims", flag_shape(big).dims()},
                                 {"j", flag_shape(big).marker()}}},
                     {"counts", counts},
                     {"polynomial", poly.fit.ok() ? nlohmann::json(poly.fit.polynomial->coefficients())
                                                  : nlohmann::json(nullptr)},
                     {"polynomial_text", poly.fit.ok() ? poly.fit.polynomial->to_string() : ""},
                     {"verdict", ok ? "pass" : "fail"},
                     {"witnesses", witnesses}};
    out << j.dump(2) << '\n';
  }
  if (!ok) err << "fiber polynomial failed validation\n";
  return ok ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------- check

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto selected = cfg.selected_checks();
  const CheckOptions options{cfg.schedule(), cfg.budget};
  FiberCounter counter;
  CacheSession cache(counter, cfg.cache_path());

  std::vector<std::function<CheckReport()>> tasks;
  for (int m = 1; m <= cfg.n; ++m) {
    const auto bips = bipartitions(m);
    const auto contains = closure_matrix(bips, 2, cfg.jobs, counter);
    auto has = [&](const std::string& c) { return selected.count(c) > 0; };
    for (std::size_t bi = 0; bi < bips.size(); ++bi) {
      const Bipartition big = bips[bi];
      if (has("birational"))
        tasks.push_back([&, big] { return check_birational(big, {2, 3}, counter); });
      if (has("semismall"))
        tasks.push_back([&, big] { return check_semismall(big, options, counter); });
      if (has("distinguished"))
        tasks.push_back([&, big] {
          return check_distinguished_lemma(big, PrimeField(2), options.search_budget);
        });
      for (std::size_t si = 0; si < bips.size(); ++si) {
        if (!contains[bi][si]) continue;
        const Bipartition small = bips[si];
        if (has("polynomial"))
          tasks.push_back([&, big, small] {
            return check_polynomial_count(big, small, options, counter);
          });
        if (has("euler"))
          tasks.push_back([&, big, small] {
            return check_euler_bridge(big, small, options, counter);
          });
        if (has("alpha") && m <= cfg.alpha_max_n)
          tasks.push_back([&, big, small] {
            return check_alpha_partition(big, small, {2, 3, 5}, counter);
          });
        for (std::uint32_t p : {2u, 3u}) {
          if (has("split") && !is_distinguished(small))
            tasks.push_back([&, big, small, p] {
              return check_split_product(small, big, PrimeField(p));
            });
          if (has("kernel") && is_distinguished(small) && !small.mu.empty())
            tasks.push_back([&, big, small, p] {
              return check_kernel_recursion(small, flag_shape(big), PrimeField(p));
            });
        }
      }
    }
    if (has("regular"))
      for (std::uint32_t p : {2u, 3u})
        tasks.push_back([m, p] { return check_regular_fixed_points(m, PrimeField(p)); });
  }

  std::vector<CheckReport> reports;
  try {
    reports = parallel_map(tasks.size(), cfg.jobs, [&](std::size_t i) { return tasks[i](); });
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cache.save();

  std::size_t passed = 0, failed = 0, exhausted = 0;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::pass) ++passed;
    else if (r.verdict == Verdict::fail) ++failed;
    else ++exhausted;
  }

  if (cfg.format == "csv") {
    out << "check,inputs,verdict,witness_digest,millis\n";
    for (const auto& r : reports) {
      out << r.name << ',' << csv_field(r.inputs.dump()) << ',' << to_string(r.verdict) << ','
          << r.witness_digest() << ',';
      if (cfg.timing) out << static_cast<long long>(r.millis + 0.5);
      out << '\n';
    }
  } else {
    nlohmann::json reps = nlohmann::json::array();
    nlohmann::json budget = nlohmann::json::array();
    for (const auto& r : reports) {
      reps.push_back(r.to_json(cfg.timing));
      if (r.verdict == Verdict::budget_exhausted) budget.push_back(r.inputs);
    }
    out << nlohmann::json{{"schema", "enpave.check/1"},
                          {"n", cfg.n},
                          {"reports", reps},
                          {"budget_exhausted", budget},
                          {"summary", {{"pass", passed}, {"fail", failed},
                                       {"budget_exhausted", exhausted}}}}
               .dump(2)
        << '\n';
  }
  for (const auto& r : reports)
    if (r.verdict == Verdict::budget_exhausted)
      err << "budget exhausted: " << r.name << ' ' << r.inputs.dump() << '\n';
  for (const auto& r : reports)
    if (r.verdict == Verdict::fail)
      err << "FAIL: " << r.name << ' ' << r.inputs.dump() << ' ' << r.witness.dump() << '\n';
  err << "checks: " << passed << " passed, " << failed << " failed, " << exhausted
      << " over budget\n";
  return (failed == 0 && exhausted == 0) ? kExitOk : kExitCheckFailed;
}

// ----------------------------------------------------------- closure-order

int cmd_closure_order(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto bips = bipartitions(cfg.n);
  const std::size_t m = bips.size();
  FiberCounter counter;
  CacheSession cache(counter, cfg.cache_path());
  const auto primes = cfg.small_primes(2);
  const auto contains = closure_matrix(bips, primes[0], cfg.jobs, counter);
  bool consistent = true;
  for (std::size_t k = 1; k < primes.size(); ++k)
    if (closure_matrix(bips, primes[k], cfg.jobs, counter) != contains) {
      consistent = false;
      err << "closure containment differs between p=" << primes[0] << " and p=" << primes[k]
          << '\n';
    }
  cache.save();

  bool antisymmetric = true;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (contains[a][b] && contains[b][a]) {
        antisymmetric = false;
        err << "orbits " << bips[a].to_string() << " and " << bips[b].to_string()
            << " contain each other\n";
      }

  // Hasse diagram: lower < upper with nothing strictly in between.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t up = 0; up < m; ++up)
    for (std::size_t lo = 0; lo < m; ++lo) {
      if (up == lo || !contains[up][lo]) continue;
      bool covered = true;
      for (std::size_t mid = 0; mid < m && covered; ++mid)
        if (mid != up && mid != lo && contains[up][mid] && contains[mid][lo]) covered = false;
      if (covered) edges.emplace_back(lo, up);
    }

  if (cfg.format == "csv") {
    out << "lower,upper\n";
    for (auto [lo, up] : edges)
      out << csv_field(bips[lo].to_string()) << ',' << csv_field(bips[up].to_string()) << '\n';
  } else {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& b : bips) nodes.push_back(bip_json(b));
    nlohmann::json ej = nlohmann::json::array();
    for (auto [lo, up] : edges) ej.push_back({{"lower", lo}, {"upper", up}});
    out << nlohmann::json{{"schema", "enpave.closure-order/1"},
                          {"n", cfg.n},
                          {"primes", primes},
                          {"nodes", nodes},
                          {"edges", ej},
                          {"antisymmetric", antisymmetric},
                          {"prime_consistent", consistent}}
               .dump(2)
        << '\n';
  }
  return (antisymmetric && consistent) ? kExitOk : kExitCheckFailed;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool need_n) {
  auto* n = sub->add_option("--n", cfg.n, "Dimension of V");
  if (need_n) n->required();
  sub->add_option("--primes", cfg.primes, "Comma-separated sampling primes (default 2,3,5,...)");
  sub->add_option("--holdout", cfg.holdout, "Held-out validation prime");
  sub->add_option("--jobs", cfg.jobs, "Worker threads (0 = hardware concurrency)");
  sub->add_option("--cache", cfg.cache, "Fiber count cache file (line-delimited JSON)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point counts and paving checks for resolutions of enhanced nilpotent orbit closures",
               "enpave"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* orbits = app.add_subcommand("orbits", "One row per bipartition of n");
  add_common(orbits, cfg, true);
  orbits->add_option("--format", cfg.format, "json or csv")->default_str("csv");

  auto* fiber = app.add_subcommand("fiber-poly", "Counting polynomial of one fiber");
  add_common(fiber, cfg, false);
  fiber->add_option("--mu", cfg.mu, "First partition of the resolution, e.g. 3,1,1");
  fiber->add_option("--nu", cfg.nu, "Second partition of the resolution, e.g. 3,2");
  fiber->add_option("--at", cfg.at, "Orbit of the point, e.g. 'mu=1;nu=1' (default: the resolution's own orbit)");
  fiber->add_option("--format", cfg.format, "json or csv")->default_str("json");

  auto* check = app.add_subcommand("check", "Run the verification suite for all sizes up to n");
  add_common(check, cfg, true);
  check->add_option("--checks", cfg.checks,
                    "Comma-separated subset of polynomial,birational,semismall,alpha,"
                    "distinguished,split,kernel,regular,euler (default all)");
  check->add_option("--budget", cfg.budget, "Node budget for the decomposition search");
  check->add_option("--alpha-max-n", cfg.alpha_max_n,
                    "Largest n for the explicit alpha-partition enumeration");
  check->add_flag("--timing", cfg.timing, "Fill the millis column");
  check->add_option("--format", cfg.format, "json or csv")->default_str("csv");

  auto* closure = app.add_subcommand("closure-order", "Hasse diagram of orbit closure containment");
  add_common(closure, cfg, true);
  closure->add_option("--format", cfg.format, "json or csv")->default_str("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (cfg.jobs == 0) cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
    if (orbits->parsed()) {
      if (cfg.format.empty()) cfg.format = "csv";
      cfg.validate(true);
      return cmd_orbits(cfg, out);
    }
    if (fiber->parsed()) {
      if (cfg.format.empty()) cfg.format = "json";
      cfg.validate(false);
      return cmd_fiber_poly(cfg, out, err);
    }
    if (check->parsed()) {
      if (cfg.format.empty()) cfg.format = "csv";
      cfg.validate(true);
      return cmd_check(cfg, out, err);
    }
    if (closure->parsed()) {
      if (cfg.format.empty()) cfg.format = "csv";
      cfg.validate(true);
      return cmd_closure_order(cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace enpave
