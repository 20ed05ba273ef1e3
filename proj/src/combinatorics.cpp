#include "enpave/combinatorics.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace enpave {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

// Partitions of n with all parts <= max_part, appended in decreasing
// lexicographic order of parts.
void partitions_bounded(int n, int max_part, std::vector<int>& prefix,
                        std::vector<Partition>& out) {
  if (n == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int first = std::min(n, max_part); first >= 1; --first) {
    prefix.push_back(first);
    partitions_bounded(n - first, first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0)
      throw std::invalid_argument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw std::invalid_argument("partition parts must be weakly decreasing");
  }
}

Partition Partition::parse(std::string_view text) {
  std::string s = trim(text);
  std::vector<int> parts;
  if (s.empty() || s == "0" || s == "-") return Partition{};
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    std::string tok = trim(std::string_view(s).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
      throw std::invalid_argument("malformed partition: '" + std::string(text) + "'");
    parts.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return Partition(std::move(parts));
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

int Partition::part(int i) const {
  if (i < 1 || i > length()) return 0;
  return parts_[static_cast<std::size_t>(i - 1)];
}

Partition Partition::transpose() const {
  std::vector<int> t;
  if (parts_.empty()) return Partition{};
  t.reserve(static_cast<std::size_t>(parts_.front()));
  for (int c = 1; c <= parts_.front(); ++c) {
    int h = 0;
    while (h < length() && parts_[static_cast<std::size_t>(h)] >= c) ++h;
    t.push_back(h);
  }
  return Partition(std::move(t));
}

std::string Partition::to_string() const { return join(parts_); }

std::vector<Partition> partitions(int n) {
  if (n < 0) throw std::invalid_argument("partitions: n must be nonnegative");
  std::vector<Partition> out;
  std::vector<int> prefix;
  partitions_bounded(n, n, prefix, out);
  std::sort(out.begin(), out.end());
  return out;
}

long long partition_count(int n) {
  if (n < 0) return 0;
  std::vector<long long> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= n; ++m) {
    long long acc = 0;
    for (int k = 1;; ++k) {
      int g1 = k * (3 * k - 1) / 2;
      int g2 = k * (3 * k + 1) / 2;
      if (g1 > m) break;
      long long sign = (k % 2 == 1) ? 1 : -1;
      acc += sign * p[static_cast<std::size_t>(m - g1)];
      if (g2 <= m) acc += sign * p[static_cast<std::size_t>(m - g2)];
    }
    p[static_cast<std::size_t>(m)] = acc;
  }
  return p[static_cast<std::size_t>(n)];
}

Bipartition Bipartition::parse(std::string_view text) {
  std::string s = trim(text);
  auto semi = s.find(';');
  if (semi == std::string::npos)
    throw std::invalid_argument("bipartition must look like 'mu=3,1,1;nu=3,2'");
  std::string left = trim(std::string_view(s).substr(0, semi));
  std::string right = trim(std::string_view(s).substr(semi + 1));
  auto strip = [&](std::string part, std::string_view key) {
    if (part.rfind(key, 0) == 0) return part.substr(key.size());
    if (part.find('=') != std::string::npos)
      throw std::invalid_argument("unexpected key in bipartition: '" + part + "'");
    return part;
  };
  return Bipartition{Partition::parse(strip(left, "mu=")),
                     Partition::parse(strip(right, "nu="))};
}

std::string Bipartition::to_string() const {
  return "mu=" + mu.to_string() + ";nu=" + nu.to_string();
}

std::vector<Bipartition> bipartitions(int n) {
  if (n < 0) throw std::invalid_argument("bipartitions: n must be nonnegative");
  std::vector<Bipartition> out;
  for (int k = 0; k <= n; ++k) {
    auto firsts = partitions(k);
    auto seconds = partitions(n - k);
    for (const auto& mu : firsts)
      for (const auto& nu : seconds) out.push_back(Bipartition{mu, nu});
  }
  return out;
}

Diagram diagram(const Bipartition& b) {
  Diagram d;
  const int mu1 = b.mu.part(1);
  const int rows = std::max(b.mu.length(), b.nu.length());
  for (int i = 1; i <= rows; ++i) {
    int first = mu1 - b.mu.part(i) + 1;
    int last = mu1 + b.nu.part(i);
    d.rows.push_back({i, first, last});
    for (int c = first; c <= last; ++c) d.boxes.push_back({i, c});
  }
  const Partition mut = b.mu.transpose();
  const Partition nut = b.nu.transpose();
  // column mu_1 - i holds mu^t_{i+1} boxes, column mu_1 + i holds nu^t_i.
  for (int c = 1; c <= mu1; ++c) d.column_heights.push_back(mut.part(mu1 - c + 1));
  for (int i = 1; i <= b.nu.part(1); ++i) d.column_heights.push_back(nut.part(i));
  return d;
}

FlagShape::FlagShape(std::vector<int> dims, int marker)
    : dims_(std::move(dims)), marker_(marker) {
  if (dims_.empty() || dims_.front() != 0)
    throw std::invalid_argument("flag shape must start at 0");
  for (std::size_t i = 1; i < dims_.size(); ++i)
    if (dims_[i] <= dims_[i - 1])
      throw std::invalid_argument("flag shape dims must be strictly increasing");
  if (marker_ < 0 || marker_ > length())
    throw std::invalid_argument("flag shape marker out of range");
}

FlagShape FlagShape::full(int n, int marker) {
  std::vector<int> dims(static_cast<std::size_t>(n) + 1);
  std::iota(dims.begin(), dims.end(), 0);
  return FlagShape(std::move(dims), marker);
}

std::vector<int> FlagShape::steps() const {
  std::vector<int> s;
  for (std::size_t i = 1; i < dims_.size(); ++i) s.push_back(dims_[i] - dims_[i - 1]);
  return s;
}

FlagShape FlagShape::reduced() const {
  if (length() == 0) throw std::invalid_argument("cannot reduce an empty flag shape");
  std::vector<int> dims{0};
  for (std::size_t i = 2; i < dims_.size(); ++i) dims.push_back(dims_[i] - dims_[1]);
  return FlagShape(std::move(dims), std::max(marker_ - 1, 0));
}

std::string FlagShape::to_string() const {
  return "dims=" + join(dims_) + ";j=" + std::to_string(marker_);
}

FlagShape flag_shape(const Bipartition& b) {
  std::vector<int> dims{0};
  for (int h : diagram(b).column_heights) dims.push_back(dims.back() + h);
  return FlagShape(std::move(dims), b.mu.part(1));
}

bool is_distinguished(const Bipartition& b) {
  const auto& alpha = b.mu;
  const auto& beta = b.nu;
  if (alpha.empty()) {
    // Case (1): v = 0 and x regular. The empty pair on V = 0 splits trivially only.
    return beta.length() <= 1;
  }
  const int k = alpha.length();
  if (beta.length() > k) return false;
  for (int i = 1; i < k; ++i) {
    if (alpha.part(i) <= alpha.part(i + 1)) return false;
    if (beta.part(i) <= beta.part(i + 1)) return false;
  }
  return true;
}

int box_weight(const Bipartition& b, int row, int pos) {
  const int rows = std::max(b.mu.length(), b.nu.length());
  if (row < 1 || row > rows || pos < 1 || pos > b.mu.part(row) + b.nu.part(row))
    throw std::out_of_range("box (" + std::to_string(row) + "," + std::to_string(pos) +
                            ") is not in the diagram of " + b.to_string());
  return b.mu.part(row) - pos;
}

}  // namespace enpave
