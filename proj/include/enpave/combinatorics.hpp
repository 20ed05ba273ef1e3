#ifndef ENPAVE_COMBINATORICS_HPP
#define ENPAVE_COMBINATORICS_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace enpave {

/// An integer partition stored by its positive parts in weakly decreasing
/// order. Trailing zeros are never stored; part(i) pads with zeros.
class Partition {
 public:
  Partition() = default;
  /// Throws std::invalid_argument unless parts are positive and weakly decreasing.
  explicit Partition(std::vector<int> parts);

  /// Parses "3,1,1"; the empty string (or "0") is the empty partition.
  static Partition parse(std::string_view text);

  const std::vector<int>& parts() const { return parts_; }
  int size() const;
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  /// 1-based part, zero beyond the length.
  int part(int i) const;

  Partition transpose() const;
  std::string to_string() const;

  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
};

/// All partitions of n in lexicographically increasing order of parts.
std::vector<Partition> partitions(int n);

/// Number of partitions of n (Euler recurrence, independent of partitions()).
long long partition_count(int n);

/// An ordered pair (mu; nu) of partitions. Indexes orbits on V x N.
struct Bipartition {
  Partition mu;
  Partition nu;

  int n() const { return mu.size() + nu.size(); }

  /// Parses "mu=3,1,1;nu=3,2"; either side may be empty ("mu=;nu=2").
  static Bipartition parse(std::string_view text);
  std::string to_string() const;

  friend auto operator<=>(const Bipartition&, const Bipartition&) = default;
};

/// Bipartitions of n ordered lexicographically by (|mu|, mu, nu).
std::vector<Bipartition> bipartitions(int n);

struct DiagramRow {
  int row;           // 1-based
  int first_column;  // 1-based, inclusive
  int last_column;   // inclusive
};

struct DiagramBox {
  int row;
  int column;
  friend auto operator<=>(const DiagramBox&, const DiagramBox&) = default;
};

/// Back-to-back union diagram: mu right-justified against column mu_1,
/// nu left-justified from column mu_1 + 1.
struct Diagram {
  std::vector<DiagramRow> rows;
  std::vector<int> column_heights;
  std::vector<DiagramBox> boxes;  // row-major
};

Diagram diagram(const Bipartition& b);

/// Dimension sequence 0 = r_0 < r_1 < ... < r_m = n with a marker j in [0, m].
class FlagShape {
 public:
  FlagShape(std::vector<int> dims, int marker);

  /// Full flag in dimension n with the given marker.
  static FlagShape full(int n, int marker);

  const std::vector<int>& dims() const { return dims_; }
  int marker() const { return marker_; }
  int length() const { return static_cast<int>(dims_.size()) - 1; }
  int ambient_dim() const { return dims_.back(); }
  /// Successive differences r_i - r_{i-1}.
  std::vector<int> steps() const;
  /// Shape obtained by dropping the first step: (r_2 - r_1, ..., r_m - r_1), j - 1 (or 0).
  FlagShape reduced() const;

  std::string to_string() const;

  friend bool operator==(const FlagShape&, const FlagShape&) = default;

 private:
  std::vector<int> dims_;
  int marker_;
};

/// Cumulative column heights of the diagram, marker mu_1.
FlagShape flag_shape(const Bipartition& b);

bool is_distinguished(const Bipartition& b);

/// Grading alpha_i - pos of the box at 1-based position pos of row i.
/// Throws std::out_of_range for coordinates outside the diagram.
int box_weight(const Bipartition& b, int row, int pos);

}  // namespace enpave

#endif  // ENPAVE_COMBINATORICS_HPP
