#ifndef ENPAVE_NORMAL_FORM_HPP
#define ENPAVE_NORMAL_FORM_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "enpave/combinatorics.hpp"
#include "enpave/gf.hpp"

namespace enpave {

/// A pair (v, x) in V x N written in some basis, together with an integer
/// label per basis vector. The labels define the torus grading; a subspace
/// is graded when it is the direct sum of its intersections with the label
/// spaces.
struct GradedPair {
  VectorGF v;
  MatrixGF x;
  std::vector<int> weights;

  std::size_t dim() const { return v.size(); }
  const PrimeField& field() const { return x.field(); }
};

/// Diagram box (row i, position j within the row), both 1-based.
struct BoxLabel {
  int row;
  int pos;
  friend auto operator<=>(const BoxLabel&, const BoxLabel&) = default;
};

/// Normal basis realization of the orbit O_{alpha;beta}: x v_{i,j} = v_{i,j-1},
/// v = sum_i v_{i,alpha_i}, and v_{i,j} has weight alpha_i - j. The basis is
/// ordered row-major over the diagram.
struct NormalPair {
  Bipartition type;
  std::vector<BoxLabel> boxes;
  VectorGF v;
  MatrixGF x;
  std::vector<int> weights;

  std::size_t dim() const { return v.size(); }
  const PrimeField& field() const { return x.field(); }
  /// Index of a box in the basis; throws std::out_of_range.
  std::size_t index_of(int row, int pos) const;
  GradedPair graded() const { return GradedPair{v, x, weights}; }
  nlohmann::json to_json() const;
};

NormalPair normal_pair(const Bipartition& b, PrimeField field);

/// Jordan type of a nilpotent matrix from the kernel dimensions of its powers.
/// Throws std::domain_error for non-square or non-nilpotent input.
Partition jordan_type(const MatrixGF& x);

/// Basis of {y : y x = x y}.
std::vector<MatrixGF> centralizer_basis(const MatrixGF& x);

/// E^x v: the span of y v over y commuting with x.
SubspaceGF centralizer_orbit(const VectorGF& v, const MatrixGF& x);

/// Orbit type of (v, x): mu is the Jordan type of x on E^x v and nu the type
/// of the induced map on V / E^x v. Throws std::logic_error on inconsistency.
Bipartition classify_pair(const VectorGF& v, const MatrixGF& x);

/// Span of the basis vectors of nonnegative weight.
SubspaceGF nonneg_part(const NormalPair& np);

/// Span of the basis vectors carrying the given label.
SubspaceGF weight_space(const PrimeField& field, const std::vector<int>& weights, int w);

/// Distinct labels in increasing order.
std::vector<int> distinct_weights(const std::vector<int>& weights);

/// True iff s is the direct sum of its intersections with the label spaces.
bool is_graded(const SubspaceGF& s, const std::vector<int>& weights);

struct Decomposition {
  SubspaceGF v1;
  SubspaceGF v2;
  char construction = '?';  // 'a', 'b', 'c' or 's' for search results
  int row = 0;              // the row index l used by constructions b and c

  nlohmann::json to_json() const;
};

/// Splitting V = V1 + V2 of a non-distinguished normal pair, built by the
/// first applicable construction: (a) more beta rows than alpha rows,
/// (b) alpha_l = alpha_{l+1}, (c) beta_l = beta_{l+1} (beta zero-padded).
/// Throws std::invalid_argument for distinguished inputs.
Decomposition explicit_decomposition(const NormalPair& np);

/// Lists every violated condition: direct sum, x-stability, gradedness,
/// v in V1, nontriviality. Empty means valid.
std::vector<std::string> decomposition_defects(const GradedPair& pair, const Decomposition& d);

}  // namespace enpave

#endif  // ENPAVE_NORMAL_FORM_HPP
