#ifndef ENPAVE_GF_HPP
#define ENPAVE_GF_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

namespace enpave {

using Elem = std::uint32_t;
using VectorGF = std::vector<Elem>;

bool is_prime(std::uint64_t n);

/// Arithmetic in GF(p) for a prime p < 2^31.
class PrimeField {
 public:
  /// Throws std::invalid_argument if p is not a prime below 2^31.
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Elem pow(Elem a, std::uint64_t e) const;
  /// Multiplicative inverse; a must be nonzero.
  Elem inv(Elem a) const;
  /// Reduces an arbitrary signed integer into [0, p).
  Elem from_int(long long a) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

class SubspaceGF;

/// Dense row-major matrix over GF(p). Column vectors: the map is u -> M u.
class MatrixGF {
 public:
  MatrixGF(PrimeField field, std::size_t rows, std::size_t cols);

  static MatrixGF identity(PrimeField field, std::size_t n);
  static MatrixGF from_rows(PrimeField field, const std::vector<std::vector<long long>>& rows);
  /// Matrix whose columns are the given vectors (all of length rows).
  static MatrixGF from_columns(PrimeField field, std::size_t rows,
                               std::span<const VectorGF> columns);

  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  VectorGF row(std::size_t r) const;
  VectorGF column(std::size_t c) const;

  MatrixGF operator*(const MatrixGF& other) const;
  MatrixGF operator+(const MatrixGF& other) const;
  MatrixGF operator-(const MatrixGF& other) const;
  VectorGF apply(const VectorGF& u) const;
  MatrixGF transposed() const;
  bool is_zero() const;

  /// Reduced row echelon form; pivots (if given) receives the pivot columns.
  MatrixGF rref(std::vector<std::size_t>* pivots = nullptr) const;
  std::size_t rank() const;
  /// {u : M u = 0} inside GF(p)^cols.
  SubspaceGF kernel() const;
  /// Column space inside GF(p)^rows.
  SubspaceGF image() const;
  /// Inverse of a square invertible matrix; throws std::domain_error otherwise.
  MatrixGF inverse() const;

  const std::vector<Elem>& data() const { return data_; }

  friend bool operator==(const MatrixGF&, const MatrixGF&) = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

/// Subspace of GF(p)^n held canonically as the RREF of a basis.
/// Equal subspaces have identical representations.
class SubspaceGF {
 public:
  static SubspaceGF zero(PrimeField field, std::size_t ambient);
  static SubspaceGF full(PrimeField field, std::size_t ambient);
  static SubspaceGF span(PrimeField field, std::size_t ambient, std::span<const VectorGF> vectors);
  static SubspaceGF row_space(const MatrixGF& m);
  /// Span of the standard basis vectors e_i for the listed coordinates.
  static SubspaceGF coordinate(PrimeField field, std::size_t ambient,
                               std::span<const std::size_t> coords);

  const PrimeField& field() const { return basis_.field(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const MatrixGF& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  VectorGF basis_vector(std::size_t i) const { return basis_.row(i); }

  /// Canonical coset representative of u modulo this subspace (zero at pivots).
  VectorGF reduce(const VectorGF& u) const;
  bool contains(const VectorGF& u) const;
  bool contains(const SubspaceGF& other) const;
  /// Coordinates of u (assumed in the subspace) with respect to the RREF basis.
  VectorGF coordinates(const VectorGF& u) const;
  /// Non-pivot coordinates; the matching unit vectors span a complement.
  std::vector<std::size_t> complement_coordinates() const;

  nlohmann::json to_json() const;
  static SubspaceGF from_json(const nlohmann::json& j);

  friend bool operator==(const SubspaceGF& a, const SubspaceGF& b) {
    return a.basis_ == b.basis_;
  }

  std::size_t hash() const;

 private:
  SubspaceGF(MatrixGF basis, std::vector<std::size_t> pivots)
      : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  MatrixGF basis_;
  std::vector<std::size_t> pivots_;

  friend class SubspaceWalker;
};

SubspaceGF sum(const SubspaceGF& s, const SubspaceGF& t);
SubspaceGF intersect(const SubspaceGF& s, const SubspaceGF& t);
/// Image x(S).
SubspaceGF image_of(const MatrixGF& x, const SubspaceGF& s);

/// Linear map V -> V/W in the coordinates of complement_coordinates(); kernel exactly W.
MatrixGF quotient_map(const SubspaceGF& w);
/// Matrix of x restricted to the x-stable subspace S, in the RREF basis of S.
MatrixGF restrict_map(const MatrixGF& x, const SubspaceGF& s);
/// Matrix of the map induced by x on V/W (W x-stable), in quotient coordinates.
MatrixGF induced_map(const MatrixGF& x, const SubspaceGF& w);

/// Calls visit once for every d-dimensional subspace of ambient, enumerated by
/// RREF pivot pattern over the coordinates of ambient's basis. A visitor that
/// returns bool stops the walk by returning false. Returns false iff stopped.
bool walk_subspaces(const SubspaceGF& ambient, std::size_t d,
                    const std::function<bool(const SubspaceGF&)>& visit);

template <class F>
bool for_each_subspace(const SubspaceGF& ambient, std::size_t d, F&& visit) {
  return walk_subspaces(ambient, d, [&](const SubspaceGF& s) {
    if constexpr (std::is_same_v<std::invoke_result_t<F&, const SubspaceGF&>, bool>) {
      return visit(s);
    } else {
      visit(s);
      return true;
    }
  });
}

std::vector<SubspaceGF> subspaces(const SubspaceGF& ambient, std::size_t d);

/// Number of d-dimensional subspaces of GF(q)^m. Throws std::overflow_error
/// when the value does not fit in 64 bits.
std::uint64_t gaussian_binomial(unsigned m, unsigned d, std::uint64_t q);

bool is_zero_vector(const VectorGF& u);

}  // namespace enpave

template <>
struct std::hash<enpave::SubspaceGF> {
  std::size_t operator()(const enpave::SubspaceGF& s) const { return s.hash(); }
};

#endif  // ENPAVE_GF_HPP
