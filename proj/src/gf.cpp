#include "enpave/gf.hpp"

#include <algorithm>
#include <stdexcept>

namespace enpave {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 31) || !is_prime(p))
    throw std::invalid_argument("not a supported prime: " + std::to_string(p));
}

Elem PrimeField::pow(Elem a, std::uint64_t e) const {
  Elem result = 1 % p_;
  Elem base = a % p_;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Elem PrimeField::inv(Elem a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero in GF(p)");
  return pow(a, p_ - 2);
}

Elem PrimeField::from_int(long long a) const {
  long long r = a % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

bool is_zero_vector(const VectorGF& u) {
  return std::all_of(u.begin(), u.end(), [](Elem e) { return e == 0; });
}

// ---------------------------------------------------------------- MatrixGF

MatrixGF::MatrixGF(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

MatrixGF MatrixGF::identity(PrimeField field, std::size_t n) {
  MatrixGF m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

MatrixGF MatrixGF::from_rows(PrimeField field, const std::vector<std::vector<long long>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  MatrixGF m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = field.from_int(rows[r][c]);
  }
  return m;
}

MatrixGF MatrixGF::from_columns(PrimeField field, std::size_t rows,
                                std::span<const VectorGF> columns) {
  MatrixGF m(field, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

VectorGF MatrixGF::row(std::size_t r) const {
  return VectorGF(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

VectorGF MatrixGF::column(std::size_t c) const {
  VectorGF out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

MatrixGF MatrixGF::operator*(const MatrixGF& other) const {
  if (cols_ != other.rows_ || !(field_ == other.field_))
    throw std::invalid_argument("matrix product dimension or field mismatch");
  MatrixGF out(field_, rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      Elem a = (*this)(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < other.cols_; ++c)
        out(r, c) = field_.add(out(r, c), field_.mul(a, other(k, c)));
    }
  return out;
}

MatrixGF MatrixGF::operator+(const MatrixGF& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || !(field_ == other.field_))
    throw std::invalid_argument("matrix sum mismatch");
  MatrixGF out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.add(data_[i], other.data_[i]);
  return out;
}

MatrixGF MatrixGF::operator-(const MatrixGF& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || !(field_ == other.field_))
    throw std::invalid_argument("matrix difference mismatch");
  MatrixGF out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.sub(data_[i], other.data_[i]);
  return out;
}

VectorGF MatrixGF::apply(const VectorGF& u) const {
  if (u.size() != cols_) throw std::invalid_argument("vector length mismatch");
  VectorGF out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    Elem acc = 0;
    for (std::size_t c = 0; c < cols_; ++c)
      if (u[c]) acc = field_.add(acc, field_.mul((*this)(r, c), u[c]));
    out[r] = acc;
  }
  return out;
}

MatrixGF MatrixGF::transposed() const {
  MatrixGF out(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

bool MatrixGF::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem e) { return e == 0; });
}

namespace {

// In-place RREF; returns pivot columns. Rows beyond the rank end up zero.
std::vector<std::size_t> rref_in_place(MatrixGF& m) {
  const auto& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t pr = lead_row;
    while (pr < m.rows() && m(pr, c) == 0) ++pr;
    if (pr == m.rows()) continue;
    if (pr != lead_row)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(pr, k), m(lead_row, k));
    Elem inv = f.inv(m(lead_row, c));
    for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) = f.mul(m(lead_row, k), inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, c) == 0) continue;
      Elem factor = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k)
        m(r, k) = f.sub(m(r, k), f.mul(factor, m(lead_row, k)));
    }
    pivots.push_back(c);
    ++lead_row;
  }
  return pivots;
}

MatrixGF top_rows(const MatrixGF& m, std::size_t k) {
  MatrixGF out(m.field(), k, m.cols());
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

}  // namespace

MatrixGF MatrixGF::rref(std::vector<std::size_t>* pivots) const {
  MatrixGF out = *this;
  auto piv = rref_in_place(out);
  if (pivots) *pivots = std::move(piv);
  return out;
}

std::size_t MatrixGF::rank() const {
  MatrixGF tmp = *this;
  return rref_in_place(tmp).size();
}

SubspaceGF MatrixGF::kernel() const {
  std::vector<std::size_t> pivots;
  MatrixGF r = rref(&pivots);
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<VectorGF> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    VectorGF u(cols_, 0);
    u[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) u[pivots[i]] = field_.neg(r(i, free));
    basis.push_back(std::move(u));
  }
  return SubspaceGF::span(field_, cols_, basis);
}

SubspaceGF MatrixGF::image() const { return SubspaceGF::row_space(transposed()); }

MatrixGF MatrixGF::inverse() const {
  if (rows_ != cols_) throw std::domain_error("inverse of a non-square matrix");
  const std::size_t n = rows_;
  MatrixGF aug(field_, n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = (*this)(r, c);
    aug(r, n + r) = 1;
  }
  auto pivots = rref_in_place(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1))
    throw std::domain_error("matrix is singular");
  MatrixGF out(field_, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = aug(r, n + c);
  return out;
}

// -------------------------------------------------------------- SubspaceGF

SubspaceGF SubspaceGF::zero(PrimeField field, std::size_t ambient) {
  return SubspaceGF(MatrixGF(field, 0, ambient), {});
}

SubspaceGF SubspaceGF::full(PrimeField field, std::size_t ambient) {
  std::vector<std::size_t> piv(ambient);
  for (std::size_t i = 0; i < ambient; ++i) piv[i] = i;
  return SubspaceGF(MatrixGF::identity(field, ambient), std::move(piv));
}

SubspaceGF SubspaceGF::span(PrimeField field, std::size_t ambient,
                            std::span<const VectorGF> vectors) {
  MatrixGF m(field, vectors.size(), ambient);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].size() != ambient) throw std::invalid_argument("span: vector length mismatch");
    for (std::size_t c = 0; c < ambient; ++c) m(r, c) = vectors[r][c] % field.p();
  }
  return row_space(m);
}

SubspaceGF SubspaceGF::row_space(const MatrixGF& m) {
  MatrixGF r = m;
  auto pivots = rref_in_place(r);
  MatrixGF basis = top_rows(r, pivots.size());
  return SubspaceGF(std::move(basis), std::move(pivots));
}

SubspaceGF SubspaceGF::coordinate(PrimeField field, std::size_t ambient,
                                  std::span<const std::size_t> coords) {
  std::vector<std::size_t> sorted(coords.begin(), coords.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  MatrixGF b(field, sorted.size(), ambient);
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    if (sorted[r] >= ambient) throw std::out_of_range("coordinate out of range");
    b(r, sorted[r]) = 1;
  }
  return SubspaceGF(std::move(b), std::move(sorted));
}

VectorGF SubspaceGF::reduce(const VectorGF& u) const {
  if (u.size() != ambient_dim()) throw std::invalid_argument("reduce: vector length mismatch");
  const auto& f = field();
  VectorGF out = u;
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    Elem a = out[pivots_[i]];
    if (a == 0) continue;
    for (std::size_t c = pivots_[i]; c < out.size(); ++c)
      out[c] = f.sub(out[c], f.mul(a, basis_(i, c)));
  }
  return out;
}

bool SubspaceGF::contains(const VectorGF& u) const { return is_zero_vector(reduce(u)); }

bool SubspaceGF::contains(const SubspaceGF& other) const {
  if (other.ambient_dim() != ambient_dim() || !(other.field() == field()))
    throw std::invalid_argument("contains: ambient or field mismatch");
  for (std::size_t i = 0; i < other.dim(); ++i)
    if (!contains(other.basis_vector(i))) return false;
  return true;
}

VectorGF SubspaceGF::coordinates(const VectorGF& u) const {
  VectorGF out(dim());
  for (std::size_t i = 0; i < pivots_.size(); ++i) out[i] = u[pivots_[i]];
  return out;
}

std::vector<std::size_t> SubspaceGF::complement_coordinates() const {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < ambient_dim(); ++c) {
    if (k < pivots_.size() && pivots_[k] == c) {
      ++k;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

nlohmann::json SubspaceGF::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < dim(); ++r) rows.push_back(basis_.row(r));
  return {{"p", field().p()}, {"ambient", ambient_dim()}, {"pivots", pivots_}, {"rows", rows}};
}

SubspaceGF SubspaceGF::from_json(const nlohmann::json& j) {
  PrimeField f(j.at("p").get<std::uint32_t>());
  auto ambient = j.at("ambient").get<std::size_t>();
  auto rows = j.at("rows").get<std::vector<VectorGF>>();
  SubspaceGF s = span(f, ambient, rows);
  if (s.pivots() != j.at("pivots").get<std::vector<std::size_t>>() || s.dim() != rows.size())
    throw std::invalid_argument("subspace record is not in canonical form");
  return s;
}

std::size_t SubspaceGF::hash() const {
  std::size_t h = 1469598103934665603ull ^ field().p() ^ (ambient_dim() << 20);
  for (Elem e : basis_.data()) h = (h ^ e) * 1099511628211ull;
  return h;
}

SubspaceGF sum(const SubspaceGF& s, const SubspaceGF& t) {
  if (s.ambient_dim() != t.ambient_dim() || !(s.field() == t.field()))
    throw std::invalid_argument("sum: ambient or field mismatch");
  std::vector<VectorGF> vs;
  for (std::size_t i = 0; i < s.dim(); ++i) vs.push_back(s.basis_vector(i));
  for (std::size_t i = 0; i < t.dim(); ++i) vs.push_back(t.basis_vector(i));
  return SubspaceGF::span(s.field(), s.ambient_dim(), vs);
}

SubspaceGF intersect(const SubspaceGF& s, const SubspaceGF& t) {
  if (s.ambient_dim() != t.ambient_dim() || !(s.field() == t.field()))
    throw std::invalid_argument("intersect: ambient or field mismatch");
  const auto& f = s.field();
  const std::size_t n = s.ambient_dim();
  // Solve sum a_i s_i - sum b_k t_k = 0; each solution yields sum a_i s_i.
  MatrixGF m(f, n, s.dim() + t.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t r = 0; r < n; ++r) m(r, i) = s.basis()(i, r);
  for (std::size_t k = 0; k < t.dim(); ++k)
    for (std::size_t r = 0; r < n; ++r) m(r, s.dim() + k) = f.neg(t.basis()(k, r));
  SubspaceGF sol = m.kernel();
  std::vector<VectorGF> vs;
  for (std::size_t q = 0; q < sol.dim(); ++q) {
    VectorGF u(n, 0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      Elem a = sol.basis()(q, i);
      if (!a) continue;
      for (std::size_t r = 0; r < n; ++r) u[r] = f.add(u[r], f.mul(a, s.basis()(i, r)));
    }
    vs.push_back(std::move(u));
  }
  return SubspaceGF::span(f, n, vs);
}

SubspaceGF image_of(const MatrixGF& x, const SubspaceGF& s) {
  std::vector<VectorGF> vs;
  for (std::size_t i = 0; i < s.dim(); ++i) vs.push_back(x.apply(s.basis_vector(i)));
  return SubspaceGF::span(x.field(), x.rows(), vs);
}

MatrixGF quotient_map(const SubspaceGF& w) {
  auto keep = w.complement_coordinates();
  const std::size_t n = w.ambient_dim();
  MatrixGF q(w.field(), keep.size(), n);
  for (std::size_t c = 0; c < n; ++c) {
    VectorGF e(n, 0);
    e[c] = 1;
    VectorGF red = w.reduce(e);
    for (std::size_t r = 0; r < keep.size(); ++r) q(r, c) = red[keep[r]];
  }
  return q;
}

MatrixGF restrict_map(const MatrixGF& x, const SubspaceGF& s) {
  MatrixGF out(x.field(), s.dim(), s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    VectorGF image = x.apply(s.basis_vector(i));
    if (!s.contains(image)) throw std::invalid_argument("restrict_map: subspace is not x-stable");
    VectorGF coords = s.coordinates(image);
    for (std::size_t r = 0; r < s.dim(); ++r) out(r, i) = coords[r];
  }
  return out;
}

MatrixGF induced_map(const MatrixGF& x, const SubspaceGF& w) {
  auto keep = w.complement_coordinates();
  MatrixGF out(x.field(), keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    VectorGF red = w.reduce(x.column(keep[i]));
    for (std::size_t r = 0; r < keep.size(); ++r) out(r, i) = red[keep[r]];
  }
  return out;
}

// ------------------------------------------------------------- enumeration

class SubspaceWalker {
 public:
  SubspaceWalker(const SubspaceGF& ambient, std::size_t d,
                 const std::function<bool(const SubspaceGF&)>& visit)
      : ambient_(ambient), d_(d), visit_(visit), k_(ambient.dim()) {}

  bool run() {
    if (d_ > k_) return true;
    std::vector<std::size_t> pivots(d_);
    for (std::size_t i = 0; i < d_; ++i) pivots[i] = i;
    while (true) {
      if (!walk_pattern(pivots)) return false;
      // next combination of pivot columns
      std::size_t i = d_;
      while (i > 0 && pivots[i - 1] == k_ - d_ + i - 1) --i;
      if (i == 0) return true;
      ++pivots[i - 1];
      for (std::size_t t = i; t < d_; ++t) pivots[t] = pivots[t - 1] + 1;
    }
  }

 private:
  bool walk_pattern(const std::vector<std::size_t>& pivots) {
    const auto& f = ambient_.field();
    const std::uint32_t p = f.p();
    std::vector<bool> is_pivot(k_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t r = 0; r < d_; ++r)
      for (std::size_t c = pivots[r] + 1; c < k_; ++c)
        if (!is_pivot[c]) free.emplace_back(r, c);

    MatrixGF coeff(f, d_, k_);
    for (std::size_t r = 0; r < d_; ++r) coeff(r, pivots[r]) = 1;
    const bool identity_ambient = ambient_.dim() == ambient_.ambient_dim();

    while (true) {
      if (identity_ambient) {
        if (!visit_(SubspaceGF(coeff, pivots))) return false;
      } else {
        if (!visit_(SubspaceGF::row_space(coeff * ambient_.basis()))) return false;
      }
      std::size_t t = 0;
      for (; t < free.size(); ++t) {
        auto [r, c] = free[t];
        if (++coeff(r, c) < p) break;
        coeff(r, c) = 0;
      }
      if (t == free.size()) return true;
    }
  }

  const SubspaceGF& ambient_;
  std::size_t d_;
  const std::function<bool(const SubspaceGF&)>& visit_;
  std::size_t k_;
};

bool walk_subspaces(const SubspaceGF& ambient, std::size_t d,
                    const std::function<bool(const SubspaceGF&)>& visit) {
  return SubspaceWalker(ambient, d, visit).run();
}

std::vector<SubspaceGF> subspaces(const SubspaceGF& ambient, std::size_t d) {
  std::vector<SubspaceGF> out;
  for_each_subspace(ambient, d, [&](const SubspaceGF& s) { out.push_back(s); });
  return out;
}

std::uint64_t gaussian_binomial(unsigned m, unsigned d, std::uint64_t q) {
  if (d > m) return 0;
  // Pascal-type recurrence [m, d] = [m-1, d-1] + q^d [m-1, d].
  std::vector<unsigned __int128> row(d + 1, 0);
  row[0] = 1;
  const unsigned __int128 limit = ~std::uint64_t{0};
  for (unsigned mm = 1; mm <= m; ++mm) {
    for (unsigned dd = std::min(mm, d); dd >= 1; --dd) {
      unsigned __int128 qd = 1;
      for (unsigned t = 0; t < dd; ++t) {
        qd *= q;
        if (qd > limit) throw std::overflow_error("gaussian_binomial overflow");
      }
      unsigned __int128 v = row[dd - 1] + qd * row[dd];
      if (v > limit) throw std::overflow_error("gaussian_binomial overflow");
      row[dd] = v;
    }
  }
  return static_cast<std::uint64_t>(row[d]);
}

}  // namespace enpave
