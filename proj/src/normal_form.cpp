#include "enpave/normal_form.hpp"

#include <algorithm>
#include <stdexcept>

namespace enpave {

std::size_t NormalPair::index_of(int row, int pos) const {
  auto it = std::find(boxes.begin(), boxes.end(), BoxLabel{row, pos});
  if (it == boxes.end())
    throw std::out_of_range("no box (" + std::to_string(row) + "," + std::to_string(pos) + ")");
  return static_cast<std::size_t>(it - boxes.begin());
}

nlohmann::json NormalPair::to_json() const {
  nlohmann::json xm = nlohmann::json::array();
  for (std::size_t r = 0; r < x.rows(); ++r) xm.push_back(x.row(r));
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& b : boxes) labels.push_back({b.row, b.pos});
  return {{"bipartition", {{"mu", type.mu.parts()}, {"nu", type.nu.parts()}}},
          {"p", field().p()},
          {"boxes", labels},
          {"x", xm},
          {"v", v},
          {"weights", weights}};
}

NormalPair normal_pair(const Bipartition& b, PrimeField field) {
  std::vector<BoxLabel> boxes;
  const int rows = std::max(b.mu.length(), b.nu.length());
  for (int i = 1; i <= rows; ++i)
    for (int j = 1; j <= b.mu.part(i) + b.nu.part(i); ++j) boxes.push_back({i, j});
  const std::size_t n = boxes.size();
  MatrixGF x(field, n, n);
  VectorGF v(n, 0);
  std::vector<int> weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [i, j] = boxes[k];
    weights[k] = box_weight(b, i, j);
    if (j > 1) x(k - 1, k) = 1;  // x v_{i,j} = v_{i,j-1}; row-major keeps them adjacent
    if (b.mu.part(i) > 0 && j == b.mu.part(i)) v[k] = 1;
  }
  return NormalPair{b, std::move(boxes), std::move(v), std::move(x), std::move(weights)};
}

Partition jordan_type(const MatrixGF& x) {
  if (x.rows() != x.cols()) throw std::domain_error("jordan_type: matrix is not square");
  const std::size_t n = x.rows();
  // kernel dims of x^k, k = 0..n
  std::vector<std::size_t> ker{0};
  MatrixGF power = MatrixGF::identity(x.field(), n);
  while (ker.back() < n) {
    power = power * x;
    std::size_t k = n - power.rank();
    if (k == ker.back()) throw std::domain_error("jordan_type: matrix is not nilpotent");
    ker.push_back(k);
  }
  // lambda^t_k = dim ker x^k - dim ker x^{k-1}
  std::vector<int> transpose;
  for (std::size_t k = 1; k < ker.size(); ++k)
    transpose.push_back(static_cast<int>(ker[k] - ker[k - 1]));
  return Partition(std::move(transpose)).transpose();
}

std::vector<MatrixGF> centralizer_basis(const MatrixGF& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("centralizer_basis: matrix is not square");
  const auto& f = x.field();
  const std::size_t n = x.rows();
  // unknown y_{ab} at index a*n+b; equation (yx - xy)_{rc} = 0.
  MatrixGF eq(f, n * n, n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t e = r * n + c;
      for (std::size_t k = 0; k < n; ++k) {
        // (yx)_{rc} = sum_k y_{rk} x_{kc}
        if (x(k, c)) eq(e, r * n + k) = f.add(eq(e, r * n + k), x(k, c));
        // (xy)_{rc} = sum_k x_{rk} y_{kc}
        if (x(r, k)) eq(e, k * n + c) = f.sub(eq(e, k * n + c), x(r, k));
      }
    }
  SubspaceGF sol = eq.kernel();
  std::vector<MatrixGF> out;
  for (std::size_t i = 0; i < sol.dim(); ++i) {
    MatrixGF y(f, n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) y(a, b) = sol.basis()(i, a * n + b);
    out.push_back(std::move(y));
  }
  return out;
}

SubspaceGF centralizer_orbit(const VectorGF& v, const MatrixGF& x) {
  std::vector<VectorGF> images;
  for (const auto& y : centralizer_basis(x)) images.push_back(y.apply(v));
  return SubspaceGF::span(x.field(), x.rows(), images);
}

Bipartition classify_pair(const VectorGF& v, const MatrixGF& x) {
  const std::size_t n = x.rows();
  SubspaceGF w = centralizer_orbit(v, x);
  if (!w.contains(image_of(x, w)))
    throw std::logic_error("classify_pair: E^x v is not x-stable");
  Bipartition b{jordan_type(restrict_map(x, w)), jordan_type(induced_map(x, w))};
  if (static_cast<std::size_t>(b.n()) != n)
    throw std::logic_error("classify_pair: orbit type does not have size n");
  return b;
}

SubspaceGF weight_space(const PrimeField& field, const std::vector<int>& weights, int w) {
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] == w) coords.push_back(i);
  return SubspaceGF::coordinate(field, weights.size(), coords);
}

std::vector<int> distinct_weights(const std::vector<int>& weights) {
  std::vector<int> ws = weights;
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  return ws;
}

bool is_graded(const SubspaceGF& s, const std::vector<int>& weights) {
  std::size_t total = 0;
  for (int w : distinct_weights(weights))
    total += intersect(s, weight_space(s.field(), weights, w)).dim();
  return total == s.dim();
}

SubspaceGF nonneg_part(const NormalPair& np) {
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < np.weights.size(); ++i)
    if (np.weights[i] >= 0) coords.push_back(i);
  return SubspaceGF::coordinate(np.field(), np.dim(), coords);
}

nlohmann::json Decomposition::to_json() const {
  return {{"construction", std::string(1, construction)},
          {"row", row},
          {"V1", v1.to_json()},
          {"V2", v2.to_json()}};
}

namespace {

VectorGF unit(std::size_t n, std::size_t i) {
  VectorGF e(n, 0);
  e[i] = 1;
  return e;
}

}  // namespace

Decomposition explicit_decomposition(const NormalPair& np) {
  const auto& b = np.type;
  if (is_distinguished(b))
    throw std::invalid_argument("explicit_decomposition: " + b.to_string() + " is distinguished");
  const auto& f = np.field();
  const std::size_t n = np.dim();
  const int k = b.mu.length();
  const int rows = std::max(b.mu.length(), b.nu.length());
  auto row_len = [&](int i) { return b.mu.part(i) + b.nu.part(i); };
  auto row_vectors = [&](int i, std::vector<VectorGF>& out) {
    for (int j = 1; j <= row_len(i); ++j) out.push_back(unit(n, np.index_of(i, j)));
  };
  auto other_rows = [&](int skip_a, int skip_b, std::vector<VectorGF>& out) {
    for (int i = 1; i <= rows; ++i)
      if (i != skip_a && i != skip_b) row_vectors(i, out);
  };

  // (a) l(beta) > l(alpha): split off row l(alpha) + 1.
  if (b.nu.length() > k) {
    std::vector<VectorGF> one, two;
    other_rows(k + 1, k + 1, one);
    row_vectors(k + 1, two);
    return {SubspaceGF::span(f, n, one), SubspaceGF::span(f, n, two), 'a', k + 1};
  }
  // (b) alpha_l = alpha_{l+1}.
  for (int l = 1; l < k; ++l) {
    if (b.mu.part(l) != b.mu.part(l + 1)) continue;
    std::vector<VectorGF> one, two;
    other_rows(l, l + 1, one);
    for (int j = 1; j <= row_len(l + 1); ++j) {
      VectorGF u(n, 0);
      u[np.index_of(l, j)] = 1;
      u[np.index_of(l + 1, j)] = 1;
      one.push_back(std::move(u));
    }
    row_vectors(l, two);
    return {SubspaceGF::span(f, n, one), SubspaceGF::span(f, n, two), 'b', l};
  }
  // (c) beta_l = beta_{l+1} with beta padded by zeros to length k.
  for (int l = 1; l < k; ++l) {
    if (b.nu.part(l) != b.nu.part(l + 1)) continue;
    std::vector<VectorGF> one, two;
    other_rows(l, l + 1, one);
    const int beta = b.nu.part(l);
    VectorGF u(n, 0);
    u[np.index_of(l, b.mu.part(l) + beta)] = 1;
    u[np.index_of(l + 1, b.mu.part(l + 1) + beta)] = 1;
    while (!is_zero_vector(u)) {
      one.push_back(u);
      u = np.x.apply(u);
    }
    row_vectors(l + 1, two);
    return {SubspaceGF::span(f, n, one), SubspaceGF::span(f, n, two), 'c', l};
  }
  throw std::logic_error("explicit_decomposition: no construction applies to " + b.to_string());
}

std::vector<std::string> decomposition_defects(const GradedPair& pair, const Decomposition& d) {
  std::vector<std::string> defects;
  const std::size_t n = pair.dim();
  if (d.v1.dim() + d.v2.dim() != n) defects.push_back("dimensions do not add up to dim V");
  if (intersect(d.v1, d.v2).dim() != 0) defects.push_back("V1 and V2 intersect nontrivially");
  if (!d.v1.contains(image_of(pair.x, d.v1))) defects.push_back("V1 is not x-stable");
  if (!d.v2.contains(image_of(pair.x, d.v2))) defects.push_back("V2 is not x-stable");
  if (!is_graded(d.v1, pair.weights)) defects.push_back("V1 is not graded");
  if (!is_graded(d.v2, pair.weights)) defects.push_back("V2 is not graded");
  if (!d.v1.contains(pair.v)) defects.push_back("v is not in V1");
  if (d.v1.dim() == 0 || d.v2.dim() == 0) defects.push_back("decomposition is trivial");
  return defects;
}

}  // namespace enpave
