#include "nhskin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "nhskin/error.hpp"

namespace nhskin {

const char* to_string(Side side) {
  switch (side) {
    case Side::Left:
      return "left";
    case Side::Right:
      return "right";
    case Side::None:
      return "none";
  }
  return "none";
}

}  // namespace nhskin

namespace nhskin::linalg {

namespace {

struct Edge {
  int from;
  int to;
  double weight;  // |a_ij|^2
};

std::vector<Edge> offdiagonal_edges(const CMatrix& a) {
  std::vector<Edge> edges;
  const int n = static_cast<int>(a.rows());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double w = std::norm(a(i, j));
      if (w > 0.0) edges.push_back({i, j, w});
    }
  }
  return edges;
}

// True when every weakly connected component is strongly connected.
bool components_strongly_connected(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> out(n), in(n);
  for (const auto& e : edges) {
    out[e.from].push_back(e.to);
    in[e.to].push_back(e.from);
  }
  // Kosaraju: finishing order on the forward graph, then sweep the reverse.
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    stack.push_back({s, 0});
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < out[v].size()) {
        const int w = out[v][next++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> scc(n, -1);
  int scc_count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (scc[*it] >= 0) continue;
    std::vector<int> todo{*it};
    scc[*it] = scc_count;
    while (!todo.empty()) {
      const int v = todo.back();
      todo.pop_back();
      for (int w : in[v]) {
        if (scc[w] < 0) {
          scc[w] = scc_count;
          todo.push_back(w);
        }
      }
    }
    ++scc_count;
  }
  // Weak components by union-find.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int weak_count = n;
  for (const auto& e : edges) {
    const int r1 = find(e.from), r2 = find(e.to);
    if (r1 != r2) {
      parent[r1] = r2;
      --weak_count;
    }
  }
  return weak_count == scc_count;
}

double balance_objective(const std::vector<Edge>& edges, const RVector& x) {
  double f = 0.0;
  for (const auto& e : edges) f += e.weight * std::exp(2.0 * (x[e.to] - x[e.from]));
  return f;
}

void check_square_finite(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("matrix must be square");
  if (!a.allFinite()) throw InvalidArgument("matrix has non-finite entries");
}

}  // namespace

RVector similarity_balance(const CMatrix& a, bool* balanced) {
  const int n = static_cast<int>(a.rows());
  RVector x = RVector::Zero(n);
  if (balanced) *balanced = false;
  if (n < 2) return x;
  const auto edges = offdiagonal_edges(a);
  // Dense matrices gain nothing from an exact balance over LAPACK's own,
  // and the Hessian factorization would dominate.
  if (edges.empty() || edges.size() > static_cast<std::size_t>(32) * n) return x;
  if (!components_strongly_connected(n, edges)) return x;

  constexpr int kMaxIterations = 200;
  constexpr double kImbalanceTol = 1e-12;
  RVector row(n), col(n);
  for (int it = 0; it < kMaxIterations; ++it) {
    row.setZero();
    col.setZero();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * edges.size() + n);
    for (const auto& e : edges) {
      const double s = e.weight * std::exp(2.0 * (x[e.to] - x[e.from]));
      row[e.from] += s;
      col[e.to] += s;
      triplets.emplace_back(e.from, e.to, -4.0 * s);
      triplets.emplace_back(e.to, e.from, -4.0 * s);
    }
    double imbalance = 0.0, max_diag = 0.0;
    for (int k = 0; k < n; ++k) {
      const double total = row[k] + col[k];
      if (total > 0.0) imbalance = std::max(imbalance, std::abs(col[k] - row[k]) / total);
      max_diag = std::max(max_diag, 4.0 * total);
    }
    if (imbalance < kImbalanceTol) {
      if (balanced) *balanced = true;
      break;
    }
    // Constant shifts are a null direction of the Hessian; a tiny ridge pins them.
    const double ridge = 1e-13 * max_diag + std::numeric_limits<double>::min();
    for (int k = 0; k < n; ++k) triplets.emplace_back(k, k, 4.0 * (row[k] + col[k]) + ridge);
    Eigen::SparseMatrix<double> hessian(n, n);
    hessian.setFromTriplets(triplets.begin(), triplets.end());
    const RVector grad = 2.0 * (col - row);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(hessian);
    if (solver.info() != Eigen::Success) break;
    const RVector step = solver.solve(-grad);
    const double f0 = balance_objective(edges, x);
    const double slope = grad.dot(step);
    if (!(slope < 0.0)) break;
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const RVector trial = x + t * step;
      const double f = balance_objective(edges, trial);
      if (std::isfinite(f) && f <= f0 + 1e-4 * t * slope) {
        x = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  x.array() -= x.mean();
  return x;
}

CMatrix apply_similarity(const CMatrix& a, const RVector& log_scale) {
  CMatrix out = a;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (out(i, j) != cplx(0.0)) out(i, j) *= std::exp(log_scale[j] - log_scale[i]);
  return out;
}

BalancedEigen eig_balanced(const CMatrix& a, bool want_vectors) {
  check_square_finite(a);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  BalancedEigen result;
  result.log_scale = similarity_balance(a);
  result.values.resize(n);
  if (n == 0) return result;
  CMatrix work = apply_similarity(a, result.log_scale);
  if (want_vectors) result.vectors.resize(n, n);
  lapack_int ilo = 0, ihi = 0;
  std::vector<double> scale(n), rconde(n), rcondv(n);
  double abnrm = 0.0;
  cplx dummy;
  const lapack_int info = LAPACKE_zgeevx(
      LAPACK_COL_MAJOR, 'B', 'N', want_vectors ? 'V' : 'N', 'N', n, work.data(), n,
      result.values.data(), &dummy, 1, want_vectors ? result.vectors.data() : &dummy,
      want_vectors ? n : 1, &ilo, &ihi, scale.data(), &abnrm, rconde.data(), rcondv.data());
  if (info > 0)
    throw ComputationError("eigensolver did not converge (QR failed at index " +
                           std::to_string(info) + ")");
  if (info < 0) throw ComputationError("eigensolver rejected argument " + std::to_string(-info));
  return result;
}

CVector eigenvalues(const CMatrix& a) { return eig_balanced(a, false).values; }

RVector singular_values(const CMatrix& a) {
  if (a.size() == 0) return RVector();
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues();
}

int numerical_rank(const RVector& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double cutoff = rel_tol * sv.maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;
  return rank;
}

double log_abs_det(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("determinant of non-square matrix");
  if (a.rows() == 0) return 0.0;
  Eigen::FullPivLU<CMatrix> lu(a);
  const auto& m = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double d = std::abs(m(i, i));
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(d);
  }
  return acc;
}

double hausdorff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("Hausdorff distance of an empty set");
  auto directed = [](std::span<const cplx> from, std::span<const cplx> to) {
    double worst = 0.0;
    for (const cplx& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx& q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff(const CVector& a, const CVector& b) {
  return hausdorff(std::span<const cplx>(a.data(), a.size()),
                   std::span<const cplx>(b.data(), b.size()));
}

CMatrix equilibrated_inverse(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  RVector r(n), c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = a.row(i).cwiseAbs().maxCoeff();
    r[i] = m > 0.0 ? 1.0 / m : 1.0;
  }
  CMatrix scaled = r.asDiagonal() * a;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double m = scaled.col(j).cwiseAbs().maxCoeff();
    c[j] = m > 0.0 ? 1.0 / m : 1.0;
  }
  scaled = scaled * c.asDiagonal();
  // a = R^{-1} S C^{-1}  =>  a^{-1} = C S^{-1} R
  Eigen::PartialPivLU<CMatrix> lu(scaled);
  CMatrix inv = lu.inverse();
  return c.asDiagonal() * inv * r.asDiagonal();
}

}  // namespace nhskin::linalg
