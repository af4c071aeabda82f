#include "nhskin/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nhskin/error.hpp"

namespace nhskin {

namespace {

std::string term_context(std::size_t index) { return "term " + std::to_string(index) + ": "; }

}  // namespace

LatticeModel::LatticeModel(int dimension, int bands, std::vector<HoppingTerm> terms,
                           std::string name)
    : dimension_(dimension), bands_(bands), name_(std::move(name)) {
  if (dimension != 1 && dimension != 2)
    throw InvalidArgument("dimension must be 1 or 2, got " + std::to_string(dimension));
  if (bands < 1) throw InvalidArgument("bands must be >= 1, got " + std::to_string(bands));
  if (terms.empty()) throw InvalidArgument("model has no hopping terms");

  std::map<Offset, CMatrix> merged;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    if (static_cast<int>(term.offset.size()) != dimension)
      throw InvalidArgument(term_context(t) + "offset length " +
                            std::to_string(term.offset.size()) + " != dimension " +
                            std::to_string(dimension));
    if (term.amplitude.rows() != bands || term.amplitude.cols() != bands)
      throw InvalidArgument(term_context(t) + "amplitude is " +
                            std::to_string(term.amplitude.rows()) + "x" +
                            std::to_string(term.amplitude.cols()) + ", expected " +
                            std::to_string(bands) + "x" + std::to_string(bands));
    if (!term.amplitude.allFinite())
      throw InvalidArgument(term_context(t) + "amplitude has non-finite entries");
    auto [it, inserted] = merged.try_emplace(term.offset, term.amplitude);
    if (!inserted) it->second += term.amplitude;
  }
  bool any_nonzero = false;
  for (auto& [offset, amplitude] : merged) {
    any_nonzero = any_nonzero || !amplitude.isZero(0.0);
    terms_.push_back({offset, std::move(amplitude)});
  }
  if (!any_nonzero) throw InvalidArgument("all hopping amplitudes are zero");
}

int LatticeModel::range(int axis) const {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, std::abs(t.offset[axis]));
  return r;
}

LatticeModel LatticeModel::scaled(cplx factor) const {
  std::vector<HoppingTerm> terms = terms_;
  for (auto& t : terms) t.amplitude *= factor;
  return LatticeModel(dimension_, bands_, std::move(terms), name_);
}

LatticeModel builtin_hatano_nelson(double jl, double jr) {
  CMatrix left(1, 1), right(1, 1);
  left(0, 0) = jl;
  right(0, 0) = jr;
  return LatticeModel(1, 1, {{{+1}, left}, {{-1}, right}}, "hatano-nelson");
}

LatticeModel builtin_nh_ssh(double t1, double t2, double gamma) {
  constexpr int A = 0, B = 1;
  CMatrix intra = CMatrix::Zero(2, 2);
  intra(A, B) = t1 + gamma;
  intra(B, A) = t1 - gamma;
  CMatrix back = CMatrix::Zero(2, 2);  // c^dagger_{A,n} c_{B,n-1}
  back(A, B) = t2;
  CMatrix forward = CMatrix::Zero(2, 2);  // c^dagger_{B,n} c_{A,n+1}
  forward(B, A) = t2;
  return LatticeModel(1, 2, {{{0}, intra}, {{-1}, back}, {{+1}, forward}}, "nh-ssh");
}

LatticeModel builtin_2d(double jl, double jr, double tp) {
  auto scalar = [](double v) {
    CMatrix m(1, 1);
    m(0, 0) = v;
    return m;
  };
  return LatticeModel(2, 1,
                      {{{+1, 0}, scalar(jl)},
                       {{0, -1}, scalar(jl)},
                       {{-1, 0}, scalar(jr)},
                       {{0, +1}, scalar(jr)},
                       {{+1, +1}, scalar(tp)},
                       {{+1, -1}, scalar(tp)},
                       {{-1, +1}, scalar(tp)},
                       {{-1, -1}, scalar(tp)}},
                      "asym2d");
}

CMatrix bloch(const LatticeModel& model, std::span<const double> k) {
  if (static_cast<int>(k.size()) != model.dimension())
    throw InvalidArgument("momentum has " + std::to_string(k.size()) +
                          " components, model dimension is " + std::to_string(model.dimension()));
  for (double ki : k)
    if (!std::isfinite(ki)) throw InvalidArgument("momentum component is not finite");
  CMatrix h = CMatrix::Zero(model.bands(), model.bands());
  for (const auto& t : model.terms()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) phase += k[i] * t.offset[i];
    h += std::polar(1.0, phase) * t.amplitude;
  }
  return h;
}

CMatrix nonbloch(const LatticeModel& model, std::span<const cplx> beta) {
  if (static_cast<int>(beta.size()) != model.dimension())
    throw InvalidArgument("beta has " + std::to_string(beta.size()) +
                          " components, model dimension is " + std::to_string(model.dimension()));
  for (const cplx& b : beta)
    if (b == cplx(0.0)) throw InvalidArgument("beta = 0 is a pole of H(beta)");
  CMatrix h = CMatrix::Zero(model.bands(), model.bands());
  for (const auto& t : model.terms()) {
    cplx factor(1.0);
    for (std::size_t i = 0; i < beta.size(); ++i) factor *= std::pow(beta[i], t.offset[i]);
    h += factor * t.amplitude;
  }
  return h;
}

CharPoly::CharPoly(int variables, std::map<Exponents, cplx> coefficients)
    : variables_(variables), coefficients_(std::move(coefficients)) {
  if (variables != 1 && variables != 2) throw InvalidArgument("CharPoly needs 1 or 2 variables");
  if (coefficients_.empty()) throw InvalidArgument("CharPoly has no coefficients");
  min_.assign(variables, 0);
  max_.assign(variables, 0);
  bool first = true;
  for (const auto& [e, c] : coefficients_) {
    if (static_cast<int>(e.size()) != variables) throw InvalidArgument("exponent arity mismatch");
    for (int i = 0; i < variables; ++i) {
      min_[i] = first ? e[i] : std::min(min_[i], e[i]);
      max_[i] = first ? e[i] : std::max(max_[i], e[i]);
    }
    first = false;
    max_abs_ = std::max(max_abs_, std::abs(c));
  }
}

cplx CharPoly::coefficient(const Exponents& e) const {
  auto it = coefficients_.find(e);
  return it == coefficients_.end() ? cplx(0.0) : it->second;
}

double CharPoly::leading_magnitude() const {
  if (variables_ != 1) throw InvalidArgument("leading coefficient needs a univariate polynomial");
  return std::abs(coefficient({max_[0]}));
}

double CharPoly::trailing_magnitude() const {
  if (variables_ != 1) throw InvalidArgument("trailing coefficient needs a univariate polynomial");
  return std::abs(coefficient({min_[0]}));
}

cplx CharPoly::evaluate(std::span<const cplx> beta) const {
  if (static_cast<int>(beta.size()) != variables_) throw InvalidArgument("CharPoly arity mismatch");
  cplx acc(0.0);
  for (const auto& [e, c] : coefficients_) {
    cplx term = c;
    for (int i = 0; i < variables_; ++i) term *= std::pow(beta[i], e[i]);
    acc += term;
  }
  return acc;
}

std::vector<cplx> CharPoly::cleared() const {
  if (variables_ != 1) throw InvalidArgument("cleared() needs a univariate polynomial");
  std::vector<cplx> out(max_[0] - min_[0] + 1, cplx(0.0));
  for (const auto& [e, c] : coefficients_) out[e[0] - min_[0]] += c;
  return out;
}

std::vector<cplx> CharPoly::cleared_in_y(cplx beta_x) const {
  if (variables_ != 2) throw InvalidArgument("cleared_in_y() needs a bivariate polynomial");
  std::vector<cplx> out(max_[1] - min_[1] + 1, cplx(0.0));
  for (const auto& [e, c] : coefficients_) out[e[1] - min_[1]] += c * std::pow(beta_x, e[0]);
  return out;
}

namespace {

// Sparse Laurent polynomial keyed by exponent tuple.
using Laurent = std::map<CharPoly::Exponents, cplx>;

Laurent multiply(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      CharPoly::Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

void accumulate(Laurent& into, const Laurent& from, double sign) {
  for (const auto& [e, c] : from) into[e] += sign * c;
}

// Laplace expansion along the first remaining row; fine for the handful of
// bands a lattice unit cell carries.
Laurent determinant(const std::vector<std::vector<Laurent>>& m, std::vector<int>& rows_left,
                    std::vector<int>& cols_left) {
  if (rows_left.size() == 1) return m[rows_left[0]][cols_left[0]];
  const int row = rows_left.front();
  rows_left.erase(rows_left.begin());
  Laurent out;
  for (std::size_t c = 0; c < cols_left.size(); ++c) {
    const int col = cols_left[c];
    if (m[row][col].empty()) continue;
    std::vector<int> sub_cols = cols_left;
    sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(c));
    const Laurent minor = determinant(m, rows_left, sub_cols);
    accumulate(out, multiply(m[row][col], minor), (c % 2 == 0) ? 1.0 : -1.0);
  }
  rows_left.insert(rows_left.begin(), row);
  return out;
}

}  // namespace

CharPoly char_poly(const LatticeModel& model, cplx energy) {
  const int b = model.bands();
  const int d = model.dimension();
  std::vector<std::vector<Laurent>> m(b, std::vector<Laurent>(b));
  const CharPoly::Exponents zero(d, 0);
  for (int i = 0; i < b; ++i) m[i][i][zero] += energy;
  for (const auto& t : model.terms()) {
    const bool silent = t.amplitude.isZero(0.0);
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < b; ++j) {
        const cplx a = t.amplitude(i, j);
        // A vanishing channel still occupies its exponent slot (see LatticeModel).
        if (a != cplx(0.0) || silent) m[i][j][t.offset] -= a;
      }
    }
  }
  std::vector<int> rows(b), cols(b);
  for (int i = 0; i < b; ++i) rows[i] = cols[i] = i;
  Laurent det = determinant(m, rows, cols);
  det.try_emplace(zero, cplx(0.0));
  return CharPoly(d, std::move(det));
}

}  // namespace nhskin
