#include "nhskin/localization.hpp"

#include <cmath>
#include <ostream>

#include "nhskin/error.hpp"
#include "nhskin/io.hpp"

namespace nhskin {

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Right:
      return "right";
    case ProfileKind::Left:
      return "left";
    case ProfileKind::Biorthogonal:
      return "biorthogonal";
  }
  return "right";
}

const char* to_string(StateLabel label) {
  switch (label) {
    case StateLabel::Skin:
      return "skin";
    case StateLabel::TopologicalBoundary:
      return "topological";
    case StateLabel::Bulk:
      return "bulk";
  }
  return "bulk";
}

namespace {

void check_length(const CVector& v, const SiteIndex& index) {
  if (v.size() != index.rows())
    throw InvalidArgument("state has " + std::to_string(v.size()) + " entries, lattice has " +
                          std::to_string(index.rows()));
}

}  // namespace

SiteProfile density_profile(const CVector& state, const SiteIndex& index, ProfileKind kind) {
  check_length(state, index);
  if (kind == ProfileKind::Biorthogonal)
    throw InvalidArgument("density_profile gives right or left profiles");
  const double total = state.squaredNorm();
  if (!(total > 0.0)) throw InvalidArgument("density of a zero vector");
  SiteProfile p;
  p.kind = kind;
  p.weights = CVector::Zero(index.cells());
  for (int r = 0; r < index.rows(); ++r) p.weights[index.cell_of_row(r)] += std::norm(state[r]) / total;
  return p;
}

SiteProfile biorthogonal_density(const CVector& left, const CVector& right, const SiteIndex& index) {
  check_length(left, index);
  check_length(right, index);
  const cplx overlap = left.dot(right);
  if (std::abs(overlap) < 1e-12)
    throw EpVicinityError("|<L|R>| = " + format_double(std::abs(overlap)) +
                          " below 1e-12; biorthogonal density undefined near an exceptional point");
  SiteProfile p;
  p.kind = ProfileKind::Biorthogonal;
  p.normalization = overlap;
  p.weights = CVector::Zero(index.cells());
  for (int r = 0; r < index.rows(); ++r)
    p.weights[index.cell_of_row(r)] += std::conj(left[r]) * right[r] / overlap;
  return p;
}

double participation_ratio(const SiteProfile& profile) {
  const RVector a = profile.weights.cwiseAbs();
  const double s2 = a.squaredNorm();
  if (!(s2 > 0.0)) throw InvalidArgument("participation ratio of an empty profile");
  return a.sum() * a.sum() / s2;
}

double edge_fraction(const SiteProfile& profile, double edge_region) {
  const int n = profile.sites();
  const RVector a = profile.weights.cwiseAbs();
  const int m = std::min(n, static_cast<int>(std::ceil(edge_region * n - 1e-12)));
  double edge = 0.0;
  for (int i = 0; i < n; ++i)
    if (i < m || i >= n - m) edge += a[i];
  return edge / a.sum();
}

Side dominant_half(const SiteProfile& profile) {
  const int n = profile.sites();
  const RVector a = profile.weights.cwiseAbs();
  double left = 0.0, right = 0.0;
  for (int i = 0; i < n; ++i) {
    // The middle cell of an odd chain counts for neither side.
    if (2 * i + 1 < n)
      left += a[i];
    else if (2 * i + 1 > n)
      right += a[i];
  }
  if (left > right) return Side::Left;
  if (right > left) return Side::Right;
  return Side::None;
}

DecayFit decay_fit(const SiteProfile& profile, int first, int last) {
  if (first < 0 || last >= profile.sites() || first > last)
    throw InvalidArgument("decay window [" + std::to_string(first) + ", " + std::to_string(last) +
                          "] outside the profile");
  const int m = last - first + 1;
  if (m < 5) throw InvalidArgument("decay window needs at least 5 sites");
  RVector x(m), y(m);
  for (int i = 0; i < m; ++i) {
    const double w = profile.weights[first + i].real();
    if (!(w > 0.0))
      throw InvalidArgument("nonpositive weight at site " + std::to_string(first + i));
    x[i] = first + i;
    y[i] = std::log(w);
  }
  const double xm = x.mean(), ym = y.mean();
  const double sxx = (x.array() - xm).square().sum();
  const double sxy = ((x.array() - xm) * (y.array() - ym)).sum();
  const double syy = (y.array() - ym).square().sum();
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return {slope, r2};
}

StateClass classify_state(const CVector& left, const CVector& right, const RealSpaceOperator& op,
                          const ClassifierThresholds& thresholds) {
  const SiteIndex& index = op.index();
  if (index.dimension() != 1) throw InvalidArgument("classify_state supports 1D lattices only");
  const SiteProfile bio = biorthogonal_density(left, right, index);
  const SiteProfile rp = density_profile(right, index);
  StateClass c;
  c.right_edge_fraction = edge_fraction(rp, thresholds.edge_region);
  c.biorthogonal_pr_scaled = participation_ratio(bio) / index.cells();
  const bool edge = c.right_edge_fraction > thresholds.edge_fraction;
  if (edge && c.biorthogonal_pr_scaled > thresholds.pr_fraction) {
    c.label = StateLabel::Skin;
    c.side = dominant_half(rp);
  } else if (edge) {
    c.label = StateLabel::TopologicalBoundary;
    c.side = dominant_half(bio);
  } else {
    c.label = StateLabel::Bulk;
    c.side = Side::None;
  }
  return c;
}

void write_profile_csv(std::ostream& out, const SiteProfile& profile) {
  out << "site,re,im,kind\n";
  for (int i = 0; i < profile.sites(); ++i)
    out << i << ',' << format_double(profile.weights[i].real()) << ','
        << format_double(profile.weights[i].imag()) << ',' << to_string(profile.kind) << '\n';
}

}  // namespace nhskin
