#pragma once

#include <iosfwd>

#include "nhskin/realspace.hpp"
#include "nhskin/types.hpp"

namespace nhskin {

enum class ProfileKind { Right, Left, Biorthogonal };

const char* to_string(ProfileKind kind);

/// Cell-resolved weights, orbitals summed. Right/Left weights are real and
/// nonnegative (stored with zero imaginary part); biorthogonal weights are
/// complex. Both sum to one.
struct SiteProfile {
  CVector weights;
  ProfileKind kind = ProfileKind::Right;
  cplx normalization{1.0};

  int sites() const { return static_cast<int>(weights.size()); }
};

/// |psi|^2 per cell over ||psi||^2. Throws InvalidArgument for a zero vector.
SiteProfile density_profile(const CVector& state, const SiteIndex& index,
                            ProfileKind kind = ProfileKind::Right);

/// conj(L) R per cell over <L|R>. Throws EpVicinityError if |<L|R>| < 1e-12.
SiteProfile biorthogonal_density(const CVector& left, const CVector& right, const SiteIndex& index);

/// (sum |w|)^2 / sum |w|^2: about N for a flat profile, about 1 for a single site.
double participation_ratio(const SiteProfile& profile);

/// Fraction of sum |w| in the first and last ceil(edge_region * N) cells.
double edge_fraction(const SiteProfile& profile, double edge_region = 0.1);

/// Side holding more of sum |w|; None on an exact tie.
Side dominant_half(const SiteProfile& profile);

struct DecayFit {
  double rate;       // d ln(weight) / d site; positive when growing to the right
  double r_squared;
};

/// Least-squares fit of ln Re(w) over sites [first, last] (inclusive).
/// Needs at least 5 sites, all with positive real weight.
DecayFit decay_fit(const SiteProfile& profile, int first, int last);

struct ClassifierThresholds {
  double edge_fraction = 0.5;
  double pr_fraction = 0.2;
  double edge_region = 0.1;
};

enum class StateLabel { Skin, TopologicalBoundary, Bulk };

const char* to_string(StateLabel label);

struct StateClass {
  StateLabel label;
  Side side;
  double right_edge_fraction;
  double biorthogonal_pr_scaled;  // participation ratio / number of cells
};

/// Skin: right profile edge-localized and biorthogonal profile spread out.
/// TopologicalBoundary: both edge-localized. Bulk: otherwise.
/// Only one-dimensional lattices. Throws EpVicinityError near exceptional points.
StateClass classify_state(const CVector& left, const CVector& right, const RealSpaceOperator& op,
                          const ClassifierThresholds& thresholds = {});

/// CSV "site,re,im,kind".
void write_profile_csv(std::ostream& out, const SiteProfile& profile);

}  // namespace nhskin
