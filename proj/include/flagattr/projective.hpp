#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flagattr/numerics.hpp"
#include "flagattr/poset.hpp"

namespace flagattr::projective {

// Norm below which an eigencomponent of a unit vector counts as absent.
inline constexpr double kComponentTol = 1e-8;

// Point of projective space: a unit vector with the first coordinate of
// magnitude above 1e-10 made real positive.
struct ProjectivePoint {
    CVec v;

    static ProjectivePoint from(CVec raw);
    int dim() const { return static_cast<int>(v.size()); }
};

// sin of the angle between two lines; phase-invariant.
double projective_distance(const ProjectivePoint& x, const ProjectivePoint& y);
bool points_equal(const ProjectivePoint& x, const ProjectivePoint& y, double tol = 1e-9);

// Connected component of the fixed set: the projectivized eigenspace of one
// eigenvalue, with its height value.
struct FixedComponent {
    double eigenvalue;
    ComplexMatrix basis;  // orthonormal columns spanning the eigenspace
    double height;        // -eigenvalue / 2
};

// One component per distinct eigenvalue, sorted by descending eigenvalue.
std::vector<FixedComponent> fixed_components(const numerics::HermitianSpectrum& phi);

// f([v]) = -(phi v | v) / (2 (v|v)) with the real inner product.
double height(const numerics::HermitianSpectrum& phi, const ProjectivePoint& x);

// Riemannian gradient of the height at x, as a vector orthogonal to the
// representative: -(phi v - (phi v|v) v) for unit v.
CVec gradient_field(const numerics::HermitianSpectrum& phi, const ProjectivePoint& x);

// [exp(t phi) v], evaluated spectrally with an exponent shift so that large t
// cannot overflow.
ProjectivePoint flow(const numerics::HermitianSpectrum& phi, double t, const ProjectivePoint& x);

// (backward limit, forward limit): the eigencomponents of smallest and
// largest eigenvalue present above the component threshold.
std::pair<ProjectivePoint, ProjectivePoint> limit_map(const numerics::HermitianSpectrum& phi,
                                                      const ProjectivePoint& x);

enum class Sign { Plus, Minus };

// Membership of y in the stable (Plus) or unstable (Minus) manifold of a
// fixed point.  Throws NotAFixedPoint when `fixed` is not an eigenvector line.
bool stable_membership(const numerics::HermitianSpectrum& phi, const ProjectivePoint& fixed,
                       const ProjectivePoint& y, Sign sign);

// Chain on the fixed components, anti-isomorphic to the spectrum: the
// component of the largest eigenvalue sits at the bottom.
lattice::FinitePoset component_smale_order(const numerics::HermitianSpectrum& phi);

// Dual chain (largest eigenvalue on top); its upper sets are exactly the
// fixed sets of attractors.
lattice::FinitePoset attraction_order(const numerics::HermitianSpectrum& phi);

// Attractor P(V_+) / repellor P(V_-) pair for one eigenvalue; the repellor
// basis is absent for the smallest eigenvalue (zero subspace).
struct ProjectiveAttractorPair {
    double eigenvalue;
    ComplexMatrix attractor_basis;                 // spans sum of eigenspaces with mu >= nu
    std::optional<ComplexMatrix> repellor_basis;   // spans sum with mu < nu
    int attractor_dim;
    int repellor_dim;
};

std::vector<ProjectiveAttractorPair> projective_attractor_pairs(const numerics::HermitianSpectrum& phi);

// Deterministic label used for components in posets and reports.
std::string eigenvalue_label(double nu);

}  // namespace flagattr::projective
