#pragma once

#include <array>
#include <string>
#include <vector>

#include "curvatura/quadric.hpp"

namespace curvatura {

/// A local quadratic map bundled with its paired map (components solved
/// against [G_p], never via an explicit inverse) and both invariant sets.
/// `condition` is the spectral condition number of [G_p]; results are flagged
/// unreliable when it exceeds 1e12.
struct PairedBundle {
  LocalQuadraticMap original;
  LocalQuadraticMap paired;
  Invariants inv;
  Invariants inv_star;
  double condition = 0.0;
  bool reliable = true;
};

/// Builds the paired map G_p^{-1} o phi. Throws SingularError when Delta = 0.
PairedBundle paired_map(const LocalQuadraticMap& lqm);

/// Samples the local caustic, pushes each point through the linear map G_p and
/// evaluates the paired caustic equation; returns the max relative residual.
double paired_caustic_image_check(const PairedBundle& bundle, int samples);

/// The two points lambda R where the paired indicatrix ellipse touches the
/// local caustic (codim 2): roots of <R,H> l^2 - 2 <R,H> l + 1 = 0.
struct Bitangency {
  enum class Kind { TwoPoints, DoublePoint, NoRealTangency, Degenerate } kind;
  double lambda1 = 0.0, lambda2 = 0.0;
  std::array<Eigen::Vector2d, 2> points{};  // valid for TwoPoints/DoublePoint
};

Bitangency bitangency_points(const PairedBundle& bundle);

/// Named residuals of a block of identities; `passed(tol)` checks them all.
struct IdentityReport {
  struct Entry {
    std::string name;
    double residual;
  };
  std::vector<Entry> entries;

  double max_residual() const;
  bool passed(double tol) const { return max_residual() <= tol; }
};

/// Component-level identities tying Q_i to Q_i^*: psi-biorthogonality,
/// bracket expressions over tau (codim 3), the pointwise product identity
/// <phi,phi^*>(u), and the bracket sums.
IdentityReport component_identities_check(const PairedBundle& bundle,
                                          int samples);

/// Geometry of the cones Sigma_p and Sigma_p^* for codim 3: diagonal
/// evaluations giving K and Acal, ruling orthogonality, polar duality of the
/// q3 = 1 sections in the principal basis, and the sign fact
/// min(K, Acal) < 0.
IdentityReport sigma_star_geometry_check(const PairedBundle& bundle);

/// The six equivalent descriptions of an asymptotic direction u at a
/// hyperbolic codim-2 point, checked against each other in one report: the
/// bracket {Q1,Q2}(u) vanishes, the tangent lines of E and E* at u pass
/// through the origin, E*(u) is a degenerate normal vector (G(E*(u)) = 0),
/// and E*(u) is orthogonal to E(u). Away from the roots all six quantities
/// are bounded away from zero together.
IdentityReport asymptotic_equivalences_check(const PairedBundle& bundle);

}  // namespace curvatura
