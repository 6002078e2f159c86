#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "curvatura/invariants.hpp"

namespace curvatura {

/// A point of the projective completion R^l + RP^{l-1}_inf. Ideal points are
/// stored as a unit direction with first nonzero component positive.
struct ProjPoint {
  Eigen::VectorXd v;
  bool at_infinity = false;

  static ProjPoint affine(Eigen::VectorXd p) { return {std::move(p), false}; }
  static ProjPoint infinite(Eigen::VectorXd dir);
};

/// Degree-2 hypersurface {q : q^T M q + 2 b.q + c = 0} with its projective
/// completion [[M, b], [b^T, c]].
struct Quadric {
  Eigen::MatrixXd M;
  Eigen::VectorXd b;
  double c = 0.0;

  int dim() const { return static_cast<int>(M.rows()); }

  double eval(const Eigen::VectorXd& q) const {
    return q.dot(M * q) + 2.0 * b.dot(q) + c;
  }

  /// Magnitude of the polynomial's terms at q; the natural scale for
  /// residual checks of eval(q).
  double eval_scale(const Eigen::VectorXd& q) const;

  Eigen::MatrixXd homogeneous() const;
};

enum class QuadricLabel {
  // dim 2
  Ellipse,
  Circle,
  Hyperbola,
  Parabola,
  TwoIntersectingLines,
  TwoParallelLines,
  DoubleLine,
  LineAtInfinity,
  DoubleLineAtInfinity,
  // dim 3
  Cone,
  EllipticCylinder,
  HyperbolicCylinder,
  ParabolicCylinder,
  TwoPlanes,
  TwoParallelPlanes,
  DoublePlane,
  PlaneAtInfinity,
  DoublePlaneAtInfinity,
  // dim-3 pencils of full projective rank (never a local caustic; returned so
  // classification is total, e.g. for the H/R hyperboloids)
  Nondegenerate,
};

const char* to_string(QuadricLabel label);

struct QuadricClass {
  QuadricLabel label;
  std::optional<ProjPoint> center_or_vertex;
};

/// Rank/sign classification of a symmetric pencil, with relative eigenvalue
/// thresholding: |lambda| <= tol * max|lambda_i| counts as zero.
QuadricClass classify_quadric(const Quadric& q, double tol = kClassifyTol);

/// Local caustic (<A,q>-1)(<C,q>-1) - <B,q>^2 = 0 expanded to (M, b, c):
/// M is the Gauss-form matrix, b = -H, c = 1.
Quadric caustic_quadric(const LocalQuadraticMap& lqm);

struct CausticCenter {
  enum class Kind { Affine, AtInfinity, NoUnique } kind;
  Eigen::VectorXd v;  // affine point or ideal direction; empty for NoUnique

  bool affine() const { return kind == Kind::Affine; }
};

/// Centre (codim 2) or vertex (codim 3) of the local caustic: the solution of
/// [G_p] R = H when Delta != 0, the appropriate ideal point when the kernel
/// direction is unique, NoUnique otherwise. For codim 3 with tau != 0 the
/// closed form (A-C) x B / (2 tau) is cross-checked.
CausticCenter caustic_center(const LocalQuadraticMap& lqm,
                             double tol = kClassifyTol);

/// Level-set form of the caustic: 2 G_p(q-R) + N^2/(4 Delta) for codim 2,
/// G_p(q-R) for codim 3 (and the analogous affine level for codim 1).
/// Vanishes exactly on the caustic. Throws SingularError when Delta = 0.
double caustic_level_residual(const LocalQuadraticMap& lqm,
                              const Eigen::VectorXd& q);

/// Pole of the hyperplane {q : <normal,q> = offset} with respect to the unit
/// sphere: normal/offset, or the ideal point in direction normal when the
/// hyperplane contains the origin. Throws on zero normal.
ProjPoint polar_point_of_hyperplane(const Eigen::VectorXd& normal,
                                    double offset);

struct DualSamples {
  bool degenerate_ellipse = false;  // u_axis, v_axis linearly dependent
  std::vector<ProjPoint> poles;
};

/// Poles of hyperplanes tangent to the indicatrix ellipse over a uniform theta
/// grid (for codim 3, a pencil of 8 tangent planes is sampled through each
/// tangent line). Every affine pole lies on the local caustic.
DualSamples dual_of_indicatrix(const LocalQuadraticMap& lqm, int samples);

/// Eigen-structure of dGamma_perp at a unit normal: the two curvatures along
/// n, the orthogonal sphere-contact directions in the (e1,e2) tangent basis,
/// and the focal centres n/mu (ideal when mu = 0).
struct NormalLineFoci {
  double mu1 = 0.0, mu2 = 0.0;  // mu1 <= mu2
  Eigen::Vector2d dir1, dir2;
  ProjPoint focus1, focus2;
};

NormalLineFoci normal_line_foci(const LocalQuadraticMap& lqm,
                                const Eigen::VectorXd& n);

/// The cone Sigma_p = {G_p(q) = 0} of degenerate normal vectors and the cone
/// Sigma_p^* = {G_p^*(q) = 0} based on the indicatrix ellipse. The starred
/// cone requires Delta != 0.
std::pair<Quadric, Quadric> sigma_cones(const LocalQuadraticMap& lqm);

/// Loci constraining the centres: H lies on {2 G_p^*(q) = alpha} and R on
/// {2 G_p(q) = alpha} with alpha = 1 - N^2/(4 Delta) (codim 2) or 1 (codim 3).
std::pair<Quadric, Quadric> hr_loci(const LocalQuadraticMap& lqm);

/// Real roots of the Poisson bracket {Q1,Q2}(u) = 0 as tangent directions
/// theta mod pi: the asymptotic directions of a surface point in R^4. Two
/// distinct roots iff Delta < 0, one double root iff Delta = 0 with nonzero
/// bracket, every direction iff the bracket vanishes identically. Each root
/// carries the matching ideal point of the caustic and, at hyperbolic points,
/// the pole of the corresponding caustic asymptote.
struct AsymptoticDirections {
  bool all_directions = false;
  struct Root {
    double theta;             // in [0, pi)
    Eigen::Vector2d u;        // (cos theta, sin theta)
    ProjPoint ideal_point;    // point of C_p on the ideal line
    Eigen::VectorXd ep_point; // E_p(theta); pole of the asymptote when Delta<0
    bool double_root = false;
  };
  std::vector<Root> roots;
};

AsymptoticDirections asymptotic_directions_r4(const LocalQuadraticMap& lqm,
                                              double tol = kClassifyTol);

// --- geometry helpers shared by classification, duality and bitangency ---

/// Principal-axis reduction of an EllipseParam: E = center + r1 cos(phi) w1
/// + r2 sin(phi) w2 with r1 >= r2 >= 0 and w1, w2 orthonormal.
struct EllipseGeometry {
  Eigen::VectorXd center;
  Eigen::VectorXd w1, w2;
  double r1 = 0.0, r2 = 0.0;
  int rank = 0;  // 0 point, 1 segment, 2 ellipse

  bool nondegenerate() const { return rank == 2; }
};

EllipseGeometry ellipse_geometry(const EllipseParam& e,
                                 double tol = kClassifyTol);

/// Containment ratio of a point against a nondegenerate ellipse, measured in
/// the conjugate-diameter coordinates: < 1 inside, > 1 outside. The off-plane
/// component is reported separately.
struct EllipseContainment {
  double ratio = 0.0;
  double off_plane = 0.0;
};

EllipseContainment ellipse_containment(const EllipseGeometry& g,
                                       const Eigen::VectorXd& p);

/// Euclidean distance from a point to the (possibly degenerate) ellipse,
/// computed from the quartic stationarity equation of the squared distance
/// (robust safeguarded iteration on its monotone branch; no sampling).
double ellipse_distance(const EllipseGeometry& g, const Eigen::VectorXd& p);

/// Numerical rank of a set of column vectors by pivoted orthogonalization
/// with pivot threshold tol * (largest column norm). Exact linear dependence
/// is detected at working precision (no Gram-matrix sqrt(eps) noise).
int column_rank(const Eigen::MatrixXd& cols, double tol);

/// Deterministic points on a central conic/cone {v^T M v = c0} shifted by
/// `center`: used to sample caustics. Empty when the level set is empty.
std::vector<Eigen::VectorXd> sample_central_quadric(
    const Eigen::MatrixXd& M, const Eigen::VectorXd& center, double c0,
    int count);

/// Points on the local caustic of a map with Delta != 0.
std::vector<Eigen::VectorXd> sample_caustic_points(const LocalQuadraticMap& lqm,
                                                   int count);

}  // namespace curvatura
