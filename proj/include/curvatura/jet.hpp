#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "curvatura/expr.hpp"
#include "curvatura/invariants.hpp"

namespace curvatura {

/// A parametrized surface gamma: R^2 -> R^n given componentwise by expressions
/// in the variables s, t. Ambient dimension is restricted to 3, 4 or 5.
struct SurfaceSpec {
  int ambient_dim = 3;
  std::vector<ExprPtr> components;
  std::string name;
};

SurfaceSpec make_surface(int ambient_dim, std::vector<ExprPtr> components,
                         std::string name = "");

SurfaceSpec parse_surface(int ambient_dim,
                          const std::vector<std::string>& component_sources,
                          std::string name = "");

/// Value and all partial derivatives up to order 2 of gamma at a point.
/// Exact for polynomial inputs (no truncation error); d_st is symmetric by
/// construction of the Taylor propagation.
struct Jet2 {
  Eigen::VectorXd value;
  Eigen::VectorXd d_s, d_t;
  Eigen::VectorXd d_ss, d_st, d_tt;
};

Jet2 eval_jet2(const SurfaceSpec& spec, double s0, double t0);

/// Orthonormal frame adapted to the surface at a point: e1, e2 span the
/// tangent plane (e1 = gamma_s normalized, e2 by Gram-Schmidt), the normals
/// complete it. Completion orthonormalizes the standard basis vectors against
/// span(e1,e2) in index order (pivot threshold 1e-8) and the last normal's
/// sign is chosen so the full n-frame has positive determinant.
struct AdaptedFrame {
  Eigen::VectorXd base_point;
  Eigen::VectorXd e1, e2;
  Eigen::MatrixXd normals;  // n x codim, columns are the normal frame
};

AdaptedFrame adapted_frame(const Jet2& jet);

/// Symmetric inverse square root g^{-1/2} of the first fundamental form at the
/// point: the change of parameters L that makes d(gamma) L orthonormal.
Eigen::Matrix2d metric_normalizer(const Jet2& jet);

/// Second-order data of the surface at (s0,t0) in the adapted frame: the
/// vectors A, B, C of the local quadratic map. For a Monge-form graph
/// evaluated at the origin this reproduces the graph's quadratic coefficients
/// verbatim.
LocalQuadraticMap local_quadratic_map_at(const SurfaceSpec& spec, double s0,
                                         double t0);

}  // namespace curvatura
