#pragma once

#include <string>
#include <vector>

#include "curvatura/jet.hpp"
#include "curvatura/quadric.hpp"

namespace curvatura {

enum class Label4 {
  Elliptic,
  Hyperbolic,
  Parabolic,
  Semiumbilic,
  InflectionReal,
  InflectionImaginary,
  InflectionFlat,
  Umbilic,
  FlatUmbilic,
};

const char* to_string(Label4 label);

struct PointClass4 {
  Label4 label;
  bool centered = false;        // ||H|| = 0
  bool circle_caustic = false;  // the two focal curvatures coincide
  bool boundary_warning = false;
  double decisive = 0.0;  // signed quantity that settled the open label
};

/// Decision tree on the indicatrix ellipse: nondegenerate -> sign of Delta,
/// segment -> radial test and position of the origin, point -> umbilic split.
/// Near a stratum boundary the open-stratum label is kept and
/// boundary_warning is set when the decisive quantity is within 10*tol of 0.
PointClass4 classify_r4(const LocalQuadraticMap& lqm,
                        double tol = kClassifyTol);

enum class Label5 {
  PseudoElliptic,
  PseudoHyperbolic,
  PseudoParabolic,
  FlatElliptic,
  FlatHyperbolic,
  FlatParabolic,
  Semiumbilic,
  InflectionReal,
  InflectionImaginary,
  InflectionFlat,
  Umbilic,
  FlatUmbilic,
};

const char* to_string(Label5 label);

struct PointClass5 {
  Label5 label;
  int tau_sign = 0;   // -1, 0, +1
  int m_stratum = 0;  // rank of [(A-C)/2 | B | H]
  bool boundary_warning = false;
  double decisive = 0.0;
};

/// tau != 0 branch: sign of G_p^*(R); tau = 0 with nondegenerate ellipse:
/// position of the origin against E_p inside its plane (equivalently the sign
/// of Acal); degenerate ellipse: the segment/point cases shared with R^4.
PointClass5 classify_r5(const LocalQuadraticMap& lqm,
                        double tol = kClassifyTol);

struct InequalityEntry {
  std::string name;
  double lhs = 0.0;   // inequality in the form lhs >= rhs
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

struct InequalityReport {
  std::vector<InequalityEntry> entries;
  bool all_hold = true;
};

/// Evaluates every inequality applicable to the map's codimension; entries
/// whose hypotheses fail (Delta = 0, tau = 0) are omitted. An entry holds when
/// slack >= -tol * scale.
InequalityReport inequality_report(const LocalQuadraticMap& lqm,
                                   double tol = 1e-10);

struct GridCell {
  int i = 0, j = 0;
  double s = 0.0, t = 0.0;
  bool ok = false;
  std::string error;
  Invariants inv;
  std::string label;
  bool boundary_warning = false;
  int tau_sign = 0;
};

/// Per-node classification sweep over [s0,s1] x [t0,t1]; failures are captured
/// per cell, never fatal. Cells are emitted row-major (s index outer).
std::vector<GridCell> grid_classify(const SurfaceSpec& spec, double s0,
                                    double s1, double t0, double t1,
                                    int resolution,
                                    double tol = kClassifyTol);

}  // namespace curvatura
