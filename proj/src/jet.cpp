#include "curvatura/jet.hpp"

#include <stdexcept>

#include "curvatura/taylor.hpp"

namespace curvatura {
namespace {

Taylor2 eval_taylor(const ExprPtr& e, const Taylor2& s, const Taylor2& t) {
  return std::visit(
      [&](const auto& n) -> Taylor2 {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExprNode::Num>) {
          return Taylor2::constant(n.value);
        } else if constexpr (std::is_same_v<T, ExprNode::Var>) {
          return n.name == 's' ? s : t;
        } else if constexpr (std::is_same_v<T, ExprNode::Neg>) {
          return -eval_taylor(n.arg, s, t);
        } else if constexpr (std::is_same_v<T, ExprNode::Bin>) {
          const Taylor2 a = eval_taylor(n.lhs, s, t);
          const Taylor2 b = eval_taylor(n.rhs, s, t);
          switch (n.op) {
            case BinOp::Add:
              return a + b;
            case BinOp::Sub:
              return a - b;
            case BinOp::Mul:
              return a * b;
            case BinOp::Div:
              if (b.v == 0.0)
                throw DomainError("division by zero", print_expr(n.rhs));
              return a / b;
          }
          return Taylor2{};
        } else if constexpr (std::is_same_v<T, ExprNode::Pow>) {
          const Taylor2 base = eval_taylor(n.base, s, t);
          if (n.exponent < 0 && base.v == 0.0)
            throw DomainError("division by zero", print_expr(n.base));
          return pow_int(base, n.exponent);
        } else {
          const Taylor2 x = eval_taylor(n.arg, s, t);
          switch (n.fn) {
            case UnaryFn::Sin:
              return sin(x);
            case UnaryFn::Cos:
              return cos(x);
            case UnaryFn::Exp:
              return exp(x);
            case UnaryFn::Sqrt:
              if (x.v <= 0.0)
                throw DomainError("sqrt of non-positive value",
                                  print_expr(n.arg));
              return sqrt(x);
            case UnaryFn::Ln:
              if (x.v <= 0.0)
                throw DomainError("ln of non-positive value", print_expr(n.arg));
              return log(x);
          }
          return Taylor2{};
        }
      },
      e->node);
}

constexpr double kPivotThreshold = 1e-8;

}  // namespace

SurfaceSpec make_surface(int ambient_dim, std::vector<ExprPtr> components,
                         std::string name) {
  if (ambient_dim < 3 || ambient_dim > 5)
    throw std::invalid_argument("surface: ambient dimension must be 3, 4 or 5");
  if (static_cast<int>(components.size()) != ambient_dim)
    throw std::invalid_argument(
        "surface: component count must equal ambient dimension");
  return SurfaceSpec{ambient_dim, std::move(components), std::move(name)};
}

SurfaceSpec parse_surface(int ambient_dim,
                          const std::vector<std::string>& component_sources,
                          std::string name) {
  std::vector<ExprPtr> comps;
  comps.reserve(component_sources.size());
  for (const auto& src : component_sources) comps.push_back(parse_expr(src));
  return make_surface(ambient_dim, std::move(comps), std::move(name));
}

Jet2 eval_jet2(const SurfaceSpec& spec, double s0, double t0) {
  const int n = spec.ambient_dim;
  Jet2 jet;
  jet.value.resize(n);
  jet.d_s.resize(n);
  jet.d_t.resize(n);
  jet.d_ss.resize(n);
  jet.d_st.resize(n);
  jet.d_tt.resize(n);
  const Taylor2 s = Taylor2::var_s(s0);
  const Taylor2 t = Taylor2::var_t(t0);
  for (int i = 0; i < n; ++i) {
    const Taylor2 r = eval_taylor(spec.components[i], s, t);
    jet.value[i] = r.v;
    jet.d_s[i] = r.ds;
    jet.d_t[i] = r.dt;
    jet.d_ss[i] = r.dss;
    jet.d_st[i] = r.dst;
    jet.d_tt[i] = r.dtt;
  }
  return jet;
}

AdaptedFrame adapted_frame(const Jet2& jet) {
  const int n = static_cast<int>(jet.value.size());
  const double gs2 = jet.d_s.squaredNorm();
  const double gt2 = jet.d_t.squaredNorm();
  const double gst = jet.d_s.dot(jet.d_t);
  const double gram = gs2 * gt2 - gst * gst;
  if (gs2 * gt2 < 1e-300 || gram <= 1e-16 * gs2 * gt2)
    throw ImmersionError("degenerate immersion: tangent vectors dependent");

  AdaptedFrame f;
  f.base_point = jet.value;
  f.e1 = jet.d_s / std::sqrt(gs2);
  Eigen::VectorXd w = jet.d_t - jet.d_t.dot(f.e1) * f.e1;
  f.e2 = w / w.norm();

  const int l = n - 2;
  f.normals.resize(n, l);
  int found = 0;
  for (int k = 0; k < n && found < l; ++k) {
    Eigen::VectorXd cand = Eigen::VectorXd::Zero(n);
    cand[k] = 1.0;
    cand -= cand.dot(f.e1) * f.e1;
    cand -= cand.dot(f.e2) * f.e2;
    for (int j = 0; j < found; ++j)
      cand -= cand.dot(f.normals.col(j)) * f.normals.col(j);
    const double nrm = cand.norm();
    if (nrm <= kPivotThreshold) continue;
    f.normals.col(found++) = cand / nrm;
  }
  if (found < l)
    throw std::logic_error("adapted_frame: normal completion failed");

  Eigen::MatrixXd full(n, n);
  full.col(0) = f.e1;
  full.col(1) = f.e2;
  for (int j = 0; j < l; ++j) full.col(2 + j) = f.normals.col(j);
  if (full.determinant() < 0.0) f.normals.col(l - 1) *= -1.0;
  return f;
}

Eigen::Matrix2d metric_normalizer(const Jet2& jet) {
  Eigen::Matrix2d g;
  g << jet.d_s.squaredNorm(), jet.d_s.dot(jet.d_t), jet.d_s.dot(jet.d_t),
      jet.d_t.squaredNorm();
  const double gram = g.determinant();
  if (g(0, 0) * g(1, 1) < 1e-300 || gram <= 1e-16 * g(0, 0) * g(1, 1))
    throw ImmersionError("degenerate immersion: tangent vectors dependent");
  const SymEigen e = sym_eigen(g);
  Eigen::Matrix2d l = Eigen::Matrix2d::Zero();
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector2d v = e.vectors.col(k);
    l += (1.0 / std::sqrt(e.values[k])) * v * v.transpose();
  }
  return l;
}

LocalQuadraticMap local_quadratic_map_at(const SurfaceSpec& spec, double s0,
                                         double t0) {
  const Jet2 jet = eval_jet2(spec, s0, t0);
  const AdaptedFrame frame = adapted_frame(jet);
  const Eigen::Matrix2d L = metric_normalizer(jet);

  // Second derivatives with respect to the normalized parameters u = L^{-1}
  // applied to (s,t): gamma~(u) = gamma(p0 + L u).
  const auto second = [&](int col1, int col2) {
    const double x1 = L(0, col1), y1 = L(1, col1);
    const double x2 = L(0, col2), y2 = L(1, col2);
    return Eigen::VectorXd(x1 * x2 * jet.d_ss +
                           (x1 * y2 + x2 * y1) * jet.d_st +
                           y1 * y2 * jet.d_tt);
  };
  const Eigen::VectorXd guu = second(0, 0);
  const Eigen::VectorXd guv = second(0, 1);
  const Eigen::VectorXd gvv = second(1, 1);

  const int l = spec.ambient_dim - 2;
  Eigen::VectorXd A(l), B(l), C(l);
  for (int i = 0; i < l; ++i) {
    A[i] = frame.normals.col(i).dot(guu);
    B[i] = frame.normals.col(i).dot(guv);
    C[i] = frame.normals.col(i).dot(gvv);
  }
  return make_lqm(A, B, C);
}

}  // namespace curvatura
