#include "dqplate/plate_model.hpp"

#include "dqplate/errors.hpp"
#include "dqplate/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dqplate {

namespace {

void require_size(const AssembledSystem& sys, const Vector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != sys.n) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(sys.n) +
                          " stacked entries, got " + std::to_string(v.size()));
  }
}

std::size_t min_grid(BcKind bc) { return bc == BcKind::clamped ? 5 : 4; }

// Transverse residual for given in-plane fields (not necessarily recovered).
Vector transverse_residual(const AssembledSystem& s, const Vector& w, const Vector& u,
                           const Vector& v) {
  const Vector h7w = s.H7 * w;
  const Vector h8w = s.H8 * w;
  const Vector p1 = s.H7 * u + 0.5 * h7w.cwiseAbs2();
  const Vector p2 = s.H8 * v + 0.5 * h8w.cwiseAbs2();
  const Vector t = s.H8 * u + s.H7 * v + h7w.cwiseProduct(h8w);
  const Vector nonlinear = s.x_weight * p1.cwiseProduct(s.H5 * w) +
                           s.y_weight * p2.cwiseProduct(s.H6 * w) +
                           s.shear_weight * (s.H2 * w).cwiseProduct(t);
  return s.H4 * w - s.nonlinear_scale * nonlinear - s.load;
}

}  // namespace

PlateSpec PlateSpec::isotropic(double a, double b, double h, double E, double nu, double q,
                               BcKind bc, std::size_t nx, std::size_t ny, GridKind kind) {
  PlateSpec s;
  s.a = a;
  s.b = b;
  s.h = h;
  s.E1 = s.E2 = E;
  s.nu12 = nu;
  s.G12 = E / (2.0 * (1.0 + nu));
  s.q = q;
  s.bc = bc;
  s.nx = nx;
  s.ny = ny;
  s.grid_kind = kind;
  return s;
}

void PlateSpec::validate() const {
  auto positive = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InvalidArgument(std::string(name) + " must be a positive finite number");
    }
  };
  positive(a, "a");
  positive(b, "b");
  positive(h, "h");
  positive(E1, "E1");
  positive(E2, "E2");
  positive(G12, "G12");
  if (!std::isfinite(nu12)) throw InvalidArgument("nu12 must be finite");
  if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidArgument("q must be a non-negative finite number");
  const double nu21 = nu12 * E2 / E1;
  if (!(nu12 * nu21 < 1.0)) throw InvalidMaterial("nu12 * nu21 must be below 1");
  const std::size_t lo = min_grid(bc);
  for (auto [count, name] : {std::pair{nx, "nx"}, std::pair{ny, "ny"}}) {
    if (count < lo || count > kMaxGridPoints) {
      throw InvalidArgument(std::string(name) + " = " + std::to_string(count) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(kMaxGridPoints) + "] for " +
                            to_string(bc) + " edges");
    }
  }
}

DerivedMaterial derive_material(const PlateSpec& spec) {
  DerivedMaterial m;
  m.nu21 = spec.nu12 * spec.E2 / spec.E1;
  m.mu = 1.0 - spec.nu12 * m.nu21;
  if (!(m.mu > 0.0)) throw InvalidMaterial("1 - nu12 nu21 must be positive");
  const double h3 = spec.h * spec.h * spec.h;
  m.D1 = spec.E1 * h3 / (12.0 * m.mu);
  m.D2 = spec.E2 * h3 / (12.0 * m.mu);
  m.Dk = spec.G12 * h3 / 12.0;
  m.D3 = m.nu21 * m.D1 + 2.0 * m.Dk;
  m.C = spec.nu12 * spec.E2 + m.mu * spec.G12;
  return m;
}

AssembledSystem assemble(const PlateSpec& spec) {
  spec.validate();
  const auto bcx = build_boundary_operators(make_diff_matrices(spec.nx, spec.grid_kind), spec.bc);
  const auto bcy = build_boundary_operators(make_diff_matrices(spec.ny, spec.grid_kind), spec.bc);
  return assemble(spec, bcx, bcy);
}

AssembledSystem assemble(const PlateSpec& spec, const BoundaryOperatorSet& bcx,
                         const BoundaryOperatorSet& bcy) {
  spec.validate();
  if (bcx.kind != spec.bc || bcy.kind != spec.bc) {
    throw InvalidArgument("boundary operator kinds do not match the plate's edge condition");
  }
  if (bcx.grid_size() != spec.nx || bcy.grid_size() != spec.ny) {
    throw InvalidArgument("boundary operator grid sizes do not match nx/ny");
  }
  if (static_cast<std::size_t>(bcx.Abar.rows()) != bcx.n_interior ||
      static_cast<std::size_t>(bcy.Abar.rows()) != bcy.n_interior) {
    throw InvalidArgument("boundary operator matrices do not match their interior count");
  }

  AssembledSystem s;
  s.spec = spec;
  s.material = derive_material(spec);
  s.scaling = Scaling{spec.a, spec.b, spec.h};
  s.bcx = bcx;
  s.bcy = bcy;
  s.mx = bcx.n_interior;
  s.my = bcy.n_interior;
  s.n = s.mx * s.my;

  const auto& m = s.material;
  const double rho2 = (spec.a / spec.b) * (spec.a / spec.b);
  const double rho4 = rho2 * rho2;
  const Matrix ix = identity(s.mx);
  const Matrix iy = identity(s.my);

  const Matrix bxi = kron(bcx.Bbar, iy);
  const Matrix iby = kron(ix, bcy.Bbar);
  const double shear = m.mu * spec.G12;

  s.H1 = spec.E1 * bxi + shear * rho2 * iby;
  s.H2 = m.C * rho2 * kron(bcx.Abar, bcy.Abar);
  s.H3 = spec.E2 * rho4 * iby + shear * rho2 * bxi;
  s.H4 = kron(bcx.Dbar, iy) + 2.0 * m.D3 / m.D1 * rho2 * kron(bcx.Bbar, bcy.Bbar) +
         m.D2 / m.D1 * rho4 * kron(ix, bcy.Dbar);
  s.H5 = spec.E1 * bxi + spec.nu12 * spec.E2 * rho2 * iby;
  s.H6 = spec.E2 * rho2 * iby + m.nu21 * spec.E1 * bxi;
  s.H7 = kron(bcx.Abar, iy);
  s.H8 = kron(ix, bcy.Abar);

  const double a4 = std::pow(spec.a, 4);
  s.load = Vector::Constant(static_cast<Eigen::Index>(s.n), spec.q * a4 / (m.D1 * spec.h));
  s.nonlinear_scale = spec.h * spec.h * spec.h / (m.mu * m.D1);
  s.x_weight = 1.0;
  s.y_weight = rho2;
  s.shear_weight = 2.0 * shear / m.C;

  const auto nn = static_cast<Eigen::Index>(s.n);
  Matrix block(2 * nn, 2 * nn);
  block << s.H1, s.H2, s.H2, s.H3;
  s.inplane_lu.compute(block);
  s.inplane_rcond = s.inplane_lu.rcond();
  if (!(s.inplane_rcond > 1e-14)) {
    throw DecouplingFailure("in-plane block system is singular (rcond estimate " +
                                std::to_string(s.inplane_rcond) + ")",
                            s.inplane_rcond);
  }
  return s;
}

LVectors l_vectors(const AssembledSystem& sys, const Vector& w) {
  require_size(sys, w, "l_vectors");
  const Vector h2w = sys.H2 * w;
  const Vector h7w = sys.H7 * w;
  const Vector h8w = sys.H8 * w;
  return {hadamard(h7w, Vector(sys.H1 * w)) + hadamard(h8w, h2w),
          hadamard(h8w, Vector(sys.H3 * w)) + hadamard(h7w, h2w)};
}

InplaneFields recover_inplane(const AssembledSystem& sys, const Vector& w) {
  const auto [l1, l2] = l_vectors(sys, w);
  const auto nn = static_cast<Eigen::Index>(sys.n);
  Vector rhs(2 * nn);
  rhs << -l1, -l2;
  const Vector sol = sys.inplane_lu.solve(rhs);
  if (!sol.allFinite()) {
    throw DecouplingFailure("in-plane solve produced non-finite values", sys.inplane_rcond);
  }
  return {sol.head(nn), sol.tail(nn)};
}

Vector residual(const AssembledSystem& sys, const Vector& w) {
  const auto [u, v] = recover_inplane(sys, w);
  return transverse_residual(sys, w, u, v);
}

Matrix jacobian(const AssembledSystem& sys, const Vector& w) {
  require_size(sys, w, "jacobian");
  const auto& s = sys;
  const auto nn = static_cast<Eigen::Index>(s.n);

  const Vector h1w = s.H1 * w;
  const Vector h2w = s.H2 * w;
  const Vector h3w = s.H3 * w;
  const Vector h7w = s.H7 * w;
  const Vector h8w = s.H8 * w;

  Matrix rhs(2 * nn, nn);
  rhs.topRows(nn) = -(sjt_post(s.H7, h1w) + sjt_post(s.H1, h7w) + sjt_post(s.H8, h2w) +
                      sjt_post(s.H2, h8w));
  rhs.bottomRows(nn) = -(sjt_post(s.H8, h3w) + sjt_post(s.H3, h8w) + sjt_post(s.H7, h2w) +
                         sjt_post(s.H2, h7w));
  const Vector uv_rhs = [&] {
    const auto [l1, l2] = l_vectors(s, w);
    Vector r(2 * nn);
    r << -l1, -l2;
    return r;
  }();
  // One factorization serves both the fields and their sensitivities.
  Matrix all_rhs(2 * nn, nn + 1);
  all_rhs << rhs, uv_rhs;
  const Matrix sol = s.inplane_lu.solve(all_rhs);
  const auto du = sol.topLeftCorner(nn, nn);
  const auto dv = sol.bottomLeftCorner(nn, nn);
  const Vector u = sol.col(nn).head(nn);
  const Vector v = sol.col(nn).tail(nn);

  const Vector p1 = s.H7 * u + 0.5 * h7w.cwiseAbs2();
  const Vector p2 = s.H8 * v + 0.5 * h8w.cwiseAbs2();
  const Vector t = s.H8 * u + s.H7 * v + h7w.cwiseProduct(h8w);

  Matrix dp1 = s.H7 * du;
  dp1 += sjt_post(s.H7, h7w);
  Matrix dp2 = s.H8 * dv;
  dp2 += sjt_post(s.H8, h8w);
  Matrix dt = s.H8 * du;
  dt.noalias() += s.H7 * dv;
  dt += sjt_post(s.H7, h8w) + sjt_post(s.H8, h7w);

  Matrix dnl = s.x_weight * (sjt_post(dp1, s.H5 * w) + sjt_post(s.H5, p1));
  dnl += s.y_weight * (sjt_post(dp2, s.H6 * w) + sjt_post(s.H6, p2));
  dnl += s.shear_weight * (sjt_post(s.H2, t) + sjt_post(dt, h2w));
  return s.H4 - s.nonlinear_scale * dnl;
}

Vector linear_solve(const AssembledSystem& sys) {
  Eigen::PartialPivLU<Matrix> lu(sys.H4);
  if (!(lu.rcond() > 1e-14)) {
    throw AssemblyError("bending operator H4 is singular; check the boundary operators");
  }
  return lu.solve(sys.load);
}

CoupledResiduals coupled_residuals(const AssembledSystem& sys, const Vector& w, const Vector& u,
                                   const Vector& v) {
  require_size(sys, w, "coupled_residuals");
  require_size(sys, u, "coupled_residuals");
  require_size(sys, v, "coupled_residuals");
  const auto [l1, l2] = l_vectors(sys, w);
  return {sys.H1 * u + sys.H2 * v + l1, sys.H2 * u + sys.H3 * v + l2,
          transverse_residual(sys, w, u, v)};
}

double center_value(const Matrix& field, const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  struct Bracket {
    Eigen::Index lo;
    Eigen::Index hi;
    double t;
  };
  auto bracket = [](const std::vector<double>& nodes) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    if (n % 2 == 1) return Bracket{n / 2, n / 2, 0.0};
    const double mid = 0.5 * (nodes.front() + nodes.back());
    const Eigen::Index lo = n / 2 - 1;
    const auto l = static_cast<std::size_t>(lo);
    return Bracket{lo, lo + 1, (mid - nodes[l]) / (nodes[l + 1] - nodes[l])};
  };
  const Bracket bx = bracket(xs);
  const Bracket by = bracket(ys);
  return (1 - bx.t) * (1 - by.t) * field(bx.lo, by.lo) + bx.t * (1 - by.t) * field(bx.hi, by.lo) +
         (1 - bx.t) * by.t * field(bx.lo, by.hi) + bx.t * by.t * field(bx.hi, by.hi);
}

SolutionField recover_fields(const AssembledSystem& sys, const Vector& w, const Vector& u,
                             const Vector& v) {
  require_size(sys, w, "recover_fields");
  require_size(sys, u, "recover_fields");
  require_size(sys, v, "recover_fields");
  SolutionField f;
  f.Wbar = w;
  f.Ubar = u;
  f.Vbar = v;
  const auto& rx = sys.bcx.R;
  const auto& ry = sys.bcy.R;
  f.w = sys.scaling.h * (rx * unvec(w, sys.mx, sys.my) * ry.transpose());
  f.u = sys.scaling.u_unit() * (rx * unvec(u, sys.mx, sys.my) * ry.transpose());
  f.v = sys.scaling.v_unit() * (rx * unvec(v, sys.mx, sys.my) * ry.transpose());
  for (double xi : sys.bcx.full.grid.nodes) f.x.push_back(sys.spec.a * xi);
  for (double yi : sys.bcy.full.grid.nodes) f.y.push_back(sys.spec.b * yi);
  f.center_deflection_ratio = center_value(f.w, f.x, f.y) / sys.scaling.h;
  return f;
}

double linear_delta_center(const PlateSpec& spec, double delta) {
  spec.validate();
  const auto m = derive_material(spec);
  const DeltaPlan px = build_delta_rows(make_grid(spec.nx, spec.grid_kind), delta);
  const DeltaPlan py = build_delta_rows(make_grid(spec.ny, spec.grid_kind), delta);
  const DiffMatrices dx = diff_matrices_higher(diff_matrix_first(px.grid), px.grid);
  const DiffMatrices dy = diff_matrices_higher(diff_matrix_first(py.grid), py.grid);
  const Matrix& edge_x = spec.bc == BcKind::clamped ? dx.A : dx.B;
  const Matrix& edge_y = spec.bc == BcKind::clamped ? dy.A : dy.B;

  const auto nx = static_cast<Eigen::Index>(spec.nx);
  const auto ny = static_cast<Eigen::Index>(spec.ny);
  const double rho2 = (spec.a / spec.b) * (spec.a / spec.b);
  const Matrix ix = Matrix::Identity(nx, nx);
  const Matrix iy = Matrix::Identity(ny, ny);
  const Matrix bending = kron(dx.D, iy) + 2.0 * m.D3 / m.D1 * rho2 * kron(dx.B, dy.B) +
                         m.D2 / m.D1 * rho2 * rho2 * kron(ix, dy.D);
  const Matrix slope_x = kron(edge_x, iy);
  const Matrix slope_y = kron(ix, edge_y);

  Matrix k(nx * ny, nx * ny);
  Vector rhs = Vector::Zero(nx * ny);
  const double load = spec.q * std::pow(spec.a, 4) / (m.D1 * spec.h);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      const Eigen::Index row = i * ny + j;
      const RowRole rx = px.roles[static_cast<std::size_t>(i)];
      const RowRole ry = py.roles[static_cast<std::size_t>(j)];
      if (rx == RowRole::deflection || ry == RowRole::deflection) {
        k.row(row).setZero();
        k(row, row) = 1.0;
      } else if (rx == RowRole::derivative) {
        k.row(row) = slope_x.row(row);
      } else if (ry == RowRole::derivative) {
        k.row(row) = slope_y.row(row);
      } else {
        k.row(row) = bending.row(row);
        rhs(row) = load;
      }
    }
  }
  const Vector wv = k.partialPivLu().solve(rhs);
  return center_value(unvec(wv, spec.nx, spec.ny), px.grid.nodes, py.grid.nodes);
}

}  // namespace dqplate
