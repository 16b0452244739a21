#pragma once

#include "dqplate/bc_builder.hpp"
#include "dqplate/dq_core.hpp"

#include <Eigen/LU>

#include <cstddef>

namespace dqplate {

/// Physical description of a thin rectangular plate under uniform pressure.
/// All four edges share one boundary kind.
struct PlateSpec {
  double a = 1.0;  ///< extent along x
  double b = 1.0;  ///< extent along y
  double h = 0.01;
  double E1 = 1.0;
  double E2 = 1.0;
  double nu12 = 0.3;
  double G12 = 1.0 / 2.6;
  double q = 0.0;
  BcKind bc = BcKind::simply_supported;
  std::size_t nx = 7;
  std::size_t ny = 7;
  GridKind grid_kind = GridKind::chebyshev_mapped;

  /// Square-or-rectangular isotropic plate: E2 = E1, G12 = E / (2 (1 + nu)).
  static PlateSpec isotropic(double a, double b, double h, double E, double nu, double q, BcKind bc,
                             std::size_t nx, std::size_t ny,
                             GridKind kind = GridKind::chebyshev_mapped);

  /// Throws InvalidArgument / InvalidMaterial when a precondition fails.
  void validate() const;
};

struct DerivedMaterial {
  double nu21 = 0.0;
  double mu = 1.0;  ///< 1 - nu12 nu21
  double D1 = 0.0;
  double D2 = 0.0;
  double Dk = 0.0;  ///< G12 h^3 / 12
  double D3 = 0.0;  ///< nu21 D1 + 2 Dk
  double C = 0.0;   ///< nu12 E2 + mu G12
};

[[nodiscard]] DerivedMaterial derive_material(const PlateSpec& spec);

/// Scaled variables used by the assembly:
///   X = x / a,  Y = y / b,  W = w / h,  U = u a / h^2,  V = v b / h^2.
struct Scaling {
  double a = 1.0;
  double b = 1.0;
  double h = 1.0;
  [[nodiscard]] double u_unit() const noexcept { return h * h / a; }
  [[nodiscard]] double v_unit() const noexcept { return h * h / b; }
};

/// Discretized von Karman system on the stacked interior unknowns.
///
/// With rho = a / b and row-stacked fields (x index outer):
///   H1 = E1 Bx⊗I + mu G12 rho^2 I⊗By          H2 = C rho^2 Ax⊗Ay
///   H3 = E2 rho^4 I⊗By + mu G12 rho^2 Bx⊗I     H4 = Dx⊗I + 2 D3/D1 rho^2 Bx⊗By + D2/D1 rho^4 I⊗Dy
///   H5 = E1 Bx⊗I + nu12 E2 rho^2 I⊗By          H6 = E2 rho^2 I⊗By + nu21 E1 Bx⊗I
///   H7 = Ax⊗I                                  H8 = I⊗Ay
/// The in-plane equations are H1 U + H2 V = -L1(W), H2 U + H3 V = -L2(W) and the
/// transverse residual is
///   phi = H4 W - kappa { sx [H7 U + (H7 W)^2/2]∘(H5 W) + sy [H8 V + (H8 W)^2/2]∘(H6 W)
///                        + ss (H2 W)∘[H8 U + H7 V + (H7 W)∘(H8 W)] } - load
/// with kappa = h^3 / (mu D1), sx = 1, sy = rho^2, ss = 2 mu G12 / C.
struct AssembledSystem {
  PlateSpec spec;
  DerivedMaterial material;
  Scaling scaling;
  BoundaryOperatorSet bcx;
  BoundaryOperatorSet bcy;
  std::size_t mx = 0;  ///< interior count along x
  std::size_t my = 0;  ///< interior count along y
  std::size_t n = 0;   ///< mx * my

  Matrix H1, H2, H3, H4, H5, H6, H7, H8;
  Vector load;  ///< q a^4 / (D1 h) on every entry

  double nonlinear_scale = 0.0;
  double x_weight = 1.0;
  double y_weight = 1.0;
  double shear_weight = 0.0;

  /// Factorization of [[H1, H2], [H2, H3]], shared by every in-plane solve.
  Eigen::PartialPivLU<Matrix> inplane_lu;
  double inplane_rcond = 0.0;
};

/// Builds the boundary sets from the plate's grids and assembles.
[[nodiscard]] AssembledSystem assemble(const PlateSpec& spec);
[[nodiscard]] AssembledSystem assemble(const PlateSpec& spec, const BoundaryOperatorSet& bcx,
                                       const BoundaryOperatorSet& bcy);

struct LVectors {
  Vector L1;
  Vector L2;
};

[[nodiscard]] LVectors l_vectors(const AssembledSystem& sys, const Vector& w);

struct InplaneFields {
  Vector U;
  Vector V;
};

/// Solves the in-plane block system for given W.
[[nodiscard]] InplaneFields recover_inplane(const AssembledSystem& sys, const Vector& w);

[[nodiscard]] Vector residual(const AssembledSystem& sys, const Vector& w);

/// Analytic Jacobian of residual() built from SJT products.
[[nodiscard]] Matrix jacobian(const AssembledSystem& sys, const Vector& w);

/// Small-deflection solution H4 W = load.
[[nodiscard]] Vector linear_solve(const AssembledSystem& sys);

/// Residuals of the three coupled equations before decoupling.
struct CoupledResiduals {
  Vector inplane_x;
  Vector inplane_y;
  Vector transverse;
};

[[nodiscard]] CoupledResiduals coupled_residuals(const AssembledSystem& sys, const Vector& w,
                                                 const Vector& u, const Vector& v);

/// Full-grid fields in physical units.
struct SolutionField {
  Vector Wbar;
  Vector Ubar;
  Vector Vbar;
  std::vector<double> x;  ///< physical node coordinates
  std::vector<double> y;
  Matrix w;  ///< x index by row
  Matrix u;
  Matrix v;
  double center_deflection_ratio = 0.0;  ///< w(a/2, b/2) / h
  int newton_iterations = 0;
  double final_residual_norm = 0.0;
};

[[nodiscard]] SolutionField recover_fields(const AssembledSystem& sys, const Vector& w,
                                           const Vector& u, const Vector& v);

/// Center value of a full-grid field: the middle node on odd grids, bilinear
/// interpolation at (1/2, 1/2) otherwise.
[[nodiscard]] double center_value(const Matrix& field, const std::vector<double>& xs,
                                  const std::vector<double>& ys);

/// Linear (small-deflection) center deflection ratio w/h using the delta-point
/// treatment on the full grid. Independent of the reduced operators.
[[nodiscard]] double linear_delta_center(const PlateSpec& spec, double delta);

}  // namespace dqplate
