#pragma once

#include <functional>
#include <vector>

#include "bll/grid.hpp"

namespace bll {

/// Structure coefficient of the special 3D ansatz v = K(x,y) u. Time
/// independent by construction; the Burgers residual (dx + K dy)K is recorded
/// when the field is built.
struct KField {
    enum class Provenance { constant, characteristic, user };
    Grid3DPtr grid;
    Provenance provenance = Provenance::constant;
    std::vector<double> values;  ///< n_x * n_y, x-major
    double burgers_residual = 0.0;

    double& at(int i, int j) { return values[static_cast<size_t>(i) * grid->n_y + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * grid->n_y + j]; }
};

/// max |(dx + K dy) K|: central differences, periodic wrap in y; x treated as
/// a strip (one-sided differences at the first/last column) so that
/// characteristic-built fields are not penalized at the wrap seam.
double k_constraint_residual(const KField& K);

KField k_build_constant(Grid3DPtr g, double c);

/// K of implicit characteristic form K = profile(y - K x), built by fixed
/// point iteration on the strip x in [0, x_period). profile must be
/// y_period-periodic; dprofile is its derivative. Throws PreconditionError
/// when characteristics cross within the strip (sup |x dprofile| >= 1).
KField k_build_characteristic(Grid3DPtr g, const std::function<double(double)>& profile,
                              const std::function<double(double)>& dprofile);

KField k_build_user(Grid3DPtr g, const std::function<double(double, double)>& fn);

using Outer3DFn = std::function<double(double, double, double)>;  ///< (t,x,y)
using Source3DFn = std::function<double(double, double, double, double)>;  ///< (t,x,y,z)

/// Reduced-system state: u(t,x,y,z) with v eliminated through v = K u.
struct FlowState3D {
    double t = 0.0;
    Field3D u;
    KField K;
    Outer3DFn U = [](double, double, double) { return 1.0; };
    Outer3DFn P_x = [](double, double, double) { return 0.0; };
};

/// w = -int_0^z [u_x + (K u)_y] dz' (vanishes on the wall plane).
Field3D recover_w_reduced(const Field3D& u, const KField& K);

/// One IMEX step of u_t + u u_x + K u u_y + w u_z = u_zz - P_x:
/// z-diffusion implicit per pencil, tangential advection explicit (limited
/// upwind), w recovered from continuity, Dirichlet wall/far closures.
FlowState3D step3d_reduced(const FlowState3D& s, double dt, const Source3DFn& source = nullptr,
                           double c_cfl = 0.5);

/// Unreduced two-momentum state used to validate the reduction.
struct FullState3D {
    double t = 0.0;
    Field3D u, v;
    KField K;  ///< supplies the pressure alignment P_y = K P_x and far field V = K U
    Outer3DFn U = [](double, double, double) { return 1.0; };
    Outer3DFn P_x = [](double, double, double) { return 0.0; };
};

Field3D recover_w_full(const Field3D& u, const Field3D& v);

/// One IMEX step of the full system (both tangential momentum equations) with
/// Bernoulli-consistent pressure alignment dP/dy = K dP/dx.
FullState3D step3d_full(const FullState3D& s, double dt, const Source3DFn& source_u = nullptr,
                        const Source3DFn& source_v = nullptr, double c_cfl = 0.5);

/// sup |v - K u| (the structure defect W).
double structure_defect(const Field3D& u, const Field3D& v, const KField& K);

/// Defect history of a full-system run sampled every sample_every steps.
std::vector<double> structure_monitor(FullState3D s, double dt, int n_steps, int sample_every,
                                      std::vector<double>* times = nullptr);

}  // namespace bll
