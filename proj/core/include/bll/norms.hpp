#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bll/grid.hpp"
#include "bll/shear.hpp"

namespace bll {

/// Parameters of the weighted spaces: H^{s,gamma} (polynomial weights),
/// H^{s,gamma}_{sigma,delta} membership, exponential mu-weights, and the
/// Gaussian analytic seminorms (alpha, tau).
struct WeightParams {
    int s = 4;
    double gamma = 1.0;
    double sigma = 2.0;   ///< must exceed gamma + 1/2
    double delta = 0.5;   ///< in (0,1)
    double mu_rate = 0.25;
    double alpha = 0.25;  ///< in [1/4, 1/2]
    double tau = 1.0;     ///< analyticity radius, > 0

    void validate() const;
};

struct NormReport {
    std::map<std::string, double> values;
    double tail_fraction = 0.0;  ///< share of the L2 mass in the top truncation band
    double t = 0.0;
    int m_max = 0;
    std::string grid_desc;
};

/// Spectral x-derivative of order m (discrete Fourier multipliers (ik)^m).
Field spectral_dx(const Field& f, int m);

/// y-derivative of order k by Fornberg stencils (centered in the interior,
/// one-sided near the rows, O(h^2)).
Field dyk(const Field& f, int k);

/// ||w||_{H^{s,gamma}}^2 = sum_{|a|<=s} ||(1+y)^{gamma+a2} D^a w||_{L2}^2.
/// x-derivatives spectral, y-derivatives by stencils, L2 by trapezoid.
/// Throws PreconditionError when 2s >= n_x (x-resolution check).
double sobolev_weighted(const Field& w, const WeightParams& p, NormReport* report = nullptr);

/// g_s = dx^s w - (dy w / w) dx^s (u - U). U is the trace per x column.
/// Throws MonotonicityError when w <= 0 anywhere.
Field gs_quantity(const Field& w, const Field& u, std::span<const double> U, int s);

/// ||w||_{H^{s,gamma}_g}^2: the top pure-x term of the H^{s,gamma} sum is
/// replaced by ||(1+y)^gamma g_s||^2.
double hg_norm(const Field& w, const Field& u, std::span<const double> U,
               const WeightParams& p);

struct ClassMembership {
    bool pass = true;
    bool lower_ok = true;   ///< (1+y)^sigma |w| >= delta
    bool deriv_ok = true;   ///< sum_{|a|<=2} |(1+y)^{sigma+a2} D^a w|^2 <= 1/delta^2
    double worst_y = 0.0;
    int worst_i = 0, worst_j = 0;
};

/// Pointwise membership test for H^{s,gamma}_{sigma,delta} on nodes with
/// y <= y_max - 2.
ClassMembership class_membership(const Field& w, const WeightParams& p);

/// ||f||_{H^m_mu}^2 with mu = mu_rate * y: all D^a with a1+a2 <= m, a1 <= m-1,
/// plus the pure dx^m term. Throws DecayError when the weighted integrand
/// fails to decay on the truncated domain.
double exp_weight_norm(const Field& f, int m, double mu_rate, NormReport* report = nullptr);

struct Seminorms {
    std::vector<double> X, D, Y;   ///< per-m values, m = 0..m_max (Y[0] = 0)
    double X_sum = 0.0, D_sum = 0.0, Y_sum = 0.0;
    std::vector<int> underflow;    ///< m values whose factorial weight underflowed
};

/// Gaussian-weighted analytic seminorms at time t:
/// X_m = ||theta_a dx^m f|| tau^m M_m, D_m with dy dx^m, Y_m with tau^{m-1} m M_m,
/// M_m = sqrt(m+1)/m!, theta_a = exp(alpha z^2 / 4), z = y/sqrt(1+t).
/// Factorials are handled in log space; x-derivatives are spectral.
/// Throws DecayError when the theta-weighted tail fails to converge.
Seminorms analytic_seminorms(const Field& f, const WeightParams& p, double t, int m_max = 16);

struct RadiusResult {
    std::vector<double> t;
    std::vector<double> tau;
    std::optional<double> floor_crossing;  ///< time where tau hits tau0/4, if reached
};

/// Integrates d/dt tau^{3/2} = -(3C/2)(X(t) + (1+t)^{1/4} D(t)) by trapezoid
/// over the sample grid, stopping at the tau0/4 floor.
RadiusResult radius_ode(std::span<const double> ts, std::span<const double> Xs,
                        std::span<const double> Ds, double C, double tau0);

struct Lifespan {
    double T_eps = 0.0;
    bool feasible = false;
    double C1 = 0.0, C2 = 0.0;
};

/// T_eps = C2 eps^{-4/3} - 1 with C1 = 3C(alpha+2)/(2 alpha),
/// C2 = (7 tau0^{3/2} / (8 C1))^{4/3}; feasibility requires
/// max{7 eps/(8 C1), 128 sqrt(2) C eps, 256 sqrt(2) C C2^{3/4}/alpha} <= tau0^{3/2}.
Lifespan lifespan_predict(double eps, double tau0, double alpha, double C);

struct CancellationFields {
    Field g_m;   ///< (dx^m u~ / (dy u0s + dy u~))_y
    Field eta1;  ///< dxy u~ / (dy u0s + dy u~)
    Field eta2;  ///< (dyy u0s + dyy u~) / (dy u0s + dy u~)
};

/// Cancellation quantities of the exponentially weighted analysis.
CancellationFields cancellation_gm(const Field& u_tilde, const ShearProfile& background,
                                   double t, int m);

}  // namespace bll
