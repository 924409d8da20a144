#include "bll/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "bll/errors.hpp"
#include "bll/fd.hpp"

namespace bll {

double ee_energy(std::span<const double> y, std::span<const double> a, EeSign sign) {
    if (y.size() != a.size() || y.size() < 4)
        throw PreconditionError("ee_energy: mismatched samples");
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    if (amax > 0.0 && std::abs(a.back()) > 1e-3 * amax)
        throw DecayError("ee_energy: a does not decay at the truncation row");
    const size_t n = y.size();
    std::vector<double> ay(n);
    for (size_t j = 1; j + 1 < n; ++j) {
        const double nodes[3] = {y[j - 1], y[j], y[j + 1]};
        auto w = fd::weights(y[j], nodes, 1);
        ay[j] = w[0] * a[j - 1] + w[1] * a[j] + w[2] * a[j + 1];
    }
    {
        const double n0[3] = {y[0], y[1], y[2]};
        auto w = fd::weights(y[0], n0, 1);
        ay[0] = w[0] * a[0] + w[1] * a[1] + w[2] * a[2];
        const double n1[3] = {y[n - 3], y[n - 2], y[n - 1]};
        auto w1 = fd::weights(y[n - 1], n1, 1);
        ay[n - 1] = w1[0] * a[n - 3] + w1[1] * a[n - 2] + w1[2] * a[n - 1];
    }
    std::vector<double> integrand(n);
    const double s3 = sign == EeSign::minus ? -0.25 : 0.25;
    for (size_t j = 0; j < n; ++j)
        integrand[j] = 0.5 * ay[j] * ay[j] + s3 * a[j] * a[j] * a[j];
    return fd::trapz(y, integrand);
}

std::vector<double> ee_step(std::span<const double> y, std::span<const double> a, double dt,
                            double c_cfl) {
    const size_t n = y.size();
    if (n != a.size() || n < 4) throw PreconditionError("ee_step: mismatched samples");
    if (!(dt > 0.0)) throw PreconditionError("ee_step: dt must be positive");
    for (double v : a)
        if (!std::isfinite(v)) throw NonFiniteError("ee_step input", 0, 0);

    auto I = fd::cumtrapz(y, a);  // transport coefficient int_0^y a
    double speed = 0.0, hmin = 1e300;
    for (size_t j = 0; j < n; ++j) speed = std::max(speed, std::abs(I[j]));
    for (size_t j = 0; j + 1 < n; ++j) hmin = std::min(hmin, y[j + 1] - y[j]);
    if (speed > 0.0 && dt > c_cfl * hmin / speed) throw CflError(dt, c_cfl * hmin / speed);

    std::vector<double> ay(n, 0.0);
    for (size_t j = 1; j + 1 < n; ++j) {
        const double nodes[3] = {y[j - 1], y[j], y[j + 1]};
        auto w = fd::weights(y[j], nodes, 1);
        ay[j] = w[0] * a[j - 1] + w[1] * a[j] + w[2] * a[j + 1];
    }
    std::vector<double> rhs(n);
    for (size_t j = 0; j < n; ++j) rhs[j] = a[j] + dt * (a[j] * a[j] - ay[j] * I[j]);

    const size_t m = n - 2;
    std::vector<double> lower(m - 1), diag(m), upper(m - 1), sol(m);
    for (size_t j = 1; j <= m; ++j) {
        const double nodes[3] = {y[j - 1], y[j], y[j + 1]};
        auto w = fd::weights(y[j], nodes, 2);
        diag[j - 1] = 1.0 - dt * w[1];
        if (j > 1) lower[j - 2] = -dt * w[0];
        if (j < m) upper[j - 1] = -dt * w[2];
        sol[j - 1] = rhs[j];
    }
    fd::solve_tridiag(lower, diag, upper, sol);
    std::vector<double> out(n, 0.0);
    for (size_t j = 1; j <= m; ++j) out[j] = sol[j - 1];
    for (size_t j = 0; j < n; ++j)
        if (!std::isfinite(out[j])) throw NonFiniteError("ee_step output", 0, static_cast<int>(j));
    return out;
}

BlowupVerdict ee_run(std::span<const double> y, std::span<const double> a0,
                     const EeRunParams& p) {
    BlowupVerdict v;
    std::vector<double> a(a0.begin(), a0.end());
    double sup0 = 0.0;
    for (double x : a) sup0 = std::max(sup0, std::abs(x));
    const double threshold = p.blowup_factor * std::max(sup0, 1e-12);
    double hmin = 1e300;
    for (size_t j = 0; j + 1 < y.size(); ++j) hmin = std::min(hmin, y[j + 1] - y[j]);

    double t = 0.0;
    double next_sample = 0.0;
    auto record = [&](double tt, double sup) {
        v.t_history.push_back(tt);
        v.sup_history.push_back(sup);
        try {
            v.energy_history.push_back(ee_energy(y, a));
        } catch (const DecayError&) {
            v.energy_history.push_back(std::nan(""));
        }
    };
    while (t < p.horizon) {
        double sup = 0.0;
        for (double x : a) sup = std::max(sup, std::abs(x));
        if (t >= next_sample) {
            record(t, sup);
            next_sample += p.sample_dt;
        }
        if (sup > threshold) {
            v.status = BlowupVerdict::Status::blowup;
            v.t_star = t;
            return v;
        }
        auto I = fd::cumtrapz(y, a);
        double speed = 0.0;
        for (double x : I) speed = std::max(speed, std::abs(x));
        double dt = std::min(p.dt_max, p.horizon - t);
        if (speed > 0.0) dt = std::min(dt, p.cfl * hmin / speed);
        try {
            a = ee_step(y, a, dt, 0.9);
        } catch (const NonFiniteError&) {
            v.status = BlowupVerdict::Status::scheme_breakdown;
            v.t_star = t + dt;
            return v;
        }
        t += dt;
    }
    double sup = 0.0;
    for (double x : a) sup = std::max(sup, std::abs(x));
    record(t, sup);
    v.status = BlowupVerdict::Status::completed_horizon;
    return v;
}

BlowupVerdict blowup_monitor(std::span<const double> t, std::span<const double> sup,
                             double threshold) {
    BlowupVerdict v;
    if (t.size() != sup.size() || t.empty())
        throw PreconditionError("blowup_monitor: mismatched histories");
    if (!(threshold > sup[0]))
        throw PreconditionError("blowup_monitor: threshold must exceed the initial sup");
    v.t_history.assign(t.begin(), t.end());
    v.sup_history.assign(sup.begin(), sup.end());
    for (size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(sup[i])) {
            v.status = BlowupVerdict::Status::scheme_breakdown;
            v.t_star = t[i];
            return v;
        }
        if (sup[i] > threshold) {
            v.status = BlowupVerdict::Status::blowup;
            v.t_star = t[i];
            return v;
        }
    }
    v.status = BlowupVerdict::Status::completed_horizon;
    return v;
}

BackflowFinding backflow_detect(const std::vector<FlowState>& trajectory) {
    BackflowFinding f;
    if (trajectory.empty()) return f;
    double prev_min = 1e300, prev_t = trajectory.front().t;
    for (const FlowState& s : trajectory) {
        auto ws = wall_shear(s.u);
        const auto it = std::min_element(ws.begin(), ws.end());
        const double m = *it;
        if (m <= 0.0) {
            f.detected = true;
            // linear interpolation of the crossing between samples
            if (prev_min > 0.0 && prev_min < 1e299 && prev_min != m)
                f.t_star = prev_t + (s.t - prev_t) * prev_min / (prev_min - m);
            else
                f.t_star = s.t;
            f.x_star = s.u.grid->x[it - ws.begin()];
            Field dyu = apply_derivative(s.u, Axis::y, 1);
            f.interior_min = 1e300;
            for (int i = 0; i < s.u.grid->n_x; ++i)
                for (int j = 1; j < s.u.grid->n_y; ++j) {
                    if (s.u.grid->y[j] > s.u.grid->y_max - 2.0) break;
                    f.interior_min = std::min(f.interior_min, dyu.at(i, j));
                }
            f.boundary_first = f.interior_min > 0.0;
            return f;
        }
        prev_min = m;
        prev_t = s.t;
    }
    return f;
}

bool extremum_principle_check(std::span<const double> t, std::span<const double> sup_H,
                              std::span<const double> wall_sup, double lambda,
                              double rel_slack) {
    if (t.size() != sup_H.size() || t.size() != wall_sup.size() || t.empty())
        throw PreconditionError("extremum_principle_check: mismatched histories");
    for (size_t i = 0; i < t.size(); ++i) {
        double bound = std::exp(lambda * (t[i] - t[0])) * sup_H[0];
        for (size_t s = 0; s <= i; ++s)
            bound = std::max(bound, std::exp(lambda * (t[i] - t[s])) * wall_sup[s]);
        if (sup_H[i] > bound * (1.0 + rel_slack) + 1e-14) return false;
    }
    return true;
}

MonotonicityResult monotonicity_monitor(const FlowState& s, double y_cut) {
    Field dyu = apply_derivative(s.u, Axis::y, 1);
    MonotonicityResult r;
    r.min_dyu = 1e300;
    for (int i = 0; i < s.u.grid->n_x; ++i)
        for (int j = 0; j < s.u.grid->n_y && s.u.grid->y[j] <= y_cut; ++j)
            if (dyu.at(i, j) < r.min_dyu) {
                r.min_dyu = dyu.at(i, j);
                r.arg_i = i;
                r.arg_j = j;
            }
    r.flagged = r.min_dyu <= 0.0;
    return r;
}

double bernoulli_residual(const OuterFlow& outer, double t0, double t1, int nt,
                          std::span<const double> x_samples) {
    if (nt < 1) throw PreconditionError("bernoulli_residual: need at least one time sample");
    double worst = 0.0;
    for (int it = 0; it <= nt; ++it) {
        const double t = t0 + (t1 - t0) * it / nt;
        for (double x : x_samples) {
            const double r =
                outer.U_t(t, x) + outer.U(t, x) * outer.U_x(t, x) + outer.P_x(t, x);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

}  // namespace bll
