#pragma once

#include <string>
#include <vector>

namespace bll {

/// Outcome of a monitored run: either the horizon was reached, the sup norm
/// crossed the blow-up threshold at t_star, backflow (wall-shear zero) was
/// detected at (t_star, x_star), or the scheme produced non-finite values.
struct BlowupVerdict {
    enum class Status { completed_horizon, blowup, backflow, scheme_breakdown };
    Status status = Status::completed_horizon;
    double t_star = -1.0;
    double x_star = 0.0;
    bool boundary_first = true;  ///< backflow only: interior shear still positive at t_star

    std::vector<double> t_history;
    std::vector<double> sup_history;
    std::vector<double> energy_history;  ///< filled by runs that track an energy functional

    std::string status_string() const {
        switch (status) {
            case Status::completed_horizon: return "completed_horizon";
            case Status::blowup: return "blowup";
            case Status::backflow: return "backflow";
            case Status::scheme_breakdown: return "scheme_breakdown";
        }
        return "unknown";
    }
};

}  // namespace bll
