#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bll {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument / violated precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Time step exceeds the advective CFL bound.
class CflError : public Error {
public:
    CflError(double dt, double bound)
        : Error("dt=" + std::to_string(dt) + " exceeds CFL bound " + std::to_string(bound)),
          dt(dt), bound(bound) {}
    double dt, bound;
};

/// NaN/Inf detected; carries the first offending node.
class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& where, int i, int j, int k = -1)
        : Error("non-finite value in " + where + " at node (" + std::to_string(i) + "," +
                std::to_string(j) + (k >= 0 ? "," + std::to_string(k) : "") + ")"),
          i(i), j(j), k(k) {}
    int i, j, k;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Explicit-scheme stability gate rejected the step sizes.
class StabilityGateError : public Error {
public:
    StabilityGateError(double ratio, double bound)
        : Error("stability gate: h/s^2=" + std::to_string(ratio) + " >= bound " +
                std::to_string(bound)),
          ratio(ratio), bound(bound) {}
    double ratio, bound;
};

/// Tridiagonal system lost diagonal dominance.
class DominanceError : public Error {
public:
    explicit DominanceError(int row)
        : Error("tridiagonal system not diagonally dominant at row " + std::to_string(row)),
          row(row) {}
    int row;
};

/// Oleinik monotonicity (or positivity) condition violated.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

/// Weighted integrand fails its decay requirement on the truncated domain.
class DecayError : public Error {
public:
    using Error::Error;
};

/// Shooting bracket or iteration failure.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Config parse/validation failure; aggregates every violation found.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : Error(join(problems)), problems(std::move(problems)) {}
    std::vector<std::string> problems;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid config:";
        for (const auto& p : v) s += "\n  - " + p;
        return s;
    }
};

}  // namespace bll
