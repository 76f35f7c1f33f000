#pragma once

#include <stdexcept>
#include <string>

namespace cgcare {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotSymmetric : Error {
    using Error::Error;
};

struct NotPSD : Error {
    using Error::Error;
};

struct NotRegular : Error {
    using Error::Error;
};

struct NoStabilizingSolution : Error {
    using Error::Error;
};

/// Terminal penalty still couples into the free (cost-invisible) state
/// directions; the caller must reduce it first.
struct TerminalPenaltyNotReduced : Error {
    using Error::Error;
};

/// Trailing growth behaviour of a matrix flow, estimated from the norm
/// history over the last stretch of accepted steps.
enum class GrowthClass { decaying, linear, superlinear };

struct IntegrationDiverged : Error {
    IntegrationDiverged(const std::string& what, double time, double growth_rate,
                        GrowthClass growth)
        : Error(what), time(time), growth_rate(growth_rate), growth(growth) {}

    double time;         ///< integration time at which the failure occurred
    double growth_rate;  ///< trailing d‖X‖/dt estimate
    GrowthClass growth;
};

struct NoConvergence : Error {
    NoConvergence(const std::string& what, double time, double residual_norm,
                  double growth_rate, GrowthClass growth)
        : Error(what),
          time(time),
          residual_norm(residual_norm),
          growth_rate(growth_rate),
          growth(growth) {}

    double time;
    double residual_norm;
    double growth_rate;
    GrowthClass growth;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line, std::string item = {})
        : Error(what), line(line), item(std::move(item)) {}

    int line;          ///< 1-based line number in the input
    std::string item;  ///< name of the offending field, when known
};

inline const char* to_string(GrowthClass g) {
    switch (g) {
        case GrowthClass::decaying: return "decaying";
        case GrowthClass::linear: return "linear";
        case GrowthClass::superlinear: return "superlinear";
    }
    return "unknown";
}

}  // namespace cgcare
