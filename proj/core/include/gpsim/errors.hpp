#pragma once

#include <iostream>
#include <stdexcept>
#include <string>

namespace gpsim {

/// Correlation or scale matrix that stayed non-positive-definite after
/// jitter escalation, or a non-PD matrix handed to a solve.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Orthant-probability estimation failed (e.g. no Monte Carlo hits for the
/// requested sign pattern). The message carries the pattern.
class OrthantError : public std::runtime_error {
public:
    explicit OrthantError(const std::string& what) : std::runtime_error(what) {}
};

inline void warn(const std::string& msg) {
    std::cerr << "gpsim warning: " << msg << "\n";
}

}  // namespace gpsim
