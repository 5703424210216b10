#pragma once

#include <stdexcept>
#include <string>

namespace bahc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& msg) : Error(msg) {}
};

// Cholesky factorization hit a non-positive pivot; carries the pivot index.
class NotPositiveDefiniteError : public Error {
public:
    NotPositiveDefiniteError(const std::string& msg, int pivot)
        : Error(msg + " (pivot " + std::to_string(pivot) + ")"), pivot_index(pivot) {}
    int pivot_index;
};

class InvalidDegreesOfFreedomError : public Error {
public:
    explicit InvalidDegreesOfFreedomError(const std::string& msg) : Error(msg) {}
};

class DegenerateVarianceError : public Error {
public:
    explicit DegenerateVarianceError(const std::string& msg) : Error(msg) {}
};

class DegenerateNormalizerError : public Error {
public:
    explicit DegenerateNormalizerError(const std::string& msg) : Error(msg) {}
};

// Measure/scatter combination is not usable as requested.
class ConfigurationError : public Error {
public:
    explicit ConfigurationError(const std::string& msg) : Error(msg) {}
};

// Sample too small for a plug-in measure (singular restriction).
class SmallSampleError : public Error {
public:
    explicit SmallSampleError(const std::string& msg) : Error(msg) {}
};

// Requested hierarchy level was never built (early stop).
class UnreachableLevelError : public Error {
public:
    explicit UnreachableLevelError(const std::string& msg) : Error(msg) {}
};

class UnsupportedMeasureError : public Error {
public:
    explicit UnsupportedMeasureError(const std::string& msg) : Error(msg) {}
};

// Wraps a failure raised while evaluating the similarity of a specific
// cluster pair inside the clustering loop.
class MeasureEvaluationError : public Error {
public:
    MeasureEvaluationError(const std::string& measure, const std::string& left,
                           const std::string& right, const std::string& why)
        : Error("measure " + measure + " failed on pair " + left + " | " + right + ": " + why) {}
};

}  // namespace bahc
