#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hetcon {

/// Base for every numerical or validation failure raised by the library.
/// The CLI maps these to exit code 3; ConfigError maps to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoRootsError : public Error {
public:
    NoRootsError() : Error("polynomial of degree zero has no roots") {}
};

class PoleEvaluationError : public Error {
public:
    explicit PoleEvaluationError(std::complex<double> nearest_pole);
    std::complex<double> nearest_pole;
};

/// D - gamma*N vanished identically, so H/(1 - gamma*H) does not exist.
class IllPosedLoopError : public Error {
public:
    IllPosedLoopError(const std::string& what, int node = 0) : Error(what), node(node) {}
    int node;  // 1-based node of the offending loop, 0 when not attributable
};

class ProperError : public Error {
public:
    using Error::Error;
};

class RepeatedPoleError : public Error {
public:
    using Error::Error;
};

class NotAPoleError : public Error {
public:
    using Error::Error;
};

class GraphError : public Error {
public:
    enum class Kind { SelfLoop, DuplicateEdge, NonPositiveWeight, BadNodeId, Disconnected, Empty };
    GraphError(Kind kind, const std::string& what) : Error(what), kind(kind) {}
    Kind kind;
};

class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

class ExcludedFrequencyError : public Error {
public:
    using Error::Error;
};

class NotGapPassiveError : public Error {
public:
    NotGapPassiveError(const std::string& what, int i = 0, int j = 0) : Error(what), i(i), j(j) {}
    int i;
    int j;
};

class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, double time) : Error(what), time(time) {}
    double time;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Schema or syntax problems in a JSON network description.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hetcon
