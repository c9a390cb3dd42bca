#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netctrb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file or JSON document does not describe a valid object.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Incompatible vector/matrix dimensions or an invalid time horizon.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Graphs combined into a union do not share the same node count.
class MismatchedNodeCount : public DimensionMismatch {
public:
    using DimensionMismatch::DimensionMismatch;
};

/// The underlying eigenvalue iteration did not converge.
class EigenFailure : public Error {
public:
    using Error::Error;
};

/// Operation requires a controllable pair.
class NotControllable : public Error {
public:
    using Error::Error;
};

class MissingGains : public Error {
public:
    using Error::Error;
};

class MissingBetas : public Error {
public:
    using Error::Error;
};

class AgentNotControllable : public Error {
public:
    AgentNotControllable(int agent_index, const std::string& what)
        : Error(what), agent(agent_index) {}
    int agent;  // 1-based
};

/// No coupling gain can exist: the topology has a leaderless component.
class NoGainExists : public Error {
public:
    NoGainExists(std::vector<int> component, const std::string& what)
        : Error(what), leaderless_component(std::move(component)) {}
    std::vector<int> leaderless_component;  // 1-based node indices
};

/// Randomized gain search ran out of trials without a witness.
class SearchExhausted : public Error {
public:
    using Error::Error;
};

/// Uniform first-entry gain requires (L, B) itself to be controllable.
class LBNotControllable : public Error {
public:
    using Error::Error;
};

/// Steering Gramian numerically singular (uncontrollable pair or harsh horizon).
class GramianSingular : public Error {
public:
    GramianSingular(double cond, const std::string& what)
        : Error(what), condition(cond) {}
    double condition;
};

}  // namespace netctrb
