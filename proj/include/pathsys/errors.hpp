#pragma once

#include <stdexcept>
#include <string>

namespace pathsys {

/**
 * Base class for all library errors. Everything recoverable is reported as
 * data (e.g. ConsistencyReport violations); exceptions are reserved for
 * contract violations and resource exhaustion.
 */
class PathsysError : public std::runtime_error {
public:
    explicit PathsysError(const std::string& msg) : std::runtime_error(msg) {}
};

class VertexNotOnPath : public PathsysError {
public:
    explicit VertexNotOnPath(const std::string& msg) : PathsysError(msg) {}
};

class MissingWeight : public PathsysError {
public:
    explicit MissingWeight(const std::string& msg) : PathsysError(msg) {}
};

class ResourceCap : public PathsysError {
public:
    explicit ResourceCap(const std::string& msg) : PathsysError(msg) {}
};

class DegenerateCell : public PathsysError {
public:
    explicit DegenerateCell(const std::string& msg) : PathsysError(msg) {}
};

class InconsistentSystem : public PathsysError {
public:
    explicit InconsistentSystem(const std::string& msg) : PathsysError(msg) {}
};

class NotInvariant : public PathsysError {
public:
    explicit NotInvariant(const std::string& msg) : PathsysError(msg) {}
};

class SignAmbiguous : public PathsysError {
public:
    explicit SignAmbiguous(const std::string& msg) : PathsysError(msg) {}
};

class NoThresholdInInterval : public PathsysError {
public:
    explicit NoThresholdInInterval(const std::string& msg) : PathsysError(msg) {}
};

/// Word-table closure failure; `kind` tells which closure condition broke.
class WordClosureViolation : public PathsysError {
public:
    enum class Kind { Inversion, Subword, Sum, Missing, ZeroSubword, BadLetter };

    WordClosureViolation(Kind k, const std::string& msg)
        : PathsysError(msg), kind(k) {}

    Kind kind;
};

class ConditionOrder : public PathsysError {
public:
    explicit ConditionOrder(const std::string& msg) : PathsysError(msg) {}
};

/// Collision i*g == j*h between small powers of distinct generators.
class ConditionCollision : public PathsysError {
public:
    ConditionCollision(const std::string& msg, long g_, long i_, long h_, long j_)
        : PathsysError(msg), g(g_), i(i_), h(h_), j(j_) {}

    long g, i, h, j;  // witness: i*g == j*h (mod n)
};

class SamplingExhausted : public PathsysError {
public:
    explicit SamplingExhausted(const std::string& msg) : PathsysError(msg) {}
};

class InvalidPrime : public PathsysError {
public:
    explicit InvalidPrime(const std::string& msg) : PathsysError(msg) {}
};

class AmbiguousShortestPath : public PathsysError {
public:
    AmbiguousShortestPath(const std::string& msg, int u_, int v_)
        : PathsysError(msg), u(u_), v(v_) {}

    int u, v;  // the tied pair
};

class NotAMetric : public PathsysError {
public:
    explicit NotAMetric(const std::string& msg) : PathsysError(msg) {}
};

/// Malformed input file (any of the supported formats).
class FormatError : public PathsysError {
public:
    explicit FormatError(const std::string& msg) : PathsysError(msg) {}
};

}  // namespace pathsys
