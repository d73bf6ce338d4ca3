#pragma once

#include <stdexcept>
#include <string>

namespace capvor {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Geometry

class DegenerateTriangle : public Error {
public:
    explicit DegenerateTriangle(const std::string& what) : Error(what) {}
};

// Site sets

class EmptySiteSet : public Error {
public:
    explicit EmptySiteSet(const std::string& what) : Error(what) {}
};

class TooFewSites : public Error {
public:
    explicit TooFewSites(const std::string& what) : Error(what) {}
};

class DuplicateSites : public Error {
public:
    explicit DuplicateSites(const std::string& what) : Error(what) {}
};

// All sites on one circle: the hull degenerates and no triangulation exists.
class HemisphericSites : public Error {
public:
    explicit HemisphericSites(const std::string& what) : Error(what) {}
};

// Weighted diagrams

class EmptyBisector : public Error {
public:
    explicit EmptyBisector(const std::string& what) : Error(what) {}
};

class NoSharedEdge : public Error {
public:
    explicit NoSharedEdge(const std::string& what) : Error(what) {}
};

// Transport / solver

class InfeasibleInstance : public Error {
public:
    InfeasibleInstance(const std::string& what, double deficit_)
        : Error(what), deficit(deficit_) {}
    double deficit;
};

class MismatchedAssignment : public Error {
public:
    explicit MismatchedAssignment(const std::string& what) : Error(what) {}
};

// Input files

class ParseError : public Error {
public:
    ParseError(const std::string& what, long line_) : Error(what), line(line_) {}
    long line;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& what) : Error(what) {}
};

class NegativeMass : public Error {
public:
    explicit NegativeMass(const std::string& what) : Error(what) {}
};

}  // namespace capvor
