#pragma once

#include <stdexcept>
#include <string>

namespace plateforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

class DegenerateSectionError : public Error {
public:
    DegenerateSectionError(int element, int edge, const std::string& what)
        : Error(what), element_(element), edge_(edge) {}
    int element() const { return element_; }
    int edge() const { return edge_; }

private:
    int element_;
    int edge_;
};

class SingularConfigurationError : public Error {
public:
    using Error::Error;
};

class MaterialError : public Error {
public:
    using Error::Error;
};

class CondensationError : public Error {
public:
    using Error::Error;
};

class LoadPlacementError : public Error {
public:
    using Error::Error;
};

class ConstraintError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double smallest_pivot)
        : Error(what), smallest_pivot_(smallest_pivot) {}
    double smallest_pivot() const { return smallest_pivot_; }

private:
    double smallest_pivot_;
};

class LocationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace plateforge
