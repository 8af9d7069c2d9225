#ifndef SPHRADON_ERRORS_HPP
#define SPHRADON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sphradon {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Stereographic projection requested at (or numerically at) the north pole.
class NorthPoleSingular : public Error {
public:
    explicit NorthPoleSingular(const std::string& msg) : Error(msg) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Harmonic synthesis requested for a dimension without an explicit basis.
class UnsupportedDimension : public Error {
public:
    explicit UnsupportedDimension(const std::string& msg) : Error(msg) {}
};

/// Sample vectors, grids or Mellin lines that do not line up.
class GridMismatch : public Error {
public:
    explicit GridMismatch(const std::string& msg) : Error(msg) {}
};

/// Mellin abscissa outside the strip 0 < Re s < 1.
class StripError : public Error {
public:
    explicit StripError(const std::string& msg) : Error(msg) {}
};

/// Harmonic degree beyond what the quadrature grid can resolve.
class DegreeTooHigh : public Error {
public:
    explicit DegreeTooHigh(const std::string& msg) : Error(msg) {}
};

/// Radial evaluation outside the reconstructed profile grid.
class InterpolationRange : public Error {
public:
    explicit InterpolationRange(const std::string& msg) : Error(msg) {}
};

/// File could not be read, parsed or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace sphradon

#endif
