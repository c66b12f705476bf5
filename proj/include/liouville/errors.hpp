#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid grid parameters, or operands living on different grids.
class GridError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its domain (non-normalized state, t < 0, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A spectral state has mass in E < |nu| and therefore no kernel on the half-line square.
class UnphysicalSupport : public Error {
public:
    using Error::Error;
};

}  // namespace liouville
