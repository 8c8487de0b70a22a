#pragma once

#include <stdexcept>
#include <string>

namespace orthotensor {

/// Raised when an input contains NaN/Inf or a numerical routine cannot proceed.
class numeric_error : public std::runtime_error
{
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the pursuit step runs out of usable initializations.
class pursuit_exhausted : public std::runtime_error
{
public:
    explicit pursuit_exhausted(const std::string& what) : std::runtime_error(what) {}
};

} // namespace orthotensor
