// errors.hpp: exception types shared by all polariton modules

#pragma once

#include <stdexcept>
#include <string>

namespace polariton {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownUnit : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct NonResonantCavity : Error { using Error::Error; };
struct QuadratureNotConverged : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct BasisMismatch : Error { using Error::Error; };
struct WindowTooShort : Error { using Error::Error; };
struct NoRevivalFound : Error { using Error::Error; };
struct DesignInfeasible : Error { using Error::Error; };

}  // namespace polariton
