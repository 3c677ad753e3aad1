#pragma once

#include <stdexcept>
#include <string>

namespace varex {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidGrid : Error { using Error::Error; };
struct NonFiniteIntegrand : Error { using Error::Error; };
struct NonConjugable : Error { using Error::Error; };
struct DivergentConstant : Error { using Error::Error; };
struct InvalidSobolev : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct SingularityBudgetExceeded : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace varex
