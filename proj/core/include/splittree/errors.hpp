#pragma once

#include <stdexcept>
#include <string>

namespace splittree {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The exponential moment integral does not converge at the requested argument.
struct DivergentMoment : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

struct NoNegativeRoot : Error {
  using Error::Error;
};

struct GridTooCoarse : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

struct HorizonTooShort : Error {
  using Error::Error;
};

struct WrongRegime : Error {
  using Error::Error;
};

struct InvalidConfig : Error {
  using Error::Error;
};

struct TooFewSamples : Error {
  using Error::Error;
};

struct ZeroVariance : Error {
  using Error::Error;
};

struct RejectionBudgetExceeded : Error {
  using Error::Error;
};

}  // namespace splittree
