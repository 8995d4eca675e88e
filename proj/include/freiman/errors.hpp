#pragma once

#include <stdexcept>
#include <string>

namespace freiman {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FREIMAN_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

FREIMAN_DEFINE_ERROR(InputError);
FREIMAN_DEFINE_ERROR(EmptyInput);
FREIMAN_DEFINE_ERROR(EmptySet);
FREIMAN_DEFINE_ERROR(DegenerateSet);
FREIMAN_DEFINE_ERROR(IndexMismatch);
FREIMAN_DEFINE_ERROR(HypothesisViolated);
FREIMAN_DEFINE_ERROR(PreconditionViolated);
FREIMAN_DEFINE_ERROR(ShapeViolation);
FREIMAN_DEFINE_ERROR(NonPositiveElement);
FREIMAN_DEFINE_ERROR(BudgetExceeded);
FREIMAN_DEFINE_ERROR(DiscretizationTooCoarse);
FREIMAN_DEFINE_ERROR(CounterOverflow);

#undef FREIMAN_DEFINE_ERROR

}  // namespace freiman
