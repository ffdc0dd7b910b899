#pragma once

#include <stdexcept>
#include <string>

namespace bidisk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define BIDISK_ERROR(Name)                                   \
  struct Name : Error {                                      \
    explicit Name(const std::string& m) : Error(#Name ": " + m) {} \
  }

BIDISK_ERROR(DomainError);
BIDISK_ERROR(StabilityError);
BIDISK_ERROR(InnerUnimodularityError);
BIDISK_ERROR(SingularPointError);
BIDISK_ERROR(ExceptionalAlphaError);
BIDISK_ERROR(NonUnimodularRootError);
BIDISK_ERROR(VanishingDerivativeError);
BIDISK_ERROR(PointSelectionError);
BIDISK_ERROR(Phi0Error);
BIDISK_ERROR(CollocationError);
BIDISK_ERROR(HypothesisError);
BIDISK_ERROR(CommutationError);
BIDISK_ERROR(RefinementError);
BIDISK_ERROR(FormatError);

#undef BIDISK_ERROR

}  // namespace bidisk
