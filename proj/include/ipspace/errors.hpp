#pragma once

#include <stdexcept>
#include <string>

namespace ipspace {

// Every domain failure carries a stable name so reports can surface it
// without a stack trace.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

#define IPSPACE_DEFINE_ERROR(Type)                                          \
  class Type : public Error {                                               \
  public:                                                                   \
    explicit Type(const std::string& what) : Error(#Type, what) {}         \
  };

IPSPACE_DEFINE_ERROR(InvalidArgument)
IPSPACE_DEFINE_ERROR(DimensionMismatch)
IPSPACE_DEFINE_ERROR(NonFiniteInput)
IPSPACE_DEFINE_ERROR(InvalidSpace)
IPSPACE_DEFINE_ERROR(NotComplexSpace)
IPSPACE_DEFINE_ERROR(NotEuclideanSpace)
IPSPACE_DEFINE_ERROR(HypothesisViolated)
IPSPACE_DEFINE_ERROR(InvalidParameters)
IPSPACE_DEFINE_ERROR(InvalidDistanceMatrix)
IPSPACE_DEFINE_ERROR(NotEuclideanRealizable)
IPSPACE_DEFINE_ERROR(InconsistentDistances)
IPSPACE_DEFINE_ERROR(NotAnIsometry)
IPSPACE_DEFINE_ERROR(GramMismatch)
IPSPACE_DEFINE_ERROR(RankDeficiencyUnstable)
IPSPACE_DEFINE_ERROR(LocusSearchExhausted)
IPSPACE_DEFINE_ERROR(DependentInputs)
IPSPACE_DEFINE_ERROR(NotIsosceles)

#undef IPSPACE_DEFINE_ERROR

}  // namespace ipspace
