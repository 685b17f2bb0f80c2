#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace padicrot {

// Every failure a caller can act on carries a stable kind name, which the CLI
// reports verbatim in its error object.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PADICROT_DEFINE_ERROR(Name)                                              \
    struct Name : DomainError {                                                  \
        explicit Name(const std::string& what) : DomainError(#Name, what) {}     \
    }

PADICROT_DEFINE_ERROR(PrecisionExhausted);
PADICROT_DEFINE_ERROR(DivisionByZero);
PADICROT_DEFINE_ERROR(NotASquare);
PADICROT_DEFINE_ERROR(ZeroHasNoClass);
PADICROT_DEFINE_ERROR(NotApplicable);
PADICROT_DEFINE_ERROR(PrimeMismatch);
PADICROT_DEFINE_ERROR(InvalidArgument);
PADICROT_DEFINE_ERROR(UnsupportedDimension);
PADICROT_DEFINE_ERROR(DimensionMismatch);
PADICROT_DEFINE_ERROR(KappaMismatch);
PADICROT_DEFINE_ERROR(InfinityPoint);
PADICROT_DEFINE_ERROR(TailNotConstant);
PADICROT_DEFINE_ERROR(StructureMismatch);
PADICROT_DEFINE_ERROR(ZeroQuaternion);
PADICROT_DEFINE_ERROR(NormMismatch);
PADICROT_DEFINE_ERROR(SingularJacobian);
PADICROT_DEFINE_ERROR(DivergentFiber);
PADICROT_DEFINE_ERROR(DepthInsufficient);
PADICROT_DEFINE_ERROR(ChartDomainExceeded);

#undef PADICROT_DEFINE_ERROR

}  // namespace padicrot
