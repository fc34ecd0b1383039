#pragma once

#include <stdexcept>
#include <string>

namespace inls {

// Base for all library failures. The name() tag is what the CLI and the
// sweep/campaign reports print next to the message.
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& msg)
        : std::runtime_error(tag + ": " + msg), tag_(std::move(tag)) {}
    const std::string& name() const noexcept { return tag_; }

private:
    std::string tag_;
};

#define INLS_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    };

INLS_DEFINE_ERROR(WindowViolation)
INLS_DEFINE_ERROR(BadGridSpec)
INLS_DEFINE_ERROR(LengthMismatch)
INLS_DEFINE_ERROR(GridMismatch)
INLS_DEFINE_ERROR(TooLargeForSpectral)
INLS_DEFINE_ERROR(ResampleOutOfRange)
INLS_DEFINE_ERROR(BadRegion)
INLS_DEFINE_ERROR(DegenerateField)
INLS_DEFINE_ERROR(NoConvergence)
INLS_DEFINE_ERROR(LinearSolveFailure)
INLS_DEFINE_ERROR(CutoffOutOfDomain)
INLS_DEFINE_ERROR(CutoffConstructionFailure)
INLS_DEFINE_ERROR(EmptyScaleSet)
INLS_DEFINE_ERROR(DegenerateRho)
INLS_DEFINE_ERROR(InsufficientTail)
INLS_DEFINE_ERROR(NoBlowup)
INLS_DEFINE_ERROR(NoGrowth)
INLS_DEFINE_ERROR(InsufficientSnapshots)
INLS_DEFINE_ERROR(ParseError)
INLS_DEFINE_ERROR(ValidationError)
INLS_DEFINE_ERROR(CorruptedState)

#undef INLS_DEFINE_ERROR

}  // namespace inls
