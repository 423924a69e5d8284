#pragma once

#include <stdexcept>
#include <string>

namespace porolab {

// Base of all typed analysis errors. The CLI maps these to exit code 1 and
// prints {"error": type(), "detail": what()} on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string type, const std::string& msg)
        : std::runtime_error(msg), type_(std::move(type)) {}
    const std::string& type() const noexcept { return type_; }

private:
    std::string type_;
};

#define POROLAB_ERROR_TYPE(Name)                                   \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

POROLAB_ERROR_TYPE(IdOutOfRange);
POROLAB_ERROR_TYPE(EmptySubset);
POROLAB_ERROR_TYPE(BadRadius);
POROLAB_ERROR_TYPE(ResolutionError);
POROLAB_ERROR_TYPE(DegenerateSpec);
POROLAB_ERROR_TYPE(EmptyBall);
POROLAB_ERROR_TYPE(DegenerateFit);
POROLAB_ERROR_TYPE(BadAlpha);
POROLAB_ERROR_TYPE(BadPorosityParam);
POROLAB_ERROR_TYPE(NotPorous);
POROLAB_ERROR_TYPE(UnreachableExponent);
POROLAB_ERROR_TYPE(PorosityDeficit);
POROLAB_ERROR_TYPE(NotInBaseSet);
POROLAB_ERROR_TYPE(InsufficientScales);
POROLAB_ERROR_TYPE(NoGap);
POROLAB_ERROR_TYPE(DuplicatePoint);
POROLAB_ERROR_TYPE(BadGrid);
POROLAB_ERROR_TYPE(InvalidArgument);
POROLAB_ERROR_TYPE(IoError);
POROLAB_ERROR_TYPE(FormatError);

#undef POROLAB_ERROR_TYPE

}  // namespace porolab
