#pragma once

#include <stdexcept>
#include <string>

namespace drham {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define DRHAM_ERROR_TYPE(Name)                                                                     \
    class Name : public Error {                                                                    \
    public:                                                                                        \
        explicit Name(const std::string& what) : Error(#Name, what) {}                             \
    }

DRHAM_ERROR_TYPE(TruncationMismatch);
DRHAM_ERROR_TYPE(KernelObstruction);
DRHAM_ERROR_TYPE(NonInvertible);
DRHAM_ERROR_TYPE(NotSkew);
DRHAM_ERROR_TYPE(HypothesisViolation);
DRHAM_ERROR_TYPE(ParseError);
DRHAM_ERROR_TYPE(ValidationError);
DRHAM_ERROR_TYPE(TableGap);
DRHAM_ERROR_TYPE(IntegrabilityFailure);
DRHAM_ERROR_TYPE(DimensionMismatch);

#undef DRHAM_ERROR_TYPE

} // namespace drham
