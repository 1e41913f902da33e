#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace edsh {

enum class Errc {
    NotMonic,
    NotSquarefree,
    ZeroDegree,
    FieldMismatch,
    DivisionByZero,
    IndexOutOfRange,
    PrecisionUnreachable,
    SingularCurve,
    NonIntegralCoefficients,
    PointNotOnCurve,
    TorsionPoint2,
    InexactDivision,
    ZeroScalar,
    PrecisionLoss,
    ZeroTerm,
    TorsionPoint,
    NotPowerOfTwo,
    ZeroInput,
    PointNotIntegral,
    PrimeDoesNotDivideD,
    EqualIndices,
    NonIntegralTerms,
    InvalidArgument,
    ParseError,
    ValidationError,
};

std::string_view errc_name(Errc code);

// Every library failure is reported through this one exception type; the
// code identifies the condition, `index` carries the sequence index for
// ZeroTerm and similar positional failures.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<long> index = std::nullopt)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), index_(index) {}

    Errc code() const noexcept { return code_; }
    std::optional<long> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<long> index_;
};

}  // namespace edsh
