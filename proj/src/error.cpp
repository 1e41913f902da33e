#include "edsh/error.hpp"

namespace edsh {

std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::NotMonic: return "NotMonic";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::ZeroDegree: return "ZeroDegree";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::PrecisionUnreachable: return "PrecisionUnreachable";
    case Errc::SingularCurve: return "SingularCurve";
    case Errc::NonIntegralCoefficients: return "NonIntegralCoefficients";
    case Errc::PointNotOnCurve: return "PointNotOnCurve";
    case Errc::TorsionPoint2: return "TorsionPoint2";
    case Errc::InexactDivision: return "InexactDivision";
    case Errc::ZeroScalar: return "ZeroScalar";
    case Errc::PrecisionLoss: return "PrecisionLoss";
    case Errc::ZeroTerm: return "ZeroTerm";
    case Errc::TorsionPoint: return "TorsionPoint";
    case Errc::NotPowerOfTwo: return "NotPowerOfTwo";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::PointNotIntegral: return "PointNotIntegral";
    case Errc::PrimeDoesNotDivideD: return "PrimeDoesNotDivideD";
    case Errc::EqualIndices: return "EqualIndices";
    case Errc::NonIntegralTerms: return "NonIntegralTerms";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

}  // namespace edsh
