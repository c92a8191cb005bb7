#ifndef TORSIONLAB_ERRORS_HPP
#define TORSIONLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torsionlab {

// Every domain error carries a stable machine-readable code; the CLI maps
// these to structured error JSON and exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string &what)
        : std::runtime_error(what), m_code(std::move(code)) {}
    const std::string &code() const noexcept { return m_code; }

private:
    std::string m_code;
};

#define TORSIONLAB_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string &w) : Error(#Name, w) {}             \
    };

TORSIONLAB_DEFINE_ERROR(DivideByZeroPoly)
TORSIONLAB_DEFINE_ERROR(FieldMismatch)
TORSIONLAB_DEFINE_ERROR(OddDegree)
TORSIONLAB_DEFINE_ERROR(NonSquareLeadingCoeff)
TORSIONLAB_DEFINE_ERROR(PrecisionExhausted)
TORSIONLAB_DEFINE_ERROR(NotSquarefree)
TORSIONLAB_DEFINE_ERROR(BudgetExceeded)
TORSIONLAB_DEFINE_ERROR(InternalCheckFailed)
TORSIONLAB_DEFINE_ERROR(PellUnsolvable)
TORSIONLAB_DEFINE_ERROR(RhoOnCurveBranch)
TORSIONLAB_DEFINE_ERROR(PointNotOnCurve)
TORSIONLAB_DEFINE_ERROR(DegenerateFamily)
TORSIONLAB_DEFINE_ERROR(BranchNotInField)
TORSIONLAB_DEFINE_ERROR(DenominatorZero)
TORSIONLAB_DEFINE_ERROR(RootSelectorInvalid)
TORSIONLAB_DEFINE_ERROR(DegenerateCurve)
TORSIONLAB_DEFINE_ERROR(PoleProximity)
TORSIONLAB_DEFINE_ERROR(IllConditioned)
TORSIONLAB_DEFINE_ERROR(TorsionZeroQ)
TORSIONLAB_DEFINE_ERROR(NotCM)
TORSIONLAB_DEFINE_ERROR(AlphaNotAntisymmetric)
TORSIONLAB_DEFINE_ERROR(AlphaParity)
TORSIONLAB_DEFINE_ERROR(RecognitionFailed)
TORSIONLAB_DEFINE_ERROR(BranchJump)
TORSIONLAB_DEFINE_ERROR(UsageError)

#undef TORSIONLAB_DEFINE_ERROR

} // namespace torsionlab

#endif
