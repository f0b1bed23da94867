// errors.hpp: exception hierarchy shared by every tpdicke module
//
// Each error carries a category that the command-line driver maps onto an
// exit code: Config -> 2, Numerical -> 3, Domain -> 4.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpdicke {

enum class ErrorCategory { Config, Numerical, Domain };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), category_(category), kind_(kind) {}

    ErrorCategory category() const noexcept { return category_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    ErrorCategory category_;
    std::string kind_;
};

#define TPDICKE_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what)                                 \
            : Error(ErrorCategory::Category, #Name, what) {}                   \
    };

// model-core
TPDICKE_DEFINE_ERROR(InvalidParameters, Config)
TPDICKE_DEFINE_ERROR(SectorMismatch, Config)
// eigensolve
TPDICKE_DEFINE_ERROR(NumericalFailure, Numerical)
TPDICKE_DEFINE_ERROR(MissingVectors, Config)
// integrable
TPDICKE_DEFINE_ERROR(SpectralCollapse, Domain)
TPDICKE_DEFINE_ERROR(Unbounded, Domain)
// peres
TPDICKE_DEFINE_ERROR(BasisMismatch, Config)
// spectral-stats
TPDICKE_DEFINE_ERROR(TooFewLevels, Domain)
TPDICKE_DEFINE_ERROR(TooFewSamples, Domain)
// classical
TPDICKE_DEFINE_ERROR(DomainViolation, Domain)
TPDICKE_DEFINE_ERROR(BoundarySingularity, Domain)
TPDICKE_DEFINE_ERROR(OutsideShell, Domain)
TPDICKE_DEFINE_ERROR(EmptyShell, Domain)
TPDICKE_DEFINE_ERROR(StepFailure, Numerical)
TPDICKE_DEFINE_ERROR(DomainExit, Domain)

#undef TPDICKE_DEFINE_ERROR

// Raised when two consecutive spacings are both zero, so r_k is 0/0.
class ZeroSpacing : public Error {
public:
    explicit ZeroSpacing(std::size_t index)
        : Error(ErrorCategory::Numerical, "ZeroSpacing",
                "degenerate spacings around level " + std::to_string(index)),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

} // namespace tpdicke
