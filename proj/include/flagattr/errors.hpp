#pragma once

#include <stdexcept>
#include <string>

namespace flagattr {

// Base class for every error the library throws on contract violations.
struct Error : std::runtime_error {
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

#define FLAGATTR_DEFINE_ERROR(NAME)                                        \
    struct NAME : Error {                                                  \
        explicit NAME(const std::string& what_arg) : Error(what_arg) {}    \
    }

FLAGATTR_DEFINE_ERROR(NotHermitian);
FLAGATTR_DEFINE_ERROR(NoConvergence);
FLAGATTR_DEFINE_ERROR(RankDeficient);
FLAGATTR_DEFINE_ERROR(SizeMismatch);
FLAGATTR_DEFINE_ERROR(CycleDetected);
FLAGATTR_DEFINE_ERROR(TooLarge);
FLAGATTR_DEFINE_ERROR(IllConditioned);
FLAGATTR_DEFINE_ERROR(NotAFixedPoint);
FLAGATTR_DEFINE_ERROR(NotSpecialRoots);
FLAGATTR_DEFINE_ERROR(NotSpecialWeights);
FLAGATTR_DEFINE_ERROR(FlowOverflow);
FLAGATTR_DEFINE_ERROR(Inconsistent);

#undef FLAGATTR_DEFINE_ERROR

}  // namespace flagattr
