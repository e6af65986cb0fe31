#pragma once

#include <doctest.h>

#include "ncvortex/errors.hpp"

// Runs `expr` and checks it throws ncvortex::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected)                                                                 \
    do {                                                                                                 \
        bool thrown_ = false;                                                                            \
        try {                                                                                            \
            (void)(expr);                                                                                \
        } catch (const ncvortex::Error& e_) {                                                            \
            thrown_ = true;                                                                              \
            CHECK_MESSAGE(e_.kind() == (expected), e_.what());                                           \
        }                                                                                                \
        CHECK_MESSAGE(thrown_, "expected an ncvortex::Error");                                           \
    } while (0)
