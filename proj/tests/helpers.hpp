#pragma once

#include <optional>
#include <utility>

#include "walklab/error.hpp"

/// Run fn and report which walklab error code it threw, if any.
template <typename F>
std::optional<walklab::Errc> thrown_code(F&& fn) {
    try {
        std::forward<F>(fn)();
    } catch (const walklab::Error& e) {
        return e.code();
    }
    return std::nullopt;
}
