#pragma once

#include <optional>

#include "core/error.hpp"

// Kind of the ghostphase::Error thrown by f, or nullopt if it returns.
template <class F>
std::optional<ghostphase::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const ghostphase::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

template <class F>
bool throws_config(F&& f) {
  return error_kind(f) == ghostphase::ErrorKind::configuration;
}
