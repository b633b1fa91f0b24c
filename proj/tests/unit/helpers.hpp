#pragma once

#include <functional>
#include <optional>

#include "rsgdim/errors.hpp"

namespace rsgtest {

// Runs fn and reports the ErrorCode it threw, if any.
inline std::optional<rsg::ErrorCode> thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const rsg::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace rsgtest
