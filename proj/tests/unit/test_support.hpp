#pragma once

#include <functional>

#include "confmass/error.hpp"
#include "doctest.h"

namespace confmass::testing {

inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IOError;
}

}  // namespace confmass::testing
