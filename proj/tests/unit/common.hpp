#pragma once

#include <string>

#include "doctest.h"
#include "hoopflux/error.hpp"
#include "hoopflux/gauge.hpp"
#include "hoopflux/scene_io.hpp"
#include "support.hpp"

namespace hoopflux::testing {

inline Scene example_scene() { return load_scene(std::string(HOOPFLUX_DATA_DIR) + "/example.json"); }

inline Rational q(const char* text) { return parse_rational(text); }

template <class F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace hoopflux::testing
