#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hypermoment {

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Tolerance with environment override: HYPERMOMENT_TOL_<NAME>=<value>.
inline double tolerance(const char* name, double fallback) {
  std::string key = std::string("HYPERMOMENT_TOL_") + name;
  if (const char* s = std::getenv(key.c_str())) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s) return v;
  }
  return fallback;
}

}  // namespace hypermoment
