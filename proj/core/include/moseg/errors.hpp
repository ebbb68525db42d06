#pragma once

#include <stdexcept>
#include <string>

namespace moseg {

/// Invalid or inconsistent input data (bad file, broken invariant, missing field).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A hard size guard refused to run (e.g. exhaustive enumeration beyond its limit).
class SizeGuardError : public std::runtime_error {
 public:
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace moseg
