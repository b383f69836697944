#pragma once

#include <stdexcept>
#include <string>

namespace puiseux {

/// The requested operation has no procedure for this family (for example an
/// atomic decomposition on a monoid without unique atomic decompositions).
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace puiseux
