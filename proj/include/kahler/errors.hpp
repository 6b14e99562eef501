#pragma once

#include <stdexcept>
#include <string>

namespace kahler {

/// Raised when an evaluation point lies outside the domain on which a
/// structure is defined (zero section, outside the tube, outside a chart).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace kahler
