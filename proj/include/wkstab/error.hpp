#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wkstab {

enum class ErrorKind {
  DegenerateBody,
  ResourceLimit,
  EmptyDensity,
  NoBracket,
  NonConvergence,
  ProfileMismatch,
  UnknownScenario,
  BadBoundary,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateBody: return "DegenerateBody";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::EmptyDensity: return "EmptyDensity";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ProfileMismatch: return "ProfileMismatch";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
    case ErrorKind::BadBoundary: return "BadBoundary";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace wkstab
