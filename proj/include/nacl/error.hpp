#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nacl {

enum class Errc {
  CapExceeded,
  InvalidPermutation,
  InvalidSpec,
  NotIndexTwo,
  NotOrderTwo,
  NotSurjective,
  NotGood,
  NotOverC,
  NotCoprime,
  ParityViolation,
  NotCommuting,
  SubtractionMismatch,
  IncompleteEnumeration,
  NonIntegralAverage,
  InsufficientRange,
  InvariantViolation,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::InvalidPermutation: return "InvalidPermutation";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::NotIndexTwo: return "NotIndexTwo";
    case Errc::NotOrderTwo: return "NotOrderTwo";
    case Errc::NotSurjective: return "NotSurjective";
    case Errc::NotGood: return "NotGood";
    case Errc::NotOverC: return "NotOverC";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::ParityViolation: return "ParityViolation";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::SubtractionMismatch: return "SubtractionMismatch";
    case Errc::IncompleteEnumeration: return "IncompleteEnumeration";
    case Errc::NonIntegralAverage: return "NonIntegralAverage";
    case Errc::InsufficientRange: return "InsufficientRange";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// Internal consistency check that stays on in release builds.
inline void ensure(bool ok, const std::string& what) {
  if (!ok) fail(Errc::InvariantViolation, what);
}

}  // namespace nacl
