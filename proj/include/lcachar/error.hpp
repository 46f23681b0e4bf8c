#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcachar {

enum class Errc {
  NegativeRank,
  InvalidOrder,
  SpecMismatch,
  InvalidArgument,
  InvalidEpsilon,
  InvalidDelta,
  InvalidM,
  EpsilonOutOfRange,
  NoEscapeWithinCap,
  NotInTm,
  DiracOnContinuousFactor,
  StepMismatch,
  GridMisaligned,
  ZeroDenominator,
  BranchAmbiguity,
  MissingSamples,
  EmptyProbeSet,
  NotMultiplicative,
  OutsideStrip,
  Parse,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeRank: return "NegativeRank";
    case Errc::InvalidOrder: return "InvalidOrder";
    case Errc::SpecMismatch: return "SpecMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidEpsilon: return "InvalidEpsilon";
    case Errc::InvalidDelta: return "InvalidDelta";
    case Errc::InvalidM: return "InvalidM";
    case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Errc::NoEscapeWithinCap: return "NoEscapeWithinCap";
    case Errc::NotInTm: return "NotInTm";
    case Errc::DiracOnContinuousFactor: return "DiracOnContinuousFactor";
    case Errc::StepMismatch: return "StepMismatch";
    case Errc::GridMisaligned: return "GridMisaligned";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::BranchAmbiguity: return "BranchAmbiguity";
    case Errc::MissingSamples: return "MissingSamples";
    case Errc::EmptyProbeSet: return "EmptyProbeSet";
    case Errc::NotMultiplicative: return "NotMultiplicative";
    case Errc::OutsideStrip: return "OutsideStrip";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this one exception type;
/// callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lcachar
