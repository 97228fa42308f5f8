#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bsod {

enum class Errc {
  NonFiniteInput,
  InvalidEpsilon,
  InvalidArgument,
  DimensionMismatch,
  NoEdges,
  InvalidTolerance,
  DegenerateValues,
  TooFewPoints,
  InvalidContamination,
  ParseError,
  MissingColumn,
  NoTrueOutliers,
  EmptyReport,
  RowCountMismatch,
  Io,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::InvalidEpsilon: return "InvalidEpsilon";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoEdges: return "NoEdges";
    case Errc::InvalidTolerance: return "InvalidTolerance";
    case Errc::DegenerateValues: return "DegenerateValues";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::InvalidContamination: return "InvalidContamination";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::NoTrueOutliers: return "NoTrueOutliers";
    case Errc::EmptyReport: return "EmptyReport";
    case Errc::RowCountMismatch: return "RowCountMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bsod
