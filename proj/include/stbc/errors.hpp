#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stbc {

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  NonSquare,
  RankDeficient,
  UnsupportedSize,
  UnsupportedDim,
  BadIndexOrder,
  DependentExtension,
  StructureError,
  BudgetExceeded,
  AlphabetError,
  NotGroupDecodable,
  TooLarge,
  Intractable,
  ParseError,
  IoError,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonSquare: return "NonSquare";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::UnsupportedSize: return "UnsupportedSize";
    case Errc::UnsupportedDim: return "UnsupportedDim";
    case Errc::BadIndexOrder: return "BadIndexOrder";
    case Errc::DependentExtension: return "DependentExtension";
    case Errc::StructureError: return "StructureError";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::AlphabetError: return "AlphabetError";
    case Errc::NotGroupDecodable: return "NotGroupDecodable";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Intractable: return "Intractable";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

// All library failures are reported through this one type; code() tells them apart.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace stbc
