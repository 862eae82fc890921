#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padic {

enum class ErrorKind {
  NotIrreducible,
  NotEisenstein,
  InvalidSpec,
  SpecMismatch,
  NotUnit,
  PrecisionExhausted,
  PrecisionIncrease,
  ZeroResidue,
  RootNotAvailable,
  InsufficientExponentPrecision,
  TruncationTooSmall,
  LambdaOverflow,
  NotInMaximalIdeal,
  ElementOutOfGroup,
  DomainMismatch,
  InvalidMorphism,
  OrderNotInvertible,
  NotDivisible,
  NonTorsion,
  FactorNotInvertible,
  Incompatible,
  NodeMissing,
  MissingFrobeniusDatum,
  TrivialCharacterAtTrivialModulus,
  SchemaViolation,
  Usage,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NotEisenstein: return "NotEisenstein";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::PrecisionIncrease: return "PrecisionIncrease";
    case ErrorKind::ZeroResidue: return "ZeroResidue";
    case ErrorKind::RootNotAvailable: return "RootNotAvailable";
    case ErrorKind::InsufficientExponentPrecision: return "InsufficientExponentPrecision";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::LambdaOverflow: return "LambdaOverflow";
    case ErrorKind::NotInMaximalIdeal: return "NotInMaximalIdeal";
    case ErrorKind::ElementOutOfGroup: return "ElementOutOfGroup";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::InvalidMorphism: return "InvalidMorphism";
    case ErrorKind::OrderNotInvertible: return "OrderNotInvertible";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::NonTorsion: return "NonTorsion";
    case ErrorKind::FactorNotInvertible: return "FactorNotInvertible";
    case ErrorKind::Incompatible: return "Incompatible";
    case ErrorKind::NodeMissing: return "NodeMissing";
    case ErrorKind::MissingFrobeniusDatum: return "MissingFrobeniusDatum";
    case ErrorKind::TrivialCharacterAtTrivialModulus: return "TrivialCharacterAtTrivialModulus";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace padic
