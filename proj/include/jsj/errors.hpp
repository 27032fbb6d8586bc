#pragma once

#include <stdexcept>
#include <string>

namespace jsj {

enum class ErrorKind {
  UnknownLetter,
  IndexOutOfRank,
  EmptyWord,
  NotCyclicallyReduced,
  TrivialWord,
  RankMismatch,
  InvalidInput,
  BasisNotPrepared,
  ZeroMonodromy,
  NotCutPair,
  SymmetryViolation,
  CrossingPair,
  InfiniteIndex,
  CrossingInCollection,
  StabilizerSearchExhausted,
  RewriteFailure,
  DisconnectedPiece,
  MissingCertificate,
  FreeSplitting,
};

inline const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnknownLetter: return "UnknownLetter";
    case ErrorKind::IndexOutOfRank: return "IndexOutOfRank";
    case ErrorKind::EmptyWord: return "EmptyWord";
    case ErrorKind::NotCyclicallyReduced: return "NotCyclicallyReduced";
    case ErrorKind::TrivialWord: return "TrivialWord";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::BasisNotPrepared: return "BasisNotPrepared";
    case ErrorKind::ZeroMonodromy: return "ZeroMonodromy";
    case ErrorKind::NotCutPair: return "NotCutPair";
    case ErrorKind::SymmetryViolation: return "SymmetryViolation";
    case ErrorKind::CrossingPair: return "CrossingPair";
    case ErrorKind::InfiniteIndex: return "InfiniteIndex";
    case ErrorKind::CrossingInCollection: return "CrossingInCollection";
    case ErrorKind::StabilizerSearchExhausted: return "StabilizerSearchExhausted";
    case ErrorKind::RewriteFailure: return "RewriteFailure";
    case ErrorKind::DisconnectedPiece: return "DisconnectedPiece";
    case ErrorKind::MissingCertificate: return "MissingCertificate";
    case ErrorKind::FreeSplitting: return "FreeSplitting";
  }
  return "Unknown";
}

// Errors caused by bad user input, as opposed to broken internal invariants.
inline bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnknownLetter:
    case ErrorKind::IndexOutOfRank:
    case ErrorKind::EmptyWord:
    case ErrorKind::NotCyclicallyReduced:
    case ErrorKind::TrivialWord:
    case ErrorKind::RankMismatch:
    case ErrorKind::InvalidInput:
    case ErrorKind::NotCutPair:
    case ErrorKind::CrossingPair:
    case ErrorKind::InfiniteIndex:
    case ErrorKind::BasisNotPrepared:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace jsj
