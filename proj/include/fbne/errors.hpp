#pragma once

#include <stdexcept>
#include <string>

namespace fbne {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Query refers to an unknown variable or state, or is otherwise malformed.
struct InvalidQueryError : Error {
  using Error::Error;
};

// Evidence has probability zero under the network. Distinct from
// InvalidQueryError so callers can fall back to the class prior.
struct ZeroEvidenceError : Error {
  using Error::Error;
};

// CSV/BIF parse or validation failure; message names the offending
// row, column or line.
struct FormatError : Error {
  using Error::Error;
};

// Requested split cannot satisfy the per-party minimums.
struct InfeasibleSplitError : Error {
  using Error::Error;
};

// A party's slice contains a single observed class; no classifier can
// be trained on it. Message names the party.
struct DegeneratePartyError : Error {
  using Error::Error;
};

// Secure-sum session parameters risk modular wraparound.
struct SessionConfigError : Error {
  using Error::Error;
};

}  // namespace fbne
