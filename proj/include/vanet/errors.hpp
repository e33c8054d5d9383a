#pragma once

#include <stdexcept>
#include <string>

namespace vanet {

// Base class for all library errors. Protocol-level outcomes that a peer
// must handle in the normal course of operation (rejected requests, failed
// beacon checks, ...) are expressed as result types, not exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or truncated canonical encoding.
struct DecodeError : Error {
  using Error::Error;
};

// Corrupt key material, scheme mismatch, or failed decryption.
struct CryptoError : Error {
  using Error::Error;
};

// Invalid configuration value; message names the offending field.
struct ConfigError : Error {
  using Error::Error;
};

// Lookup of an entity that does not exist (unknown identity, serial, ...).
struct NotFoundError : Error {
  using Error::Error;
};

// Attempt to register an entity that already exists.
struct DuplicateEntryError : Error {
  using Error::Error;
};

// Provisioning request for an epoch older than the one on record.
struct StaleEpochError : Error {
  using Error::Error;
};

// Internal records are inconsistent (e.g. an issuance log references an
// enrollment that is missing from the registry).
struct IntegrityError : Error {
  using Error::Error;
};

// Operation requires credentials the caller does not hold.
struct AuthorizationError : Error {
  using Error::Error;
};

// Operation invalid in the current state (e.g. signing a beacon without a
// usable temporary certificate).
struct StateError : Error {
  using Error::Error;
};

}  // namespace vanet
