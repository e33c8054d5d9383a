#pragma once

#include <cstdint>
#include <set>

#include "vanet/bytes.hpp"
#include "vanet/crypto.hpp"
#include "vanet/time.hpp"

namespace vanet::certs {

// Long-term enrollment credential binding a vehicle key to an authority-
// assigned serial. Wire layout (113 octets, big-endian):
//   vehicle_public_key(33) || serial(8) || issued_at(8) || signature(64)
// The signature covers the first 49 octets.
struct LongTermCert {
  crypto::PublicKey vehicle_public_key;
  std::uint64_t serial = 0;
  SimTime issued_at = 0;
  crypto::Signature authority_signature;
  bool operator==(const LongTermCert&) const = default;
};

constexpr std::size_t long_term_cert_size = 113;

Bytes encode(const LongTermCert& cert);
LongTermCert decode_long_term_cert(ByteView data);
LongTermCert make_long_term_cert(const crypto::PrivateKey& authority_key,
                                 const crypto::PublicKey& vehicle_key,
                                 std::uint64_t serial, SimTime issued_at);
bool check_long_term_cert(const LongTermCert& cert,
                          const crypto::PublicKey& authority_public);

// Short-lived pseudonymous credential issued by a roadside unit. Wire
// layout (113 octets, big-endian):
//   pseudo_public_key(33) || expiration(8) || pseudo_id(8) || signature(64)
// The signature covers the first 49 octets.
struct TempCert {
  crypto::PublicKey pseudo_public_key;
  SimTime expiration = 0;
  std::uint64_t pseudo_id = 0;
  crypto::Signature issuer_signature;
  bool operator==(const TempCert&) const = default;
};

constexpr std::size_t temp_cert_size = 113;

Bytes encode(const TempCert& cert);
TempCert decode_temp_cert(ByteView data);
TempCert make_temp_cert(const crypto::PrivateKey& issuer_key,
                        const crypto::PublicKey& pseudo_key,
                        SimTime expiration, std::uint64_t pseudo_id);

enum class CertStatus { valid, expired, bad_signature };

// Signature is checked before expiry, so a forged-and-expired certificate
// reports bad_signature.
CertStatus check_temp_cert(const TempCert& cert,
                           const crypto::PublicKey& issuer_public,
                           SimTime now);

// Versioned set of revoked long-term serials. Merging takes the set union
// and the max version, making replicated copies order-insensitive.
struct RevocationList {
  std::uint64_t version = 0;
  std::set<std::uint64_t> revoked_serials;
  bool operator==(const RevocationList&) const = default;
};

bool rl_contains(const RevocationList& rl, std::uint64_t serial);
RevocationList rl_add(const RevocationList& rl, std::uint64_t serial);
RevocationList rl_merge(const RevocationList& a, const RevocationList& b);
Bytes encode(const RevocationList& rl);
RevocationList decode_revocation_list(ByteView data);

// Issuance record kept by a roadside unit, linking a pseudonym back to the
// requesting vehicle's long-term certificate for later tracing.
struct HistoryEntry {
  std::uint64_t pseudo_id = 0;
  crypto::PublicKey pseudo_public_key;
  LongTermCert long_term_cert;
  SimTime issued_at = 0;
  bool operator==(const HistoryEntry&) const = default;
};

Bytes encode(const HistoryEntry& entry);
HistoryEntry decode_history_entry(ByteView data);

}  // namespace vanet::certs
