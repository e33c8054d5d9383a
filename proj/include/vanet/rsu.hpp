#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "vanet/certs.hpp"
#include "vanet/crypto.hpp"
#include "vanet/time.hpp"

namespace vanet::rsu {

// Anonymous certificate request. Wire layout:
//   pseudo_public_key(33) || ct_len(2) || ciphertext || signature(64)
// The ciphertext is the requester's long-term certificate concatenated
// with the pseudo public key, encrypted to the zone key; the signature is
// made with the long-term key over pseudo_public_key || ciphertext.
struct CertRequest {
  crypto::PublicKey pseudo_public_key;
  crypto::Ciphertext ciphertext;
  crypto::Signature request_signature;
  bool operator==(const CertRequest&) const = default;
};

Bytes encode(const CertRequest& req);
CertRequest decode_cert_request(ByteView data);
Bytes request_signed_content(const CertRequest& req);

enum class RejectReason {
  decrypt_failed,
  bad_authority_signature,
  bad_request_signature,
  key_mismatch,
  revoked,
};

const char* to_string(RejectReason reason);

// Issued certificate plus the randomized release time; withholding the
// response for a random delay decorrelates issuance order from request
// arrival order.
struct Scheduled {
  certs::TempCert cert;
  SimTime release_at = 0;
};

struct Reject {
  RejectReason reason;
};

using IssueResult = std::variant<Scheduled, Reject>;

struct RsuConfig {
  std::string zone_id = "zone-0";
  std::uint64_t epoch = 0;
  Duration release_delay_max = seconds(1);  // response withholding bound
  Duration cert_lifetime = seconds(600);
};

class Rsu {
 public:
  Rsu(RsuConfig cfg, crypto::PrivateKey zone_key,
      crypto::PublicKey authority_public, std::uint64_t rng_seed);

  // Validates a request in fixed order (decrypt, authority signature,
  // request signature, key equality, revocation) and either schedules a
  // certificate or rejects with the first failing check.
  IssueResult handle_cert_request(const CertRequest& req, SimTime now);

  // Merges a replicated revocation list into the local copy.
  void apply_rl_update(const certs::RevocationList& rl);

  // All issuance records, ordered by issuance time.
  std::vector<certs::HistoryEntry> export_history() const;

  const certs::RevocationList& revocation_list() const { return rl_; }
  const RsuConfig& config() const { return cfg_; }

 private:
  RsuConfig cfg_;
  crypto::PrivateKey zone_key_;
  crypto::PublicKey authority_public_;
  certs::RevocationList rl_;
  std::vector<certs::HistoryEntry> history_;
  std::unordered_set<std::uint64_t> used_pseudo_ids_;
  std::mt19937_64 rng_;
};

}  // namespace vanet::rsu
