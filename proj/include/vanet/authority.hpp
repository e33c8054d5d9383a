#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "vanet/certs.hpp"
#include "vanet/crypto.hpp"

namespace vanet::authority {

struct Enrollment {
  std::string identity;
  certs::LongTermCert cert;
  bool operator==(const Enrollment&) const = default;
};

// Trusted authority: enrolls vehicles under long-term certificates,
// provisions roadside units with identity-derived zone keys, maintains the
// revocation list, and resolves pseudonyms back to real identities from
// issuance records.
class Authority {
 public:
  Authority(std::uint64_t seed, crypto::Scheme scheme);

  const crypto::PublicKey& public_key() const { return keypair_.public_key; }
  const crypto::PublicParams& public_params() const {
    return master_.public_params;
  }

  // Generates a fresh vehicle keypair and signs its long-term certificate.
  // Throws DuplicateEntryError when the identity is already enrolled.
  std::pair<crypto::KeyPair, certs::LongTermCert> enroll_vehicle(
      const std::string& identity, SimTime now);

  // Extracts the private key for a zone/epoch. Repeating the current epoch
  // is idempotent; an epoch lower than the one on record throws
  // StaleEpochError.
  crypto::PrivateKey provision_rsu(const std::string& zone_id,
                                   std::uint64_t epoch);

  // Resolves a pseudonym to the enrolled identity via issuance records.
  // Unknown pseudo_id -> NotFoundError; a record whose serial is missing
  // from the registry -> IntegrityError.
  std::string trace(std::uint64_t pseudo_id,
                    std::span<const certs::HistoryEntry> history) const;

  // Adds the identity's serial to the revocation list and returns the new
  // list. Unknown identity -> NotFoundError.
  const certs::RevocationList& revoke(const std::string& identity);

  const certs::RevocationList& revocation_list() const { return rl_; }

  const Enrollment* find_enrollment(std::uint64_t serial) const;

 private:
  crypto::MasterParams master_;
  crypto::KeyPair keypair_;
  crypto::SeedSequence seeds_;
  std::map<std::uint64_t, Enrollment> enrollments_;       // by serial
  std::map<std::string, std::uint64_t> identity_serials_;  // identity -> serial
  std::map<std::string, std::uint64_t> rsu_epochs_;        // zone -> epoch
  certs::RevocationList rl_;
  std::uint64_t next_serial_ = 1;
};

}  // namespace vanet::authority
