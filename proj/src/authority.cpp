#include "vanet/authority.hpp"

#include "vanet/errors.hpp"

namespace vanet::authority {

Authority::Authority(std::uint64_t seed, crypto::Scheme scheme)
    : seeds_(seed, "authority") {
  master_ = crypto::master_init(seeds_.next(), scheme);
  keypair_ = crypto::keygen(seeds_.next(), scheme);
}

std::pair<crypto::KeyPair, certs::LongTermCert> Authority::enroll_vehicle(
    const std::string& identity, SimTime now) {
  if (identity_serials_.count(identity))
    throw DuplicateEntryError("identity already enrolled: " + identity);
  crypto::KeyPair kp = crypto::keygen(
      seeds_.next(), static_cast<crypto::Scheme>(keypair_.private_key.scheme));
  std::uint64_t serial = next_serial_++;
  certs::LongTermCert cert = certs::make_long_term_cert(
      keypair_.private_key, kp.public_key, serial, now);
  enrollments_[serial] = Enrollment{identity, cert};
  identity_serials_[identity] = serial;
  return {kp, cert};
}

crypto::PrivateKey Authority::provision_rsu(const std::string& zone_id,
                                            std::uint64_t epoch) {
  auto it = rsu_epochs_.find(zone_id);
  if (it != rsu_epochs_.end() && epoch < it->second)
    throw StaleEpochError("zone " + zone_id + " already at epoch " +
                          std::to_string(it->second));
  rsu_epochs_[zone_id] = epoch;
  return crypto::derive_identity_private(
      master_, crypto::zone_identity(zone_id, epoch));
}

std::string Authority::trace(
    std::uint64_t pseudo_id,
    std::span<const certs::HistoryEntry> history) const {
  for (const certs::HistoryEntry& entry : history) {
    if (entry.pseudo_id != pseudo_id) continue;
    auto it = enrollments_.find(entry.long_term_cert.serial);
    if (it == enrollments_.end())
      throw IntegrityError("issuance record references unknown serial " +
                           std::to_string(entry.long_term_cert.serial));
    return it->second.identity;
  }
  throw NotFoundError("no issuance record for pseudonym " +
                      std::to_string(pseudo_id));
}

const certs::RevocationList& Authority::revoke(const std::string& identity) {
  auto it = identity_serials_.find(identity);
  if (it == identity_serials_.end())
    throw NotFoundError("unknown identity: " + identity);
  rl_ = certs::rl_add(rl_, it->second);
  return rl_;
}

const Enrollment* Authority::find_enrollment(std::uint64_t serial) const {
  auto it = enrollments_.find(serial);
  return it == enrollments_.end() ? nullptr : &it->second;
}

}  // namespace vanet::authority
