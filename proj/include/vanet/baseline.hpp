#pragma once

#include "vanet/certs.hpp"
#include "vanet/crypto.hpp"
#include "vanet/obu.hpp"

namespace vanet::baseline {

// Comparison protocol: identical certificates and beacon format, but every
// receiver verifies every beacon itself; no election, waiting, or
// disapprovals. A beacon is delivered iff the local check succeeds.
class BaselineObu {
 public:
  BaselineObu(crypto::KeyPair pseudo_keys, certs::TempCert cert,
              crypto::PublicKey zone_public)
      : pseudo_keys_(std::move(pseudo_keys)),
        cert_(std::move(cert)),
        zone_public_(zone_public) {}

  std::uint64_t pseudo_id() const { return cert_.pseudo_id; }

  obu::Beacon make_beacon(const obu::Kinematics& kin, SimTime now);

  // Full local check: certificate chain plus beacon signature.
  bool verify_beacon(const obu::Beacon& beacon, SimTime now) const;

 private:
  crypto::KeyPair pseudo_keys_;
  certs::TempCert cert_;
  crypto::PublicKey zone_public_;
};

}  // namespace vanet::baseline
