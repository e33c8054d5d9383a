#pragma once

// Shared fixtures for protocol-level tests: a one-zone world with an
// authority and a roadside unit, plus helpers to mint active vehicles.

#include <memory>
#include <string>

#include "vanet/authority.hpp"
#include "vanet/obu.hpp"
#include "vanet/rsu.hpp"

namespace testsupport {

using namespace vanet;

inline crypto::Seed seed_from(std::uint64_t n) {
  crypto::Seed s{};
  for (int i = 0; i < 8; ++i) s[i] = static_cast<std::uint8_t>(n >> (i * 8));
  return s;
}

struct MiniWorld {
  obu::ObuParams params;
  authority::Authority auth;
  rsu::RsuConfig rc;
  std::unique_ptr<rsu::Rsu> unit;
  crypto::PublicKey zone_pub;
  std::uint64_t next_seed = 1;

  explicit MiniWorld(std::uint64_t seed = 7, obu::ObuParams p = {})
      : params(p), auth(seed, crypto::Scheme::prf) {
    rc.zone_id = "zone-0";
    rc.epoch = 0;
    crypto::PrivateKey key = auth.provision_rsu(rc.zone_id, rc.epoch);
    unit = std::make_unique<rsu::Rsu>(rc, key, auth.public_key(), seed + 1);
    zone_pub = crypto::derive_identity_public(
        auth.public_params(), crypto::zone_identity(rc.zone_id, rc.epoch));
  }

  obu::Obu make_obu(const std::string& identity) {
    auto [kp, cert] = auth.enroll_vehicle(identity, 0);
    return obu::Obu(params, kp, cert, auth.public_params());
  }

  // Enrolls, requests, and installs a pseudonym certificate at `now`.
  obu::Obu make_active_obu(const std::string& identity, SimTime now) {
    obu::Obu o = make_obu(identity);
    rsu::CertRequest req =
        o.build_cert_request(rc.zone_id, rc.epoch, seed_from(next_seed++));
    rsu::IssueResult r = unit->handle_cert_request(req, now);
    const auto& sched = std::get<rsu::Scheduled>(r);
    if (!o.accept_temp_cert(sched.cert, now))
      throw Error("fixture: certificate installation failed");
    return o;
  }

  // A syntactically well-formed beacon that no honest key signed: real
  // certificate, signature from an unrelated key.
  obu::Beacon forge_beacon(const obu::Obu& victim, const obu::Kinematics& kin,
                           SimTime now) {
    crypto::KeyPair attacker =
        crypto::keygen(seed_from(0xbadbadbad + next_seed++),
                       crypto::Scheme::prf);
    return obu::build_beacon(attacker, *victim.temp_cert(), kin, now);
  }
};

}  // namespace testsupport
