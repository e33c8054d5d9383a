#include <memory>
#include <set>

#include "doctest.h"
#include "vanet/authority.hpp"
#include "vanet/errors.hpp"
#include "vanet/obu.hpp"
#include "vanet/rsu.hpp"

using namespace vanet;
using namespace vanet::rsu;

namespace {

crypto::Seed seed_from(std::uint64_t n) {
  crypto::Seed s{};
  for (int i = 0; i < 8; ++i) s[i] = static_cast<std::uint8_t>(n >> (i * 8));
  return s;
}

struct World {
  authority::Authority auth{7, crypto::Scheme::prf};
  RsuConfig rc;
  std::unique_ptr<Rsu> unit;
  crypto::PublicKey zone_pub;

  World() {
    rc.zone_id = "zone-0";
    rc.epoch = 0;
    rc.release_delay_max = seconds(1);
    rc.cert_lifetime = seconds(600);
    crypto::PrivateKey key = auth.provision_rsu(rc.zone_id, rc.epoch);
    unit = std::make_unique<Rsu>(rc, key, auth.public_key(), 99);
    zone_pub = crypto::derive_identity_public(
        auth.public_params(), crypto::zone_identity(rc.zone_id, rc.epoch));
  }

  obu::Obu make_obu(const std::string& identity) {
    auto [kp, cert] = auth.enroll_vehicle(identity, 0);
    return obu::Obu(obu::ObuParams{}, kp, cert, auth.public_params());
  }
};

}  // namespace

TEST_CASE("issuance happy path: schedule, certificate, history") {
  World w;
  obu::Obu obu = w.make_obu("car-1");
  CertRequest req = obu.build_cert_request("zone-0", 0, seed_from(1));

  Bytes wire = encode(req);
  CHECK(decode_cert_request(as_bytes(wire)) == req);

  SimTime now = milliseconds(5);
  IssueResult result = w.unit->handle_cert_request(req, now);
  REQUIRE(std::holds_alternative<Scheduled>(result));
  const auto& sched = std::get<Scheduled>(result);

  CHECK(sched.release_at > now);
  CHECK(sched.release_at <= now + w.rc.release_delay_max);
  CHECK(sched.cert.expiration == now + w.rc.cert_lifetime);
  CHECK(sched.cert.pseudo_public_key == req.pseudo_public_key);
  CHECK(certs::check_temp_cert(sched.cert, w.zone_pub, now) ==
        certs::CertStatus::valid);

  auto history = w.unit->export_history();
  REQUIRE(history.size() == 1);
  CHECK(history[0].pseudo_id == sched.cert.pseudo_id);
  CHECK(history[0].pseudo_public_key == req.pseudo_public_key);
  CHECK(history[0].long_term_cert == obu.long_term_cert());
  CHECK(history[0].issued_at == now);

  CHECK(obu.accept_temp_cert(sched.cert, sched.release_at));
  CHECK(obu.active(sched.release_at));
  CHECK(obu.pseudo_id() == sched.cert.pseudo_id);
}

TEST_CASE("undecryptable requests are rejected first") {
  World w;
  obu::Obu obu = w.make_obu("car-1");
  CertRequest req = obu.build_cert_request("zone-0", 0, seed_from(2));
  req.ciphertext.bytes[5] ^= 1;
  IssueResult r = w.unit->handle_cert_request(req, 0);
  REQUIRE(std::holds_alternative<Reject>(r));
  CHECK(std::get<Reject>(r).reason == RejectReason::decrypt_failed);
}

TEST_CASE("certificates from a foreign authority are rejected") {
  World w;
  authority::Authority other(8, crypto::Scheme::prf);
  other.provision_rsu("zone-0", 0);  // same zone key namespace, different root
  auto [kp, cert] = other.enroll_vehicle("car-1", 0);
  // encrypts to w's zone key but carries the foreign authority's signature
  obu::Obu obu(obu::ObuParams{}, kp, cert, w.auth.public_params());
  CertRequest req = obu.build_cert_request("zone-0", 0, seed_from(3));
  IssueResult r = w.unit->handle_cert_request(req, 0);
  REQUIRE(std::holds_alternative<Reject>(r));
  CHECK(std::get<Reject>(r).reason == RejectReason::bad_authority_signature);
}

TEST_CASE("requests with a broken outer signature are rejected") {
  World w;
  obu::Obu obu = w.make_obu("car-1");
  CertRequest req = obu.build_cert_request("zone-0", 0, seed_from(4));
  req.request_signature.bytes[0] ^= 1;
  IssueResult r = w.unit->handle_cert_request(req, 0);
  REQUIRE(std::holds_alternative<Reject>(r));
  CHECK(std::get<Reject>(r).reason == RejectReason::bad_request_signature);
}

TEST_CASE("enclosed and outer pseudonym keys must match") {
  World w;
  auto [kp, cert] = w.auth.enroll_vehicle("car-1", 0);
  crypto::KeyPair outer = crypto::keygen(seed_from(5), crypto::Scheme::prf);
  crypto::KeyPair enclosed = crypto::keygen(seed_from(6), crypto::Scheme::prf);

  Bytes plain = certs::encode(cert);
  put_bytes(plain, ByteView{enclosed.public_key.bytes.data(),
                            enclosed.public_key.bytes.size()});
  CertRequest req;
  req.pseudo_public_key = outer.public_key;
  req.ciphertext = crypto::encrypt(w.zone_pub, as_bytes(plain));
  req.request_signature =
      crypto::sign(kp.private_key, as_bytes(request_signed_content(req)));

  IssueResult r = w.unit->handle_cert_request(req, 0);
  REQUIRE(std::holds_alternative<Reject>(r));
  CHECK(std::get<Reject>(r).reason == RejectReason::key_mismatch);
}

TEST_CASE("revoked vehicles are refused until the check passes again") {
  World w;
  obu::Obu obu = w.make_obu("car-1");
  w.auth.revoke("car-1");
  w.unit->apply_rl_update(w.auth.revocation_list());

  CertRequest req = obu.build_cert_request("zone-0", 0, seed_from(7));
  IssueResult r = w.unit->handle_cert_request(req, 0);
  REQUIRE(std::holds_alternative<Reject>(r));
  CHECK(std::get<Reject>(r).reason == RejectReason::revoked);
  CHECK(w.unit->export_history().empty());
}

TEST_CASE("pseudonym ids never repeat within one unit's history") {
  World w;
  std::set<std::uint64_t> ids;
  for (int i = 0; i < 300; ++i) {
    obu::Obu obu = w.make_obu("car-" + std::to_string(i));
    CertRequest req =
        obu.build_cert_request("zone-0", 0, seed_from(1000 + i));
    IssueResult r = w.unit->handle_cert_request(req, i);
    REQUIRE(std::holds_alternative<Scheduled>(r));
    CHECK(ids.insert(std::get<Scheduled>(r).cert.pseudo_id).second);
  }
  auto history = w.unit->export_history();
  CHECK(history.size() == 300);
  for (std::size_t i = 1; i < history.size(); ++i)
    CHECK(history[i - 1].issued_at <= history[i].issued_at);
}

TEST_CASE("release jitter stays in range and is roughly centred") {
  World w;
  SimTime now = 0;
  std::int64_t sum = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    obu::Obu obu = w.make_obu("car-" + std::to_string(i));
    CertRequest req = obu.build_cert_request("zone-0", 0, seed_from(i));
    IssueResult r = w.unit->handle_cert_request(req, now);
    REQUIRE(std::holds_alternative<Scheduled>(r));
    SimTime rel = std::get<Scheduled>(r).release_at;
    CHECK(rel > now);
    CHECK(rel <= now + w.rc.release_delay_max);
    sum += rel - now;
  }
  double mean = static_cast<double>(sum) / n;
  double half = static_cast<double>(w.rc.release_delay_max) / 2;
  CHECK(mean > 0.9 * half);
  CHECK(mean < 1.1 * half);
}

TEST_CASE("certificate acceptance is bound to the outstanding request") {
  World w;
  obu::Obu obu = w.make_obu("car-1");
  CertRequest req = obu.build_cert_request("zone-0", 0, seed_from(8));
  IssueResult r = w.unit->handle_cert_request(req, 0);
  const auto& sched = std::get<Scheduled>(r);

  // a certificate for some other key is not installed
  crypto::KeyPair stranger = crypto::keygen(seed_from(9), crypto::Scheme::prf);
  certs::TempCert wrong = sched.cert;
  wrong.pseudo_public_key = stranger.public_key;
  CHECK_FALSE(obu.accept_temp_cert(wrong, 1));
  // an expired certificate is not installed
  CHECK_FALSE(obu.accept_temp_cert(sched.cert, sched.cert.expiration));
  // the genuine certificate is
  CHECK(obu.accept_temp_cert(sched.cert, 1));
}
