#include "doctest.h"
#include "vanet/authority.hpp"
#include "vanet/errors.hpp"

using namespace vanet;
using namespace vanet::authority;

TEST_CASE("enrollment issues verifiable certificates with unique serials") {
  Authority auth(1, crypto::Scheme::prf);
  auto [kp_a, cert_a] = auth.enroll_vehicle("car-a", 10);
  auto [kp_b, cert_b] = auth.enroll_vehicle("car-b", 20);
  CHECK(cert_a.serial != cert_b.serial);
  CHECK(kp_a.public_key != kp_b.public_key);
  CHECK(cert_a.vehicle_public_key == kp_a.public_key);
  CHECK(certs::check_long_term_cert(cert_a, auth.public_key()));
  CHECK(certs::check_long_term_cert(cert_b, auth.public_key()));
  CHECK_THROWS_AS(auth.enroll_vehicle("car-a", 30), DuplicateEntryError);
}

TEST_CASE("rsu provisioning derives the published zone key") {
  Authority auth(2, crypto::Scheme::prf);
  crypto::PrivateKey key = auth.provision_rsu("zone-7", 3);
  crypto::PublicKey pub = crypto::derive_identity_public(
      auth.public_params(), crypto::zone_identity("zone-7", 3));
  Bytes msg{9, 9, 9};
  CHECK(crypto::verify(pub, as_bytes(msg), crypto::sign(key, as_bytes(msg))));

  // same epoch is idempotent, newer epochs rotate, older epochs are stale
  CHECK(auth.provision_rsu("zone-7", 3) == key);
  crypto::PrivateKey next = auth.provision_rsu("zone-7", 4);
  CHECK(next != key);
  CHECK_THROWS_AS(auth.provision_rsu("zone-7", 3), StaleEpochError);
}

TEST_CASE("tracing resolves pseudonyms through issuance records") {
  Authority auth(3, crypto::Scheme::prf);
  auto [kp, cert] = auth.enroll_vehicle("car-x", 0);
  auto [kp2, cert2] = auth.enroll_vehicle("car-y", 0);

  std::vector<certs::HistoryEntry> history;
  history.push_back({501, kp.public_key, cert, 100});
  history.push_back({502, kp2.public_key, cert2, 200});

  CHECK(auth.trace(501, history) == "car-x");
  CHECK(auth.trace(502, history) == "car-y");
  CHECK_THROWS_AS(auth.trace(999, history), NotFoundError);

  history[0].long_term_cert.serial = 424242;
  CHECK_THROWS_AS(auth.trace(501, history), IntegrityError);
}

TEST_CASE("revocation adds the identity's serial and bumps the version") {
  Authority auth(4, crypto::Scheme::prf);
  auto [kp, cert] = auth.enroll_vehicle("car-z", 0);
  CHECK_FALSE(certs::rl_contains(auth.revocation_list(), cert.serial));
  const certs::RevocationList& rl = auth.revoke("car-z");
  CHECK(certs::rl_contains(rl, cert.serial));
  CHECK(rl.version == 1);
  CHECK_THROWS_AS(auth.revoke("nobody"), NotFoundError);
}
