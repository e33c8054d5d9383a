#include "vanet/rsu.hpp"

#include <algorithm>

#include "vanet/errors.hpp"
#include "vanet/rng.hpp"

namespace vanet::rsu {

Bytes encode(const CertRequest& req) {
  Bytes out;
  put_bytes(out, ByteView{req.pseudo_public_key.bytes.data(),
                          req.pseudo_public_key.bytes.size()});
  put_u16(out, static_cast<std::uint16_t>(req.ciphertext.bytes.size()));
  put_bytes(out, as_bytes(req.ciphertext.bytes));
  put_bytes(out, ByteView{req.request_signature.bytes.data(),
                          req.request_signature.bytes.size()});
  return out;
}

CertRequest decode_cert_request(ByteView data) {
  ByteReader r(data);
  CertRequest req;
  r.read(req.pseudo_public_key.bytes);
  std::uint16_t ct_len = r.u16();
  ByteView ct = r.take(ct_len);
  req.ciphertext.bytes.assign(ct.begin(), ct.end());
  r.read(req.request_signature.bytes);
  r.finish();
  return req;
}

Bytes request_signed_content(const CertRequest& req) {
  Bytes out;
  put_bytes(out, ByteView{req.pseudo_public_key.bytes.data(),
                          req.pseudo_public_key.bytes.size()});
  put_bytes(out, as_bytes(req.ciphertext.bytes));
  return out;
}

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::decrypt_failed: return "decrypt_failed";
    case RejectReason::bad_authority_signature: return "bad_authority_signature";
    case RejectReason::bad_request_signature: return "bad_request_signature";
    case RejectReason::key_mismatch: return "key_mismatch";
    case RejectReason::revoked: return "revoked";
  }
  return "unknown";
}

Rsu::Rsu(RsuConfig cfg, crypto::PrivateKey zone_key,
         crypto::PublicKey authority_public, std::uint64_t rng_seed)
    : cfg_(std::move(cfg)),
      zone_key_(zone_key),
      authority_public_(authority_public),
      rng_(rng_seed) {}

IssueResult Rsu::handle_cert_request(const CertRequest& req, SimTime now) {
  Bytes plain;
  try {
    plain = crypto::decrypt(zone_key_, req.ciphertext);
  } catch (const CryptoError&) {
    return Reject{RejectReason::decrypt_failed};
  }
  if (plain.size() != certs::long_term_cert_size + crypto::public_key_size)
    return Reject{RejectReason::decrypt_failed};

  certs::LongTermCert cert;
  try {
    cert = certs::decode_long_term_cert(
        ByteView{plain.data(), certs::long_term_cert_size});
  } catch (const DecodeError&) {
    return Reject{RejectReason::decrypt_failed};
  }
  crypto::PublicKey enclosed_key;
  std::copy_n(plain.data() + certs::long_term_cert_size,
              crypto::public_key_size, enclosed_key.bytes.begin());

  if (!certs::check_long_term_cert(cert, authority_public_))
    return Reject{RejectReason::bad_authority_signature};

  if (!crypto::verify(cert.vehicle_public_key,
                      as_bytes(request_signed_content(req)),
                      req.request_signature))
    return Reject{RejectReason::bad_request_signature};

  if (enclosed_key != req.pseudo_public_key)
    return Reject{RejectReason::key_mismatch};

  if (certs::rl_contains(rl_, cert.serial))
    return Reject{RejectReason::revoked};

  std::uint64_t pseudo_id;
  do {
    pseudo_id = rng_();
  } while (pseudo_id == 0 || used_pseudo_ids_.count(pseudo_id));
  used_pseudo_ids_.insert(pseudo_id);

  certs::TempCert tc = certs::make_temp_cert(
      zone_key_, req.pseudo_public_key, now + cfg_.cert_lifetime, pseudo_id);
  history_.push_back(certs::HistoryEntry{pseudo_id, req.pseudo_public_key,
                                         cert, now});

  SimTime release_at =
      now + 1 +
      static_cast<Duration>(bounded(
          rng_, static_cast<std::uint64_t>(cfg_.release_delay_max)));
  return Scheduled{tc, release_at};
}

void Rsu::apply_rl_update(const certs::RevocationList& rl) {
  rl_ = certs::rl_merge(rl_, rl);
}

std::vector<certs::HistoryEntry> Rsu::export_history() const {
  std::vector<certs::HistoryEntry> out = history_;
  std::stable_sort(out.begin(), out.end(),
                   [](const certs::HistoryEntry& a,
                      const certs::HistoryEntry& b) {
                     return a.issued_at < b.issued_at;
                   });
  return out;
}

}  // namespace vanet::rsu
