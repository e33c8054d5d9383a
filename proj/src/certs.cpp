#include "vanet/certs.hpp"

namespace vanet::certs {

namespace {

Bytes long_term_signed_content(const crypto::PublicKey& key,
                               std::uint64_t serial, SimTime issued_at) {
  Bytes out;
  put_bytes(out, ByteView{key.bytes.data(), key.bytes.size()});
  put_u64(out, serial);
  put_i64(out, issued_at);
  return out;
}

Bytes temp_signed_content(const crypto::PublicKey& key, SimTime expiration,
                          std::uint64_t pseudo_id) {
  Bytes out;
  put_bytes(out, ByteView{key.bytes.data(), key.bytes.size()});
  put_i64(out, expiration);
  put_u64(out, pseudo_id);
  return out;
}

}  // namespace

Bytes encode(const LongTermCert& cert) {
  Bytes out = long_term_signed_content(cert.vehicle_public_key, cert.serial,
                                       cert.issued_at);
  put_bytes(out, ByteView{cert.authority_signature.bytes.data(),
                          cert.authority_signature.bytes.size()});
  return out;
}

LongTermCert decode_long_term_cert(ByteView data) {
  ByteReader r(data);
  LongTermCert cert;
  r.read(cert.vehicle_public_key.bytes);
  cert.serial = r.u64();
  cert.issued_at = r.i64();
  r.read(cert.authority_signature.bytes);
  r.finish();
  return cert;
}

LongTermCert make_long_term_cert(const crypto::PrivateKey& authority_key,
                                 const crypto::PublicKey& vehicle_key,
                                 std::uint64_t serial, SimTime issued_at) {
  LongTermCert cert;
  cert.vehicle_public_key = vehicle_key;
  cert.serial = serial;
  cert.issued_at = issued_at;
  cert.authority_signature = crypto::sign(
      authority_key,
      as_bytes(long_term_signed_content(vehicle_key, serial, issued_at)));
  return cert;
}

bool check_long_term_cert(const LongTermCert& cert,
                          const crypto::PublicKey& authority_public) {
  return crypto::verify(authority_public,
                        as_bytes(long_term_signed_content(
                            cert.vehicle_public_key, cert.serial,
                            cert.issued_at)),
                        cert.authority_signature);
}

Bytes encode(const TempCert& cert) {
  Bytes out = temp_signed_content(cert.pseudo_public_key, cert.expiration,
                                  cert.pseudo_id);
  put_bytes(out, ByteView{cert.issuer_signature.bytes.data(),
                          cert.issuer_signature.bytes.size()});
  return out;
}

TempCert decode_temp_cert(ByteView data) {
  ByteReader r(data);
  TempCert cert;
  r.read(cert.pseudo_public_key.bytes);
  cert.expiration = r.i64();
  cert.pseudo_id = r.u64();
  r.read(cert.issuer_signature.bytes);
  r.finish();
  return cert;
}

TempCert make_temp_cert(const crypto::PrivateKey& issuer_key,
                        const crypto::PublicKey& pseudo_key,
                        SimTime expiration, std::uint64_t pseudo_id) {
  TempCert cert;
  cert.pseudo_public_key = pseudo_key;
  cert.expiration = expiration;
  cert.pseudo_id = pseudo_id;
  cert.issuer_signature = crypto::sign(
      issuer_key,
      as_bytes(temp_signed_content(pseudo_key, expiration, pseudo_id)));
  return cert;
}

CertStatus check_temp_cert(const TempCert& cert,
                           const crypto::PublicKey& issuer_public,
                           SimTime now) {
  if (!crypto::verify(issuer_public,
                      as_bytes(temp_signed_content(cert.pseudo_public_key,
                                                   cert.expiration,
                                                   cert.pseudo_id)),
                      cert.issuer_signature))
    return CertStatus::bad_signature;
  if (now >= cert.expiration) return CertStatus::expired;
  return CertStatus::valid;
}

bool rl_contains(const RevocationList& rl, std::uint64_t serial) {
  return rl.revoked_serials.count(serial) != 0;
}

RevocationList rl_add(const RevocationList& rl, std::uint64_t serial) {
  RevocationList out = rl;
  out.revoked_serials.insert(serial);
  out.version = rl.version + 1;
  return out;
}

RevocationList rl_merge(const RevocationList& a, const RevocationList& b) {
  RevocationList out;
  out.version = std::max(a.version, b.version);
  out.revoked_serials = a.revoked_serials;
  out.revoked_serials.insert(b.revoked_serials.begin(),
                             b.revoked_serials.end());
  return out;
}

Bytes encode(const RevocationList& rl) {
  Bytes out;
  put_u64(out, rl.version);
  put_u32(out, static_cast<std::uint32_t>(rl.revoked_serials.size()));
  for (std::uint64_t s : rl.revoked_serials) put_u64(out, s);
  return out;
}

RevocationList decode_revocation_list(ByteView data) {
  ByteReader r(data);
  RevocationList rl;
  rl.version = r.u64();
  std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) rl.revoked_serials.insert(r.u64());
  r.finish();
  return rl;
}

Bytes encode(const HistoryEntry& entry) {
  Bytes out;
  put_u64(out, entry.pseudo_id);
  put_bytes(out, ByteView{entry.pseudo_public_key.bytes.data(),
                          entry.pseudo_public_key.bytes.size()});
  put_bytes(out, as_bytes(encode(entry.long_term_cert)));
  put_i64(out, entry.issued_at);
  return out;
}

HistoryEntry decode_history_entry(ByteView data) {
  ByteReader r(data);
  HistoryEntry entry;
  entry.pseudo_id = r.u64();
  r.read(entry.pseudo_public_key.bytes);
  entry.long_term_cert = decode_long_term_cert(r.take(long_term_cert_size));
  entry.issued_at = r.i64();
  r.finish();
  return entry;
}

}  // namespace vanet::certs
