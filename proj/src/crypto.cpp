#include "vanet/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

namespace vanet::crypto {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw CryptoError("sodium_init failed");
  });
}

bool valid_scheme(std::uint8_t s) {
  return s == static_cast<std::uint8_t>(Scheme::ed25519) ||
         s == static_cast<std::uint8_t>(Scheme::prf);
}

Digest hash_parts(std::initializer_list<ByteView> parts) {
  ensure_sodium();
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  for (ByteView p : parts) crypto_hash_sha256_update(&st, p.data(), p.size());
  Digest d;
  crypto_hash_sha256_final(&st, d.bytes.data());
  return d;
}

ByteView dview(const Digest& d) { return {d.bytes.data(), d.bytes.size()}; }

// --- deterministic hash-based suite ---------------------------------------
//
// secret = H("prf.keygen" || seed); public material = H("prf.pub" || secret).
// Signatures are two chained MACs keyed implicitly by knowledge of the
// public material's preimage; encryption is a hash-counter stream cipher
// with a 16-octet authentication tag. Wire sizes match the ed25519 suite.

constexpr std::size_t prf_nonce_size = 16;
constexpr std::size_t prf_tag_size = 16;

Digest prf_public_material(const std::array<std::uint8_t, 32>& secret) {
  return hash_parts({as_bytes(std::string_view("vanet.prf.pub")),
                     ByteView{secret.data(), secret.size()}});
}

Signature prf_sign(ByteView secret, ByteView message) {
  Digest h1 = hash_parts(
      {as_bytes(std::string_view("vanet.prf.sig1")), secret, message});
  Digest h2 = hash_parts(
      {as_bytes(std::string_view("vanet.prf.sig2")), secret, message});
  Signature sig;
  std::memcpy(sig.bytes.data(), h1.bytes.data(), 32);
  std::memcpy(sig.bytes.data() + 32, h2.bytes.data(), 32);
  return sig;
}

// The verification key for the prf suite is the public material itself; a
// verifier recomputes the MAC chain from it. (The suite is a stand-in: it
// treats the public material as the shared MAC key.)
Signature prf_sign_for_public(ByteView public_material, ByteView message) {
  return prf_sign(public_material, message);
}

Digest prf_stream_block(const Digest& key, ByteView nonce, std::uint64_t i) {
  Bytes ctr(8);
  for (int b = 7; b >= 0; --b) ctr[b] = static_cast<std::uint8_t>(i >> ((7 - b) * 8));
  return hash_parts({as_bytes(std::string_view("vanet.prf.stream")),
                     dview(key), nonce, as_bytes(ctr)});
}

}  // namespace

Digest hash(ByteView data) { return hash_parts({data}); }

KeyPair keygen(const Seed& seed, Scheme scheme) {
  ensure_sodium();
  KeyPair kp;
  kp.public_key.bytes[0] = static_cast<std::uint8_t>(scheme);
  kp.private_key.scheme = static_cast<std::uint8_t>(scheme);
  switch (scheme) {
    case Scheme::ed25519: {
      unsigned char pk[crypto_sign_PUBLICKEYBYTES];
      unsigned char sk[crypto_sign_SECRETKEYBYTES];
      crypto_sign_seed_keypair(pk, sk, seed.data());
      std::memcpy(kp.public_key.bytes.data() + 1, pk, 32);
      std::memcpy(kp.private_key.bytes.data(), sk, 64);
      return kp;
    }
    case Scheme::prf: {
      Digest secret = hash_parts({as_bytes(std::string_view("vanet.prf.keygen")),
                                  ByteView{seed.data(), seed.size()}});
      Digest pub = prf_public_material(secret.bytes);
      std::memcpy(kp.public_key.bytes.data() + 1, pub.bytes.data(), 32);
      std::memcpy(kp.private_key.bytes.data(), secret.bytes.data(), 32);
      std::memcpy(kp.private_key.bytes.data() + 32, pub.bytes.data(), 32);
      return kp;
    }
  }
  throw CryptoError("keygen: unknown scheme");
}

Signature sign(const PrivateKey& key, ByteView message) {
  ensure_sodium();
  if (!valid_scheme(key.scheme)) throw CryptoError("sign: corrupt key material");
  if (key.scheme == static_cast<std::uint8_t>(Scheme::ed25519)) {
    Signature sig;
    unsigned long long len = 0;
    crypto_sign_detached(sig.bytes.data(), &len, message.data(), message.size(),
                         key.bytes.data());
    if (len != signature_size) throw CryptoError("sign: bad signature length");
    return sig;
  }
  return prf_sign(ByteView{key.bytes.data() + 32, 32}, message);
}

bool verify(const PublicKey& key, ByteView message, const Signature& sig) {
  ensure_sodium();
  if (!valid_scheme(key.bytes[0])) return false;
  if (key.bytes[0] == static_cast<std::uint8_t>(Scheme::ed25519)) {
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(),
                                       message.size(),
                                       key.bytes.data() + 1) == 0;
  }
  Signature expect =
      prf_sign_for_public(ByteView{key.bytes.data() + 1, 32}, message);
  return sodium_memcmp(expect.bytes.data(), sig.bytes.data(),
                       signature_size) == 0;
}

Ciphertext encrypt(const PublicKey& key, ByteView plaintext) {
  ensure_sodium();
  if (!valid_scheme(key.bytes[0])) throw CryptoError("encrypt: corrupt key");
  Ciphertext ct;
  ct.bytes.push_back(key.bytes[0]);  // scheme octet, checked on decrypt
  if (key.bytes[0] == static_cast<std::uint8_t>(Scheme::ed25519)) {
    unsigned char curve_pk[crypto_scalarmult_curve25519_BYTES];
    if (crypto_sign_ed25519_pk_to_curve25519(curve_pk, key.bytes.data() + 1) != 0)
      throw CryptoError("encrypt: key not convertible");
    std::size_t off = ct.bytes.size();
    ct.bytes.resize(off + plaintext.size() + crypto_box_SEALBYTES);
    crypto_box_seal(ct.bytes.data() + off, plaintext.data(), plaintext.size(),
                    curve_pk);
    return ct;
  }
  // prf suite: deterministic authenticated stream encryption keyed by the
  // public material (a stand-in, not confidential against a real adversary).
  Digest enc_key = hash_parts({as_bytes(std::string_view("vanet.prf.enc")),
                               ByteView{key.bytes.data(), key.bytes.size()}});
  Digest nonce_full = hash_parts(
      {as_bytes(std::string_view("vanet.prf.nonce")), dview(enc_key), plaintext});
  ByteView nonce{nonce_full.bytes.data(), prf_nonce_size};
  put_bytes(ct.bytes, nonce);
  std::size_t body = ct.bytes.size();
  put_bytes(ct.bytes, plaintext);
  for (std::size_t i = 0; i < plaintext.size(); i += digest_size) {
    Digest block = prf_stream_block(enc_key, nonce, i / digest_size);
    for (std::size_t j = 0; j < digest_size && i + j < plaintext.size(); ++j)
      ct.bytes[body + i + j] ^= block.bytes[j];
  }
  Digest tag = hash_parts({as_bytes(std::string_view("vanet.prf.tag")),
                           dview(enc_key), nonce, plaintext});
  put_bytes(ct.bytes, ByteView{tag.bytes.data(), prf_tag_size});
  return ct;
}

Bytes decrypt(const PrivateKey& key, const Ciphertext& ct) {
  ensure_sodium();
  if (!valid_scheme(key.scheme)) throw CryptoError("decrypt: corrupt key");
  if (ct.bytes.empty() || ct.bytes[0] != key.scheme)
    throw CryptoError("decrypt: scheme mismatch");
  ByteView body{ct.bytes.data() + 1, ct.bytes.size() - 1};
  if (key.scheme == static_cast<std::uint8_t>(Scheme::ed25519)) {
    if (body.size() < crypto_box_SEALBYTES)
      throw CryptoError("decrypt: ciphertext too short");
    unsigned char curve_sk[crypto_scalarmult_curve25519_BYTES];
    unsigned char curve_pk[crypto_scalarmult_curve25519_BYTES];
    if (crypto_sign_ed25519_sk_to_curve25519(curve_sk, key.bytes.data()) != 0)
      throw CryptoError("decrypt: key not convertible");
    // ed25519 secret keys embed the public half in their upper 32 octets
    if (crypto_sign_ed25519_pk_to_curve25519(curve_pk, key.bytes.data() + 32) != 0)
      throw CryptoError("decrypt: key not convertible");
    Bytes out(body.size() - crypto_box_SEALBYTES);
    if (crypto_box_seal_open(out.data(), body.data(), body.size(), curve_pk,
                             curve_sk) != 0)
      throw CryptoError("decrypt: sealed box rejected");
    return out;
  }
  if (body.size() < prf_nonce_size + prf_tag_size)
    throw CryptoError("decrypt: ciphertext too short");
  PublicKey pub;
  pub.bytes[0] = key.scheme;
  std::memcpy(pub.bytes.data() + 1, key.bytes.data() + 32, 32);
  Digest enc_key = hash_parts({as_bytes(std::string_view("vanet.prf.enc")),
                               ByteView{pub.bytes.data(), pub.bytes.size()}});
  ByteView nonce = body.subspan(0, prf_nonce_size);
  ByteView payload =
      body.subspan(prf_nonce_size, body.size() - prf_nonce_size - prf_tag_size);
  ByteView tag = body.subspan(body.size() - prf_tag_size, prf_tag_size);
  Bytes out(payload.begin(), payload.end());
  for (std::size_t i = 0; i < out.size(); i += digest_size) {
    Digest block = prf_stream_block(enc_key, nonce, i / digest_size);
    for (std::size_t j = 0; j < digest_size && i + j < out.size(); ++j)
      out[i + j] ^= block.bytes[j];
  }
  Digest expect = hash_parts({as_bytes(std::string_view("vanet.prf.tag")),
                              dview(enc_key), nonce, as_bytes(out)});
  if (sodium_memcmp(expect.bytes.data(), tag.data(), prf_tag_size) != 0)
    throw CryptoError("decrypt: authentication tag mismatch");
  return out;
}

MasterParams master_init(const Seed& seed, Scheme scheme) {
  MasterParams mp;
  Digest secret = hash_parts(
      {as_bytes(std::string_view("vanet.ibc.master")), ByteView{seed.data(), seed.size()}});
  mp.master_secret.assign(secret.bytes.begin(), secret.bytes.end());
  mp.public_params.scheme = static_cast<std::uint8_t>(scheme);
  mp.public_params.derivation_key = hash_parts(
      {as_bytes(std::string_view("vanet.ibc.pub")), dview(secret)}).bytes;
  return mp;
}

namespace {

Seed identity_seed(const PublicParams& params, std::string_view identity) {
  Digest d = hash_parts({as_bytes(std::string_view("vanet.ibc.id")),
                         ByteView{params.derivation_key.data(),
                                  params.derivation_key.size()},
                         as_bytes(identity)});
  return d.bytes;
}

}  // namespace

PublicKey derive_identity_public(const PublicParams& params,
                                 std::string_view identity) {
  if (!valid_scheme(params.scheme))
    throw CryptoError("identity derivation: corrupt public parameters");
  return keygen(identity_seed(params, identity),
                static_cast<Scheme>(params.scheme))
      .public_key;
}

KeyPair derive_identity_keypair(const MasterParams& master,
                                std::string_view identity) {
  if (master.master_secret.empty())
    throw AuthorizationError("identity key extraction requires master secret");
  Digest check = hash_parts({as_bytes(std::string_view("vanet.ibc.pub")),
                             as_bytes(master.master_secret)});
  if (check.bytes != master.public_params.derivation_key)
    throw AuthorizationError("master secret does not match public parameters");
  return keygen(identity_seed(master.public_params, identity),
                static_cast<Scheme>(master.public_params.scheme));
}

PrivateKey derive_identity_private(const MasterParams& master,
                                   std::string_view identity) {
  return derive_identity_keypair(master, identity).private_key;
}

std::string zone_identity(std::string_view zone_id, std::uint64_t epoch) {
  return std::string(zone_id) + "#" + std::to_string(epoch);
}

SeedSequence::SeedSequence(std::uint64_t seed, std::string_view label) {
  Bytes be(8);
  for (int i = 0; i < 8; ++i) be[i] = static_cast<std::uint8_t>(seed >> ((7 - i) * 8));
  state_ = hash_parts({as_bytes(std::string_view("vanet.seedseq")),
                       as_bytes(label), as_bytes(be)})
               .bytes;
}

Seed SeedSequence::next() {
  Bytes be(8);
  for (int i = 0; i < 8; ++i)
    be[i] = static_cast<std::uint8_t>(counter_ >> ((7 - i) * 8));
  ++counter_;
  return hash_parts({ByteView{state_.data(), state_.size()}, as_bytes(be)}).bytes;
}

}  // namespace vanet::crypto
