#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "vanet/bytes.hpp"
#include "vanet/errors.hpp"

namespace vanet::crypto {

// Two interchangeable signature/encryption suites behind one interface:
//  - ed25519: Ed25519 signatures + sealed-box hybrid encryption (libsodium).
//  - prf:     deterministic hash-based stand-in with identical wire sizes.
//             Orders of magnitude faster; useful for large simulation runs
//             and property tests. Not secure against a real adversary.
enum class Scheme : std::uint8_t { ed25519 = 1, prf = 2 };

constexpr std::size_t seed_size = 32;
constexpr std::size_t public_key_size = 33;  // 1 scheme octet + 32 key octets
constexpr std::size_t private_key_size = 64;
constexpr std::size_t signature_size = 64;
constexpr std::size_t digest_size = 32;

using Seed = std::array<std::uint8_t, seed_size>;

struct Digest {
  std::array<std::uint8_t, digest_size> bytes{};
  auto operator<=>(const Digest&) const = default;
};

struct PublicKey {
  // bytes[0] is the scheme octet; the rest is scheme-specific key material.
  std::array<std::uint8_t, public_key_size> bytes{};
  auto operator<=>(const PublicKey&) const = default;
};

struct PrivateKey {
  std::uint8_t scheme = 0;
  std::array<std::uint8_t, private_key_size> bytes{};
  auto operator<=>(const PrivateKey&) const = default;
};

struct Signature {
  std::array<std::uint8_t, signature_size> bytes{};
  auto operator<=>(const Signature&) const = default;
};

struct KeyPair {
  PublicKey public_key;
  PrivateKey private_key;
};

struct Ciphertext {
  Bytes bytes;
  bool operator==(const Ciphertext&) const = default;
};

Digest hash(ByteView data);

// Deterministic keypair from a 32-octet seed. Same seed, same scheme ->
// same pair; the public key's first octet carries the scheme.
KeyPair keygen(const Seed& seed, Scheme scheme);

// Detached fixed-size signature. Throws CryptoError on corrupt key material.
Signature sign(const PrivateKey& key, ByteView message);

// Returns false for bad signatures and for malformed inputs; never throws.
bool verify(const PublicKey& key, ByteView message, const Signature& sig);

// Public-key encryption of an arbitrary payload (hybrid under ed25519).
Ciphertext encrypt(const PublicKey& key, ByteView plaintext);

// Throws CryptoError when the ciphertext does not decrypt under this key.
Bytes decrypt(const PrivateKey& key, const Ciphertext& ct);

// --- Identity-derived keys -------------------------------------------------
//
// A trusted authority holds a master secret; any party holding only the
// published parameters can compute the public key bound to an identity
// string, while private-key extraction requires the master secret. Key
// derivation is implemented as a published seed-derivation rule, so the
// "public key from identity string alone" property is exact; the
// private-extraction restriction is enforced at the API boundary.

struct PublicParams {
  std::uint8_t scheme = 0;
  std::array<std::uint8_t, digest_size> derivation_key{};
  bool operator==(const PublicParams&) const = default;
};

struct MasterParams {
  Bytes master_secret;  // empty for holders of the public side only
  PublicParams public_params;
};

MasterParams master_init(const Seed& seed, Scheme scheme);

// Anyone can compute the public key for an identity from public parameters.
PublicKey derive_identity_public(const PublicParams& params,
                                 std::string_view identity);

// Requires the master secret; throws AuthorizationError without it.
PrivateKey derive_identity_private(const MasterParams& master,
                                   std::string_view identity);

KeyPair derive_identity_keypair(const MasterParams& master,
                                std::string_view identity);

// Canonical identity string for the roadside unit serving a zone during an
// epoch. Shared convention between the authority (provisioning) and
// vehicles (computing the zone key they encrypt requests to).
std::string zone_identity(std::string_view zone_id, std::uint64_t epoch);

// Deterministic expansion of a 64-bit seed into a stream of keygen seeds.
class SeedSequence {
 public:
  explicit SeedSequence(std::uint64_t seed, std::string_view label = {});
  Seed next();

 private:
  std::array<std::uint8_t, digest_size> state_{};
  std::uint64_t counter_ = 0;
};

}  // namespace vanet::crypto
