#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vanet/certs.hpp"
#include "vanet/crypto.hpp"
#include "vanet/rsu.hpp"
#include "vanet/time.hpp"

namespace vanet::obu {

// Fixed-point kinematic state carried in beacons: millimetre positions,
// millimetres-per-second speed, milliradian heading.
struct Kinematics {
  std::int32_t x_mm = 0;
  std::int32_t y_mm = 0;
  std::int64_t velocity_mmps = 0;
  std::int64_t direction_mrad = 0;
  std::int64_t accel_mmps2 = 0;
  bool operator==(const Kinematics&) const = default;
};

// Periodic safety broadcast. Wire layout (226 octets):
//   0x01 || pseudo_id(8) || timestamp(8) || kinematics(32) ||
//   temp_cert(113) || signature(64)
// The signature is made with the pseudonym key over everything before it.
struct Beacon {
  std::uint64_t pseudo_id = 0;
  SimTime timestamp = 0;
  Kinematics kinematics;
  certs::TempCert temp_cert;
  crypto::Signature signature;
  bool operator==(const Beacon&) const = default;
};

// Periodic neighbor-list gossip: the sender's current neighbor ids, sorted.
// Wire layout: 0x02 || pseudo_id(8) || timestamp(8) || count(2) ||
//   ids(8 each) || temp_cert(113) || signature(64)
struct NeighborListMsg {
  std::uint64_t pseudo_id = 0;
  SimTime timestamp = 0;
  std::vector<std::uint64_t> neighbor_ids;
  certs::TempCert temp_cert;
  crypto::Signature signature;
  bool operator==(const NeighborListMsg&) const = default;
};

// Single-hop-flooded notice that a specific message failed verification.
// Wire layout (226 octets): 0x03 || reporter_pseudo_id(8) ||
//   subject_message_id(32) || timestamp(8) || temp_cert(113) || signature(64)
struct DisapprovalMsg {
  std::uint64_t reporter_pseudo_id = 0;
  crypto::Digest subject_message_id;
  SimTime timestamp = 0;
  certs::TempCert temp_cert;
  crypto::Signature signature;
  bool operator==(const DisapprovalMsg&) const = default;
};

constexpr std::uint8_t beacon_tag = 0x01;
constexpr std::uint8_t neighbor_list_tag = 0x02;
constexpr std::uint8_t disapproval_tag = 0x03;
constexpr std::size_t beacon_size = 226;
constexpr std::size_t disapproval_size = 226;

Bytes encode(const Beacon& b);
Beacon decode_beacon(ByteView data);
Bytes encode(const NeighborListMsg& m);
NeighborListMsg decode_neighbor_list(ByteView data);
Bytes encode(const DisapprovalMsg& m);
DisapprovalMsg decode_disapproval(ByteView data);

// Stable identifier of a concrete message: the digest of its encoding.
crypto::Digest message_id(ByteView encoded);
crypto::Digest message_id(const Beacon& b);

// Signs a beacon with a pseudonym keypair and its certificate.
Beacon build_beacon(const crypto::KeyPair& pseudo_keys,
                    const certs::TempCert& cert, const Kinematics& kin,
                    SimTime now);

// Full beacon check: certificate validity under the zone key, id
// consistency, and the beacon signature under the certified key.
bool beacon_valid(const Beacon& beacon, const crypto::PublicKey& zone_public,
                  SimTime now);

enum class ElectionStrategy { paper_rule, p_nearest };

// Decides locally whether `self_id` must verify a message from `sender_id`.
// `mutual_ids` holds the ids known to both sides (the receiver adds itself
// as a candidate; `sender_id` is never a candidate). With fewer than p
// candidates every receiver verifies for itself.
//
// paper_rule: verify when |self - sender| is at most the p-th largest
// distance among candidates, so the p-1 farthest candidates stand down.
// p_nearest: verify when fewer than p candidates are strictly closer to
// the sender, electing the p nearest.
bool is_verifier(std::uint64_t self_id, std::uint64_t sender_id,
                 std::span<const std::uint64_t> mutual_ids, int p,
                 ElectionStrategy strategy);

struct ObuParams {
  int p = 5;                                  // verifiers per message
  Duration delta_t = milliseconds(30);        // disapproval wait window
  Duration theta = seconds(1);                // neighbor-list gossip period
  Duration beacon_period = milliseconds(300);
  Duration neighbor_timeout = seconds(1);
  ElectionStrategy election = ElectionStrategy::p_nearest;
};

struct NeighborRecord {
  certs::TempCert temp_cert;
  SimTime last_heard = 0;
  std::vector<std::uint64_t> advertised_neighbors;  // sorted
  SimTime list_time = -1;                           // < 0: no list received yet
  bool has_list() const { return list_time >= 0; }
};

enum class ReceiveAction { verify, wait, ignore };

struct ReceiveDecision {
  ReceiveAction action = ReceiveAction::ignore;
  SimTime deadline = 0;  // wait expiry, set when action == wait
};

struct VerifyOutcome {
  bool valid = false;
  std::optional<DisapprovalMsg> disapproval;  // set when invalid and signable
};

struct DisapprovalActions {
  bool forward = false;                 // rebroadcast once to direct neighbors
  std::optional<Beacon> recheck;        // cancelled pending beacon to verify
};

struct TimerOutputs {
  std::vector<Beacon> delivered;        // waits that expired unchallenged
  std::optional<Beacon> beacon;         // periodic broadcast, if due
  std::optional<NeighborListMsg> neighbor_list;  // gossip, if due
};

// Per-vehicle protocol state machine. Time arrives from the caller; the
// class never reads a clock, which keeps runs reproducible.
class Obu {
 public:
  Obu(ObuParams params, crypto::KeyPair long_term_keys,
      certs::LongTermCert long_term_cert,
      crypto::PublicParams authority_params);

  // Builds an anonymous certificate request for the given zone: generates
  // the pseudonym keypair from `entropy`, encrypts the long-term
  // certificate and pseudonym key to the zone key, and signs with the
  // long-term key.
  rsu::CertRequest build_cert_request(const std::string& zone_id,
                                      std::uint64_t epoch,
                                      const crypto::Seed& entropy);

  // Installs an issued certificate when it matches the outstanding request
  // and verifies under the zone key. Returns whether it was installed.
  bool accept_temp_cert(const certs::TempCert& cert, SimTime now);

  bool active(SimTime now) const;
  std::uint64_t pseudo_id() const;  // StateError when no certificate held

  // Arms the periodic beacon/gossip timers (typically staggered per node).
  void schedule(SimTime first_beacon_at, SimTime first_list_at);

  // Signs a fresh beacon. StateError when the certificate is missing or
  // expired (renewal required).
  Beacon make_beacon(const Kinematics& kin, SimTime now);
  NeighborListMsg make_neighbor_list(SimTime now);
  DisapprovalMsg make_disapproval(const crypto::Digest& subject, SimTime now);

  // Classifies an incoming beacon: verify it ourselves (stranger, thin
  // knowledge, or elected verifier), wait delta_t for disapprovals, or
  // ignore (duplicate). Strangers and already-disapproved subjects are
  // always verified locally rather than trusted.
  ReceiveDecision on_receive_beacon(const Beacon& beacon, SimTime now);

  // Full verification: certificate chain and beacon signature. Valid
  // beacons refresh the neighbor table; invalid ones yield a disapproval
  // when we hold a certificate to sign it with.
  VerifyOutcome verify_now(const Beacon& beacon, SimTime now);

  // Re-verifies a beacon whose wait was cancelled by a disapproval. Returns
  // whether it checked out (deliver); no new disapproval is raised since
  // the original report is already flooding.
  bool recheck(const Beacon& beacon, SimTime now);

  // Validates and ingests gossip; returns false when the message fails
  // verification and was ignored.
  bool apply_neighbor_list(const NeighborListMsg& msg, SimTime now);

  // Handles a disapproval: first copy of a subject is forwarded once;
  // a matching pending wait is cancelled and handed back for rechecking.
  // Invalid disapprovals are ignored entirely.
  DisapprovalActions on_receive_disapproval(const DisapprovalMsg& msg,
                                            SimTime now);

  // Drives time forward: releases expired waits (delivery), evicts silent
  // neighbors, and emits periodic messages that are due.
  TimerOutputs on_timer(const Kinematics& kin, SimTime now);

  SimTime next_timer_due() const;

  const std::map<std::uint64_t, NeighborRecord>& neighbor_table() const {
    return neighbors_;
  }
  const certs::LongTermCert& long_term_cert() const { return long_term_cert_; }
  const crypto::PublicKey& zone_public_key() const { return zone_public_; }
  std::size_t pending_count() const { return pending_.size(); }

  // Installed pseudonym credentials; null before installation. Simulation
  // support (the baseline protocol shares the issuance flow).
  const crypto::KeyPair* pseudo_keys() const {
    return pseudo_keys_ ? &*pseudo_keys_ : nullptr;
  }
  const certs::TempCert* temp_cert() const {
    return temp_cert_ ? &*temp_cert_ : nullptr;
  }

 private:
  void refresh_neighbor(const Beacon& beacon, SimTime now);

  ObuParams params_;
  crypto::KeyPair long_term_keys_;
  certs::LongTermCert long_term_cert_;
  crypto::PublicParams authority_params_;
  crypto::PublicKey zone_public_;  // issuer key for the current zone

  std::optional<crypto::KeyPair> pending_keypair_;
  std::optional<crypto::KeyPair> pseudo_keys_;
  std::optional<certs::TempCert> temp_cert_;

  std::map<std::uint64_t, NeighborRecord> neighbors_;

  struct PendingWait {
    Beacon beacon;
    SimTime deadline = 0;
  };
  std::map<crypto::Digest, PendingWait> pending_;
  std::set<crypto::Digest> seen_messages_;
  std::set<crypto::Digest> seen_disapprovals_;  // by subject message id

  SimTime next_beacon_at_ = -1;
  SimTime next_list_at_ = -1;
};

}  // namespace vanet::obu
