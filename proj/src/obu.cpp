#include "vanet/obu.hpp"

#include <algorithm>

#include "vanet/errors.hpp"

namespace vanet::obu {

namespace {

void put_kinematics(Bytes& out, const Kinematics& k) {
  put_i32(out, k.x_mm);
  put_i32(out, k.y_mm);
  put_i64(out, k.velocity_mmps);
  put_i64(out, k.direction_mrad);
  put_i64(out, k.accel_mmps2);
}

Kinematics read_kinematics(ByteReader& r) {
  Kinematics k;
  k.x_mm = r.i32();
  k.y_mm = r.i32();
  k.velocity_mmps = r.i64();
  k.direction_mrad = r.i64();
  k.accel_mmps2 = r.i64();
  return k;
}

Bytes beacon_signed_content(const Beacon& b) {
  Bytes out;
  put_u8(out, beacon_tag);
  put_u64(out, b.pseudo_id);
  put_i64(out, b.timestamp);
  put_kinematics(out, b.kinematics);
  put_bytes(out, as_bytes(certs::encode(b.temp_cert)));
  return out;
}

Bytes list_signed_content(const NeighborListMsg& m) {
  Bytes out;
  put_u8(out, neighbor_list_tag);
  put_u64(out, m.pseudo_id);
  put_i64(out, m.timestamp);
  put_u16(out, static_cast<std::uint16_t>(m.neighbor_ids.size()));
  for (std::uint64_t id : m.neighbor_ids) put_u64(out, id);
  put_bytes(out, as_bytes(certs::encode(m.temp_cert)));
  return out;
}

Bytes disapproval_signed_content(const DisapprovalMsg& m) {
  Bytes out;
  put_u8(out, disapproval_tag);
  put_u64(out, m.reporter_pseudo_id);
  put_bytes(out, ByteView{m.subject_message_id.bytes.data(),
                          m.subject_message_id.bytes.size()});
  put_i64(out, m.timestamp);
  put_bytes(out, as_bytes(certs::encode(m.temp_cert)));
  return out;
}

std::uint64_t absdiff(std::uint64_t a, std::uint64_t b) {
  return a > b ? a - b : b - a;
}

}  // namespace

Bytes encode(const Beacon& b) {
  Bytes out = beacon_signed_content(b);
  put_bytes(out, ByteView{b.signature.bytes.data(), b.signature.bytes.size()});
  return out;
}

Beacon decode_beacon(ByteView data) {
  ByteReader r(data);
  if (r.u8() != beacon_tag) throw DecodeError("not a beacon");
  Beacon b;
  b.pseudo_id = r.u64();
  b.timestamp = r.i64();
  b.kinematics = read_kinematics(r);
  b.temp_cert = certs::decode_temp_cert(r.take(certs::temp_cert_size));
  r.read(b.signature.bytes);
  r.finish();
  return b;
}

Bytes encode(const NeighborListMsg& m) {
  Bytes out = list_signed_content(m);
  put_bytes(out, ByteView{m.signature.bytes.data(), m.signature.bytes.size()});
  return out;
}

NeighborListMsg decode_neighbor_list(ByteView data) {
  ByteReader r(data);
  if (r.u8() != neighbor_list_tag) throw DecodeError("not a neighbor list");
  NeighborListMsg m;
  m.pseudo_id = r.u64();
  m.timestamp = r.i64();
  std::uint16_t count = r.u16();
  m.neighbor_ids.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) m.neighbor_ids.push_back(r.u64());
  m.temp_cert = certs::decode_temp_cert(r.take(certs::temp_cert_size));
  r.read(m.signature.bytes);
  r.finish();
  return m;
}

Bytes encode(const DisapprovalMsg& m) {
  Bytes out = disapproval_signed_content(m);
  put_bytes(out, ByteView{m.signature.bytes.data(), m.signature.bytes.size()});
  return out;
}

DisapprovalMsg decode_disapproval(ByteView data) {
  ByteReader r(data);
  if (r.u8() != disapproval_tag) throw DecodeError("not a disapproval");
  DisapprovalMsg m;
  m.reporter_pseudo_id = r.u64();
  r.read(m.subject_message_id.bytes);
  m.timestamp = r.i64();
  m.temp_cert = certs::decode_temp_cert(r.take(certs::temp_cert_size));
  r.read(m.signature.bytes);
  r.finish();
  return m;
}

crypto::Digest message_id(ByteView encoded) { return crypto::hash(encoded); }

crypto::Digest message_id(const Beacon& b) {
  return message_id(as_bytes(encode(b)));
}

Beacon build_beacon(const crypto::KeyPair& pseudo_keys,
                    const certs::TempCert& cert, const Kinematics& kin,
                    SimTime now) {
  Beacon b;
  b.pseudo_id = cert.pseudo_id;
  b.timestamp = now;
  b.kinematics = kin;
  b.temp_cert = cert;
  b.signature = crypto::sign(pseudo_keys.private_key,
                             as_bytes(beacon_signed_content(b)));
  return b;
}

bool beacon_valid(const Beacon& beacon, const crypto::PublicKey& zone_public,
                  SimTime now) {
  return certs::check_temp_cert(beacon.temp_cert, zone_public, now) ==
             certs::CertStatus::valid &&
         beacon.pseudo_id == beacon.temp_cert.pseudo_id &&
         crypto::verify(beacon.temp_cert.pseudo_public_key,
                        as_bytes(beacon_signed_content(beacon)),
                        beacon.signature);
}

bool is_verifier(std::uint64_t self_id, std::uint64_t sender_id,
                 std::span<const std::uint64_t> mutual_ids, int p,
                 ElectionStrategy strategy) {
  if (p <= 0) throw ConfigError("p must be positive");
  std::uint64_t beta = absdiff(self_id, sender_id);
  std::vector<std::uint64_t> diffs;
  diffs.reserve(mutual_ids.size() + 1);
  for (std::uint64_t id : mutual_ids)
    if (id != sender_id && id != self_id) diffs.push_back(absdiff(id, sender_id));
  diffs.push_back(beta);  // the receiver itself is always a candidate

  if (strategy == ElectionStrategy::p_nearest) {
    std::size_t closer = 0;
    for (std::uint64_t d : diffs)
      if (d < beta) ++closer;
    return closer < static_cast<std::size_t>(p);
  }

  // paper_rule: with fewer than p candidates everyone verifies; otherwise
  // stand down only when beta exceeds the p-th largest distance.
  if (diffs.size() < static_cast<std::size_t>(p)) return true;
  std::nth_element(diffs.begin(), diffs.begin() + (p - 1), diffs.end(),
                   std::greater<>());
  return beta <= diffs[p - 1];
}

Obu::Obu(ObuParams params, crypto::KeyPair long_term_keys,
         certs::LongTermCert long_term_cert,
         crypto::PublicParams authority_params)
    : params_(std::move(params)),
      long_term_keys_(std::move(long_term_keys)),
      long_term_cert_(std::move(long_term_cert)),
      authority_params_(authority_params) {
  if (params_.p <= 0) throw ConfigError("p must be positive");
  if (params_.delta_t <= 0) throw ConfigError("delta_t must be positive");
}

rsu::CertRequest Obu::build_cert_request(const std::string& zone_id,
                                         std::uint64_t epoch,
                                         const crypto::Seed& entropy) {
  zone_public_ = crypto::derive_identity_public(
      authority_params_, crypto::zone_identity(zone_id, epoch));
  crypto::KeyPair kp = crypto::keygen(
      entropy, static_cast<crypto::Scheme>(long_term_keys_.private_key.scheme));

  Bytes plain = certs::encode(long_term_cert_);
  put_bytes(plain, ByteView{kp.public_key.bytes.data(),
                            kp.public_key.bytes.size()});

  rsu::CertRequest req;
  req.pseudo_public_key = kp.public_key;
  req.ciphertext = crypto::encrypt(zone_public_, as_bytes(plain));
  req.request_signature = crypto::sign(
      long_term_keys_.private_key, as_bytes(rsu::request_signed_content(req)));
  pending_keypair_ = kp;
  return req;
}

bool Obu::accept_temp_cert(const certs::TempCert& cert, SimTime now) {
  if (!pending_keypair_) return false;
  if (cert.pseudo_public_key != pending_keypair_->public_key) return false;
  if (certs::check_temp_cert(cert, zone_public_, now) !=
      certs::CertStatus::valid)
    return false;
  pseudo_keys_ = pending_keypair_;
  temp_cert_ = cert;
  pending_keypair_.reset();
  return true;
}

bool Obu::active(SimTime now) const {
  return temp_cert_ && now < temp_cert_->expiration;
}

std::uint64_t Obu::pseudo_id() const {
  if (!temp_cert_) throw StateError("no temporary certificate held");
  return temp_cert_->pseudo_id;
}

void Obu::schedule(SimTime first_beacon_at, SimTime first_list_at) {
  next_beacon_at_ = first_beacon_at;
  next_list_at_ = first_list_at;
}

Beacon Obu::make_beacon(const Kinematics& kin, SimTime now) {
  if (!active(now))
    throw StateError("temporary certificate missing or expired");
  return build_beacon(*pseudo_keys_, *temp_cert_, kin, now);
}

NeighborListMsg Obu::make_neighbor_list(SimTime now) {
  if (!active(now))
    throw StateError("temporary certificate missing or expired");
  NeighborListMsg m;
  m.pseudo_id = temp_cert_->pseudo_id;
  m.timestamp = now;
  m.neighbor_ids.reserve(neighbors_.size());
  for (const auto& [id, rec] : neighbors_) m.neighbor_ids.push_back(id);
  m.temp_cert = *temp_cert_;
  m.signature = crypto::sign(pseudo_keys_->private_key,
                             as_bytes(list_signed_content(m)));
  return m;
}

DisapprovalMsg Obu::make_disapproval(const crypto::Digest& subject,
                                     SimTime now) {
  if (!temp_cert_) throw StateError("no temporary certificate held");
  DisapprovalMsg m;
  m.reporter_pseudo_id = temp_cert_->pseudo_id;
  m.subject_message_id = subject;
  m.timestamp = now;
  m.temp_cert = *temp_cert_;
  m.signature = crypto::sign(pseudo_keys_->private_key,
                             as_bytes(disapproval_signed_content(m)));
  return m;
}

ReceiveDecision Obu::on_receive_beacon(const Beacon& beacon, SimTime now) {
  crypto::Digest id = message_id(beacon);
  if (!seen_messages_.insert(id).second) return {ReceiveAction::ignore, 0};
  if (temp_cert_ && beacon.pseudo_id == temp_cert_->pseudo_id)
    return {ReceiveAction::ignore, 0};

  // A subject we already saw disapproved is never trusted on a wait.
  if (seen_disapprovals_.count(id)) return {ReceiveAction::verify, 0};

  // Strangers and senders without a usable advertised list get verified
  // locally; so do all messages while we hold no certificate (we could not
  // sign a disapproval, so we must not rely on electing others).
  if (!temp_cert_) return {ReceiveAction::verify, 0};
  auto it = neighbors_.find(beacon.pseudo_id);
  if (it == neighbors_.end() || !it->second.has_list())
    return {ReceiveAction::verify, 0};

  std::vector<std::uint64_t> mutual;
  mutual.reserve(it->second.advertised_neighbors.size());
  for (std::uint64_t nid : it->second.advertised_neighbors)
    if (neighbors_.count(nid)) mutual.push_back(nid);

  if (is_verifier(temp_cert_->pseudo_id, beacon.pseudo_id, mutual, params_.p,
                  params_.election))
    return {ReceiveAction::verify, 0};

  SimTime deadline = now + params_.delta_t;
  pending_.emplace(id, PendingWait{beacon, deadline});
  return {ReceiveAction::wait, deadline};
}

VerifyOutcome Obu::verify_now(const Beacon& beacon, SimTime now) {
  bool ok = beacon_valid(beacon, zone_public_, now);
  if (ok) {
    refresh_neighbor(beacon, now);
    return {true, std::nullopt};
  }
  VerifyOutcome out{false, std::nullopt};
  if (temp_cert_) {
    crypto::Digest subject = message_id(beacon);
    // Mark our own report seen so echoed copies are not re-forwarded.
    seen_disapprovals_.insert(subject);
    pending_.erase(subject);
    out.disapproval = make_disapproval(subject, now);
  }
  return out;
}

bool Obu::recheck(const Beacon& beacon, SimTime now) {
  if (!beacon_valid(beacon, zone_public_, now)) return false;
  refresh_neighbor(beacon, now);
  return true;
}

bool Obu::apply_neighbor_list(const NeighborListMsg& msg, SimTime now) {
  if (temp_cert_ && msg.pseudo_id == temp_cert_->pseudo_id) return false;
  if (msg.pseudo_id != msg.temp_cert.pseudo_id) return false;
  if (certs::check_temp_cert(msg.temp_cert, zone_public_, now) !=
      certs::CertStatus::valid)
    return false;
  if (!crypto::verify(msg.temp_cert.pseudo_public_key,
                      as_bytes(list_signed_content(msg)), msg.signature))
    return false;

  NeighborRecord& rec = neighbors_[msg.pseudo_id];
  rec.temp_cert = msg.temp_cert;
  rec.last_heard = std::max(rec.last_heard, now);
  if (msg.timestamp >= rec.list_time) {
    rec.advertised_neighbors = msg.neighbor_ids;
    std::sort(rec.advertised_neighbors.begin(),
              rec.advertised_neighbors.end());
    rec.list_time = msg.timestamp;
  }
  return true;
}

DisapprovalActions Obu::on_receive_disapproval(const DisapprovalMsg& msg,
                                               SimTime now) {
  if (msg.reporter_pseudo_id != msg.temp_cert.pseudo_id) return {};
  if (certs::check_temp_cert(msg.temp_cert, zone_public_, now) !=
      certs::CertStatus::valid)
    return {};
  if (!crypto::verify(msg.temp_cert.pseudo_public_key,
                      as_bytes(disapproval_signed_content(msg)),
                      msg.signature))
    return {};

  if (!seen_disapprovals_.insert(msg.subject_message_id).second) return {};

  DisapprovalActions actions;
  actions.forward = true;
  auto it = pending_.find(msg.subject_message_id);
  if (it != pending_.end()) {
    actions.recheck = it->second.beacon;
    pending_.erase(it);
  }
  return actions;
}

TimerOutputs Obu::on_timer(const Kinematics& kin, SimTime now) {
  TimerOutputs out;

  for (auto it = pending_.begin(); it != pending_.end();) {
    if (it->second.deadline <= now) {
      refresh_neighbor(it->second.beacon, now);
      out.delivered.push_back(std::move(it->second.beacon));
      it = pending_.erase(it);
    } else {
      ++it;
    }
  }

  for (auto it = neighbors_.begin(); it != neighbors_.end();) {
    if (now - it->second.last_heard > params_.neighbor_timeout)
      it = neighbors_.erase(it);
    else
      ++it;
  }

  if (next_beacon_at_ >= 0 && now >= next_beacon_at_) {
    if (active(now)) out.beacon = make_beacon(kin, now);
    next_beacon_at_ += params_.beacon_period;
  }
  if (next_list_at_ >= 0 && now >= next_list_at_) {
    if (active(now)) out.neighbor_list = make_neighbor_list(now);
    next_list_at_ += params_.theta;
  }
  return out;
}

SimTime Obu::next_timer_due() const {
  SimTime due = -1;
  auto consider = [&](SimTime t) {
    if (t >= 0 && (due < 0 || t < due)) due = t;
  };
  consider(next_beacon_at_);
  consider(next_list_at_);
  for (const auto& [id, wait] : pending_) consider(wait.deadline);
  return due;
}

void Obu::refresh_neighbor(const Beacon& beacon, SimTime now) {
  NeighborRecord& rec = neighbors_[beacon.pseudo_id];
  rec.temp_cert = beacon.temp_cert;
  rec.last_heard = std::max(rec.last_heard, now);
}

}  // namespace vanet::obu
