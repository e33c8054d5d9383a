#include "vanet/sim.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

#include "vanet/errors.hpp"
#include "vanet/rng.hpp"

namespace vanet::sim {

double MetricsReport::mean_delay_ms() const {
  if (delivered == 0) return 0.0;
  return static_cast<double>(total_delay_ns) / 1e6 /
         static_cast<double>(delivered);
}

double MetricsReport::loss_ratio() const {
  std::uint64_t dropped =
      overflow_dropped + disapproval_dropped + invalid_dropped;
  std::uint64_t resolved = dropped + delivered;
  if (resolved == 0) return 0.0;
  return static_cast<double>(dropped) / static_cast<double>(resolved);
}

double MetricsReport::approval_ratio() const {
  if (beacon_rx == 0) return 0.0;
  return static_cast<double>(beacon_checks) / static_cast<double>(beacon_rx);
}

double MetricsReport::verified_per_300ms() const {
  if (vehicle_count == 0 || duration <= 0) return 0.0;
  double windows = to_seconds(duration) / 0.3;
  return static_cast<double>(verify_services) / vehicle_count / windows;
}

double MetricsReport::offered_per_300ms() const {
  if (vehicle_count == 0 || duration <= 0) return 0.0;
  double windows = to_seconds(duration) / 0.3;
  return static_cast<double>(beacon_rx) / vehicle_count / windows;
}

std::optional<SimTime> ProcServer::try_enqueue(SimTime now, Duration cost,
                                               int capacity) {
  if (capacity >= 0 && outstanding >= capacity) return std::nullopt;
  next_free = std::max(next_free, now) + cost;
  ++outstanding;
  return next_free;
}

void ProcServer::complete() { --outstanding; }

Duration frame_tx_delay(std::size_t frame_bytes, std::int64_t bandwidth_bps) {
  std::int64_t bits = static_cast<std::int64_t>(frame_bytes) * 8;
  return bits * k_second / bandwidth_bps;
}

std::int64_t torus_dist2(std::int64_t ax, std::int64_t ay, std::int64_t bx,
                         std::int64_t by, std::int64_t area_um) {
  auto wrap_delta = [area_um](std::int64_t a, std::int64_t b) {
    std::int64_t d = a > b ? a - b : b - a;
    return std::min(d, area_um - d);
  };
  __int128 dx = wrap_delta(ax, bx);
  __int128 dy = wrap_delta(ay, by);
  __int128 d2 = dx * dx + dy * dy;
  const __int128 cap = std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(d2 > cap ? cap : d2);
}

void validate(const ScenarioConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(cfg.area_um > 0, "area must be positive");
  require(cfg.grid_spacing_um > 0, "grid_spacing must be positive");
  require(cfg.area_um % cfg.grid_spacing_um == 0,
          "area must be a multiple of grid_spacing");
  require(cfg.coverage_radius_um > 0, "coverage_radius must be positive");
  require(cfg.vehicle_count > 0, "vehicle_count must be positive");
  require(cfg.speed_min_umps > 0, "speed_min must be positive");
  require(cfg.speed_max_umps >= cfg.speed_min_umps,
          "speed_max must be at least speed_min");
  require(cfg.speed_max_umps / 10 < cfg.grid_spacing_um,
          "speed_max too high for grid_spacing (one turn per step)");
  require(cfg.bandwidth_bps > 0, "bandwidth must be positive");
  require(cfg.beacon_period > 0, "beacon_period must be positive");
  require(cfg.duration > 0, "duration must be positive");
  require(cfg.verify_cost > 0, "verify_cost must be positive");
  require(cfg.sign_cost > 0, "sign_cost must be positive");
  require(cfg.rx_buffer_capacity > 0, "rx_buffer_capacity must be positive");
  require(cfg.obu.p > 0, "p must be positive");
  require(cfg.obu.delta_t > 0, "delta_t must be positive");
  require(cfg.obu.theta > 0, "theta must be positive");
  require(cfg.obu.neighbor_timeout > 0, "neighbor_timeout must be positive");
  require(cfg.cert_lifetime > 0, "cert_lifetime must be positive");
  require(cfg.release_delay_max > 0, "release_delay_max must be positive");
  require(cfg.scheme == crypto::Scheme::ed25519 ||
              cfg.scheme == crypto::Scheme::prf,
          "unknown crypto scheme");
}

// --- mobility ---------------------------------------------------------------

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

GridMobility::GridMobility(std::int64_t area_um, std::int64_t spacing_um,
                           std::int64_t speed_min_umps,
                           std::int64_t speed_max_umps, int count,
                           std::uint64_t seed)
    : area_(area_um), spacing_(spacing_um), rng_(seed) {
  std::int64_t lines = area_ / spacing_;
  vehicles_.resize(count);
  for (Motion& v : vehicles_) {
    v.axis = static_cast<std::int8_t>(bounded(rng_, 2));
    v.dir = bounded(rng_, 2) == 0 ? 1 : -1;
    v.line_um = static_cast<std::int64_t>(bounded(rng_, lines)) * spacing_;
    v.offset_um = static_cast<std::int64_t>(
        bounded(rng_, static_cast<std::uint64_t>(area_)));
    v.speed_umps = bounded_range(rng_, speed_min_umps, speed_max_umps);
    v.step_um = v.speed_umps / 10;
  }
}

void GridMobility::step() {
  auto wrap = [this](std::int64_t x) {
    x %= area_;
    return x < 0 ? x + area_ : x;
  };
  for (Motion& v : vehicles_) {
    std::int64_t start = v.offset_um;
    std::int64_t end = start + v.dir * v.step_um;
    // first intersection strictly ahead of the current position
    std::int64_t next_cross = v.dir > 0
                                  ? (floor_div(start, spacing_) + 1) * spacing_
                                  : (floor_div(start - 1, spacing_)) * spacing_;
    bool crosses = v.dir > 0 ? end >= next_cross : end <= next_cross;
    if (!crosses) {
      v.offset_um = wrap(end);
      continue;
    }
    std::int64_t rem = v.dir > 0 ? end - next_cross : next_cross - end;
    std::uint64_t turn = bounded(rng_, 3);  // 0 straight, 1 left-ish, 2 right-ish
    if (turn == 0) {
      v.offset_um = wrap(end);
      continue;
    }
    std::int8_t new_dir = turn == 1 ? 1 : -1;
    std::int64_t cross_at = wrap(next_cross);
    v.offset_um = wrap(v.line_um + new_dir * rem);
    v.line_um = cross_at;
    v.axis = static_cast<std::int8_t>(1 - v.axis);
    v.dir = new_dir;
  }
}

GridMobility::Pos GridMobility::position(int i) const {
  const Motion& v = vehicles_[i];
  if (v.axis == 0) return {v.offset_um, v.line_um};
  return {v.line_um, v.offset_um};
}

obu::Kinematics GridMobility::kinematics(int i) const {
  const Motion& v = vehicles_[i];
  Pos p = position(i);
  obu::Kinematics k;
  k.x_mm = static_cast<std::int32_t>(p.x_um / 1000);
  k.y_mm = static_cast<std::int32_t>(p.y_um / 1000);
  k.velocity_mmps = v.speed_umps / 1000;
  // headings: +x 0, +y pi/2, -x pi, -y 3pi/2 (milliradians)
  if (v.axis == 0)
    k.direction_mrad = v.dir > 0 ? 0 : 3142;
  else
    k.direction_mrad = v.dir > 0 ? 1571 : 4712;
  return k;
}

// --- runner -----------------------------------------------------------------

namespace {

constexpr int rsu_node = -2;

enum class EventKind : std::uint8_t {
  mobility = 0,
  timer = 1,
  tx = 2,
  rx = 3,
  proc = 4,
  rl = 5,
};

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::mobility: return "mobility";
    case EventKind::timer: return "timer";
    case EventKind::tx: return "tx";
    case EventKind::rx: return "rx";
    case EventKind::proc: return "proc";
    case EventKind::rl: return "rl";
  }
  return "?";
}

struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::mobility;
  int node = -1;
  std::uint32_t ref = 0;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
  }
};

using FramePayload =
    std::variant<obu::Beacon, obu::NeighborListMsg, obu::DisapprovalMsg,
                 rsu::CertRequest, certs::TempCert>;

struct Frame {
  FramePayload payload;
  std::uint32_t size = 0;
  crypto::Digest mid;
  int origin = rsu_node;
  int target = -1;  // unicast receiver; -1 broadcast
  std::uint32_t immediate_verifiers = 0;
};

enum class JobKind : std::uint8_t {
  rx_beacon,
  rx_list,
  rx_disapproval,
  rx_recheck,
  rx_cert,
  tx_frame,
};

struct Job {
  JobKind kind;
  int node;
  std::uint32_t frame;
};

Bytes encode_payload(const FramePayload& p) {
  return std::visit(
      [](const auto& msg) -> Bytes {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, certs::TempCert>)
          return certs::encode(msg);
        else if constexpr (std::is_same_v<T, rsu::CertRequest>)
          return rsu::encode(msg);
        else
          return obu::encode(msg);
      },
      p);
}

}  // namespace

struct Runner::Impl {
  explicit Impl(ScenarioConfig c)
      : cfg(std::move(c)),
        auth(derive_seed(cfg.seed, "authority"), cfg.scheme),
        mobility(cfg.area_um, cfg.grid_spacing_um, cfg.speed_min_umps,
                 cfg.speed_max_umps, cfg.vehicle_count,
                 derive_seed(cfg.seed, "mobility")),
        entropy(derive_seed(cfg.seed, "entropy"), "pseudo") {
    cfg.obu.beacon_period = cfg.beacon_period;

    rsu::RsuConfig rc;
    rc.zone_id = "zone-0";
    rc.epoch = 0;
    rc.release_delay_max = cfg.release_delay_max;
    rc.cert_lifetime = cfg.cert_lifetime;
    crypto::PrivateKey zone_key = auth.provision_rsu(rc.zone_id, rc.epoch);
    unit = std::make_unique<rsu::Rsu>(rc, zone_key, auth.public_key(),
                                      derive_seed(cfg.seed, "rsu"));
    zone_pub = crypto::derive_identity_public(
        auth.public_params(), crypto::zone_identity(rc.zone_id, rc.epoch));

    vehicles.resize(cfg.vehicle_count);
    for (int i = 0; i < cfg.vehicle_count; ++i) {
      Vehicle& v = vehicles[i];
      v.identity = "vehicle-" + std::to_string(i);
      auto [kp, cert] = auth.enroll_vehicle(v.identity, 0);
      v.obu = std::make_unique<obu::Obu>(cfg.obu, kp, cert,
                                         auth.public_params());
      v.rng.seed(derive_seed(cfg.seed, "phase", i));
    }
  }

  struct Vehicle {
    std::string identity;
    std::unique_ptr<obu::Obu> obu;
    std::unique_ptr<baseline::BaselineObu> base;
    ProcServer rx, tx;
    std::mt19937_64 rng;
    SimTime base_next_beacon = -1;
    SimTime timer_scheduled = -1;  // earliest live wakeup in the queue
  };

  ScenarioConfig cfg;
  authority::Authority auth;
  std::unique_ptr<rsu::Rsu> unit;
  crypto::PublicKey zone_pub;
  GridMobility mobility;
  crypto::SeedSequence entropy;

  std::vector<Vehicle> vehicles;
  std::vector<Frame> frames;
  std::vector<Job> jobs;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue;
  std::uint64_t seq = 0;
  MetricsReport m;
  std::map<crypto::Digest, std::uint32_t> beacon_frames;
  std::vector<std::pair<SimTime, int>> revocations;
  std::map<std::pair<std::uint32_t, int>, int> audit;
  std::ostream* trace = nullptr;

  void push(SimTime t, EventKind kind, int node, std::uint32_t ref) {
    queue.push(Event{t, seq++, kind, node, ref});
  }

  // At most one live timer wakeup per node. Pushing a wakeup for every
  // pending wait would spawn a self-perpetuating event chain per wait
  // (each wakeup reschedules the next emission), which blows up in dense
  // neighborhoods. A wakeup that arrives after being superseded by an
  // earlier one is recognized in handle_timer and skipped; every handled
  // wakeup recomputes the node's next due time, so none are lost.
  void schedule_timer(int node, SimTime due) {
    Vehicle& v = vehicles[node];
    if (v.timer_scheduled >= 0 && v.timer_scheduled <= due) return;
    v.timer_scheduled = due;
    push(due, EventKind::timer, node, 0);
  }

  std::uint32_t new_frame(FramePayload payload, int origin, int target) {
    Frame f;
    f.origin = origin;
    f.target = target;
    Bytes wire = encode_payload(payload);
    f.size = static_cast<std::uint32_t>(wire.size());
    f.mid = obu::message_id(as_bytes(wire));
    f.payload = std::move(payload);
    std::uint32_t id = static_cast<std::uint32_t>(frames.size());
    if (std::holds_alternative<obu::Beacon>(f.payload))
      beacon_frames.emplace(f.mid, id);
    frames.push_back(std::move(f));
    return id;
  }

  void enqueue_tx(int node, std::uint32_t frame, SimTime now) {
    std::uint32_t job = static_cast<std::uint32_t>(jobs.size());
    jobs.push_back(Job{JobKind::tx_frame, node, frame});
    auto done = vehicles[node].tx.try_enqueue(now, cfg.sign_cost, -1);
    push(*done, EventKind::proc, node, job);
  }

  // Returns false when the verify queue sheds the job.
  bool enqueue_rx(JobKind kind, int node, std::uint32_t frame, SimTime now) {
    auto done =
        vehicles[node].rx.try_enqueue(now, cfg.verify_cost,
                                      cfg.rx_buffer_capacity);
    if (!done) return false;
    std::uint32_t job = static_cast<std::uint32_t>(jobs.size());
    jobs.push_back(Job{kind, node, frame});
    push(*done, EventKind::proc, node, job);
    return true;
  }

  void record_outcome(std::uint32_t frame, int node) {
    if (!cfg.audit_pairs) return;
    int& n = audit[{frame, node}];
    if (++n > 1)
      throw IntegrityError("duplicate terminal outcome for beacon pair");
  }

  void deliver_beacon(std::uint32_t frame, int node, SimTime now,
                      SimTime created) {
    ++m.delivered;
    m.total_delay_ns += now - created;
    record_outcome(frame, node);
  }

  void handle_tx(int node, std::uint32_t frame, SimTime now) {
    Frame& f = frames[frame];
    Duration delay = frame_tx_delay(f.size, cfg.bandwidth_bps);
    if (std::holds_alternative<rsu::CertRequest>(f.payload)) {
      push(now + delay, EventKind::rx, rsu_node, frame);
      return;
    }
    if (f.target >= 0) {
      push(now + delay, EventKind::rx, f.target, frame);
      return;
    }
    bool is_beacon = std::holds_alternative<obu::Beacon>(f.payload);
    if (is_beacon) ++m.beacons_sent;
    GridMobility::Pos p = mobility.position(node);
    std::int64_t r2 = cfg.coverage_radius_um * cfg.coverage_radius_um;
    for (int i = 0; i < cfg.vehicle_count; ++i) {
      if (i == node) continue;
      GridMobility::Pos q = mobility.position(i);
      if (torus_dist2(p.x_um, p.y_um, q.x_um, q.y_um, cfg.area_um) > r2)
        continue;
      if (is_beacon) ++m.pairs_total;
      push(now + delay, EventKind::rx, i, frame);
    }
  }

  void handle_rsu_rx(std::uint32_t frame, SimTime now) {
    const Frame& f = frames[frame];
    const auto& req = std::get<rsu::CertRequest>(f.payload);
    rsu::IssueResult result = unit->handle_cert_request(req, now);
    if (const auto* rej = std::get_if<rsu::Reject>(&result)) {
      ++m.issuance_rejects[static_cast<std::size_t>(rej->reason)];
      return;
    }
    const auto& sched = std::get<rsu::Scheduled>(result);
    ++m.certs_issued;
    std::uint32_t response = new_frame(sched.cert, rsu_node, f.origin);
    push(sched.release_at, EventKind::tx, rsu_node, response);
  }

  void handle_rx(int node, std::uint32_t frame, SimTime now) {
    if (node == rsu_node) {
      handle_rsu_rx(frame, now);
      return;
    }
    Frame& f = frames[frame];
    Vehicle& v = vehicles[node];
    if (std::holds_alternative<certs::TempCert>(f.payload)) {
      if (!enqueue_rx(JobKind::rx_cert, node, frame, now)) ++m.control_overflow;
      return;
    }
    if (const auto* b = std::get_if<obu::Beacon>(&f.payload)) {
      ++m.beacon_rx;
      if (cfg.protocol == Protocol::baseline) {
        if (!enqueue_rx(JobKind::rx_beacon, node, frame, now)) {
          ++m.overflow_dropped;
          record_outcome(frame, node);
        }
        return;
      }
      obu::ReceiveDecision d = v.obu->on_receive_beacon(*b, now);
      switch (d.action) {
        case obu::ReceiveAction::ignore:
          ++m.ignored;
          record_outcome(frame, node);
          break;
        case obu::ReceiveAction::verify:
          ++f.immediate_verifiers;
          if (!enqueue_rx(JobKind::rx_beacon, node, frame, now)) {
            ++m.overflow_dropped;
            record_outcome(frame, node);
          }
          break;
        case obu::ReceiveAction::wait:
          schedule_timer(node, d.deadline);
          break;
      }
      return;
    }
    if (std::holds_alternative<obu::NeighborListMsg>(f.payload)) {
      if (!enqueue_rx(JobKind::rx_list, node, frame, now)) ++m.control_overflow;
      return;
    }
    if (!enqueue_rx(JobKind::rx_disapproval, node, frame, now))
      ++m.control_overflow;
  }

  void activate(int node, SimTime now) {
    Vehicle& v = vehicles[node];
    SimTime first_beacon =
        now + 1 +
        static_cast<Duration>(bounded(
            v.rng, static_cast<std::uint64_t>(cfg.beacon_period)));
    if (cfg.protocol == Protocol::baseline) {
      v.base = std::make_unique<baseline::BaselineObu>(
          *v.obu->pseudo_keys(), *v.obu->temp_cert(), zone_pub);
      v.base_next_beacon = first_beacon;
      schedule_timer(node, first_beacon);
      return;
    }
    SimTime first_list =
        now + 1 +
        static_cast<Duration>(
            bounded(v.rng, static_cast<std::uint64_t>(cfg.obu.theta)));
    v.obu->schedule(first_beacon, first_list);
    schedule_timer(node, first_beacon);
    schedule_timer(node, first_list);
  }

  void handle_proc(std::uint32_t jobid, SimTime now) {
    const Job job = jobs[jobid];
    Vehicle& v = vehicles[job.node];
    if (job.kind == JobKind::tx_frame) {
      v.tx.complete();
      handle_tx(job.node, job.frame, now);
      return;
    }
    v.rx.complete();
    ++m.verify_services;
    Frame& f = frames[job.frame];
    switch (job.kind) {
      case JobKind::rx_cert: {
        const auto& cert = std::get<certs::TempCert>(f.payload);
        if (v.obu->accept_temp_cert(cert, now)) activate(job.node, now);
        break;
      }
      case JobKind::rx_beacon: {
        ++m.beacon_checks;
        const auto& b = std::get<obu::Beacon>(f.payload);
        if (cfg.protocol == Protocol::baseline) {
          if (obu::beacon_valid(b, zone_pub, now))
            deliver_beacon(job.frame, job.node, now, b.timestamp);
          else {
            ++m.invalid_dropped;
            record_outcome(job.frame, job.node);
          }
          break;
        }
        obu::VerifyOutcome out = v.obu->verify_now(b, now);
        if (out.valid) {
          deliver_beacon(job.frame, job.node, now, b.timestamp);
        } else {
          ++m.invalid_dropped;
          record_outcome(job.frame, job.node);
          if (out.disapproval) {
            std::uint32_t df =
                new_frame(*std::move(out.disapproval), job.node, -1);
            enqueue_tx(job.node, df, now);
          }
        }
        break;
      }
      case JobKind::rx_recheck: {
        ++m.beacon_checks;
        const auto& b = std::get<obu::Beacon>(f.payload);
        if (v.obu->recheck(b, now))
          deliver_beacon(job.frame, job.node, now, b.timestamp);
        else {
          ++m.disapproval_dropped;
          record_outcome(job.frame, job.node);
        }
        break;
      }
      case JobKind::rx_list: {
        const auto& msg = std::get<obu::NeighborListMsg>(f.payload);
        v.obu->apply_neighbor_list(msg, now);
        break;
      }
      case JobKind::rx_disapproval: {
        const auto& msg = std::get<obu::DisapprovalMsg>(f.payload);
        obu::DisapprovalActions actions =
            v.obu->on_receive_disapproval(msg, now);
        if (actions.forward) push(now, EventKind::tx, job.node, job.frame);
        if (actions.recheck) {
          auto it = beacon_frames.find(
              obu::message_id(*actions.recheck));
          if (it != beacon_frames.end() &&
              !enqueue_rx(JobKind::rx_recheck, job.node, it->second, now)) {
            ++m.overflow_dropped;
            record_outcome(it->second, job.node);
          }
        }
        break;
      }
      case JobKind::tx_frame:
        break;  // handled above
    }
  }

  void handle_timer(int node, SimTime now) {
    Vehicle& v = vehicles[node];
    if (v.timer_scheduled != now) return;  // superseded wakeup
    v.timer_scheduled = -1;
    if (cfg.protocol == Protocol::baseline) {
      if (v.base_next_beacon >= 0 && now >= v.base_next_beacon) {
        obu::Beacon b = v.base->make_beacon(mobility.kinematics(node), now);
        std::uint32_t frame = new_frame(std::move(b), node, -1);
        enqueue_tx(node, frame, now);
        v.base_next_beacon += cfg.beacon_period;
        schedule_timer(node, v.base_next_beacon);
      }
      return;
    }
    obu::TimerOutputs outs = v.obu->on_timer(mobility.kinematics(node), now);
    for (const obu::Beacon& b : outs.delivered) {
      std::uint32_t frame = 0;
      if (cfg.audit_pairs) frame = beacon_frames.at(obu::message_id(b));
      deliver_beacon(frame, node, now, b.timestamp);
    }
    if (outs.beacon) {
      std::uint32_t frame = new_frame(*std::move(outs.beacon), node, -1);
      enqueue_tx(node, frame, now);
    }
    if (outs.neighbor_list) {
      std::uint32_t frame =
          new_frame(*std::move(outs.neighbor_list), node, -1);
      enqueue_tx(node, frame, now);
    }
    SimTime next = v.obu->next_timer_due();
    if (next > now) schedule_timer(node, next);
  }

  void handle_rl(int vehicle_index) {
    auth.revoke(vehicles[vehicle_index].identity);
    unit->apply_rl_update(auth.revocation_list());
  }

  MetricsReport run(std::ostream* tr) {
    trace = tr;
    m.trace_hash = fnv_offset_basis;
    if (GridMobility::step_period <= cfg.duration)
      push(GridMobility::step_period, EventKind::mobility, -1, 0);
    for (const auto& [at, idx] : revocations)
      push(at, EventKind::rl, -1, static_cast<std::uint32_t>(idx));
    for (int i = 0; i < cfg.vehicle_count; ++i) {
      rsu::CertRequest req =
          vehicles[i].obu->build_cert_request("zone-0", 0, entropy.next());
      std::uint32_t frame = new_frame(std::move(req), i, -1);
      enqueue_tx(i, frame, 0);
    }

    while (!queue.empty() && queue.top().time <= cfg.duration) {
      Event e = queue.top();
      queue.pop();
      std::uint64_t h = m.trace_hash;
      h = fnv1a_u64(static_cast<std::uint64_t>(e.time), h);
      h = fnv1a_u64(e.seq, h);
      h = fnv1a_u64(static_cast<std::uint64_t>(e.kind), h);
      h = fnv1a_u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(e.node)), h);
      h = fnv1a_u64(e.ref, h);
      m.trace_hash = h;
      if (trace)
        *trace << "t=" << e.time << " seq=" << e.seq
               << " kind=" << event_name(e.kind) << " node=" << e.node
               << " ref=" << e.ref << "\n";
      switch (e.kind) {
        case EventKind::mobility:
          mobility.step();
          if (e.time + GridMobility::step_period <= cfg.duration)
            push(e.time + GridMobility::step_period, EventKind::mobility, -1, 0);
          break;
        case EventKind::timer:
          handle_timer(e.node, e.time);
          break;
        case EventKind::tx:
          handle_tx(e.node, e.ref, e.time);
          break;
        case EventKind::rx:
          handle_rx(e.node, e.ref, e.time);
          break;
        case EventKind::proc:
          handle_proc(e.ref, e.time);
          break;
        case EventKind::rl:
          handle_rl(static_cast<int>(e.ref));
          break;
      }
    }

    m.vehicle_count = cfg.vehicle_count;
    m.duration = cfg.duration;
    m.unresolved_at_end = m.pairs_total - m.delivered - m.overflow_dropped -
                          m.disapproval_dropped - m.invalid_dropped -
                          m.ignored;
    for (const Frame& f : frames)
      if (std::holds_alternative<obu::Beacon>(f.payload) && f.target < 0)
        ++m.verifier_histogram[static_cast<int>(f.immediate_verifiers)];
    return m;
  }
};

Runner::Runner(ScenarioConfig cfg) {
  validate(cfg);
  impl_ = std::make_unique<Impl>(std::move(cfg));
}

Runner::~Runner() = default;

void Runner::schedule_revocation(SimTime at, int vehicle_index) {
  impl_->revocations.emplace_back(at, vehicle_index);
}

MetricsReport Runner::run(std::ostream* trace) { return impl_->run(trace); }

const authority::Authority& Runner::issuing_authority() const {
  return impl_->auth;
}

const rsu::Rsu& Runner::roadside_unit() const { return *impl_->unit; }

MetricsReport run(const ScenarioConfig& cfg, std::ostream* trace) {
  Runner r(cfg);
  return r.run(trace);
}

std::vector<std::pair<int, MetricsReport>> sweep(std::span<const int> loads,
                                                 const ScenarioConfig& base) {
  std::vector<std::pair<int, MetricsReport>> out;
  out.reserve(loads.size());
  for (int load : loads) {
    ScenarioConfig cfg = base;
    cfg.vehicle_count = load;
    cfg.seed = derive_seed(base.seed, "sweep", static_cast<std::uint64_t>(load));
    out.emplace_back(load, run(cfg));
  }
  return out;
}

}  // namespace vanet::sim
