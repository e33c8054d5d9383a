#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "vanet/authority.hpp"
#include "vanet/baseline.hpp"
#include "vanet/obu.hpp"
#include "vanet/rsu.hpp"
#include "vanet/time.hpp"

namespace vanet::sim {

enum class Protocol { cooperative, baseline };

// All geometry is integer micrometres and all times integer nanoseconds,
// so simulation runs are bit-exact for a given seed.
struct ScenarioConfig {
  std::int64_t area_um = 3'000'000'000;            // 3000 m torus
  std::int64_t grid_spacing_um = 750'000'000;      // road grid pitch
  std::int64_t coverage_radius_um = 300'000'000;   // radio range
  int vehicle_count = 100;
  std::int64_t speed_min_umps = 8'333'333;         // 30 km/h
  std::int64_t speed_max_umps = 20'833'333;        // 75 km/h
  std::int64_t bandwidth_bps = 6'000'000;
  Duration beacon_period = milliseconds(300);
  Duration duration = seconds(100);
  Duration verify_cost = 6'976'744;                // 43 checks per 300 ms
  Duration sign_cost = 6'976'744;
  int rx_buffer_capacity = 100;                    // jobs in the verify queue
  Protocol protocol = Protocol::cooperative;
  obu::ObuParams obu;                              // beacon_period kept in sync
  Duration cert_lifetime = seconds(600);
  Duration release_delay_max = seconds(1);
  crypto::Scheme scheme = crypto::Scheme::prf;
  std::uint64_t seed = 1;
  bool audit_pairs = false;  // per-pair exactly-once bookkeeping (tests)
};

// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& cfg);

struct MetricsReport {
  int vehicle_count = 0;
  Duration duration = 0;

  std::uint64_t beacons_sent = 0;       // broadcasts
  std::uint64_t pairs_total = 0;        // (beacon, receiver-in-range) pairs
  std::uint64_t delivered = 0;
  std::uint64_t overflow_dropped = 0;   // verify queue full on arrival
  std::uint64_t disapproval_dropped = 0;
  std::uint64_t invalid_dropped = 0;    // failed the local check
  std::uint64_t ignored = 0;            // duplicate receptions
  std::uint64_t unresolved_at_end = 0;  // in flight when the run ended

  std::uint64_t beacon_rx = 0;          // beacon receptions
  std::uint64_t beacon_checks = 0;      // completed beacon verifications
  std::uint64_t verify_services = 0;    // all completed verification services
  std::uint64_t control_overflow = 0;   // list/disapproval arrivals shed

  std::int64_t total_delay_ns = 0;      // summed over delivered pairs
  std::map<int, std::uint64_t> verifier_histogram;  // immediate verifiers per beacon

  std::array<std::uint64_t, 5> issuance_rejects{};  // by RejectReason
  std::uint64_t certs_issued = 0;

  std::uint64_t trace_hash = 0;

  double mean_delay_ms() const;
  double loss_ratio() const;       // dropped / (dropped + delivered)
  double approval_ratio() const;   // beacon_checks / beacon_rx
  double verified_per_300ms() const;
  double offered_per_300ms() const;  // beacon arrivals per vehicle per 300 ms
};

// Per-node service queue: one server, FIFO, optional admission cap on jobs
// in the system. Pure bookkeeping; callers schedule the completion events.
struct ProcServer {
  SimTime next_free = 0;
  int outstanding = 0;

  // Completion time of the new job, or nullopt when capacity is exhausted
  // (capacity < 0 means unbounded).
  std::optional<SimTime> try_enqueue(SimTime now, Duration cost, int capacity);
  void complete();
};

// Serialization delay of a frame on the shared channel.
Duration frame_tx_delay(std::size_t frame_bytes, std::int64_t bandwidth_bps);

// Squared torus distance, safe for coordinates up to ~2e9 um.
std::int64_t torus_dist2(std::int64_t ax, std::int64_t ay, std::int64_t bx,
                         std::int64_t by, std::int64_t area_um);

// Vehicles on a torus road grid: each drives along a line of the grid and
// turns uniformly among the three non-reversing continuations at each
// intersection. Advances in fixed 100 ms steps.
class GridMobility {
 public:
  static constexpr Duration step_period = milliseconds(100);

  GridMobility(std::int64_t area_um, std::int64_t spacing_um,
               std::int64_t speed_min_umps, std::int64_t speed_max_umps,
               int count, std::uint64_t seed);

  void step();

  struct Pos {
    std::int64_t x_um = 0;
    std::int64_t y_um = 0;
  };
  Pos position(int i) const;
  obu::Kinematics kinematics(int i) const;
  int count() const { return static_cast<int>(vehicles_.size()); }

 private:
  struct Motion {
    std::int8_t axis = 0;  // 0: moving along x, 1: along y
    std::int8_t dir = 1;   // +1 or -1
    std::int64_t line_um = 0;    // fixed coordinate
    std::int64_t offset_um = 0;  // varying coordinate, in [0, area)
    std::int64_t speed_umps = 0;
    std::int64_t step_um = 0;    // distance per step
  };
  std::int64_t area_;
  std::int64_t spacing_;
  std::vector<Motion> vehicles_;
  std::mt19937_64 rng_;
};

// Discrete-event execution of one scenario. Events are ordered by
// (time, insertion sequence); ties resolve in insertion order.
class Runner {
 public:
  explicit Runner(ScenarioConfig cfg);
  ~Runner();
  Runner(Runner&&) = delete;

  // Revokes the vehicle's long-term credential at the given instant and
  // pushes the updated revocation list to the roadside unit.
  void schedule_revocation(SimTime at, int vehicle_index);

  MetricsReport run(std::ostream* trace = nullptr);

  const authority::Authority& issuing_authority() const;
  const rsu::Rsu& roadside_unit() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MetricsReport run(const ScenarioConfig& cfg, std::ostream* trace = nullptr);

// Runs the scenario once per load (vehicle count), deriving a per-load seed
// from the base seed. Rows come back in the order given.
std::vector<std::pair<int, MetricsReport>> sweep(std::span<const int> loads,
                                                 const ScenarioConfig& base);

}  // namespace vanet::sim
