#include "vanet/baseline.hpp"

namespace vanet::baseline {

obu::Beacon BaselineObu::make_beacon(const obu::Kinematics& kin, SimTime now) {
  if (now >= cert_.expiration)
    throw StateError("temporary certificate expired");
  return obu::build_beacon(pseudo_keys_, cert_, kin, now);
}

bool BaselineObu::verify_beacon(const obu::Beacon& beacon, SimTime now) const {
  return obu::beacon_valid(beacon, zone_public_, now);
}

}  // namespace vanet::baseline
