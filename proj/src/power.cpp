#include "d2dsim/power.hpp"

#include "d2dsim/channel.hpp"
#include "d2dsim/units.hpp"

namespace d2dsim {

PowerAssignment open_loop_power(double target_snr_db, double gain_linear, double sigma2_watts, double p_max_dbm) {
  if (!(gain_linear > 0.0)) throw ModelError("unreachable target");
  const double wanted = sigma2_watts * db_to_linear(target_snr_db) / gain_linear;
  const double p_max = dbm_to_watts(p_max_dbm);
  PowerAssignment out;
  out.snr_target_db = target_snr_db;
  out.clipped = wanted > p_max;
  out.tx_power_w = out.clipped ? p_max : wanted;
  return out;
}

std::vector<double> draw_snr_targets(const Interval& interval_db, std::size_t count, Rng& rng) {
  std::vector<double> out;
  out.reserve(count);
  const double span = interval_db.upper - interval_db.lower;
  for (std::size_t i = 0; i < count; ++i) out.push_back(interval_db.lower + span * uniform_unit(rng));
  return out;
}

}  // namespace d2dsim
