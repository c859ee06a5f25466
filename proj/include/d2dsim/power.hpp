#pragma once

#include <cstddef>
#include <vector>

#include "d2dsim/config.hpp"
#include "d2dsim/random.hpp"

namespace d2dsim {

struct PowerAssignment {
  double tx_power_w = 0.0;
  double snr_target_db = 0.0;
  bool clipped = false;
};

/// Open-loop power control: the transmitter inverts the link gain to hit
/// the SNR target at the receiver, ignoring interference, and saturates at
/// the hardware maximum. Throws ModelError("unreachable target") for gain 0.
PowerAssignment open_loop_power(double target_snr_db, double gain_linear, double sigma2_watts, double p_max_dbm);

/// i.i.d. uniform targets on [lower, upper].
std::vector<double> draw_snr_targets(const Interval& interval_db, std::size_t count, Rng& rng);

}  // namespace d2dsim
