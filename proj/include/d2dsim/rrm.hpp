#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2dsim/feasibility.hpp"
#include "d2dsim/random.hpp"

namespace d2dsim {

enum class Scheme { Proposed, CapacityMax, Random, None };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);
inline constexpr Scheme kAllSchemes[] = {Scheme::None, Scheme::Proposed, Scheme::CapacityMax, Scheme::Random};

/// Resource reuse decision for one sector: D2D pair m reuses the resource of
/// cellular UE pair_to_resource[m], or nothing when -1.
struct Allocation {
  Scheme scheme = Scheme::None;
  std::vector<int> pair_to_resource;
  std::size_t overflow = 0;  // pairs left unserved because N > M

  std::size_t assigned() const;
  bool injective() const;
};

/// Serves as many D2D pairs as the feasibility matrix admits (maximum
/// bipartite matching, lexicographically smallest among the maxima).
Allocation allocate_proposed(const FeasibilityMatrix& f);

/// Per-entry gain in summed cellular spectral efficiency when pair m reuses
/// resource n: log2(1 + SINR_cell(m,n)) - log2(1 + SINR_n).
Matrix<double> cellular_capacity_weights(const ChannelGainSet& gains, const LinkPowers& powers, double sigma2_bs);

/// Every pair reuses a distinct resource (up to M of them), choosing the
/// assignment that maximises total cellular capacity. Feasibility is not
/// consulted.
Allocation allocate_capacity_max(const ChannelGainSet& gains, const LinkPowers& powers, double sigma2_bs);

/// Uniformly random injective assignment of min(N, M) pairs.
Allocation allocate_random(std::size_t pairs, std::size_t resources, Rng& rng);

Allocation allocate_none(std::size_t pairs);

void write_allocation_csv_header(std::ostream& out);
void write_allocation_csv(std::ostream& out, int drop, int sector, const Allocation& a);

}  // namespace d2dsim
