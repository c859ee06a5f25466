#include "d2dsim/rrm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "d2dsim/assignment.hpp"
#include "d2dsim/matching.hpp"

namespace d2dsim {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Proposed:
      return "proposed";
    case Scheme::CapacityMax:
      return "capacity-max";
    case Scheme::Random:
      return "random";
    case Scheme::None:
      break;
  }
  return "none";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

std::size_t Allocation::assigned() const {
  return static_cast<std::size_t>(std::count_if(pair_to_resource.begin(), pair_to_resource.end(), [](int n) { return n >= 0; }));
}

bool Allocation::injective() const {
  std::vector<int> used;
  for (int n : pair_to_resource) {
    if (n < 0) continue;
    if (std::find(used.begin(), used.end(), n) != used.end()) return false;
    used.push_back(n);
  }
  return true;
}

Allocation allocate_proposed(const FeasibilityMatrix& f) {
  MatchingResult mr = lexicographic_max_matching(f.entries);
  return {Scheme::Proposed, std::move(mr.row_to_col), 0};
}

Matrix<double> cellular_capacity_weights(const ChannelGainSet& gains, const LinkPowers& powers, double sigma2_bs) {
  const std::size_t N = gains.pair_count();
  const std::size_t M = gains.cellular_count();
  Matrix<double> w(N, M);
  for (std::size_t n = 0; n < M; ++n) {
    const double base = std::log2(1.0 + baseline_sinr(n, gains, powers, sigma2_bs));
    for (std::size_t m = 0; m < N; ++m) w(m, n) = std::log2(1.0 + sinr_cell(m, n, gains, powers, sigma2_bs)) - base;
  }
  return w;
}

Allocation allocate_capacity_max(const ChannelGainSet& gains, const LinkPowers& powers, double sigma2_bs) {
  const std::size_t N = gains.pair_count();
  const std::size_t M = gains.cellular_count();
  AssignmentResult ar = solve_max_assignment(cellular_capacity_weights(gains, powers, sigma2_bs));
  return {Scheme::CapacityMax, std::move(ar.row_to_col), N > M ? N - M : 0};
}

Allocation allocate_random(std::size_t pairs, std::size_t resources, Rng& rng) {
  std::vector<int> pair_order(pairs);
  std::vector<int> resource_order(resources);
  std::iota(pair_order.begin(), pair_order.end(), 0);
  std::iota(resource_order.begin(), resource_order.end(), 0);
  std::shuffle(pair_order.begin(), pair_order.end(), rng);
  std::shuffle(resource_order.begin(), resource_order.end(), rng);

  Allocation a{Scheme::Random, std::vector<int>(pairs, -1), pairs > resources ? pairs - resources : 0};
  const std::size_t k = std::min(pairs, resources);
  for (std::size_t i = 0; i < k; ++i) a.pair_to_resource[static_cast<std::size_t>(pair_order[i])] = resource_order[i];
  return a;
}

Allocation allocate_none(std::size_t pairs) { return {Scheme::None, std::vector<int>(pairs, -1), 0}; }

void write_allocation_csv_header(std::ostream& out) { out << "drop,sector,scheme,m,n\n"; }

void write_allocation_csv(std::ostream& out, int drop, int sector, const Allocation& a) {
  for (std::size_t m = 0; m < a.pair_to_resource.size(); ++m) {
    if (a.pair_to_resource[m] < 0) continue;
    out << drop << ',' << sector << ',' << scheme_name(a.scheme) << ',' << m << ',' << a.pair_to_resource[m] << '\n';
  }
}

}  // namespace d2dsim
