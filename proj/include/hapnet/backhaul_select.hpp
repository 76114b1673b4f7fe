#pragma once

#include "hapnet/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hapnet {

struct SelectionResult {
  BackhaulAssignment assign;
  double cap_total = 0; // C_TH + C_TS of assign, bit/s
  std::vector<std::pair<std::size_t, double>> per_ms_trace;
};

/// Capacity gained by moving UT m from the satellite to the HAP when the
/// satellite serves m_s UTs. Signed.
inline double delta_c(const Network& net, std::size_t m, std::size_t m_s, double p_h_ka)
{
  if (m_s == 0)
    throw std::invalid_argument("delta_c: m_s must be at least 1");
  const auto& c = net.config;
  const double hap_snr = p_h_ka * c.g_h_lin * net.topo.g2_ut_hap(m) / c.noise_ka();
  const double sat_snr =
      c.p_sat * c.g_s_lin * net.topo.g2_ut_sat(m) / (c.noise_sat() * static_cast<double>(m_s));
  return c.b_ka / c.m_uts * (std::log2(1.0 + hap_snr) - std::log2(1.0 + sat_snr));
}

inline double backhaul_capacity(const Network& net, const BackhaulAssignment& a, double p_h_ka)
{
  return cap_hap_backhaul(net, a, p_h_ka) + cap_leo_backhaul(net, a);
}

namespace detail {

inline BackhaulAssignment top_to_hap(const std::vector<std::size_t>& ranked, std::size_t k)
{
  BackhaulAssignment a;
  a.to_hap.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
  a.to_sat.assign(ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
  std::sort(a.to_hap.begin(), a.to_hap.end());
  std::sort(a.to_sat.begin(), a.to_sat.end());
  return a;
}

} // namespace detail

/// Ranked backhaul selection.
///
/// For each satellite count m_s, UTs are ordered by delta_c at that m_s and
/// the best M - m_s go to the HAP. The reading where the top m_s go to the
/// HAP is scored as well; the best candidate overall wins, earlier candidates
/// keep ties. m_s = 0 (everyone on the HAP) needs no ranking.
inline SelectionResult select(const Network& net, double p_h_ka)
{
  if (p_h_ka < 0.0)
    throw std::invalid_argument("select: negative p_h_ka");
  const std::size_t M = net.num_uts();

  SelectionResult best;
  bool have = false;
  const auto consider = [&](BackhaulAssignment cand, std::size_t m_s_label) {
    const double cap = backhaul_capacity(net, cand, p_h_ka);
    best.per_ms_trace.emplace_back(m_s_label, cap);
    if (!have || cap > best.cap_total) {
      best.assign = std::move(cand);
      best.cap_total = cap;
      have = true;
    }
  };

  consider(BackhaulAssignment::all_hap(M), 0);

  std::vector<std::size_t> order(M);
  std::vector<double> dc(M);
  for (std::size_t m_s = 1; m_s <= M; ++m_s) {
    for (std::size_t m = 0; m < M; ++m)
      dc[m] = delta_c(net, m, m_s, p_h_ka);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dc[a] > dc[b]; });
    consider(detail::top_to_hap(order, M - m_s), m_s);
    if (m_s != M - m_s)
      consider(detail::top_to_hap(order, m_s), m_s);
  }
  return best;
}

/// Exhaustive search over all 2^M assignments; the reference for select().
/// Ties resolve to the lexicographically smallest sorted HAP index list.
inline SelectionResult brute_force(const Network& net, double p_h_ka)
{
  const std::size_t M = net.num_uts();
  if (M > 20)
    throw std::invalid_argument("brute_force: at most 20 UTs");
  SelectionResult best;
  bool have = false;
  for (unsigned long long mask = 0; mask < (1ULL << M); ++mask) {
    auto cand = BackhaulAssignment::from_mask(M, mask);
    const double cap = backhaul_capacity(net, cand, p_h_ka);
    if (!have || cap > best.cap_total ||
        (cap == best.cap_total && cand.to_hap < best.assign.to_hap)) {
      best.assign = std::move(cand);
      best.cap_total = cap;
      have = true;
    }
  }
  return best;
}

} // namespace hapnet
