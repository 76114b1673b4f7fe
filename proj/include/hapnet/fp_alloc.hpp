#pragma once

#include "hapnet/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

namespace hapnet {

/// Scale of the quadratic-transform surrogate.
///
/// `printed` uses log2 in the X terms and unit weight on the fraction terms.
/// `log2_consistent` weights the gamma and fraction terms by 1/ln 2 so the
/// surrogate is a true lower bound on the log2 rate and the closed-form
/// gamma update is its exact maximizer. Both are tight at the auxiliary
/// optimum and share the same fixed points.
enum class SurrogateScale { printed, log2_consistent };

inline double surrogate_kappa(SurrogateScale s)
{
  return s == SurrogateScale::printed ? 1.0 : 1.0 / std::numbers::ln2;
}

struct FpOptions {
  int max_iterations = 200;
  double rel_tol = 1e-6;
  SurrogateScale scale = SurrogateScale::printed;
  /// False for the two-layer baseline: no HAP C-band bandwidth or power.
  bool hap_c_band = true;
};

struct AuxState {
  std::vector<double> gamma1, gamma2; // per flat user
  std::vector<double> y1, y2;
};

struct Multipliers {
  double lambda_b = 0;
  std::vector<double> lambda_t;
  double lambda_h = 0;
};

/// Root-equation residuals of the three multiplier searches, relative to budget.
struct MultiplierResiduals {
  double bandwidth = 0;
  double ut_power = 0;
  double hap_power = 0;

  double max() const { return std::max({bandwidth, ut_power, hap_power}); }
};

struct FpTraceEntry {
  int iteration = 0;
  /// Surrogate after the allocation update, in bit/s/Hz of the C-band pool.
  double surrogate = 0;
  /// True access sum rate R_H + R_T after the update, in bit/s.
  double sum_rate = 0;
  /// Largest relative budget violation after the update.
  double max_residual = 0;
  /// |sum Q - sum R| / sum R right after the auxiliary update.
  double tightness_gap = 0;
};

enum class FpStatus {
  converged,
  iteration_limit,
};

struct FpResult {
  Allocation alloc;
  RateBreakdown rates;
  std::vector<FpTraceEntry> trace;
  Multipliers multipliers;
  MultiplierResiduals root_residuals;
  FpStatus status = FpStatus::iteration_limit;
  /// The HAP had no power left for C-band after the Ka-band backhauls.
  bool hap_c_band_starved = false;
  double delivered_rate = 0;

  int iterations() const { return static_cast<int>(trace.size()); }
};

/// min(R_H, C_H) + min(R_T, Ka-band capacity).
inline double delivered_rate(const RateBreakdown& r, double c_h, double cap_ka)
{
  return std::min(r.r_h_sum, c_h) + std::min(r.r_t_sum, cap_ka);
}

/// Whether P_H - p_h_ka * m_h leaves any power for C-band service.
inline bool hap_has_c_band_power(const SystemConfig& c, double p_h_ka, std::size_t m_h)
{
  return c.p_h - p_h_ka * static_cast<double>(m_h) > 1e-12 * c.p_h;
}

// ---------------------------------------------------------------------------
// Inverse-square budget root

/// Solution of sum_i (num_i / (lambda - off_i))^2 = budget over entries with num_i > 0.
struct BudgetRoot {
  bool degenerate = true; // no entry with positive numerator
  double lambda = 0;
  std::vector<double> shares; // (num_i / (lambda - off_i))^2, zero for inactive entries
  double residual = 0;        // |sum shares - budget| / budget
};

/// Bisection on t = lambda - max(active offsets), where the left side is
/// strictly decreasing from +inf to 0.
inline BudgetRoot solve_budget_root(std::span<const double> num, std::span<const double> off,
                                    double budget)
{
  BudgetRoot r;
  r.shares.assign(num.size(), 0.0);
  double max_off = -std::numeric_limits<double>::infinity();
  double num_sum = 0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (num[i] > 0.0) {
      max_off = std::max(max_off, off[i]);
      num_sum += num[i];
      r.degenerate = false;
    }
  }
  if (r.degenerate || !(budget > 0.0))
    return r;

  // gap_i = max_off - off_i >= 0 avoids cancellation when offsets are large.
  const auto total = [&](double t) {
    double acc = 0;
    for (std::size_t i = 0; i < num.size(); ++i)
      if (num[i] > 0.0) {
        const double q = num[i] / (t + (max_off - off[i]));
        acc += q * q;
      }
    return acc;
  };

  // sum (num_i / t)^2 <= (sum num_i)^2 / t^2, so this t is already feasible.
  double hi = num_sum / std::sqrt(budget);
  while (total(hi) > budget)
    hi *= 2.0;
  double lo = 0.0;
  double t = hi;
  for (int k = 0; k < 200; ++k) {
    t = 0.5 * (lo + hi);
    if (t <= lo || t >= hi)
      break;
    const double f = total(t);
    if (std::abs(f - budget) <= 1e-14 * budget)
      break;
    (f > budget ? lo : hi) = t;
  }
  r.lambda = max_off + t;
  double sum = 0;
  for (std::size_t i = 0; i < num.size(); ++i)
    if (num[i] > 0.0) {
      const double q = num[i] / (t + (max_off - off[i]));
      r.shares[i] = q * q;
      sum += r.shares[i];
    }
  r.residual = std::abs(sum - budget) / budget;
  return r;
}

// ---------------------------------------------------------------------------
// Auxiliary updates

/// Closed-form gamma: the current SINR on each access link.
inline std::pair<std::vector<double>, std::vector<double>> update_gamma(const Network& net,
                                                                        const Allocation& a)
{
  auto s = sinr_field(net, a);
  return {std::move(s.hap), std::move(s.ut)};
}

/// Closed-form y maximizing each surrogate term for the given gamma.
inline std::pair<std::vector<double>, std::vector<double>>
update_y(const Network& net, const Allocation& a, const std::vector<double>& gamma1,
         const std::vector<double>& gamma2, SurrogateScale scale = SurrogateScale::printed)
{
  const double kappa = surrogate_kappa(scale);
  const auto intf = interference_field(net, a);
  const double noise = net.config.noise_c();
  const double total = net.config.total_users();
  std::vector<double> y1(net.num_users(), 0.0), y2(net.num_users(), 0.0);
  for (std::size_t u = 0; u < net.num_users(); ++u) {
    const auto m = net.topo.ut_of(u);
    const double s_h = a.p_h_users[u] * net.topo.g2_user_hap(u);
    const double s_t = a.p_t_users[u] * net.topo.g2_user_own(u);
    const double w_h = a.b_h / total;
    const double w_t = a.b_t[m] / static_cast<double>(net.topo.users_of(m));
    if (s_h > 0.0 && w_h > 0.0)
      y1[u] = std::sqrt(kappa * w_h * s_h * (1.0 + gamma1[u])) / (s_h + noise + intf.i_h[u]);
    if (s_t > 0.0 && w_t > 0.0)
      y2[u] = std::sqrt(kappa * w_t * s_t * (1.0 + gamma2[u])) / (s_t + noise + intf.i_t[u]);
  }
  return {std::move(y1), std::move(y2)};
}

inline AuxState update_aux(const Network& net, const Allocation& a,
                           SurrogateScale scale = SurrogateScale::printed)
{
  AuxState aux;
  std::tie(aux.gamma1, aux.gamma2) = update_gamma(net, a);
  std::tie(aux.y1, aux.y2) = update_y(net, a, aux.gamma1, aux.gamma2, scale);
  return aux;
}

/// Per-user surrogate terms Q^H and Q^T.
inline std::pair<std::vector<double>, std::vector<double>>
q_values(const Network& net, const Allocation& a, const AuxState& aux,
         SurrogateScale scale = SurrogateScale::printed)
{
  const double kappa = surrogate_kappa(scale);
  const auto intf = interference_field(net, a);
  const double noise = net.config.noise_c();
  const double total = net.config.total_users();
  std::vector<double> qh(net.num_users()), qt(net.num_users());
  for (std::size_t u = 0; u < net.num_users(); ++u) {
    const auto m = net.topo.ut_of(u);
    const double s_h = a.p_h_users[u] * net.topo.g2_user_hap(u);
    const double s_t = a.p_t_users[u] * net.topo.g2_user_own(u);
    const double w_h = a.b_h / total;
    const double w_t = a.b_t[m] / static_cast<double>(net.topo.users_of(m));
    const double g1 = aux.gamma1[u], g2 = aux.gamma2[u];
    qh[u] = w_h * (std::log2(1.0 + g1) - kappa * g1) +
            2.0 * aux.y1[u] * std::sqrt(kappa * w_h * s_h * (1.0 + g1)) -
            aux.y1[u] * aux.y1[u] * (s_h + noise + intf.i_h[u]);
    qt[u] = w_t * (std::log2(1.0 + g2) - kappa * g2) +
            2.0 * aux.y2[u] * std::sqrt(kappa * w_t * s_t * (1.0 + g2)) -
            aux.y2[u] * aux.y2[u] * (s_t + noise + intf.i_t[u]);
  }
  return {std::move(qh), std::move(qt)};
}

inline double surrogate_objective(const Network& net, const Allocation& a, const AuxState& aux,
                                  SurrogateScale scale = SurrogateScale::printed)
{
  auto [qh, qt] = q_values(net, a, aux, scale);
  return std::accumulate(qh.begin(), qh.end(), 0.0) + std::accumulate(qt.begin(), qt.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Original-variable updates

struct BandwidthUpdate {
  double lambda_b = 0;
  double b_h = 0;
  std::vector<double> b_t;
  double residual = 0;
  bool degenerate = false;
};

/// Bandwidth block: B = (Y / (lambda_B - X))^2 per consumer, with lambda_B
/// fixed by the C-band budget. Consumers are the HAP (when enabled) and each UT.
inline BandwidthUpdate solve_lambda_b(const Network& net, const Allocation& a,
                                      const AuxState& aux, const FpOptions& opt = {})
{
  const double kappa = surrogate_kappa(opt.scale);
  const std::size_t M = net.num_uts();
  const double total = net.config.total_users();
  // consumer 0 is the HAP, consumer 1 + m is UT m
  std::vector<double> x(M + 1, 0.0), y(M + 1, 0.0);
  for (std::size_t u = 0; u < net.num_users(); ++u) {
    const auto m = net.topo.ut_of(u);
    const double nm = static_cast<double>(net.topo.users_of(m));
    const double g1 = aux.gamma1[u], g2 = aux.gamma2[u];
    if (opt.hap_c_band) {
      x[0] += (std::log2(1.0 + g1) - kappa * g1) / total;
      const double s_h = a.p_h_users[u] * net.topo.g2_user_hap(u);
      y[0] += aux.y1[u] * std::sqrt(kappa * s_h * (1.0 + g1) / total);
    }
    x[1 + m] += (std::log2(1.0 + g2) - kappa * g2) / nm;
    const double s_t = a.p_t_users[u] * net.topo.g2_user_own(u);
    y[1 + m] += aux.y2[u] * std::sqrt(kappa * s_t * (1.0 + g2) / nm);
  }

  BandwidthUpdate out;
  const auto root = solve_budget_root(y, x, net.config.b_c);
  if (root.degenerate) {
    const double consumers = static_cast<double>(M + (opt.hap_c_band ? 1 : 0));
    const double share = net.config.b_c / consumers;
    out.b_h = opt.hap_c_band ? share : 0.0;
    out.b_t.assign(M, share);
    out.degenerate = true;
    return out;
  }
  out.lambda_b = root.lambda;
  out.b_h = root.shares[0];
  out.b_t.assign(root.shares.begin() + 1, root.shares.end());
  out.residual = root.residual;
  return out;
}

struct PowerUpdate {
  double lambda = 0;
  std::vector<double> powers; // one row (UT update) or all users (HAP update)
  double residual = 0;
  bool degenerate = false;
};

/// UT m's power row: P^T = (G^T / (lambda_T - F^T))^2 with sum P^T = P_T.
/// F^T collects every linear appearance of P^T_{m,n} in the surrogate: its
/// own link and the interference it causes on every other link.
inline PowerUpdate solve_lambda_t(const Network& net, const Allocation& a, const AuxState& aux,
                                  std::size_t m, const FpOptions& opt = {})
{
  const double kappa = surrogate_kappa(opt.scale);
  const auto& topo = net.topo;
  const double inv_j = net.inv_j();
  const std::size_t n_m = topo.users_of(m);
  const double w_t = a.b_t[m] / static_cast<double>(n_m);

  // y1^2 over all users and y2^2 over other UTs' users, weighted by their gain from UT m
  double hap_links = 0, foreign_ut_links = 0;
  for (std::size_t v = 0; v < net.num_users(); ++v) {
    const double g = topo.g2_user_ut(v, m);
    hap_links += aux.y1[v] * aux.y1[v] * g;
    if (topo.ut_of(v) != m)
      foreign_ut_links += aux.y2[v] * aux.y2[v] * g;
  }

  std::vector<double> g_coef(n_m), f_coef(n_m);
  for (std::size_t n = 0; n < n_m; ++n) {
    const auto u = topo.index(m, n);
    const double h = topo.g2_user_own(u);
    g_coef[n] = aux.y2[u] * std::sqrt(kappa * w_t * h * (1.0 + aux.gamma2[u]));
    f_coef[n] = -aux.y2[u] * aux.y2[u] * h -
                inv_j * (hap_links - aux.y1[u] * aux.y1[u] * h) - inv_j * foreign_ut_links;
  }

  PowerUpdate out;
  const auto root = solve_budget_root(g_coef, f_coef, net.config.p_t);
  if (root.degenerate) {
    out.powers.assign(n_m, net.config.p_t / static_cast<double>(n_m));
    out.degenerate = true;
    return out;
  }
  out.lambda = root.lambda;
  out.powers = root.shares;
  out.residual = root.residual;
  return out;
}

/// HAP C-band powers over all users with sum P^H = P_H - p_h_ka * m_h.
/// Budget <= 0 yields all zeros (degenerate).
inline PowerUpdate solve_lambda_h(const Network& net, const Allocation& a, const AuxState& aux,
                                  double p_h_ka, std::size_t m_h, const FpOptions& opt = {})
{
  const double kappa = surrogate_kappa(opt.scale);
  const auto& topo = net.topo;
  const std::size_t U = net.num_users();
  const double budget = net.config.p_h - p_h_ka * static_cast<double>(m_h);

  PowerUpdate out;
  if (!hap_has_c_band_power(net.config, p_h_ka, m_h)) {
    out.powers.assign(U, 0.0);
    out.degenerate = true;
    return out;
  }

  double ut_links = 0;
  for (std::size_t v = 0; v < U; ++v)
    ut_links += aux.y2[v] * aux.y2[v] * topo.g2_user_hap(v);
  const double w_h = a.b_h / net.config.total_users();

  std::vector<double> g_coef(U), f_coef(U);
  for (std::size_t u = 0; u < U; ++u) {
    const double h = topo.g2_user_hap(u);
    g_coef[u] = aux.y1[u] * std::sqrt(kappa * w_h * h * (1.0 + aux.gamma1[u]));
    f_coef[u] = -aux.y1[u] * aux.y1[u] * h - net.inv_j() * ut_links;
  }

  const auto root = solve_budget_root(g_coef, f_coef, budget);
  if (root.degenerate) {
    out.powers.assign(U, budget / static_cast<double>(U));
    out.degenerate = true;
    return out;
  }
  out.lambda = root.lambda;
  out.powers = root.shares;
  out.residual = root.residual;
  return out;
}

// ---------------------------------------------------------------------------
// Iteration

/// Symmetric start: half the C-band to the HAP, the rest split over UTs,
/// uniform power splits. A HAP without C-band power starts with no bandwidth.
inline Allocation initial_allocation(const Network& net, double p_h_ka, std::size_t m_h,
                                     const FpOptions& opt = {})
{
  const auto& c = net.config;
  const std::size_t M = net.num_uts();
  const bool hap_serves = opt.hap_c_band && hap_has_c_band_power(c, p_h_ka, m_h);
  Allocation a = Allocation::zeros(net);
  a.p_h_ka = opt.hap_c_band ? p_h_ka : 0.0;
  a.b_h = hap_serves ? c.b_c / 2.0 : 0.0;
  a.b_t.assign(M, (c.b_c - a.b_h) / static_cast<double>(M));
  for (std::size_t u = 0; u < net.num_users(); ++u)
    a.p_t_users[u] = c.p_t / static_cast<double>(net.topo.users_of(net.topo.ut_of(u)));
  if (hap_serves) {
    const double hap_budget = c.p_h - a.p_h_ka * static_cast<double>(m_h);
    a.p_h_users.assign(net.num_users(), hap_budget / static_cast<double>(net.num_users()));
  }
  return a;
}

/// Alternating quadratic-transform ascent: gamma, y, bandwidth, UT powers,
/// HAP powers, until the access sum rate settles.
inline FpResult run(const Network& net, const BackhaulAssignment& assign, double p_h_ka,
                    double cap_ka, const FpOptions& opt = {})
{
  const std::size_t M = net.num_uts();
  const std::size_t m_h = opt.hap_c_band ? assign.m_h() : 0;
  const double b_c = net.config.b_c;

  FpResult res;
  Allocation a = initial_allocation(net, p_h_ka, m_h, opt);
  res.multipliers.lambda_t.assign(M, 0.0);
  res.hap_c_band_starved = opt.hap_c_band && !hap_has_c_band_power(net.config, p_h_ka, m_h);

  double prev_rate = evaluate(net, a, assign).access_sum();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    FpTraceEntry e;
    e.iteration = it;

    const AuxState aux = update_aux(net, a, opt.scale);
    {
      const double q = surrogate_objective(net, a, aux, opt.scale);
      e.tightness_gap = prev_rate > 0.0 ? std::abs(q - prev_rate) / prev_rate : std::abs(q);
    }

    MultiplierResiduals roots;
    const auto bw = solve_lambda_b(net, a, aux, opt);
    a.b_h = bw.b_h;
    a.b_t = bw.b_t;
    res.multipliers.lambda_b = bw.lambda_b;
    roots.bandwidth = bw.residual;

    for (std::size_t m = 0; m < M; ++m) {
      const auto row = solve_lambda_t(net, a, aux, m, opt);
      std::copy(row.powers.begin(), row.powers.end(),
                a.p_t_users.begin() + static_cast<std::ptrdiff_t>(net.topo.offset(m)));
      res.multipliers.lambda_t[m] = row.lambda;
      roots.ut_power = std::max(roots.ut_power, row.residual);
    }

    if (opt.hap_c_band) {
      const auto hap = solve_lambda_h(net, a, aux, a.p_h_ka, m_h, opt);
      a.p_h_users = hap.powers;
      res.multipliers.lambda_h = hap.lambda;
      roots.hap_power = hap.residual;
    }
    res.root_residuals = roots;

    const auto rates = evaluate(net, a, assign);
    e.surrogate = surrogate_objective(net, a, aux, opt.scale) / b_c;
    e.sum_rate = rates.access_sum();
    e.max_residual = budget_residuals(net, a, m_h, !res.hap_c_band_starved && opt.hap_c_band).max();
    res.trace.push_back(e);

    const bool settled = std::abs(e.sum_rate - prev_rate) <= opt.rel_tol * std::abs(e.sum_rate);
    prev_rate = e.sum_rate;
    if (settled) {
      res.status = FpStatus::converged;
      break;
    }
  }

  res.rates = evaluate(net, a, assign);
  res.alloc = std::move(a);
  res.delivered_rate = opt.hap_c_band
                           ? delivered_rate(res.rates, net.config.c_h, cap_ka)
                           : std::min(res.rates.r_t_sum, cap_ka);
  return res;
}

} // namespace hapnet
