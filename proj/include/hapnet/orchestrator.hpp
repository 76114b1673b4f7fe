#pragma once

#include "hapnet/backhaul_select.hpp"
#include "hapnet/fp_alloc.hpp"
#include "hapnet/parallel.hpp"
#include "hapnet/text_format.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hapnet {

struct GridPoint {
  double p_h_ka = 0;
  double delivered_rate = 0;
  std::size_t m_h = 0;
  double cap_ka = 0;
  int iterations = 0;
  bool converged = false;
  bool hap_c_band_starved = false;
};

struct SolveReport {
  bool two_layer = false;
  double best_p_h_ka = 0;
  BackhaulAssignment assign;
  Allocation alloc;
  RateBreakdown rates;
  double delivered_sum_rate = 0;
  double cap_ka = 0;
  std::vector<GridPoint> grid_trace;
  std::vector<FpTraceEntry> fp_trace;
  Multipliers multipliers;
  FpStatus fp_status = FpStatus::iteration_limit;

  int iterations() const { return static_cast<int>(fp_trace.size()); }
};

/// Evenly spaced HAP Ka-band powers on [0, P_H / M]; a single point is 0.
inline std::vector<double> pka_grid(const SystemConfig& c)
{
  std::vector<double> g(static_cast<std::size_t>(c.grid_pka), 0.0);
  const double top = c.p_h / c.m_uts;
  for (int k = 1; k < c.grid_pka; ++k)
    g[static_cast<std::size_t>(k)] = top * k / (c.grid_pka - 1);
  return g;
}

/// Outer search over the per-backhaul HAP Ka-band power. Each grid point
/// runs backhaul selection, then bandwidth/power allocation, then caps the
/// access rates by their backhauls. Ties keep the smaller power.
inline SolveReport solve(const Network& net, const FpOptions& fp = {}, int workers = 1)
{
  const auto grid = pka_grid(net.config);
  struct Outcome {
    SelectionResult sel;
    FpResult fp;
  };
  std::vector<Outcome> out(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t k) {
    out[k].sel = select(net, grid[k]);
    out[k].fp = run(net, out[k].sel.assign, grid[k], out[k].sel.cap_total, fp);
  });

  SolveReport rep;
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& o = out[k];
    rep.grid_trace.push_back({grid[k], o.fp.delivered_rate, o.sel.assign.m_h(), o.sel.cap_total,
                              o.fp.iterations(), o.fp.status == FpStatus::converged,
                              o.fp.hap_c_band_starved});
    if (o.fp.delivered_rate > out[best].fp.delivered_rate)
      best = k;
  }
  auto& w = out[best];
  rep.best_p_h_ka = grid[best];
  rep.assign = std::move(w.sel.assign);
  rep.alloc = std::move(w.fp.alloc);
  rep.rates = std::move(w.fp.rates);
  rep.delivered_sum_rate = w.fp.delivered_rate;
  rep.cap_ka = w.sel.cap_total;
  rep.fp_trace = std::move(w.fp.trace);
  rep.multipliers = std::move(w.fp.multipliers);
  rep.fp_status = w.fp.status;
  return rep;
}

/// Satellite-terrestrial baseline: no HAP C-band service and no HAP backhaul.
inline SolveReport solve_two_layer(const Network& net, FpOptions fp = {})
{
  fp.hap_c_band = false;
  SolveReport rep;
  rep.two_layer = true;
  rep.assign = BackhaulAssignment::all_satellite(net.num_uts());
  rep.cap_ka = cap_leo_backhaul(net, rep.assign);
  auto r = run(net, rep.assign, 0.0, rep.cap_ka, fp);
  rep.alloc = std::move(r.alloc);
  rep.rates = std::move(r.rates);
  rep.delivered_sum_rate = r.delivered_rate;
  rep.fp_trace = std::move(r.trace);
  rep.multipliers = std::move(r.multipliers);
  rep.fp_status = r.status;
  rep.grid_trace.push_back({0.0, r.delivered_rate, 0, rep.cap_ka, rep.iterations(),
                            r.status == FpStatus::converged, false});
  return rep;
}

/// Line-oriented `key = value` rendering; numbers use shortest round-trip form,
/// so equal reports serialize to identical bytes.
inline std::string serialize(const SolveReport& r)
{
  using text::join;
  using text::num;
  std::string s;
  const auto line = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
  line("mode", r.two_layer ? "two_layer" : "three_layer");
  line("delivered_sum_rate", num(r.delivered_sum_rate));
  line("best_p_h_ka", num(r.best_p_h_ka));
  line("cap_ka", num(r.cap_ka));
  line("m_h", std::to_string(r.assign.m_h()));
  line("m_s", std::to_string(r.assign.m_s()));
  line("to_hap", join(r.assign.to_hap));
  line("to_sat", join(r.assign.to_sat));
  line("r_h_sum", num(r.rates.r_h_sum));
  line("r_t_sum", num(r.rates.r_t_sum));
  line("c_th", num(r.rates.c_th));
  line("c_ts", num(r.rates.c_ts));
  line("b_h", num(r.alloc.b_h));
  line("b_t", join(r.alloc.b_t));
  line("p_h_users", join(r.alloc.p_h_users));
  line("p_t_users", join(r.alloc.p_t_users));
  line("p_h_ka", num(r.alloc.p_h_ka));
  line("lambda_b", num(r.multipliers.lambda_b));
  line("lambda_t", join(r.multipliers.lambda_t));
  line("lambda_h", num(r.multipliers.lambda_h));
  line("fp_status", r.fp_status == FpStatus::converged ? "converged" : "iteration_limit");
  line("iterations", std::to_string(r.iterations()));
  s += "# grid: p_h_ka,delivered_rate,m_h,cap_ka,iterations,converged,hap_c_band_starved\n";
  for (const auto& g : r.grid_trace)
    line("grid", num(g.p_h_ka) + "," + num(g.delivered_rate) + "," + std::to_string(g.m_h) + "," +
                     num(g.cap_ka) + "," + std::to_string(g.iterations) + "," +
                     (g.converged ? "1" : "0") + "," + (g.hap_c_band_starved ? "1" : "0"));
  s += "# fp: iteration,surrogate,sum_rate,max_residual,tightness_gap\n";
  for (const auto& e : r.fp_trace)
    line("fp", std::to_string(e.iteration) + "," + num(e.surrogate) + "," + num(e.sum_rate) + "," +
                   num(e.max_residual) + "," + num(e.tightness_gap));
  return s;
}

} // namespace hapnet
