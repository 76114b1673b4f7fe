// Command-line driver: one solve (`single`) or a seeded parameter sweep (`sweep`).

#include "hapnet/config.hpp"
#include "hapnet/orchestrator.hpp"
#include "hapnet/sweep.hpp"
#include "hapnet/topology.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace hapnet;

constexpr int exit_config = 1;
constexpr int exit_io = 2;

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_pka;
  bool two_layer = false;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
  cmd->add_option("--config", f.config, "Config file (defaults to the built-in baseline)");
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Base scenario seed");
  cmd->add_option("--grid-pka", f.grid_pka, "Grid points for the HAP Ka-band power search")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--two-layer", f.two_layer, "Satellite-terrestrial baseline (no HAP)");
  cmd->add_option("--workers", f.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

SystemConfig resolve_config(const CommonFlags& f)
{
  SystemConfig c = f.config.empty() ? baseline_config() : load_config(f.config);
  if (f.seed)
    c.seed = *f.seed;
  if (f.grid_pka)
    c.grid_pka = *f.grid_pka;
  c.validate();
  return c;
}

int run_single(const CommonFlags& f)
{
  const auto cfg = resolve_config(f);
  const Network net(cfg);
  const auto rep = f.two_layer ? solve_two_layer(net) : solve(net, {}, f.workers);

  const fs::path out(f.out);
  write_text_file(out / "report.txt", serialize(rep));
  write_text_file(out / "topology.txt", dump_topology(net.topo));
  write_text_file(out / "single.csv", sweep_csv({summarize(0.0, cfg.seed, rep)}));

  std::cout << "mode               " << (rep.two_layer ? "two_layer" : "three_layer") << "\n"
            << "delivered_rate     " << text::num(rep.delivered_sum_rate) << " bit/s\n"
            << "m_h / m_s          " << rep.assign.m_h() << " / " << rep.assign.m_s() << "\n"
            << "best_p_h_ka        " << text::num(rep.best_p_h_ka) << " W\n"
            << "iterations         " << rep.iterations() << " ("
            << (rep.fp_status == FpStatus::converged ? "converged" : "iteration limit") << ")\n"
            << "report             " << (out / "report.txt").string() << "\n";
  return 0;
}

int run_sweep_cmd(const CommonFlags& f, const std::string& kind_name,
                  const std::vector<double>& range, int repeats)
{
  const auto kind = parse_sweep_kind(kind_name);
  if (!kind)
    throw ConfigError("kind", "expected uts, hap_power or backhaul_dist");

  SweepSpec spec;
  spec.kind = *kind;
  spec.base = resolve_config(f);
  spec.range = range.empty() ? default_range(*kind) : range;
  spec.repeats = repeats;
  spec.two_layer = f.two_layer;
  spec.workers = f.workers;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sweep", e.what());
  }

  const auto rows = run_sweep(spec);
  const fs::path out(f.out);
  const std::string stem = "sweep_" + to_string(*kind) + (f.two_layer ? "_two_layer" : "");
  write_text_file(out / (stem + ".csv"), sweep_csv(rows));
  write_text_file(out / (stem + "_mean.csv"), sweep_mean_csv(sweep_means(rows)));

  std::cout << "rows " << rows.size() << " -> " << (out / (stem + ".csv")).string() << "\n";
  for (const auto& m : sweep_means(rows))
    std::cout << "  " << text::num(m.sweep_value) << "  mean delivered "
              << text::num(m.delivered_rate) << "  mean m_h " << text::num(m.m_h) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"HAP / satellite / terrestrial network resource allocation"};
  app.require_subcommand(1);

  CommonFlags single_flags;
  auto* single = app.add_subcommand("single", "Solve one scenario and write a report");
  add_common(single, single_flags);

  CommonFlags sweep_flags;
  std::string kind = "uts";
  std::vector<double> range;
  int repeats = 10;
  auto* sweep = app.add_subcommand("sweep", "Seeded sweep over UT count or HAP power");
  add_common(sweep, sweep_flags);
  sweep->add_option("--kind", kind, "uts | hap_power | backhaul_dist")->capture_default_str();
  sweep->add_option("--range", range, "Sweep values, strictly increasing")->delimiter(',');
  sweep->add_option("--repeats", repeats, "Seeds per sweep value")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (single->parsed())
      return run_single(single_flags);
    return run_sweep_cmd(sweep_flags, kind, range, repeats);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
}
