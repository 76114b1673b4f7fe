#pragma once

#include "hapnet/config.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hapnet {

struct Point2 {
  double x = 0;
  double y = 0;
};

struct Point3 {
  double x = 0;
  double y = 0;
  double z = 0;
};

/// Large-scale channel gain |h|^2 = d^-eps.
inline double gain(double distance, double eps)
{
  if (!(distance > 0.0) || !std::isfinite(distance))
    throw std::invalid_argument("gain: distance must be finite and positive");
  return std::pow(distance, -eps);
}

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance(Point2 a, Point3 b) { return std::hypot(a.x - b.x, a.y - b.y, b.z); }

/// Network geometry plus every squared channel magnitude the rate model needs.
///
/// Users are stored flat: user n of UT m lives at index offset(m) + n. Gains
/// from a user to every UT form a row-major users x M matrix.
class Topology {
public:
  Topology() = default;

  /// Builds a topology from positions; every gain is derived from them.
  Topology(std::vector<Point2> ut_pos, std::vector<std::vector<Point2>> user_pos, Point3 hap_pos,
           Point3 sat_pos, double eps)
      : ut_pos_(std::move(ut_pos)), hap_pos_(hap_pos), sat_pos_(sat_pos), eps_(eps)
  {
    if (user_pos.size() != ut_pos_.size())
      throw std::invalid_argument("Topology: one user list per UT required");
    offset_.reserve(ut_pos_.size() + 1);
    offset_.push_back(0);
    for (auto& users : user_pos) {
      if (users.empty())
        throw std::invalid_argument("Topology: every UT needs at least one user");
      offset_.push_back(offset_.back() + users.size());
      for (auto p : users) {
        user_pos_.push_back(p);
        user_ut_.push_back(offset_.size() - 2);
      }
    }
    compute_gains();
  }

  std::size_t num_uts() const { return ut_pos_.size(); }
  std::size_t num_users() const { return user_pos_.size(); }
  std::size_t users_of(std::size_t m) const { return offset_[m + 1] - offset_[m]; }
  std::size_t offset(std::size_t m) const { return offset_[m]; }
  std::size_t index(std::size_t m, std::size_t n) const { return offset_[m] + n; }
  /// UT that serves flat user u.
  std::size_t ut_of(std::size_t u) const { return user_ut_[u]; }

  const std::vector<Point2>& ut_positions() const { return ut_pos_; }
  const std::vector<Point2>& user_positions() const { return user_pos_; }
  Point3 hap_position() const { return hap_pos_; }
  Point3 sat_position() const { return sat_pos_; }
  double eps() const { return eps_; }

  /// |h_{u, T_m}|^2 between flat user u and UT m.
  double g2_user_ut(std::size_t u, std::size_t m) const { return g2_user_ut_[u * num_uts() + m]; }
  /// |h_{u, T_{ut_of(u)}}|^2, the serving link.
  double g2_user_own(std::size_t u) const { return g2_user_ut(u, user_ut_[u]); }
  double g2_user_hap(std::size_t u) const { return g2_user_hap_[u]; }
  double g2_ut_hap(std::size_t m) const { return g2_ut_hap_[m]; }
  double g2_ut_sat(std::size_t m) const { return g2_ut_sat_[m]; }

private:
  void compute_gains()
  {
    const std::size_t M = num_uts();
    const std::size_t U = num_users();
    g2_user_ut_.resize(U * M);
    g2_user_hap_.resize(U);
    for (std::size_t u = 0; u < U; ++u) {
      for (std::size_t m = 0; m < M; ++m)
        g2_user_ut_[u * M + m] = gain(distance(user_pos_[u], ut_pos_[m]), eps_);
      g2_user_hap_[u] = gain(distance(user_pos_[u], hap_pos_), eps_);
    }
    g2_ut_hap_.resize(M);
    g2_ut_sat_.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
      g2_ut_hap_[m] = gain(distance(ut_pos_[m], hap_pos_), eps_);
      g2_ut_sat_[m] = gain(distance(ut_pos_[m], sat_pos_), eps_);
    }
  }

  std::vector<Point2> ut_pos_;
  std::vector<Point2> user_pos_;
  std::vector<std::size_t> user_ut_;
  std::vector<std::size_t> offset_;
  Point3 hap_pos_;
  Point3 sat_pos_;
  double eps_ = 2.0;

  std::vector<double> g2_user_ut_;
  std::vector<double> g2_user_hap_;
  std::vector<double> g2_ut_hap_;
  std::vector<double> g2_ut_sat_;
};

namespace detail {

// Uniform point in a disk; callers own the engine so draws stay in a fixed order.
inline Point2 sample_disk(std::mt19937_64& rng, Point2 center, double radius)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

} // namespace detail

/// Seeded placement: UTs uniform in a disk of radius r_area around the HAP
/// ground point, users uniform in a disk of radius r_cell around their UT.
/// HAP and satellite both sit above the origin.
inline Topology generate(const SystemConfig& cfg)
{
  cfg.validate();
  constexpr int max_retries = 64;
  std::mt19937_64 rng(cfg.seed);
  const Point2 origin{0, 0};

  std::vector<Point2> uts;
  for (int m = 0; m < cfg.m_uts; ++m) {
    int tries = 0;
    Point2 p;
    do {
      if (tries++ == max_retries)
        throw std::runtime_error("generate: could not place UT at a distinct location");
      p = detail::sample_disk(rng, origin, cfg.r_area);
    } while ([&] {
      for (auto q : uts)
        if (distance(p, q) == 0.0)
          return true;
      return false;
    }());
    uts.push_back(p);
  }

  std::vector<std::vector<Point2>> users(uts.size());
  for (std::size_t m = 0; m < uts.size(); ++m) {
    for (int n = 0; n < cfg.users_per_ut[m]; ++n) {
      int tries = 0;
      Point2 p;
      do {
        if (tries++ == max_retries)
          throw std::runtime_error("generate: user coincides with a UT after retries");
        p = detail::sample_disk(rng, uts[m], cfg.r_cell);
      } while ([&] {
        for (auto q : uts)
          if (distance(p, q) == 0.0)
            return true;
        return false;
      }());
      users[m].push_back(p);
    }
  }

  return Topology(std::move(uts), std::move(users), Point3{0, 0, cfg.alt_hap},
                  Point3{0, 0, cfg.alt_sat}, cfg.eps);
}

/// Positions-only text dump; gains are recomputed on load.
///
///     hap <x> <y> <z>
///     sat <x> <y> <z>
///     ut <x> <y>
///     user <m> <x> <y>
inline std::string dump_topology(const Topology& topo)
{
  std::ostringstream out;
  out.precision(17);
  out << "# hapnet topology\n";
  const auto h = topo.hap_position();
  const auto s = topo.sat_position();
  out << "hap " << h.x << ' ' << h.y << ' ' << h.z << '\n';
  out << "sat " << s.x << ' ' << s.y << ' ' << s.z << '\n';
  for (auto p : topo.ut_positions())
    out << "ut " << p.x << ' ' << p.y << '\n';
  for (std::size_t u = 0; u < topo.num_users(); ++u) {
    const auto p = topo.user_positions()[u];
    out << "user " << topo.ut_of(u) << ' ' << p.x << ' ' << p.y << '\n';
  }
  return out.str();
}

inline Topology parse_topology(const std::string& text, double eps)
{
  std::istringstream in(text);
  std::string line;
  Point3 hap{}, sat{};
  bool have_hap = false, have_sat = false;
  std::vector<Point2> uts;
  std::vector<std::vector<Point2>> users;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream row(line);
    std::string tag;
    row >> tag;
    const auto bad = [&] {
      return std::runtime_error("topology line " + std::to_string(lineno) + ": malformed '" +
                                line + "'");
    };
    if (tag == "hap" || tag == "sat") {
      Point3 p;
      if (!(row >> p.x >> p.y >> p.z))
        throw bad();
      (tag == "hap" ? hap : sat) = p;
      (tag == "hap" ? have_hap : have_sat) = true;
    } else if (tag == "ut") {
      Point2 p;
      if (!(row >> p.x >> p.y))
        throw bad();
      uts.push_back(p);
      users.emplace_back();
    } else if (tag == "user") {
      std::size_t m;
      Point2 p;
      if (!(row >> m >> p.x >> p.y) || m >= uts.size())
        throw bad();
      users[m].push_back(p);
    } else {
      throw bad();
    }
  }
  if (!have_hap || !have_sat)
    throw std::runtime_error("topology: missing hap or sat line");
  return Topology(std::move(uts), std::move(users), hap, sat, eps);
}

inline Topology load_topology(const std::string& path, double eps)
{
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("cannot open topology file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_topology(ss.str(), eps);
}

} // namespace hapnet
