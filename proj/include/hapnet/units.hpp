#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace hapnet {

/// Decibel gain to a linear power ratio.
inline double db_to_linear(double db)
{
  if (!std::isfinite(db))
    throw std::invalid_argument("db_to_linear: non-finite input");
  return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double ratio)
{
  if (!std::isfinite(ratio) || ratio <= 0.0)
    throw std::invalid_argument("linear_to_db: ratio must be finite and positive");
  return 10.0 * std::log10(ratio);
}

/// Noise density in dBm/Hz to W/Hz.
inline double dbm_per_hz_to_w_per_hz(double dbm_hz)
{
  if (!std::isfinite(dbm_hz))
    throw std::invalid_argument("dbm_per_hz_to_w_per_hz: non-finite input");
  return std::pow(10.0, (dbm_hz - 30.0) / 10.0);
}

} // namespace hapnet
