#pragma once

// Canonical internal units: MW, MWh, tonne, tonne/h, mile, hour, $, year.
// Catalog files use the conventional per-kW / per-kWh quotations and are
// converted on load (see config.cpp).

namespace eh2 {

// Lower heating value of hydrogen. The efficiency figures in the technology
// catalog are LHV-based; this constant ties tonne-of-H2 and MWh together
// everywhere in the model.
inline constexpr double kLhvH2MwhPerTonne = 33.33;

// Thermal unit conversion for fuel prices quoted in $/MMBTU.
inline constexpr double kMmbtuPerMwh = 3.412;

inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kHoursPerWeek = 168.0;
inline constexpr double kKwPerMw = 1000.0;
inline constexpr double kKgPerTonne = 1000.0;

// Sentinel for "no upper limit" (VRE bin potential, line capacity, ...).
inline constexpr double kUnbounded = 1e30;

inline bool is_unbounded(double v) { return v >= kUnbounded * 0.5; }

}  // namespace eh2
