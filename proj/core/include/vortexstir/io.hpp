#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "vortexstir/dynamics.hpp"
#include "vortexstir/equilibria.hpp"
#include "vortexstir/types.hpp"

namespace vortexstir {

/// Shortest decimal representation that round-trips to the same double
/// (std::to_chars); locale-independent, '.' separator.
std::string format_double(double v);

/// FNV-1a 64-bit hash, hex encoded; used to stamp outputs with the
/// configuration they came from.
std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::string_view data);

/// `# key=value ...` header line carrying the physical parameters and,
/// when nonempty, the config hash. LF line endings throughout.
std::string params_header(const Params& p, std::string_view config_hash = {});

/// Columns: t,x,y,psi
void write_orbit_csv(std::ostream& os, const Orbit& orbit,
                     std::string_view config_hash = {});

/// Columns: x,period,energy
void write_period_scan_csv(std::ostream& os, const PeriodScan& scan,
                           const Params& p,
                           std::string_view config_hash = {});

} // namespace vortexstir
