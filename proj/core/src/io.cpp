#include "vortexstir/io.hpp"

#include <charconv>

#include "vortexstir/model.hpp"

namespace vortexstir {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (const char ch : data) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string params_header(const Params& p, std::string_view config_hash) {
    std::string line = "# vortexstir R=" + format_double(p.R) +
                       " Gamma=" + format_double(p.Gamma) +
                       " theta0=" + format_double(p.theta0) +
                       " r0=" + format_double(p.r0);
    if (!config_hash.empty()) {
        line += " config=";
        line += config_hash;
    }
    line += "\n";
    return line;
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit,
                     std::string_view config_hash) {
    os << params_header(orbit.params, config_hash);
    os << "t,x,y,psi\n";
    for (const PhaseState& s : orbit.samples) {
        const double psi = eval_hamiltonian(orbit.params,
                                            {s.x, s.y, std::nullopt});
        os << format_double(s.t.value_or(0.0)) << ',' << format_double(s.x)
           << ',' << format_double(s.y) << ',' << format_double(psi)
           << '\n';
    }
}

void write_period_scan_csv(std::ostream& os, const PeriodScan& scan,
                           const Params& p, std::string_view config_hash) {
    os << params_header(p, config_hash);
    os << "x,period,energy\n";
    for (const PeriodSample& s : scan.section_points)
        os << format_double(s.x) << ',' << format_double(s.period) << ','
           << format_double(s.energy) << '\n';
}

} // namespace vortexstir
