#include "vortexstir/parallel.hpp"

#include <cstdlib>
#include <string>

namespace vortexstir {

std::size_t effective_threads(std::size_t requested) {
    std::size_t n = requested;
    if (n == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        n = hw > 0 ? hw : 1;
    }
    if (const char* env = std::getenv("VORTEX_STIR_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1 && static_cast<std::size_t>(cap) < n)
                n = static_cast<std::size_t>(cap);
        } catch (...) {
            // unparsable value: ignore
        }
    }
    return n == 0 ? 1 : n;
}

} // namespace vortexstir
