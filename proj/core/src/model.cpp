#include "vortexstir/model.hpp"

#include <cmath>
#include <string>

namespace vortexstir {

namespace detail {

void require_not_singular(double x, double y, double rv, double xi,
                          double delta) {
    const double d2 = delta * delta;
    const double dv = (x - rv) * (x - rv) + y * y;
    if (dv < d2)
        throw SingularityProximity("evaluation point within " +
                                   std::to_string(delta) + " of the vortex");
    const double di = (x - xi) * (x - xi) + y * y;
    if (di < d2)
        throw SingularityProximity("evaluation point within " +
                                   std::to_string(delta) + " of the image vortex");
}

} // namespace detail

Velocity eval_field(const Params& p, const PhaseState& s) {
    p.validate();
    detail::require_not_singular(s.x, s.y, p.r0, p.image_x(),
                                 p.exclusion_radius());
    return detail::field_at(s.x, s.y, p.r0, p.image_x(), p.c(), p.theta0);
}

double eval_hamiltonian(const Params& p, const PhaseState& s) {
    p.validate();
    detail::require_not_singular(s.x, s.y, p.r0, p.image_x(),
                                 p.exclusion_radius());
    return detail::hamiltonian_at(s.x, s.y, p.r0, p.image_x(), p.c(), p.theta0);
}

Jacobian2 eval_jacobian(const Params& p, const PhaseState& s) {
    p.validate();
    detail::require_not_singular(s.x, s.y, p.r0, p.image_x(),
                                 p.exclusion_radius());
    return detail::jacobian_at(s.x, s.y, p.r0, p.image_x(), p.c(), p.theta0);
}

PhaseState image_point(const Params& p) {
    p.validate();
    return {p.image_x(), 0.0, std::nullopt};
}

std::vector<PhaseState> to_lab_frame(std::span<const PhaseState> orbit,
                                     const Params& p) {
    p.validate();
    std::vector<PhaseState> lab;
    lab.reserve(orbit.size());
    for (const PhaseState& s : orbit) {
        if (!s.t.has_value())
            throw MissingTimeTag("to_lab_frame: state has no time tag");
        const double ang = p.theta0 * *s.t;
        const double ca = std::cos(ang), sa = std::sin(ang);
        lab.push_back({s.x * ca - s.y * sa, s.x * sa + s.y * ca, s.t});
    }
    return lab;
}

} // namespace vortexstir
