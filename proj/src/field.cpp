#include "doubletopt/field.hpp"

#include <limits>
#include <string>

#include "doubletopt/errors.hpp"

namespace doubletopt {

GroundwaterField::GroundwaterField(std::vector<FieldSample> samples)
    : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i)
        validate(samples_[i].data, ("field sample " + std::to_string(i)).c_str());
}

std::optional<HydroSample> GroundwaterField::sample(double x, double y) const {
    if (samples_.empty()) return std::nullopt;
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double dx = samples_[i].x - x, dy = samples_[i].y - y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return samples_[best].data;
}

GroundwaterField uniform_field(const HydroSample& s) {
    return GroundwaterField({FieldSample{0.0, 0.0, s}});
}

}  // namespace doubletopt
