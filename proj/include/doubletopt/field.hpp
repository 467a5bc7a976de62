#pragma once

#include <vector>

#include "doubletopt/candidates.hpp"

namespace doubletopt {

struct FieldSample {
    double x = 0.0, y = 0.0;
    HydroSample data;
};

/// Point-sampled groundwater parameter field with nearest-neighbor lookup
/// (squared Euclidean distance, ties to the lowest sample index).
class GroundwaterField final : public GroundwaterAccessor {
  public:
    GroundwaterField() = default;
    explicit GroundwaterField(std::vector<FieldSample> samples);

    std::optional<HydroSample> sample(double x, double y) const override;

    std::size_t size() const { return samples_.size(); }
    const std::vector<FieldSample>& samples() const { return samples_; }

  private:
    std::vector<FieldSample> samples_;
};

/// Uniform field: every lookup returns the same record.
GroundwaterField uniform_field(const HydroSample& s);

}  // namespace doubletopt
