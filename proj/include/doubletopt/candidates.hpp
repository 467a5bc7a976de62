#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doubletopt/geometry.hpp"
#include "doubletopt/hydro.hpp"

namespace doubletopt {

/// Read-only groundwater parameter source. Implementations must be safe to
/// share across threads. Returns nothing when no data covers the location.
class GroundwaterAccessor {
  public:
    virtual ~GroundwaterAccessor() = default;
    virtual std::optional<HydroSample> sample(double x, double y) const = 0;
};

/// A feasible potential well location with its precomputed TAP limits.
struct WellCandidate {
    std::string well_id;
    double x = 0.0, y = 0.0;  // map frame [m]
    double s = 0.0, t = 0.0;  // flow frame [m]
    TapLimits limits;
};

/// Flow-aligned group of candidates forming one potential doublet.
/// wells are ordered by ascending s and share t.
struct DoubletLine {
    std::string line_id;
    double t = 0.0;
    std::vector<WellCandidate> wells;
    double chi = 0.0;        ///< line length, max(s) - min(s) [m]
    double alpha_med = 0.0;  ///< median breakthrough parameter [m2/s]
};

struct PrepConfig {
    double buffer_m = 3.0;
    double initial_spacing = 5.0;
    double spacing_step = 2.5;
    int max_wells = 100;
    double min_well_rate = 1e-3;  ///< candidate filter threshold [m3/s] (1 l/s)
};

/// Median of a non-empty sample; even counts take the mean of the two
/// middle elements.
double median(std::vector<double> values);

/// Group filtered candidates into doublet lines, dropping lines with fewer
/// than two wells. `t_index` must align with `wells` and identify the
/// cross-flow lattice row of each candidate.
std::vector<DoubletLine> group_into_lines(std::vector<WellCandidate> wells,
                                          const std::vector<long>& t_index);

/// Full pre-processing for one block: feasible area, flow-aligned grid,
/// TAP limits, the minimum-rate filter and the iterative spacing loop that
/// caps the surviving well count at cfg.max_wells.
///
/// The flow direction is sampled once at the block centroid; the remaining
/// parameters are sampled per node. Throws FieldUnavailable when the field
/// has no data at the centroid.
std::vector<DoubletLine> adaptive_candidates(const BlockGeometry& g,
                                             const GroundwaterAccessor& field,
                                             const PrepConfig& cfg);

}  // namespace doubletopt
