#pragma once

#include <string>
#include <vector>

#include "hemi/poly.hpp"

namespace hemi {

enum class MapKind { DplusUpper, DminusUpper, DiffUpper, DiffLower, ReturnUpper };

struct MapRow {
    real s = 0;
    real value = 0;
    real err = 0;  // propagated error estimate, always positive
};

// Sampled section-to-section map over an increasing s-grid.
struct MapSamples {
    MapKind kind = MapKind::DiffUpper;
    std::string label;  // parameter description, free-form
    std::vector<MapRow> rows;
    real tol_ode = 1e-12;
};

std::string map_kind_name(MapKind k);
std::string map_samples_to_csv(const MapSamples& m);

}  // namespace hemi
