#pragma once

#include <iosfwd>
#include <json.hpp>

#include "cvtomo/tomography.hpp"

namespace cvtomo {

/// { "initial": {"center", "width"}, "epsilon", "cells": [{"center",
/// "width", "weight"}] }. Cell depth/index are recovered from the widths on
/// load, so the schema stays minimal.
nlohmann::json to_json(const Partition& partition);
Partition partition_from_json(const nlohmann::json& j);

/// { "partition": ..., "delta", "mode", "cells": [{"i", "j", "x", "xp",
/// "re", "im", "shots"}] }.
nlohmann::json to_json(const ReconstructedState& recon);
ReconstructedState reconstruction_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ElementEstimate& estimate);

/// One row per cell pair: x_center, xp_center, width_x, width_xp, re, im.
/// Doubles are written shortest round-trip, so rows parse back exactly.
void write_csv(const ReconstructedState& recon, std::ostream& out);

std::string format_shortest(double v);

}  // namespace cvtomo
