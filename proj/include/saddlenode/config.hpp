#pragma once

#include "saddlenode/signals.hpp"

#include <json.hpp>

namespace saddlenode::config {

using json = nlohmann::ordered_json;

/// Signal expression <-> JSON, using the constructor names of the signals
/// module ("constant", "sin", "cos", "sum", "product", "scale_add",
/// "spline_bump", "bump_train", "plateau_hat", "arctan_blend", "shift",
/// "gaussian_factor", "dense_orbit"). Unknown types or keys throw
/// std::invalid_argument.
TimeSignal signal_from_json(const json& j);
json signal_to_json(const TimeSignal& s);

}  // namespace saddlenode::config
