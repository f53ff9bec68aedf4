#pragma once

#include <nlohmann/json.hpp>

#include "ppcorr/frameworks.hpp"
#include "ppcorr/model.hpp"

namespace ppcorr {

// Matrices are written as {"kind": ..., "n": N, "rows": [[...], ...]} in
// row-major order. Readers validate the same invariants as the constructors.

nlohmann::json to_json(const CorrelationMatrix& zeta);
nlohmann::json to_json(const MixtureWeights& q);
nlohmann::json to_json(const IntensitySplit& split);
nlohmann::json to_json(const ModelParams& params);

CorrelationMatrix correlation_from_json(const nlohmann::json& j);
MixtureWeights weights_from_json(const nlohmann::json& j);
IntensitySplit split_from_json(const nlohmann::json& j);
ModelParams params_from_json(const nlohmann::json& j);

}  // namespace ppcorr
