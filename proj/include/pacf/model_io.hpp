#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pacf/arma_model.hpp"

namespace pacf {

/// Reads a model spec document:
///
///     {"ar": ["1/2"], "ma": ["0.4"], "sigma2": "1"}
///
/// Scalars are "num/den" or decimal strings and are read as exact rationals.
/// JSON numbers are accepted through their shortest round-trip decimal text.
/// A document whose model sits under a top-level "model" key (as written by
/// the CLI) is accepted as well. Throws InvalidInput.
[[nodiscard]] ArmaModel parse_model_spec(std::string_view text);
[[nodiscard]] ArmaModel model_from_json(const nlohmann::json& doc);

/// Rationals as "num/den" strings; re-reading yields identical coefficients.
[[nodiscard]] nlohmann::json model_to_json(const ArmaModel& model);

/// Comma-separated scalars, e.g. "1/2, -0.25". Empty or blank text is an empty list.
[[nodiscard]] std::vector<Scalar> parse_coefficient_list(std::string_view text);

}  // namespace pacf
