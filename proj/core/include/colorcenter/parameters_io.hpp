#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "colorcenter/defect_model.hpp"

namespace colorcenter {

/// Environment variable naming a default parameter file.
inline constexpr const char* kParamsEnvVar = "COLORCENTER_PARAMS";

/// Parses {"lambda_soc_ghz", "xi_x_ghz", "xi_y_ghz", "ham_p", "delta_p", "g_l"}.
/// Missing keys keep their defaults; unknown keys, non-numeric values and
/// malformed JSON throw InputError.
DefectParameters parse_parameters_json(std::string_view text);
DefectParameters load_parameters(const std::filesystem::path& path);
std::string parameters_to_json(const DefectParameters& params);

/// Path from COLORCENTER_PARAMS, if set and nonempty.
std::optional<std::filesystem::path> default_parameter_path();

}  // namespace colorcenter
