#include "colorcenter/parameters_io.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "colorcenter/csv.hpp"
#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

struct Field {
  const char* key;
  double DefectParameters::*member;
};

constexpr Field kFields[] = {
    {"lambda_soc_ghz", &DefectParameters::lambda_soc_ghz},
    {"xi_x_ghz", &DefectParameters::xi_x_ghz},
    {"xi_y_ghz", &DefectParameters::xi_y_ghz},
    {"ham_p", &DefectParameters::ham_p},
    {"delta_p", &DefectParameters::delta_p},
    {"g_l", &DefectParameters::g_l},
};

}  // namespace

DefectParameters parse_parameters_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed parameter JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("parameter JSON must be an object");

  DefectParameters p;
  for (const auto& [key, value] : j.items()) {
    const Field* field = nullptr;
    for (const auto& f : kFields) {
      if (key == f.key) field = &f;
    }
    if (!field) throw InputError("unknown parameter key '" + key + "'");
    if (!value.is_number()) throw InputError("parameter '" + key + "' must be a number");
    p.*(field->member) = value.get<double>();
  }
  p.validate();
  return p;
}

DefectParameters load_parameters(const std::filesystem::path& path) {
  try {
    return parse_parameters_json(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string parameters_to_json(const DefectParameters& params) {
  nlohmann::ordered_json j;
  for (const auto& f : kFields) j[f.key] = params.*(f.member);
  return j.dump(2) + "\n";
}

std::optional<std::filesystem::path> default_parameter_path() {
  const char* v = std::getenv(kParamsEnvVar);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

}  // namespace colorcenter
