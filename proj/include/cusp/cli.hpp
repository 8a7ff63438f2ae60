#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cusp/bounds.hpp"
#include "cusp/geometry.hpp"
#include "cusp/transverse.hpp"

namespace cusp::cli {

using Json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCondition = 4;

int exit_code_for(ErrorCode code) noexcept;

/// Entry point of cusp-spectra; args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g
std::string format_double(Scalar x);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

/// Writes via a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Checks an emitted report against the documented schema; on failure
/// `why` names the first offending field.
bool validate_report(const Json& report, std::string* why = nullptr);

// Config fragments, exposed for tests.
ScalarFunction parse_function(const Json& spec);
ProfileSpec parse_profile(const Json& spec);
PlaneCurveSpec parse_curve(const Json& spec);
CurveSpecNd parse_curve_nd(const Json& geometry);
CrossSection parse_section(const Json& spec);
IntegrationRange parse_range(const Json& spec);

}  // namespace cusp::cli
