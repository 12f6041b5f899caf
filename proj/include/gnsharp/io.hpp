#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnsharp/constants.hpp"
#include "gnsharp/discretization.hpp"
#include "gnsharp/ground_state.hpp"
#include "gnsharp/group_model.hpp"
#include "gnsharp/heisenberg.hpp"
#include "gnsharp/verifier.hpp"

namespace gnsharp {

/// Embedded in every report; bumped on any incompatible schema change.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const GroupDescriptor& g);
/// Inverse of to_json; the result is validated.
GroupDescriptor group_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PeriodicGrid& grid);
nlohmann::json to_json(const HeisenbergGrid& grid);
nlohmann::json to_json(const ConstantsReport& r);
/// φ itself is not embedded; write it with write_field.
nlohmann::json to_json(const GroundStateResult& r);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const BWCalibration& c);
BWCalibration bw_calibration_from_json(const nlohmann::json& j);

/// {"schema_version", "kind", ...payload}.
nlohmann::json wrap_report(const std::string& kind, nlohmann::json payload);

/// Raw little-endian float64 samples at `path` plus a sidecar `path`.json
/// holding {schema_version, n, L, N, dtype}.
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// "index,ratio" rows, plus one column per equal-length series.
std::string ratios_csv(const VerificationReport& r);
/// One row per report: p, q, Q, lambda, M1, M2, theta, bound, c1_envelope, ...
std::string constants_csv(const std::vector<ConstantsReport>& rows);

}  // namespace gnsharp
