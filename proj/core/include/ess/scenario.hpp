#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ess/clearing.hpp"
#include "ess/frequency.hpp"
#include "ess/model.hpp"
#include "ess/nomogram.hpp"
#include "ess/reserve.hpp"
#include "ess/rocof.hpp"

namespace ess {

/// How the requirement for one service is derived from the scenario.
struct RequirementRule {
  enum class Kind {
    Disabled,
    Fixed,               // fixed <MW>
    LargestContingency,  // the contingency size
    LegacyHeadroom,      // 70% of the contingency size
    MinInertia,          // RocofControl: inertia holding ROCOF at the limit
    Product,             // OperatingReserve: forecast-error product variant
  };
  ServiceKind service = ServiceKind::RegulationRaise;
  Kind kind = Kind::Disabled;
  double mw = 0.0;
  ReserveProduct product = ReserveProduct::CallableSpinning;
};

struct ContingencySpec {
  double size_mw = 0.0;
  double load_damping_mw_per_hz = 0.0;
  double horizon_s = 60.0;
  double dt_s = 0.01;
  double ffr_delay_s = 0.25;
  double slow_tau_s = 20.0;
  double delayed_tau_s = 100.0;
};

struct InertiaFloorRule {
  bool from_rocof_limit = false;  // use min_inertia_for_rocof(contingency, max_rocof, f0)
  double mws = 0.0;
};

struct Scenario {
  std::string name;
  MarketMode market_mode = MarketMode::NemLike;
  std::size_t intervals = 0;
  std::vector<double> demand_mw;
  std::uint64_t seed = 0;
  double demand_noise_mw = 0.0;  // standard deviation; 0 disables the noise
  Registry registry;
  std::vector<RequirementRule> requirements;
  FrequencyLimits limits;
  ContingencySpec contingency;
  std::optional<NomogramTable> nomogram;
  InertiaFloorRule nomogram_inertia_floor;
  std::optional<ErrorSampleSet> errors;
  ReserveProductConfig reserve;
};

/// Reads and fully validates a scenario file (INI-style sections referencing
/// delimited trace files by relative path). Errors carry file/section/field locators.
Scenario load_scenario(const std::filesystem::path& path);

/// Error samples: one `error_mw` column preceded by a `# horizon_min: <minutes>` line.
ErrorSampleSet load_error_samples(const std::filesystem::path& path);

/// Two-column `t_s,output_mw` response table.
ResponseTrace load_response_trace(const std::filesystem::path& path);

}  // namespace ess
