#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ess/model.hpp"

namespace ess {

/// One row of a transfer-limit table: the synchronous units that must be online
/// to support up to `nonsync_limit_mw` of non-synchronous generation.
struct UnitCombination {
  std::string label;
  double nonsync_limit_mw = 0.0;
  std::vector<std::string> required_units;  // file order preserved

  bool operator==(const UnitCombination&) const = default;
};

class NomogramTable {
 public:
  NomogramTable() = default;
  /// Throws Error(InvariantViolation) on duplicate labels, non-positive limits or empty unit lists.
  explicit NomogramTable(std::vector<UnitCombination> rows);

  const std::vector<UnitCombination>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  const UnitCombination* find(std::string_view label) const;
  /// Every unit referenced by any row.
  std::set<std::string> referenced_units() const;

  bool operator==(const NomogramTable&) const = default;

 private:
  std::vector<UnitCombination> rows_;
};

/// Text format: header `label,nonsync_limit_mw,units`, then one row per
/// combination with units separated by ';'. Lines starting with '#' are comments.
NomogramTable read_nomogram(std::istream& in, const std::string& source = "<stream>");
NomogramTable load_nomogram(const std::filesystem::path& path);
void write_nomogram(std::ostream& out, const NomogramTable& table);
void save_nomogram(const std::filesystem::path& path, const NomogramTable& table);

/// Throws Error(UnknownFacility) naming the first row with a unit missing from the registry.
void resolve(const NomogramTable& table, const Registry& registry);

/// Labels whose limit is at least `nonsync_mw`, in table order.
std::vector<std::string> feasible_combinations(const NomogramTable& table, double nonsync_mw);

struct CommitmentDecision {
  std::optional<std::string> chosen_label;
  std::set<std::string> committed;
  double commitment_cost = 0.0;  // $ per interval over all committed units
  /// Operator direction: no combination satisfied both the non-synchronous level and the inertia floor.
  bool directed = false;
  /// Limit of the chosen combination; non-synchronous output must be held at or below it.
  std::optional<double> nonsync_limit_mw;
  double inertia_mws = 0.0;
};

/// Least-cost combination that supports `nonsync_mw` and reaches `inertia_floor`
/// (ties: fewer units, then label). Without one, falls back to a directed choice:
/// the highest-limit row among those meeting the inertia floor, or the
/// highest-inertia row when none does. `always_committed` units are online
/// regardless and count towards inertia and cost. Throws Error(EmptyTable).
CommitmentDecision select_commitment(const NomogramTable& table, const Registry& registry, double nonsync_mw,
                                     double inertia_floor, const std::set<std::string>& always_committed = {});

/// Number of directed decisions.
std::size_t intervention_count(const std::vector<CommitmentDecision>& decisions);

}  // namespace ess
