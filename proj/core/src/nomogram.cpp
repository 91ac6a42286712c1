#include "ess/nomogram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "ess/error.hpp"
#include "ess/text_table.hpp"

namespace ess {

NomogramTable::NomogramTable(std::vector<UnitCombination> rows) : rows_(std::move(rows)) {
  std::set<std::string> labels;
  for (const auto& r : rows_) {
    if (r.label.empty()) throw Error(ErrorCode::InvariantViolation, "nomogram row with empty label");
    if (!labels.insert(r.label).second)
      throw Error(ErrorCode::InvariantViolation, "duplicate nomogram label '" + r.label + "'");
    if (!(r.nonsync_limit_mw > 0) || !std::isfinite(r.nonsync_limit_mw))
      throw Error(ErrorCode::InvariantViolation, "nomogram row '" + r.label + "': nonsync_limit must be > 0");
    if (r.required_units.empty())
      throw Error(ErrorCode::InvariantViolation, "nomogram row '" + r.label + "': no units");
  }
}

const UnitCombination* NomogramTable::find(std::string_view label) const {
  auto it = std::find_if(rows_.begin(), rows_.end(), [&](const UnitCombination& r) { return r.label == label; });
  return it == rows_.end() ? nullptr : &*it;
}

std::set<std::string> NomogramTable::referenced_units() const {
  std::set<std::string> out;
  for (const auto& r : rows_) out.insert(r.required_units.begin(), r.required_units.end());
  return out;
}

NomogramTable read_nomogram(std::istream& in, const std::string& source) {
  const TextTable t = read_table(in, source);
  const std::size_t c_label = t.column("label");
  const std::size_t c_limit = t.column("nonsync_limit_mw");
  const std::size_t c_units = t.column("units");
  std::vector<UnitCombination> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    UnitCombination r;
    r.label = t.rows[i][c_label];
    r.nonsync_limit_mw = t.number(i, c_limit);
    for (auto& u : split(t.rows[i][c_units], ';')) {
      if (!u.empty()) r.required_units.push_back(u);
    }
    rows.push_back(std::move(r));
  }
  try {
    return NomogramTable(std::move(rows));
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, source + ": " + e.detail());
  }
}

NomogramTable load_nomogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_nomogram(in, path.string());
}

void write_nomogram(std::ostream& out, const NomogramTable& table) {
  out << "label,nonsync_limit_mw,units\n";
  for (const auto& r : table.rows()) {
    out << r.label << ',' << format_exact(r.nonsync_limit_mw) << ',';
    for (std::size_t k = 0; k < r.required_units.size(); ++k) out << (k ? ";" : "") << r.required_units[k];
    out << '\n';
  }
}

void save_nomogram(const std::filesystem::path& path, const NomogramTable& table) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_nomogram(out, table);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void resolve(const NomogramTable& table, const Registry& registry) {
  for (const auto& r : table.rows()) {
    for (const auto& u : r.required_units) {
      if (!registry.contains(u))
        throw Error(ErrorCode::UnknownFacility, "nomogram row '" + r.label + "' references unit '" + u + "'");
    }
  }
}

std::vector<std::string> feasible_combinations(const NomogramTable& table, double nonsync_mw) {
  std::vector<std::string> out;
  for (const auto& r : table.rows()) {
    if (r.nonsync_limit_mw >= nonsync_mw) out.push_back(r.label);
  }
  return out;
}

namespace {

struct Candidate {
  const UnitCombination* row;
  std::set<std::string> committed;
  double cost;
  double inertia;
};

}  // namespace

CommitmentDecision select_commitment(const NomogramTable& table, const Registry& registry, double nonsync_mw,
                                     double inertia_floor, const std::set<std::string>& always_committed) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "nomogram table has no rows");
  resolve(table, registry);

  std::vector<Candidate> cands;
  for (const auto& r : table.rows()) {
    Candidate c{&r, always_committed, 0.0, 0.0};
    c.committed.insert(r.required_units.begin(), r.required_units.end());
    for (const auto& id : c.committed) c.cost += registry.facility(id).commitment_cost;
    c.inertia = total_system_inertia(registry, c.committed);
    cands.push_back(std::move(c));
  }

  auto market_key = [](const Candidate& c) {
    return std::tuple<double, std::size_t, const std::string&>(c.cost, c.row->required_units.size(), c.row->label);
  };
  auto meets_inertia = [&](const Candidate& c) { return c.inertia >= inertia_floor; };

  const Candidate* best = nullptr;
  for (const auto& c : cands) {
    if (c.row->nonsync_limit_mw >= nonsync_mw && meets_inertia(c) && (!best || market_key(c) < market_key(*best)))
      best = &c;
  }
  bool directed = false;
  if (!best) {
    directed = true;
    const bool any_inertia = std::any_of(cands.begin(), cands.end(), meets_inertia);
    for (const auto& c : cands) {
      if (any_inertia) {
        if (!meets_inertia(c)) continue;
        if (!best || c.row->nonsync_limit_mw > best->row->nonsync_limit_mw ||
            (c.row->nonsync_limit_mw == best->row->nonsync_limit_mw && market_key(c) < market_key(*best)))
          best = &c;
      } else {
        if (!best || c.inertia > best->inertia ||
            (c.inertia == best->inertia && std::tuple(-c.row->nonsync_limit_mw, market_key(c)) <
                                               std::tuple(-best->row->nonsync_limit_mw, market_key(*best))))
          best = &c;
      }
    }
  }

  CommitmentDecision d;
  d.chosen_label = best->row->label;
  d.committed = best->committed;
  d.commitment_cost = best->cost;
  d.directed = directed;
  d.nonsync_limit_mw = best->row->nonsync_limit_mw;
  d.inertia_mws = best->inertia;
  return d;
}

std::size_t intervention_count(const std::vector<CommitmentDecision>& decisions) {
  return static_cast<std::size_t>(
      std::count_if(decisions.begin(), decisions.end(), [](const CommitmentDecision& d) { return d.directed; }));
}

}  // namespace ess
