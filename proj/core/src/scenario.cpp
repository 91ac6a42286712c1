#include "ess/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ess/error.hpp"
#include "ess/text_table.hpp"

namespace ess {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

[[noreturn]] void invalid(const std::string& detail) { throw Error(ErrorCode::ValidationError, detail); }

class IniReader {
 public:
  IniReader(const fs::path& path) : path_(path) {
    try {
      pt::read_ini(path.string(), tree_);
    } catch (const pt::ini_parser_error& e) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(e.line()) + ": " + e.message());
    }
  }

  std::string where(const std::string& section, const std::string& key) const {
    return path_.string() + ": [" + section + "] " + key;
  }

  bool has_section(const std::string& section) const { return tree_.get_child_optional(section).has_value(); }

  const pt::ptree& section(const std::string& section) const {
    static const pt::ptree empty;
    auto c = tree_.get_child_optional(section);
    return c ? *c : empty;
  }

  std::optional<std::string> text(const std::string& sec, const std::string& key) const {
    auto v = section(sec).get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::string required(const std::string& sec, const std::string& key) const {
    auto v = text(sec, key);
    if (!v || v->empty()) invalid(where(sec, key) + ": required field missing");
    return *v;
  }

  double number(const std::string& sec, const std::string& key, std::optional<double> fallback) const {
    auto v = text(sec, key);
    if (!v) {
      if (fallback) return *fallback;
      invalid(where(sec, key) + ": required field missing");
    }
    double out = 0.0;
    if (!parse_number(*v, out)) throw Error(ErrorCode::ParseError, where(sec, key) + ": '" + *v + "' is not a number");
    return out;
  }

  void allow_only(const std::string& sec, std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : section(sec)) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) invalid(where(sec, k) + ": unknown field");
    }
  }

  fs::path resolve(const std::string& rel) const { return path_.parent_path() / rel; }
  const pt::ptree& tree() const { return tree_; }

 private:
  fs::path path_;
  pt::ptree tree_;
};

std::vector<Facility> read_facilities(const fs::path& path) {
  const TextTable t = load_table(path);
  const auto c_id = t.column("id"), c_tech = t.column("tech"), c_pmax = t.column("p_max"), c_pmin = t.column("p_min"),
             c_h = t.column("inertia_h"), c_mva = t.column("mva_rating"), c_vi = t.column("virtual_inertia_mws"),
             c_droop = t.column("droop"), c_tau = t.column("pfr_tau_s"), c_cost = t.column("commitment_cost");
  std::vector<Facility> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    Facility f;
    f.id = t.rows[i][c_id];
    auto tech = parse_technology(t.rows[i][c_tech]);
    if (!tech) {
      invalid(t.locate(i, c_tech) + ": unknown technology '" + t.rows[i][c_tech] +
              "' (valid: Synchronous, InverterVre, InverterStorage, DemandSide)");
    }
    f.tech = *tech;
    f.p_max = t.number(i, c_pmax);
    f.p_min = t.number(i, c_pmin);
    f.inertia_h = t.number(i, c_h);
    f.mva_rating = t.number(i, c_mva);
    f.virtual_inertia_mws = t.number(i, c_vi);
    if (!t.rows[i][c_droop].empty()) f.droop = t.number(i, c_droop);
    f.pfr_tau = t.number(i, c_tau);
    f.commitment_cost = t.number(i, c_cost);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ServiceOffer> read_offers(const fs::path& path, std::size_t intervals) {
  const TextTable t = load_table(path);
  const auto c_fac = t.column("facility"), c_svc = t.column("service"), c_q = t.column("quantity"),
             c_p = t.column("price"), c_int = t.column("interval");
  std::vector<ServiceOffer> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ServiceOffer o;
    o.facility_id = t.rows[i][c_fac];
    auto svc = parse_service(t.rows[i][c_svc]);
    if (!svc) invalid(t.locate(i, c_svc) + ": unknown service '" + t.rows[i][c_svc] + "' (valid: " + service_names() + ")");
    o.service = *svc;
    o.quantity = t.number(i, c_q);
    o.price = t.number(i, c_p);
    if (!t.rows[i][c_int].empty()) {
      const double v = t.number(i, c_int);
      if (v < 0 || v != std::floor(v) || v >= static_cast<double>(intervals))
        invalid(t.locate(i, c_int) + ": interval must be an integer in [0, " + std::to_string(intervals) + ")");
      o.interval = static_cast<std::size_t>(v);
    }
    out.push_back(std::move(o));
  }
  return out;
}

// Returns one column per facility; every column must span all intervals.
std::map<std::string, std::vector<double>> read_interval_columns(const fs::path& path, std::size_t intervals,
                                                                 const std::string& what) {
  const TextTable t = load_table(path);
  const auto c_int = t.column("interval");
  if (t.rows.size() != intervals) {
    invalid(path.string() + ": " + what + " trace has " + std::to_string(t.rows.size()) + " rows, expected " +
            std::to_string(intervals) + " (one per interval)");
  }
  std::map<std::string, std::vector<double>> cols;
  for (std::size_t c = 0; c < t.header.size(); ++c)
    if (c != c_int) cols[t.header[c]];
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.number(i, c_int) != static_cast<double>(i))
      invalid(t.locate(i, c_int) + ": intervals must run 0.." + std::to_string(intervals - 1) + " in order");
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (c == c_int) continue;
      cols[t.header[c]].push_back(t.number(i, c));
    }
  }
  return cols;
}

RequirementRule parse_rule(const IniReader& ini, const std::string& key, const std::string& value) {
  RequirementRule r;
  auto svc = parse_service(key);
  if (!svc || *svc == ServiceKind::Energy)
    invalid(ini.where("requirements", key) + ": unknown service (valid: " + service_names() + ", excluding Energy)");
  r.service = *svc;
  const auto words = split(value, ' ');
  std::vector<std::string> w;
  for (const auto& s : words) {
    if (!s.empty()) w.push_back(s);
  }
  if (w.empty()) invalid(ini.where("requirements", key) + ": empty rule");
  const std::string& kind = w[0];
  auto arity = [&](std::size_t n) {
    if (w.size() != n) invalid(ini.where("requirements", key) + ": '" + kind + "' takes " + std::to_string(n - 1) + " argument(s)");
  };
  if (kind == "disabled") {
    arity(1);
  } else if (kind == "fixed") {
    arity(2);
    r.kind = RequirementRule::Kind::Fixed;
    if (!parse_number(w[1], r.mw) || r.mw < 0) invalid(ini.where("requirements", key) + ": fixed quantity must be a number >= 0");
  } else if (kind == "largest-contingency") {
    arity(1);
    r.kind = RequirementRule::Kind::LargestContingency;
  } else if (kind == "legacy-headroom") {
    arity(1);
    r.kind = RequirementRule::Kind::LegacyHeadroom;
  } else if (kind == "min-inertia") {
    arity(1);
    if (r.service != ServiceKind::RocofControl) invalid(ini.where("requirements", key) + ": min-inertia applies to RocofControl only");
    r.kind = RequirementRule::Kind::MinInertia;
  } else if (kind == "product") {
    arity(2);
    if (r.service != ServiceKind::OperatingReserve)
      invalid(ini.where("requirements", key) + ": product applies to OperatingReserve only");
    auto p = parse_reserve_product(w[1]);
    if (!p) invalid(ini.where("requirements", key) + ": unknown product '" + w[1] + "' (valid: FirmAvailability30, CallableSpinning, Headroom5)");
    r.kind = RequirementRule::Kind::Product;
    r.product = *p;
  } else {
    invalid(ini.where("requirements", key) + ": unknown rule '" + kind +
            "' (valid: disabled, fixed <MW>, largest-contingency, legacy-headroom, min-inertia, product <name>)");
  }
  return r;
}

}  // namespace

ErrorSampleSet load_error_samples(const fs::path& path) {
  const TextTable t = load_table(path);
  const auto c = t.column("error_mw");
  ErrorSampleSet set;
  auto h = t.meta.find("horizon_min");
  double horizon = 0;
  if (h == t.meta.end() || !parse_number(h->second, horizon) || horizon <= 0 || horizon != std::floor(horizon))
    invalid(path.string() + ": missing or invalid '# horizon_min: <minutes>' header");
  set.horizon_minutes = static_cast<int>(horizon);
  for (std::size_t i = 0; i < t.rows.size(); ++i) set.samples.push_back(t.number(i, c));
  if (set.samples.empty()) invalid(path.string() + ": no error samples");
  return set;
}

ResponseTrace load_response_trace(const fs::path& path) {
  const TextTable t = load_table(path);
  const auto ct = t.column("t_s"), cp = t.column("output_mw");
  ResponseTrace tr;
  for (std::size_t i = 0; i < t.rows.size(); ++i) tr.samples.push_back({t.number(i, ct), t.number(i, cp)});
  try {
    validate(tr);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
  return tr;
}

Scenario load_scenario(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::IoError, "scenario file not found: " + path.string());
  const IniReader ini(path);
  for (const auto& [sec, body] : ini.tree()) {
    static const std::set<std::string> known = {"scenario", "market", "limits", "contingency",
                                                "requirements", "reserve", "nomogram"};
    if (!known.count(sec)) invalid(path.string() + ": unknown section [" + sec + "]");
    if (body.empty() && !body.data().empty()) invalid(path.string() + ": key '" + sec + "' outside any section");
  }

  Scenario sc;
  ini.allow_only("scenario", {"name", "market", "intervals", "seed", "demand_noise_mw", "demand", "facilities",
                              "offers", "availability", "nomogram", "errors"});
  sc.name = ini.required("scenario", "name");
  const std::string market = ini.required("scenario", "market");
  auto mode = parse_market_mode(market);
  if (!mode) invalid(ini.where("scenario", "market") + ": '" + market + "' (valid: NEM, WEM)");
  sc.market_mode = *mode;
  const double n = ini.number("scenario", "intervals", std::nullopt);
  if (n < 0 || n != std::floor(n)) invalid(ini.where("scenario", "intervals") + ": must be a non-negative integer");
  sc.intervals = static_cast<std::size_t>(n);
  const double seed = ini.number("scenario", "seed", 0.0);
  if (seed < 0 || seed != std::floor(seed)) invalid(ini.where("scenario", "seed") + ": must be a non-negative integer");
  sc.seed = static_cast<std::uint64_t>(seed);
  sc.demand_noise_mw = ini.number("scenario", "demand_noise_mw", 0.0);
  if (sc.demand_noise_mw < 0) invalid(ini.where("scenario", "demand_noise_mw") + ": must be >= 0");

  MarketConfig cfg;
  ini.allow_only("market", {"price_floor", "price_cap"});
  cfg.price_floor = ini.number("market", "price_floor", cfg.price_floor);
  cfg.price_cap = ini.number("market", "price_cap", cfg.price_cap);
  cfg.interval_minutes = interval_minutes(sc.market_mode);

  // Demand trace.
  {
    const fs::path p = ini.resolve(ini.required("scenario", "demand"));
    auto cols = read_interval_columns(p, sc.intervals, "demand");
    auto it = cols.find("demand_mw");
    if (it == cols.end()) throw Error(ErrorCode::ParseError, p.string() + ": missing column 'demand_mw'");
    for (double d : it->second) {
      if (d < 0) invalid(p.string() + ": demand_mw must be >= 0");
    }
    sc.demand_mw = it->second;
    if (sc.intervals == 0) sc.demand_mw.clear();
  }

  std::vector<Facility> facilities = read_facilities(ini.resolve(ini.required("scenario", "facilities")));
  if (auto av = ini.text("scenario", "availability"); av && !av->empty()) {
    const fs::path p = ini.resolve(*av);
    for (auto& [id, trace] : read_interval_columns(p, sc.intervals, "availability")) {
      auto f = std::find_if(facilities.begin(), facilities.end(), [&](const Facility& x) { return x.id == id; });
      if (f == facilities.end()) invalid(p.string() + ": availability column '" + id + "' names no facility");
      f->availability = trace;
    }
  }
  for (const auto& f : facilities) {
    if (f.tech == Technology::InverterVre && f.availability.size() != sc.intervals)
      invalid(path.string() + ": VRE facility '" + f.id + "' needs an availability trace of " +
              std::to_string(sc.intervals) + " intervals");
  }
  const fs::path offers_path = ini.resolve(ini.required("scenario", "offers"));
  std::vector<ServiceOffer> offers = read_offers(offers_path, sc.intervals);
  try {
    sc.registry = validate_and_build_registry(std::move(facilities), std::move(offers), cfg);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + " (facilities/offers): " + e.detail());
  }

  ini.allow_only("limits", {"f0", "max_rocof", "min_nadir", "settling_low", "settling_high"});
  sc.limits.f0 = ini.number("limits", "f0", 50.0);
  sc.limits.max_rocof = ini.number("limits", "max_rocof", std::nullopt);
  sc.limits.min_nadir = ini.number("limits", "min_nadir", std::nullopt);
  sc.limits.settling_low = ini.number("limits", "settling_low", std::nullopt);
  sc.limits.settling_high = ini.number("limits", "settling_high", std::nullopt);
  try {
    validate(sc.limits);
  } catch (const Error& e) {
    invalid(path.string() + ": [limits] " + e.detail());
  }

  ini.allow_only("contingency", {"size_mw", "load_damping_mw_per_hz", "horizon_s", "dt_s", "ffr_delay_s",
                                 "slow_tau_s", "delayed_tau_s"});
  auto& c = sc.contingency;
  c.size_mw = ini.number("contingency", "size_mw", std::nullopt);
  c.load_damping_mw_per_hz = ini.number("contingency", "load_damping_mw_per_hz", 0.0);
  c.horizon_s = ini.number("contingency", "horizon_s", c.horizon_s);
  c.dt_s = ini.number("contingency", "dt_s", c.dt_s);
  c.ffr_delay_s = ini.number("contingency", "ffr_delay_s", c.ffr_delay_s);
  c.slow_tau_s = ini.number("contingency", "slow_tau_s", c.slow_tau_s);
  c.delayed_tau_s = ini.number("contingency", "delayed_tau_s", c.delayed_tau_s);
  if (c.size_mw < 0) invalid(ini.where("contingency", "size_mw") + ": must be >= 0");
  if (c.load_damping_mw_per_hz < 0) invalid(ini.where("contingency", "load_damping_mw_per_hz") + ": must be >= 0");
  if (!(c.dt_s > 0 && c.dt_s <= 0.01)) invalid(ini.where("contingency", "dt_s") + ": must lie in (0, 0.01]");
  if (c.horizon_s < 30) invalid(ini.where("contingency", "horizon_s") + ": must be >= 30");
  if (c.ffr_delay_s < 0 || !(c.slow_tau_s > 0) || !(c.delayed_tau_s > 0))
    invalid(path.string() + ": [contingency] delays must be >= 0 and time constants > 0");

  ini.allow_only("reserve", {"price_cap", "steps", "confidence"});
  sc.reserve.price_cap = ini.number("reserve", "price_cap", cfg.price_cap);
  const double steps = ini.number("reserve", "steps", 10.0);
  if (steps < 2 || steps != std::floor(steps)) invalid(ini.where("reserve", "steps") + ": must be an integer >= 2");
  sc.reserve.n_steps = static_cast<int>(steps);
  sc.reserve.confidence = ini.number("reserve", "confidence", 0.95);
  if (!(sc.reserve.confidence > 0 && sc.reserve.confidence < 1))
    invalid(ini.where("reserve", "confidence") + ": must lie in (0, 1)");
  if (!(sc.reserve.price_cap > 0)) invalid(ini.where("reserve", "price_cap") + ": must be > 0");

  if (auto e = ini.text("scenario", "errors"); e && !e->empty()) sc.errors = load_error_samples(ini.resolve(*e));

  std::set<ServiceKind> seen;
  for (const auto& [key, value] : ini.section("requirements")) {
    RequirementRule r = parse_rule(ini, key, trim(value.data()));
    if (!seen.insert(r.service).second) invalid(ini.where("requirements", key) + ": duplicate entry");
    if (r.kind == RequirementRule::Kind::Product) {
      if (!sc.errors) invalid(ini.where("requirements", key) + ": product rules need [scenario] errors");
      if (sc.errors->horizon_minutes != required_horizon_minutes(r.product)) {
        throw Error(ErrorCode::HorizonMismatch, ini.where("requirements", key) + ": " + std::string(to_string(r.product)) +
                                                    " needs " + std::to_string(required_horizon_minutes(r.product)) +
                                                    "-minute error samples");
      }
    }
    sc.requirements.push_back(r);
  }
  std::sort(sc.requirements.begin(), sc.requirements.end(),
            [](const RequirementRule& a, const RequirementRule& b) { return index_of(a.service) < index_of(b.service); });

  ini.allow_only("nomogram", {"inertia_floor"});
  if (auto nt = ini.text("scenario", "nomogram"); nt && !nt->empty()) {
    sc.nomogram = load_nomogram(ini.resolve(*nt));
    if (sc.nomogram->empty()) invalid(ini.where("scenario", "nomogram") + ": table has no rows");
    try {
      resolve(*sc.nomogram, sc.registry);
    } catch (const Error& e) {
      invalid(ini.where("scenario", "nomogram") + ": " + e.detail());
    }
    for (const auto& r : sc.nomogram->rows()) {
      for (const auto& u : r.required_units) {
        if (!sc.registry.facility(u).is_synchronous())
          invalid(ini.where("scenario", "nomogram") + ": unit '" + u + "' in row '" + r.label + "' is not synchronous");
      }
    }
  }
  if (auto fl = ini.text("nomogram", "inertia_floor"); fl && !fl->empty()) {
    if (*fl == "min-inertia") {
      sc.nomogram_inertia_floor.from_rocof_limit = true;
    } else if (!parse_number(*fl, sc.nomogram_inertia_floor.mws) || sc.nomogram_inertia_floor.mws < 0) {
      invalid(ini.where("nomogram", "inertia_floor") + ": expected 'min-inertia' or a number >= 0");
    }
  }
  return sc;
}

}  // namespace ess
