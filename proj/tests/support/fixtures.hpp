#pragma once

// Scenario files written on the fly for tests that need a specific shape.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef ESS_DATA_DIR
#error "ESS_DATA_DIR must be defined"
#endif

namespace ess::testing {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(ESS_DATA_DIR); }

inline fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ess-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  f << body;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// South Australian style system on the bundled transfer-limit table with wind and
// solar available above the table's largest limit in every interval.
inline fs::path write_directed_scenario(const fs::path& dir, int intervals, double vre_mw = 1900,
                                        double demand_mw = 2300) {
  const double wind_mw = std::min(vre_mw, 1600.0), solar_mw = vre_mw - wind_mw;
  const fs::path nem = data_dir() / "nem-small";
  std::ostringstream demand, avail;
  demand << "interval,demand_mw\n";
  avail << "interval,SA_WIND,SA_SOLAR\n";
  for (int i = 0; i < intervals; ++i) {
    demand << i << ',' << demand_mw << '\n';
    avail << i << ',' << wind_mw << ',' << solar_mw << '\n';
  }
  write_text(dir / "demand.csv", demand.str());
  write_text(dir / "availability.csv", avail.str());
  std::ostringstream ini;
  ini << "[scenario]\nname = directed\nmarket = NEM\nintervals = " << intervals << '\n'
      << "demand = demand.csv\navailability = availability.csv\n"
      << "facilities = " << (nem / "facilities.csv").string() << '\n'
      << "offers = " << (nem / "offers.csv").string() << '\n'
      << "nomogram = " << (data_dir() / "fig6-table.csv").string() << '\n'
      << "[limits]\nmax_rocof = 1.0\nmin_nadir = 49.0\nsettling_low = 49.5\nsettling_high = 50.5\n"
      << "[contingency]\nsize_mw = 200\nload_damping_mw_per_hz = 30\n"
      << "[requirements]\nContingencyRaiseFast = largest-contingency\n";
  write_text(dir / "directed.ini", ini.str());
  return dir / "directed.ini";
}

// Two dispatchable plants with ample headroom and a small wind farm.
inline fs::path write_slack_scenario(const fs::path& dir, int intervals, double demand_mw = 300) {
  write_text(dir / "facilities.csv",
             "id,tech,p_max,p_min,inertia_h,mva_rating,virtual_inertia_mws,droop,pfr_tau_s,commitment_cost\n"
             "G1,Synchronous,600,50,5,700,0,0.04,2,500\n"
             "G2,Synchronous,600,50,5,700,0,0.04,2,500\n"
             "W1,InverterVre,100,0,0,0,0,,1,0\n");
  write_text(dir / "offers.csv",
             "facility,service,quantity,price,interval\n"
             "G1,Energy,600,30,\nG2,Energy,600,40,\nW1,Energy,100,-5,\n"
             "G1,ContingencyRaiseFast,200,2,\nG2,ContingencyRaiseFast,200,3,\n");
  std::ostringstream demand, avail;
  demand << "interval,demand_mw\n";
  avail << "interval,W1\n";
  for (int i = 0; i < intervals; ++i) {
    demand << i << ',' << demand_mw << '\n';
    avail << i << ",80\n";
  }
  write_text(dir / "demand.csv", demand.str());
  write_text(dir / "availability.csv", avail.str());
  std::ostringstream ini;
  ini << "[scenario]\nname = slack\nmarket = NEM\nintervals = " << intervals << '\n'
      << "demand = demand.csv\navailability = availability.csv\nfacilities = facilities.csv\noffers = offers.csv\n"
      << "[limits]\nmax_rocof = 1.0\nmin_nadir = 49.0\nsettling_low = 49.5\nsettling_high = 50.5\n"
      << "[contingency]\nsize_mw = 100\nload_damping_mw_per_hz = 20\n"
      << "[requirements]\nContingencyRaiseFast = largest-contingency\n";
  write_text(dir / "slack.ini", ini.str());
  return dir / "slack.ini";
}

}  // namespace ess::testing
