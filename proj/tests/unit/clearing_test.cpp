#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ess/clearing.hpp"
#include "ess/error.hpp"
#include "support/oracles.hpp"

namespace {

using namespace ess;
using ess::testing::brute_force_clear;
using ess::testing::GridFacility;
using ess::testing::GridInstance;

constexpr auto kE = ServiceKind::Energy;
constexpr auto kCRF = ServiceKind::ContingencyRaiseFast;
constexpr auto kCLF = ServiceKind::ContingencyLowerFast;

Facility plant(std::string id, double p_max, Technology tech = Technology::InverterStorage) {
  Facility f;
  f.id = std::move(id);
  f.tech = tech;
  f.p_max = p_max;
  if (tech == Technology::Synchronous) {
    f.inertia_h = 3;
    f.mva_rating = p_max * 1.2;
  }
  return f;
}

Registry two_plant(std::vector<ServiceOffer> extra = {}) {
  std::vector<ServiceOffer> offers{{"F1", kE, 100, 20}, {"F2", kE, 100, 50}};
  offers.insert(offers.end(), extra.begin(), extra.end());
  return validate_and_build_registry({plant("F1", 100), plant("F2", 100)}, offers, {});
}

ServiceRequirement fixed(ServiceKind s, double mw) { return {s, FixedQuantity{mw}}; }

TEST(ClearInterval, MeritOrderDispatch) {
  auto reg = two_plant();
  auto r = clear_interval(reg, 0, 150, {}, {});
  EXPECT_NEAR(r.cleared_mw("F1", kE), 100, 1e-9);
  EXPECT_NEAR(r.cleared_mw("F2", kE), 50, 1e-9);
  EXPECT_NEAR(r.prices[index_of(kE)], 50, 1e-9);
  EXPECT_NEAR(r.shed_mw, 0, 1e-12);
  // $/MWh over a 5 minute interval
  EXPECT_NEAR(r.objective_cost, (100 * 20 + 50 * 50) / 12.0, 1e-9);
}

TEST(ClearInterval, MeritOrderMatchesGridOracle) {
  GridInstance g{{{100, 100, 20, 0, 0}, {100, 100, 50, 0, 0}}, 150, 0, false};
  auto best = brute_force_clear(g);
  ASSERT_TRUE(best);
  auto r = clear_interval(two_plant(), 0, 150, {}, {});
  EXPECT_NEAR(r.objective_cost * 12.0, best->cost, 1e-6 * best->cost);
  EXPECT_NEAR(r.cleared_mw("F1", kE), best->energy[0], 1.0);
}

TEST(ClearInterval, ReserveCoOptimisation) {
  auto reg = two_plant({{"F2", kCRF, 40, 10}});
  auto r = clear_interval(reg, 0, 150, {fixed(kCRF, 30)}, {});
  GridInstance g{{{100, 100, 20, 0, 0}, {100, 100, 50, 40, 10}}, 150, 30, false};
  auto best = brute_force_clear(g);
  ASSERT_TRUE(best);
  EXPECT_NEAR(r.objective_cost * 12.0, best->cost, 1e-6 * best->cost);
  EXPECT_NEAR(r.cleared_mw("F2", kCRF), 30, 1e-9);
  EXPECT_LE(r.cleared_mw("F2", kE) + r.cleared_mw("F2", kCRF), 100 + 1e-9);
  EXPECT_NEAR(r.cleared_mw("F1", kE), 100, 1e-9);
  EXPECT_NEAR(r.prices[index_of(kE)], 50, 1e-9);
  EXPECT_NEAR(r.prices[index_of(kCRF)], 10, 1e-9);
}

TEST(ClearInterval, ExhaustedReserveOfferPricedAtScarcity) {
  // The next MW of requirement can only come from the shortfall variable.
  auto reg = two_plant({{"F2", kCRF, 30, 10}});
  auto r = clear_interval(reg, 0, 150, {fixed(kCRF, 30)}, {});
  EXPECT_NEAR(r.cleared_mw("F2", kCRF), 30, 1e-9);
  EXPECT_EQ(r.shortfall[index_of(kCRF)], 0.0);
  EXPECT_NEAR(r.prices[index_of(kCRF)], reg.config().price_cap, 1e-9);
}

TEST(ClearInterval, ReserveOpportunityCostPriced) {
  // F2's headroom is exhausted, so every MW of reserve pushes energy onto the $80 unit.
  auto reg = validate_and_build_registry({plant("F1", 100), plant("F2", 100), plant("F3", 100)},
                                         {{"F1", kE, 100, 20}, {"F2", kE, 100, 50}, {"F3", kE, 100, 80},
                                          {"F2", kCRF, 100, 10}},
                                         {});
  auto r = clear_interval(reg, 0, 190, {fixed(kCRF, 30)}, {});
  EXPECT_NEAR(r.cleared_mw("F2", kE), 70, 1e-9);
  EXPECT_NEAR(r.cleared_mw("F3", kE), 20, 1e-9);
  EXPECT_NEAR(r.prices[index_of(kE)], 80, 1e-9);
  EXPECT_NEAR(r.prices[index_of(kCRF)], 10 + (80 - 50), 1e-9);
}

TEST(ClearInterval, ZeroDemand) {
  auto r = clear_interval(two_plant(), 0, 0, {}, {});
  for (auto& [id, q] : r.cleared)
    for (double v : q) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.objective_cost, 0.0);
}

TEST(ClearInterval, ScarcityPricedAtCap) {
  auto reg = two_plant({{"F2", kCRF, 20, 10}});
  auto r = clear_interval(reg, 0, 100, {fixed(kCRF, 50)}, {});
  EXPECT_NEAR(r.shortfall[index_of(kCRF)], 30, 1e-9);
  EXPECT_NEAR(r.prices[index_of(kCRF)], reg.config().price_cap, 1e-9);
  EXPECT_TRUE(std::ranges::count(r.binding_constraints, std::string("shortfall:ContingencyRaiseFast")) == 1);
}

TEST(ClearInterval, EnergyShedPricedAtCap) {
  auto r = clear_interval(two_plant(), 0, 250, {}, {});
  EXPECT_NEAR(r.shed_mw, 50, 1e-9);
  EXPECT_NEAR(r.prices[index_of(kE)], 15000, 1e-9);
}

TEST(ClearInterval, LowerServiceUsesFootroom) {
  auto reg = two_plant({{"F1", kCLF, 50, 5}, {"F2", kCLF, 50, 1}});
  auto r = clear_interval(reg, 0, 120, {fixed(kCLF, 40)}, {});
  for (auto& id : {"F1", "F2"}) EXPECT_GE(r.cleared_mw(id, kE) - r.cleared_mw(id, kCLF), -1e-9);
  GridInstance g{{{100, 100, 20, 50, 5}, {100, 100, 50, 50, 1}}, 120, 40, true};
  auto best = brute_force_clear(g);
  ASSERT_TRUE(best);
  EXPECT_NEAR(r.objective_cost * 12.0, best->cost, 1e-6 * best->cost);
}

TEST(ClearInterval, UncommittedSynchronousExcluded) {
  auto reg = validate_and_build_registry({plant("G", 100, Technology::Synchronous), plant("B", 100)},
                                         {{"G", kE, 100, 10}, {"B", kE, 100, 90}}, {});
  auto off = clear_interval(reg, 0, 50, {}, {});
  EXPECT_EQ(off.cleared_mw("G", kE), 0.0);
  auto on = clear_interval(reg, 0, 50, {}, {"G"});
  EXPECT_NEAR(on.cleared_mw("G", kE), 50, 1e-9);
}

TEST(ClearInterval, CommittedMinimumLoadHonoured) {
  auto g = plant("G", 100, Technology::Synchronous);
  g.p_min = 40;
  auto reg = validate_and_build_registry({g, plant("B", 100)}, {{"G", kE, 100, 60}, {"B", kE, 100, 10}}, {});
  auto r = clear_interval(reg, 0, 50, {}, {"G"});
  EXPECT_NEAR(r.cleared_mw("G", kE), 40, 1e-9);
  EXPECT_NEAR(r.cleared_mw("B", kE), 10, 1e-9);
}

TEST(ClearInterval, EqualPricesRationedProportionally) {
  auto reg = validate_and_build_registry({plant("A", 100), plant("B", 100)}, {{"A", kE, 30, 40}, {"B", kE, 90, 40}},
                                         {});
  auto r = clear_interval(reg, 0, 60, {}, {});
  EXPECT_NEAR(r.cleared_mw("A", kE), 15, 1e-9);
  EXPECT_NEAR(r.cleared_mw("B", kE), 45, 1e-9);
}

TEST(ClearInterval, NonSynchronousCap) {
  Facility w = plant("W", 300, Technology::InverterVre);
  w.availability = {300};
  auto reg = validate_and_build_registry({w, plant("G", 400, Technology::Synchronous)},
                                         {{"W", kE, 300, -10}, {"G", kE, 400, 60}}, {});
  ClearingInput in;
  in.demand_mw = 350;
  in.committed = {"G"};
  in.nonsync_limit_mw = 200;
  auto r = clear_interval(reg, in);
  EXPECT_NEAR(r.cleared_mw("W", kE), 200, 1e-9);
  EXPECT_NEAR(r.curtailed_vre, 100, 1e-9);
  auto c = compute_curtailment(reg, r, 0);
  EXPECT_NEAR(c.curtailed_mw, 100, 1e-9);
  EXPECT_NEAR(c.curtailed_fraction, 1.0 / 3.0, 1e-12);
}

TEST(ClearInterval, RocofControlRequirementCreditsCommittedInertia) {
  Facility b = plant("B", 100);
  b.virtual_inertia_mws = 2000;
  auto g = plant("G", 500, Technology::Synchronous);  // 3 s * 600 MVA = 1800 MW.s
  auto reg = validate_and_build_registry({b, g}, {{"G", kE, 500, 30}, {"B", ServiceKind::RocofControl, 2000, 2}}, {});
  auto r = clear_interval(reg, 0, 200, {fixed(ServiceKind::RocofControl, 3000)}, {"G"});
  EXPECT_NEAR(r.committed_inertia_mws, 1800, 1e-9);
  EXPECT_NEAR(r.cleared_mw("B", ServiceKind::RocofControl), 1200, 1e-9);
  EXPECT_NEAR(r.prices[index_of(ServiceKind::RocofControl)], 2, 1e-9);
}

TEST(ClearInterval, DemandCurveClearsWhereStackCrosses) {
  ReserveDemandCurve curve{{{10, 300}, {20, 100}, {30, 0}}};
  auto reg = two_plant({{"F1", ServiceKind::OperatingReserve, 100, 150}});
  auto r = clear_interval(reg, 0, 50, {{ServiceKind::OperatingReserve, DemandCurveMode{curve}}}, {});
  EXPECT_NEAR(r.cleared_mw("F1", ServiceKind::OperatingReserve), 10, 1e-9);
}

TEST(ClearInterval, CurtailmentDefinition) {
  Facility w = plant("W", 500, Technology::InverterVre);
  w.availability = {400, 0};
  auto reg = validate_and_build_registry({w, plant("B", 100)}, {{"W", kE, 500, 0}, {"B", kE, 100, 30}}, {});
  auto r = clear_interval(reg, 0, 340, {}, {});
  auto c = compute_curtailment(reg, r, 0);
  EXPECT_NEAR(c.curtailed_mw, 60, 1e-9);
  EXPECT_NEAR(c.curtailed_fraction, 0.15, 1e-12);
  auto r1 = clear_interval(reg, 1, 50, {}, {});
  auto c1 = compute_curtailment(reg, r1, 1);
  EXPECT_EQ(c1.curtailed_mw, 0.0);
  EXPECT_EQ(c1.curtailed_fraction, 0.0);
  try {
    compute_curtailment(reg, r, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MismatchedInterval);
  }
}

class RandomInstances : public ::testing::Test {
 protected:
  std::mt19937 rng{20240617};

  struct Built {
    Registry reg;
    GridInstance grid;
    ServiceKind service;
  };

  Built make(bool lower) {
    std::uniform_int_distribution<int> n_dist(2, 3), cap(10, 25), qty(3, 20), sq(0, 12);
    const int n = n_dist(rng);
    std::vector<double> prices;
    std::uniform_real_distribution<double> price(1, 100);
    while (prices.size() < static_cast<std::size_t>(2 * n)) {
      double p = std::round(price(rng) * 100) / 100;
      if (std::ranges::find(prices, p) == prices.end()) prices.push_back(p);
    }
    Built b;
    b.service = lower ? kCLF : kCRF;
    b.grid.lower_service = lower;
    std::vector<Facility> fs;
    std::vector<ServiceOffer> offers;
    int total_e = 0, total_s = 0;
    for (int i = 0; i < n; ++i) {
      GridFacility g;
      g.capacity = cap(rng);
      g.energy_qty = std::min(g.capacity, qty(rng));
      g.energy_price = prices[2 * i];
      g.service_qty = std::min(g.capacity, sq(rng));
      g.service_price = prices[2 * i + 1];
      b.grid.facilities.push_back(g);
      const auto id = "F" + std::to_string(i);
      fs.push_back(plant(id, g.capacity));
      offers.push_back({id, kE, double(g.energy_qty), g.energy_price});
      if (g.service_qty > 0) offers.push_back({id, b.service, double(g.service_qty), g.service_price});
      total_e += g.energy_qty;
      total_s += g.service_qty;
    }
    b.grid.demand = std::uniform_int_distribution<int>(0, total_e)(rng);
    b.grid.requirement = std::uniform_int_distribution<int>(0, std::max(0, total_s / 2))(rng);
    b.reg = validate_and_build_registry(fs, offers, {});
    return b;
  }
};

TEST_F(RandomInstances, MatchGridOracle) {
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 25; ++trial) {
    auto b = make(trial % 2 == 1);
    auto best = brute_force_clear(b.grid);
    if (!best) continue;
    auto r = clear_interval(b.reg, 0, b.grid.demand, {fixed(b.service, b.grid.requirement)}, {});
    ASSERT_EQ(r.shed_mw, 0.0);
    const double lp = r.objective_cost / b.reg.config().interval_hours();
    EXPECT_NEAR(lp, best->cost, 1e-6 * std::max(1.0, std::abs(best->cost))) << "trial " << trial;
    for (std::size_t i = 0; i < b.grid.facilities.size(); ++i) {
      const auto id = "F" + std::to_string(i);
      EXPECT_NEAR(r.cleared_mw(id, kE), best->energy[i], 1.0);
      EXPECT_NEAR(r.cleared_mw(id, b.service), best->service[i], 1.0);
    }
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST_F(RandomInstances, RequirementMonotone) {
  for (int trial = 0; trial < 30; ++trial) {
    auto b = make(false);
    double prev = -1e300;
    for (int req = 0; req <= 40; req += 5) {
      auto r = clear_interval(b.reg, 0, b.grid.demand, {fixed(b.service, req)}, {});
      EXPECT_GE(r.objective_cost, prev - 1e-9);
      prev = r.objective_cost;
    }
  }
}

TEST_F(RandomInstances, PriceScaling) {
  for (int trial = 0; trial < 30; ++trial) {
    auto b = make(trial % 2 == 0);
    const double k = 0.5 + trial * 0.1;
    std::vector<Facility> fs;
    for (auto& [id, f] : b.reg.facilities()) fs.push_back(f);
    std::vector<ServiceOffer> scaled(b.reg.offers().begin(), b.reg.offers().end());
    for (auto& o : scaled) o.price *= k;
    MarketConfig cfg;
    cfg.price_cap *= k;
    cfg.price_floor *= k;
    auto reg_k = validate_and_build_registry(fs, scaled, cfg);
    auto req = std::vector{fixed(b.service, b.grid.requirement)};
    auto r1 = clear_interval(b.reg, 0, b.grid.demand, req, {});
    auto rk = clear_interval(reg_k, 0, b.grid.demand, req, {});
    EXPECT_NEAR(rk.objective_cost, k * r1.objective_cost, 1e-7 * std::max(1.0, std::abs(rk.objective_cost)));
    for (auto s : {kE, b.service}) EXPECT_NEAR(rk.prices[index_of(s)], k * r1.prices[index_of(s)], 1e-7 * k * 1e4);
    for (auto& [id, q] : r1.cleared)
      for (std::size_t s = 0; s < kServiceCount; ++s) EXPECT_NEAR(rk.cleared.at(id)[s], q[s], 1e-7);
  }
}

TEST_F(RandomInstances, EnergyPriceEqualsMarginalOffer) {
  int seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto b = make(false);
    auto r = clear_interval(b.reg, 0, b.grid.demand, {}, {});
    // A single partially dispatched offer sets the price.
    const ServiceOffer* marginal = nullptr;
    int partial = 0;
    for (auto& o : b.reg.offers()) {
      if (o.service != kE) continue;
      const double q = r.cleared_mw(o.facility_id, kE);
      if (q > 1e-7 && q < o.quantity - 1e-7) {
        marginal = &o;
        ++partial;
      }
    }
    if (partial != 1) continue;
    EXPECT_NEAR(r.prices[index_of(kE)], marginal->price, 1e-9);
    ++seen;
  }
  EXPECT_GT(seen, 5);
}

}  // namespace
