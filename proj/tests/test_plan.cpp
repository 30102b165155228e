#include <doctest.h>

#include "stp/fixtures.hpp"
#include "stp/plan.hpp"
#include "support.hpp"

using namespace stp;

namespace {

Economy lone_pair() {
  Economy e;
  e.horizon = 1;
  e.locations = {"A"};
  e.dist = {{1}};
  e.set_linear_costs(0, 0);
  e.drivers.push_back({true, 0, 0});
  e.riders.push_back({0, 0, 0, 10});
  return e;
}

}  // namespace

TEST_SUITE("plan") {
  TEST_CASE("a lone driver and rider: the pessimal price is 0, the optimal price the full value") {
    const Economy e = lone_pair();
    CHECK(plan_driver_pessimal(e).prices.at({0, 0, 0}) == 0);
    CHECK(plan_driver_optimal(e).prices.at({0, 0, 0}) == 10);
  }

  TEST_CASE("an economy without riders has zero prices and utilities") {
    Economy e = fixture_economy("optimal-replan");
    e.riders.clear();
    const Plan p = plan_driver_pessimal(e);
    for (Money x : p.prices.table) CHECK(x == 0);
    for (Money u : p.driver_utility) CHECK(u == 0);
    CHECK(verify_ce(e, p).ok());
  }

  TEST_CASE("both extreme plans are competitive equilibria with exact budget balance") {
    for (std::uint64_t seed = 4000; seed < 4100; ++seed) {
      const Economy e = testing::random_economy(seed);
      CAPTURE(seed);
      for (const auto kind : {PlanKind::Pessimal, PlanKind::Optimal}) {
        const Plan p = make_plan(e, kind);
        const CEReport r = verify_ce(e, p);
        CHECK_MESSAGE(r.ok(), r.summary(e));
        CHECK(r.budget_delta == 0);
      }
    }
  }

  TEST_CASE("driver best response agrees with path enumeration") {
    for (std::uint64_t seed = 4100; seed < 4160; ++seed) {
      const Economy e = testing::random_economy(seed);
      const Plan p = plan_driver_pessimal(e);
      for (const auto& d : e.drivers) {
        const Money oracle =
            testing::brute_force_best_path(e, d, [&](const Trip& t) { return std::max<Money>(p.prices.at(t), 0); });
        CHECK(best_driver_value(e, p.prices, d) == oracle);
      }
    }
  }

  TEST_CASE("utilities are the lattice endpoints and the plans differ only in prices") {
    for (std::uint64_t seed = 4200; seed < 4260; ++seed) {
      const Economy e = testing::random_economy(seed);
      const Plan lo = plan_driver_pessimal(e);
      const Plan hi = plan_driver_optimal(e);
      CHECK(lo.dispatch.welfare == hi.dispatch.welfare);
      for (int i = 0; i < e.num_drivers(); ++i) {
        CHECK(lo.driver_utility[i] == lo.potentials.driver(i));
        CHECK(hi.driver_utility[i] == hi.potentials.driver(i));
        CHECK(lo.driver_utility[i] <= hi.driver_utility[i]);
      }
    }
  }

  TEST_CASE("a tampered price is caught by the verifier") {
    const Economy e = fixture_economy("superbowl");
    Plan p = plan_driver_pessimal(e);
    p.prices.at({2, 1, 1}) += 30;
    CHECK_FALSE(verify_ce(e, p).ok());
    Plan q = plan_driver_pessimal(e);
    q.driver_payment[0] += 1;
    CHECK(verify_ce(e, q).budget_delta == -1);
  }

  TEST_CASE("extreme plans are in the core") {
    for (std::uint64_t seed = 4300; seed < 4340; ++seed) {
      const Economy e = testing::random_economy(seed);
      for (const auto kind : {PlanKind::Pessimal, PlanKind::Optimal}) {
        const CoreReport r = check_core_sampled(e, make_plan(e, kind), 300, seed);
        CAPTURE(seed);
        CHECK(r.ok());
        CHECK(r.checked > 0);
      }
    }
  }

  TEST_CASE("the core check finds a blocking coalition when a driver is underpaid") {
    const Economy e = lone_pair();
    Plan p = plan_driver_pessimal(e);
    p.rider_payment[0] = 0;
    p.driver_utility[0] = -5;
    CHECK_FALSE(check_core_sampled(e, p, 10, 1).ok());
  }

  TEST_CASE("rider VCG prices lie between zero and the pessimal price") {
    for (std::uint64_t seed = 4400; seed < 4460; ++seed) {
      const Economy e = testing::random_economy(seed);
      for (int j = 0; j < e.num_riders(); ++j) {
        const RiderVcg r = rider_vcg_price(e, j);
        if (!r.defined) continue;
        CAPTURE(seed);
        CAPTURE(j);
        CHECK(r.price >= 0);
        CHECK(r.price <= e.riders[j].value);
        CHECK(r.minimum_price_holds());
      }
    }
  }

  TEST_CASE("plan dump lists paths, requested trips and welfare") {
    const Economy e = fixture_economy("example3");
    const std::string dump = dump_plan(e, plan_driver_pessimal(e));
    CHECK(dump ==
          "# driver utility payment path\n"
          "driver 0 utility 5 payment 5 : (B,B,0) (B,B,1)[r0]\n"
          "driver 1 utility 5 payment 5 : (A,A,0) (A,A,1)[r1]\n"
          "# trip price riders-requesting riders-served\n"
          "price (A,A,1) 5 3 1\n"
          "price (B,B,1) 5 1 1\n"
          "welfare 14\n");
  }
}
