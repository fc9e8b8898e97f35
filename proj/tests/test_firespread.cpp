#include <gtest/gtest.h>

#include "fireplan/firespread.hpp"
#include "fireplan/generator.hpp"

using namespace fireplan;

namespace {

// Table-style schedule: 14/16 before the change, then 19/17 at 4.5 h
// (scenario 1) or 21/19 at 6.5 h (scenario 2).
FireModel default_model(Point ignition = {0.0, 0.0}) {
    return make_fire_model(ignition, 14.0, 16.0, {{4.5, {19.0, 17.0}}, {6.5, {21.0, 19.0}}});
}

// Independent oracle: bisection on the ellipse-inclusion predicate.
std::optional<double> bisect_impact(const Point& p, const FireModel& m, int scenario, double horizon) {
    const double dx = p.x - m.ignition.x, dy = p.y - m.ignition.y;
    auto inside = [&](double t) {
        if (dx == 0.0 && dy == 0.0) return true;
        auto [rx, ry] = m.axes_at(scenario, t);
        if (rx <= 0.0 || ry <= 0.0) return false;
        double g = (dx / rx) * (dx / rx) + (dy / ry) * (dy / ry);
        return g <= 1.0;
    };
    if (inside(0.0)) return 0.0;
    if (!inside(horizon)) return std::nullopt;
    double lo = 0.0, hi = horizon;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (inside(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

TEST(ImpactTime, OnAxisPhaseOne) {
    FireModel m = default_model();
    auto t = impact_time({14.0, 0.0}, m, 1, 100.0);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, 1.0, 1e-12);
}

TEST(ImpactTime, IgnitionPointIsZero) {
    FireModel m = default_model();
    auto t = impact_time({0.0, 0.0}, m, 1, 100.0);
    ASSERT_TRUE(t.has_value());
    EXPECT_DOUBLE_EQ(*t, 0.0);
}

TEST(ImpactTime, SecondPhaseOnYAxisMatchesBisection) {
    FireModel m = default_model();
    // (0, 80): phase 1 reaches 72 km by 4.5 h, remaining 8 km at 17 km/h
    auto t = impact_time({0.0, 80.0}, m, 1, 100.0);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, 4.5 + 8.0 / 17.0, 1e-9);
    auto tb = bisect_impact({0.0, 80.0}, m, 1, 100.0);
    ASSERT_TRUE(tb.has_value());
    EXPECT_NEAR(*t, *tb, 1e-9);
}

TEST(ImpactTime, BeyondHorizonIsNone) {
    FireModel m = default_model();
    EXPECT_FALSE(impact_time({0.0, 80.0}, m, 1, 4.0).has_value());
}

TEST(ImpactTime, ClosedFormMatchesBisectionOnRandomPoints) {
    FireModel m = default_model();
    const double horizon = 12.0;
    Pcg32 rng(2024, 1);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Point p{rng.uniform() * 240.0 - 120.0, rng.uniform() * 240.0 - 120.0};
        for (int sc = 1; sc <= 2; ++sc) {
            auto a = impact_time(p, m, sc, horizon);
            auto b = bisect_impact(p, m, sc, horizon);
            ASSERT_EQ(a.has_value(), b.has_value()) << "point (" << p.x << "," << p.y << ") scenario " << sc;
            if (a) {
                EXPECT_NEAR(*a, *b, 1e-6) << "point (" << p.x << "," << p.y << ") scenario " << sc;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(ImpactTime, ContinuousAcrossPhaseBoundary) {
    FireModel m = default_model();
    // Points just inside/outside the front position at the phase change.
    auto [rx, ry] = m.axes_at(1, 4.5);
    for (double eps : {1e-4, 1e-5, 1e-6}) {
        auto before = impact_time({rx - eps, 0.0}, m, 1, 100.0);
        auto after = impact_time({rx + eps, 0.0}, m, 1, 100.0);
        ASSERT_TRUE(before && after);
        EXPECT_LE(*before, 4.5 + 1e-9);
        EXPECT_GE(*after, 4.5 - 1e-9);
        EXPECT_NEAR(*before, *after, 1e-4);
    }
    (void)ry;
}

TEST(ImpactTime, InclusionMonotone) {
    FireModel m = default_model();
    Pcg32 rng(99, 7);
    for (int i = 0; i < 200; ++i) {
        Point p{rng.uniform() * 150.0, rng.uniform() * 150.0};
        auto t = impact_time(p, m, 2, 12.0);
        if (!t) continue;
        for (double dt : {0.1, 0.5, 2.0}) {
            auto [rx, ry] = m.axes_at(2, *t + dt);
            double dx = p.x, dy = p.y;
            EXPECT_LE((dx / rx) * (dx / rx) + (dy / ry) * (dy / ry), 1.0 + 1e-9);
        }
    }
}

TEST(ImpactTime, ScenariosAgreeBeforeFirstChange) {
    FireModel m = default_model();
    Pcg32 rng(5, 5);
    for (int i = 0; i < 300; ++i) {
        Point p{rng.uniform() * 70.0, rng.uniform() * 70.0};
        auto t1 = impact_time(p, m, 1, 100.0);
        if (!t1 || *t1 > 4.5) continue;
        auto t2 = impact_time(p, m, 2, 100.0);
        ASSERT_TRUE(t2.has_value());
        EXPECT_NEAR(*t1, *t2, 1e-9);
    }
}

TEST(DeriveWindows, BasicRule) {
    // impact 3.0 with a = 0.5, TW = 1 -> [1.5, 2.5]
    FireModel m = default_model();
    std::vector<Asset> assets;
    Asset a;
    a.id = 1;
    a.x = 42.0; // phase-1 impact at 3.0 on the x axis
    a.y = 0.0;
    a.value = 10;
    a.service = 0.5;
    a.requirements = {1};
    assets.push_back(a);
    ScenarioSet scen{4.5, {{1, 0.6, 4.5}, {2, 0.4, 6.5}}};
    DerivedWindows dw = derive_windows(assets, m, scen, 10.0, 1.0, 1.0);
    ASSERT_TRUE(dw.windows.stage1.count(1));
    EXPECT_NEAR(dw.windows.stage1[1].open, 1.5, 1e-9);
    EXPECT_NEAR(dw.windows.stage1[1].close, 2.5, 1e-9);
    EXPECT_TRUE(dw.categories.at(1).is_stage1());
}

TEST(DeriveWindows, TooCloseToIgnitionIsDropped) {
    // impact 0.4 < service 0.5: cannot complete before impact
    FireModel m = default_model();
    std::vector<Asset> assets;
    Asset a;
    a.id = 1;
    a.x = 5.6; // impact at 0.4
    a.y = 0.0;
    a.value = 10;
    a.service = 0.5;
    a.requirements = {1};
    assets.push_back(a);
    ScenarioSet scen{4.5, {{1, 0.6, 4.5}, {2, 0.4, 6.5}}};
    DerivedWindows dw = derive_windows(assets, m, scen, 10.0, 1.0, 1.0);
    EXPECT_TRUE(dw.windows.stage1.empty());
    ASSERT_EQ(dw.dropped.size(), 1u);
    EXPECT_EQ(dw.dropped[0], std::make_pair(1, 0));
}

TEST(DeriveWindows, Stage1CloseFromImpactThree) {
    // stage-1 impact exactly 3 gives close 2.5 with a = 0.5 (Appendix-style row)
    FireModel m = default_model();
    std::vector<Asset> assets;
    Asset a;
    a.id = 1;
    a.x = 0.0;
    a.y = 48.0; // 48/16 = 3.0
    a.value = 5;
    a.service = 0.5;
    a.requirements = {1};
    assets.push_back(a);
    ScenarioSet scen{4.5, {{1, 0.6, 4.5}, {2, 0.4, 6.5}}};
    DerivedWindows dw = derive_windows(assets, m, scen, 10.0, 1.0, 1.0);
    EXPECT_NEAR(dw.windows.stage1[1].close, 2.5, 1e-9);
}

TEST(Classify, PreChangeEllipseIsStage1) {
    FireModel m = default_model();
    std::vector<Asset> assets;
    Asset a;
    a.id = 1;
    a.x = 30.0;
    a.y = 30.0; // inside the ST-front (63 x 72 ellipse)
    a.value = 1;
    a.service = 0.5;
    a.requirements = {1};
    assets.push_back(a);
    ScenarioSet scen{4.5, {{1, 0.6, 4.5}, {2, 0.4, 6.5}}};
    auto cats = classify(assets, m, scen, 12.0);
    EXPECT_TRUE(cats.at(1).is_stage1());
}

TEST(Classify, BothAndSingleScenario) {
    FireModel m = default_model();
    std::vector<Asset> assets;
    Asset both;
    both.id = 1;
    both.x = 0.0;
    both.y = 90.0; // impacted 5.56 (sc 1) / 5.625 (sc 2): both after ST
    both.value = 1;
    both.service = 0.5;
    both.requirements = {1};
    Asset single;
    single.id = 2;
    single.x = 105.0; // x-axis: sc-1 front leads; only scenario 1 within horizon 7
    single.y = 0.0;
    single.value = 1;
    single.service = 0.5;
    single.requirements = {1};
    Asset none;
    none.id = 3;
    none.x = 200.0;
    none.y = 200.0;
    none.value = 1;
    none.service = 0.5;
    none.requirements = {1};
    assets = {both, single, none};
    ScenarioSet scen{4.5, {{1, 0.6, 4.5}, {2, 0.4, 6.5}}};
    auto cats = classify(assets, m, scen, 7.0);
    EXPECT_TRUE(cats.at(1).all_scenarios(2));
    EXPECT_TRUE(cats.at(2).single_scenario());
    EXPECT_TRUE(cats.at(2).in_scenario(1));
    EXPECT_TRUE(cats.at(3).is_not_at_risk());
}

TEST(Classify, PartitionsAssetSet) {
    FireModel m = default_model({-10.0, -10.0});
    Pcg32 rng(77, 3);
    std::vector<Asset> assets;
    for (int i = 0; i < 60; ++i) {
        Asset a;
        a.id = i + 1;
        a.x = rng.uniform() * 80.0;
        a.y = rng.uniform() * 80.0;
        a.value = 1;
        a.service = 0.5;
        a.requirements = {1};
        assets.push_back(a);
    }
    ScenarioSet scen{4.5, {{1, 0.6, 4.5}, {2, 0.4, 6.5}}};
    auto cats = classify(assets, m, scen, 7.0);
    EXPECT_EQ(cats.size(), assets.size());
    for (const auto& [id, cat] : cats) {
        int kinds = 0;
        if (cat.is_stage1()) ++kinds;
        if (cat.is_not_at_risk()) ++kinds;
        if (cat.kind == RiskCategory::Kind::at_risk) {
            ++kinds;
            EXPECT_FALSE(cat.scenarios.empty());
        }
        EXPECT_EQ(kinds, 1);
    }
}
