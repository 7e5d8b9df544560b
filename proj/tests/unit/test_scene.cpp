#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "lapdsm/errors.hpp"
#include "lapdsm/numerics.hpp"
#include "lapdsm/scene.hpp"

using namespace lapdsm;

TEST(Aperture, ConfigOneAngles) {
    const auto ap = ApertureSet::config_one();
    const auto t = ap.receiver_angles();
    ASSERT_EQ(t.size(), 100u);
    const double a = 2.0 * kPi / 5.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_GT(t[i], -a);
        EXPECT_LT(t[i], a);
        if (i) {
            EXPECT_GT(t[i], t[i - 1]);
        }
    }
    EXPECT_NEAR(t.front(), -a + a / 100.0, 1e-15);
    EXPECT_NEAR(ap.measure(), 4.0 * kPi / 5.0, 1e-15);
}

TEST(Aperture, ConfigTwoAngles) {
    const auto ap = ApertureSet::config_two();
    const auto t = ap.receiver_angles();
    ASSERT_EQ(t.size(), 90u);
    ASSERT_EQ(ap.arcs().size(), 3u);
    std::size_t q = 0;
    for (const Arc& arc : ap.arcs()) {
        EXPECT_EQ(arc.receivers, 30);
        EXPECT_NEAR(arc.alpha, kPi / 8.0, 1e-15);
        for (int j = 0; j < arc.receivers; ++j, ++q) {
            EXPECT_GT(t[q], arc.beta - arc.alpha);
            EXPECT_LT(t[q], arc.beta + arc.alpha);
            if (j) {
                EXPECT_GT(t[q], t[q - 1]);
            }
        }
    }
}

TEST(Aperture, SingleReceiverAtMidpoint) {
    const ApertureSet ap({{0.4, 1.1, 1}});
    ASSERT_EQ(ap.receiver_angles().size(), 1u);
    EXPECT_DOUBLE_EQ(ap.receiver_angles()[0], 1.1);
}

TEST(Aperture, WeightsSumToMeasure) {
    const ApertureSet ap({{0.3, 0.0, 7}, {0.5, 2.0, 13}});
    double s = 0.0;
    for (double w : ap.weights()) s += w;
    EXPECT_NEAR(s, ap.measure(), 1e-14);
}

TEST(Aperture, Validation) {
    EXPECT_THROW(ApertureSet(std::vector<Arc>{}), ValidationError);
    EXPECT_THROW(ApertureSet({{0.0, 0.0, 5}}), ValidationError);
    EXPECT_THROW(ApertureSet({{4.0, 0.0, 5}}), ValidationError);
    EXPECT_THROW(ApertureSet({{0.5, 4.0, 5}}), ValidationError);
    EXPECT_THROW(ApertureSet({{0.5, 0.0, 0}}), ValidationError);
    EXPECT_THROW(ApertureSet({{0.5, 0.0, 5}, {0.5, 0.9, 5}}), ValidationError);
    // Overlap across the branch cut.
    EXPECT_THROW(ApertureSet({{0.3, 3.0, 5}, {0.3, -3.0, 5}}), ValidationError);
    EXPECT_NO_THROW(ApertureSet({{0.5, 0.0, 5}, {0.5, 1.0, 5}}));
    EXPECT_TRUE(ApertureSet::full_circle(8).is_full_circle());
    EXPECT_FALSE(ApertureSet::config_one().is_full_circle());
}

TEST(Scene, RefractiveIndexExamples) {
    const Scene s11 = presets::example_1_1();
    EXPECT_EQ(refractive_index_at(s11, {-0.8, -0.4}), 2.0);
    EXPECT_EQ(refractive_index_at(s11, {0.9, 0.9}), 1.0);
    const Scene s12 = presets::example_1_2();
    EXPECT_EQ(refractive_index_at(s12, {0.2, -0.2}), 1.0);
    EXPECT_EQ(refractive_index_at(s12, {0.55, -0.2}), 2.0);
}

TEST(Scene, SmallestContainingShapeWins) {
    const Scene s(8.0, {}, {{Disk{{0, 0}, 0.5}, 2.0}, {Disk{{0, 0}, 0.2}, 3.0}}, {{1, 0}},
                  ApertureSet::config_one());
    EXPECT_EQ(refractive_index_at(s, {0.1, 0.0}), 3.0);
    EXPECT_EQ(refractive_index_at(s, {0.3, 0.0}), 2.0);
}

TEST(Scene, PiecewiseConstant) {
    const Scene s = presets::example_1_1();
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int i = 0; i < 500; ++i) {
        const Vec2 p{u(gen), u(gen)};
        double dist = 1e9;
        for (double cx : {-0.8, 0.0, 0.8}) dist = std::min(dist, std::abs(norm(p - Vec2{cx, -0.4}) - 0.15));
        const Vec2 q = p + 0.9 * dist * direction(u(gen) * 3.0);
        EXPECT_EQ(refractive_index_at(s, p), refractive_index_at(s, q));
    }
}

TEST(Scene, Validation) {
    const auto ap = ApertureSet::config_one();
    EXPECT_THROW(Scene(0.0, {}, {}, {{1, 0}}, ap), ValidationError);
    EXPECT_THROW(Scene(8.0, {}, {{Disk{{0.95, 0}, 0.15}, 2.0}}, {{1, 0}}, ap), ValidationError);
    EXPECT_THROW(Scene(8.0, {}, {{Disk{{0, 0}, 0.15}, 1.0}}, {{1, 0}}, ap), ValidationError);
    EXPECT_THROW(Scene(8.0, {}, {{Ring{{0, 0}, 0.3, 0.2}, 2.0}}, {{1, 0}}, ap), ValidationError);
    EXPECT_THROW(Scene(8.0, {}, {}, {{1, 1}}, ap), ValidationError);
}

TEST(Scene, PresetIncidences) {
    EXPECT_EQ(presets::example_1_1().incidences().size(), 1u);
    EXPECT_EQ(presets::example_1_2().incidences().size(), 2u);
    EXPECT_EQ(presets::example_2_1().aperture(), ApertureSet::config_two());
    const auto inc = presets::example_2_2().incidences();
    ASSERT_EQ(inc.size(), 3u);
    EXPECT_NEAR(inc[1].y, std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_THROW(presets::by_name("ex9"), ValidationError);
}

TEST(Scene, JsonRoundTrip) {
    for (const auto& name : presets::names()) {
        const Scene s = presets::by_name(name);
        const Scene t = scene_from_json(scene_to_json(s));
        EXPECT_EQ(t.wavenumber(), s.wavenumber());
        EXPECT_EQ(t.domain(), s.domain());
        EXPECT_EQ(t.aperture(), s.aperture());
        EXPECT_EQ(t.incidences().size(), s.incidences().size());
        ASSERT_EQ(t.scatterers().size(), s.scatterers().size());
        for (double x = -0.95; x < 1.0; x += 0.1) {
            for (double y = -0.95; y < 1.0; y += 0.1) {
                EXPECT_EQ(refractive_index_at(t, {x, y}), refractive_index_at(s, {x, y}));
            }
        }
    }
}

TEST(Scene, JsonErrors) {
    EXPECT_THROW(scene_from_json("{"), ValidationError);
    EXPECT_THROW(scene_from_json("{\"wavenumber\": 8}"), ValidationError);
    EXPECT_THROW(load_scene("/nonexistent/scene.json"), ValidationError);
}

TEST(SamplingGrid, RasterOrder) {
    const SamplingGrid g({-1, 1, -1, 1}, 4);
    ASSERT_EQ(g.size(), 16u);
    EXPECT_DOUBLE_EQ(g.point(0).x, -0.75);
    EXPECT_DOUBLE_EQ(g.point(0).y, 0.75);
    EXPECT_DOUBLE_EQ(g.point(1).x, -0.25);
    EXPECT_DOUBLE_EQ(g.point(4).y, 0.25);
    EXPECT_DOUBLE_EQ(g.spacing_x(), 0.5);
    for (const Vec2& p : g.points()) EXPECT_TRUE(g.domain().contains(p));
    EXPECT_THROW(SamplingGrid({}, 0), ValidationError);
}

namespace {

FarFieldData synthetic_data(const ApertureSet& ap, int incidences) {
    FarFieldData d{ap, {}, 0.0, 0};
    for (int j = 0; j < incidences; ++j) {
        std::vector<Complex> row;
        for (double t : ap.receiver_angles()) row.push_back(std::polar(1.0 + 0.3 * j, 3.0 * t + j));
        d.samples.push_back(row);
    }
    return d;
}

}  // namespace

TEST(AddNoise, ZeroDeltaIsIdentity) {
    const auto d = synthetic_data(ApertureSet::config_one(), 2);
    const auto n = add_noise(d, 0.0, 3);
    EXPECT_EQ(n.samples, d.samples);
}

TEST(AddNoise, Deterministic) {
    const auto d = synthetic_data(ApertureSet::config_two(), 3);
    EXPECT_EQ(add_noise(d, 0.05, 3).samples, add_noise(d, 0.05, 3).samples);
    EXPECT_NE(add_noise(d, 0.05, 3).samples, add_noise(d, 0.05, 4).samples);
}

TEST(AddNoise, RejectsNegative) {
    EXPECT_THROW(add_noise(synthetic_data(ApertureSet::config_one(), 1), -0.1, 0), ValidationError);
}

TEST(AddNoise, ExpectedRelativeLevel) {
    const auto ap = ApertureSet::config_one();
    const auto d = synthetic_data(ap, 1);
    const double delta = 0.05;
    double mean = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        const auto n = add_noise(d, delta, static_cast<std::uint64_t>(s));
        std::vector<Complex> diff(d.samples[0].size());
        for (std::size_t q = 0; q < diff.size(); ++q) diff[q] = n.samples[0][q] - d.samples[0][q];
        mean += arc_norm(diff, ap) / arc_norm(d.samples[0], ap);
    }
    mean /= seeds;
    EXPECT_NEAR(mean / (std::sqrt(2.0) * delta), 1.0, 0.05);
}

TEST(AddNoise, LinearInDelta) {
    const auto d = synthetic_data(ApertureSet::config_one(), 2);
    const auto a = add_noise(d, 0.01, 8);
    const auto b = add_noise(d, 0.02, 8);
    for (std::size_t j = 0; j < d.samples.size(); ++j) {
        for (std::size_t q = 0; q < d.samples[j].size(); ++q) {
            const Complex da = a.samples[j][q] - d.samples[j][q];
            const Complex db = b.samples[j][q] - d.samples[j][q];
            // Equal up to the rounding of the final addition.
            EXPECT_NEAR(std::abs(db - 2.0 * da), 0.0, 1e-15);
        }
    }
}

TEST(AddNoise, IncidencesIndependent) {
    auto d = synthetic_data(ApertureSet::config_one(), 2);
    d.samples[1] = d.samples[0];
    const auto n = add_noise(d, 0.1, 1);
    EXPECT_NE(n.samples[0], n.samples[1]);
}
