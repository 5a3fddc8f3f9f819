#include <gtest/gtest.h>

#include "garmod/config.hpp"
#include "garmod/error.hpp"
#include "garmod/pattern.hpp"

using namespace garmod;

TEST(Config, DefaultsGiveTwoConnectorsPerUnitEdge) {
    Pattern p = new_pattern(PatternConfig{});
    EXPECT_EQ(p.config.connectors_per_unit(), 2);
    EXPECT_EQ(p.phase, Phase::Draw);
    EXPECT_EQ(p.revision, 0);
}

TEST(Config, DensityTwoGivesFourConnectorsAtTwoCm) {
    PatternConfig c;
    c.connector_density = 2;
    EXPECT_EQ(c.connectors_per_unit(), 4);
    EXPECT_DOUBLE_EQ(c.connector_spacing(), 2.0);
}

TEST(Config, RejectsLargeSeamAllowance) {
    PatternConfig c;
    c.seam_allowance = 5.0;
    try {
        new_pattern(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
    }
    c.seam_allowance = 4.0;
    EXPECT_THROW(new_pattern(c), Error);
    c.seam_allowance = -0.5;
    EXPECT_THROW(new_pattern(c), Error);
    c = PatternConfig{};
    c.connector_density = 0;
    EXPECT_THROW(new_pattern(c), Error);
    c = PatternConfig{};
    c.base_unit = 0.0;
    EXPECT_THROW(new_pattern(c), Error);
}

TEST(Config, ConnectorPositionsCentered) {
    PatternConfig c;
    EXPECT_EQ(connector_positions(8.0, c), (std::vector<double>{2, 6}));
    EXPECT_EQ(connector_positions(16.0, c), (std::vector<double>{2, 6, 10, 14}));
    c.connector_density = 2;
    EXPECT_EQ(connector_positions(8.0, c), (std::vector<double>{1, 3, 5, 7}));
    EXPECT_THROW(connector_positions(12.0, PatternConfig{}), Error);
}

TEST(Config, EqualEdgesAlignUnderTranslation) {
    for (int k = 1; k <= 4; ++k) {
        PatternConfig c;
        c.connector_density = k;
        for (int m = 1; m <= 6; ++m) {
            auto pos = connector_positions(8.0 * m, c);
            ASSERT_EQ(pos.size(), static_cast<size_t>(2 * k * m));
            // Symmetric about the midpoint, so a reversed copy of an equal edge lines up.
            for (size_t i = 0; i < pos.size(); ++i) {
                EXPECT_NEAR(pos[i] + pos[pos.size() - 1 - i], 8.0 * m, 1e-12);
            }
        }
    }
}
