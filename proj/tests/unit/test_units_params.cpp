#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "rydgate/errors.hpp"
#include "rydgate/levels.hpp"
#include "rydgate/params.hpp"
#include "rydgate/units.hpp"

using namespace rydgate;

TEST(Units, RoundTrips) {
  EXPECT_DOUBLE_EQ(ghz_to_angular(1.0), 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(angular_to_ghz(ghz_to_angular(1.54)), 1.54);
  EXPECT_DOUBLE_EQ(mhz_to_angular(1000.0), ghz_to_angular(1.0));
  EXPECT_NEAR(angular_to_mhz(mhz_to_angular(124.07)), 124.07, 1e-12);
  EXPECT_DOUBLE_EQ(lifetime_us_to_rate(1000.0), 1e-6);
}

TEST(Levels, BasisOrderAndNames) {
  EXPECT_EQ(index_of(Level::g), 0u);
  EXPECT_EQ(index_of(Level::q1), 2u);
  EXPECT_EQ(index_of(Level::r_pp3h), 9u);
  EXPECT_EQ(composite_index(Level::q1, Level::q0), 21u);
  EXPECT_FALSE(is_rydberg(Level::q1));
  EXPECT_TRUE(is_rydberg(Level::r_target));
  for (Level l : kAllLevels) EXPECT_EQ(level_from_string(to_string(l)), l);
  for (Manifold m : kAllManifolds) EXPECT_EQ(manifold_from_string(to_string(m)), m);
  EXPECT_FALSE(level_from_string("r_nope").has_value());
  EXPECT_EQ(manifold_of(Level::r_p1h), Manifold::n_prime);
  EXPECT_EQ(manifold_of(Level::r_pp3h), Manifold::n_dprime);
  EXPECT_FALSE(manifold_of(Level::q0).has_value());
}

TEST(Params, BuiltinTableValues) {
  const auto s1 = load_setting("S1");
  EXPECT_EQ(s1.n, 107);
  EXPECT_EQ(s1.n_prime, 106);
  EXPECT_EQ(s1.n_dprime, 105);
  EXPECT_NEAR(angular_to_ghz(s1.delta_plus), -5.534, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s1.delta_minus), 5.694, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s1.delta_p1_half), -2.961, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s1.delta_p3_half), -3.161, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s1.delta_pp1_half), 3.256, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s1.delta_pp3_half), 3.051, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s1.b0), 1.54, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s1.omega_q), 9.1926, 1e-12);

  const auto s2 = load_setting("S2");
  EXPECT_EQ(s2.n, 141);
  EXPECT_EQ(s2.n_prime, 138);
  EXPECT_EQ(s2.n_dprime, 137);
  EXPECT_NEAR(angular_to_ghz(s2.b0), 0.68, 1e-12);
  EXPECT_NEAR(angular_to_ghz(s2.delta_pp3_half), 1.405, 1e-12);
  EXPECT_GT(s2.tau_n_us, s1.tau_n_us);

  EXPECT_NO_THROW(s1.validate());
  EXPECT_NO_THROW(s2.validate());
  EXPECT_THROW(load_setting("S9"), ConfigError);
}

TEST(Params, RelativeBlockadeFallback) {
  const auto s = load_setting("S1");
  EXPECT_DOUBLE_EQ(s.relative_blockade(Manifold::n, Manifold::n), 1.0);
  EXPECT_DOUBLE_EQ(s.relative_blockade(Manifold::n_plus, Manifold::n), 1.02);
  EXPECT_DOUBLE_EQ(s.relative_blockade(Manifold::n_prime, Manifold::n_dprime), 0.85 * 0.80);

  RelativeBlockades empty;
  EXPECT_THROW((void)empty.at(Manifold::n, Manifold::n_plus), ConfigError);
}

TEST(Params, DecayRates) {
  auto s = load_setting("S1");
  EXPECT_DOUBLE_EQ(s.decay_rate(Level::r_target), 1.0 / (s.tau_n_us * 1e3));
  s.lifetime_overrides_us[Level::r_plus] = 100.0;
  EXPECT_DOUBLE_EQ(s.lifetime_us(Level::r_plus), 100.0);
  EXPECT_DOUBLE_EQ(s.lifetime_us(Level::r_minus), s.tau_n_us);
}

TEST(Params, OverrideText) {
  const auto s = parse_setting_text(
      "# lower blockade\n"
      "base = S2\n"
      "name = S2-low\n"
      "b0_GHz = 0.5   \n"
      "\n"
      "tau_n_us = 1200\n"
      "b_n_nprime = 0.9\n");
  EXPECT_EQ(s.name, "S2-low");
  EXPECT_EQ(s.n, 141);
  EXPECT_NEAR(angular_to_ghz(s.b0), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(s.tau_n_us, 1200.0);
  EXPECT_DOUBLE_EQ(s.relative_blockade(Manifold::n, Manifold::n_prime), 0.9);
}

TEST(Params, OverrideTextErrors) {
  EXPECT_THROW(parse_setting_text("base = S1\nbogus_key = 1\n"), ConfigError);
  EXPECT_THROW(parse_setting_text("base = S1\nb0_GHz = fast\n"), ConfigError);
  EXPECT_THROW(parse_setting_text("base = S1\nb0_GHz\n"), ConfigError);
  EXPECT_THROW(parse_setting_text("base = S1\ntau_n_us = -1\n"), ConfigError);
  EXPECT_THROW(parse_setting_text("base = S1\ndelta_plus_GHz = 0\n"), ConfigError);
  EXPECT_THROW(parse_setting_text("base = S1\nn = 10.5\n"), ConfigError);
  EXPECT_THROW(parse_setting_text("b0_GHz = 1.0\n"), ConfigError);
}

TEST(Params, ValidateNamesViolation) {
  auto s = load_setting("S1");
  s.decay_branch_g = 0.9;
  try {
    s.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("decay_branch"), std::string::npos);
  }
}

TEST(Params, LoadSettingFile) {
  const auto path = std::filesystem::temp_directory_path() / "rydgate_setting_test.txt";
  {
    std::ofstream f(path);
    f << "base = S1\nb0_GHz = 2.0\n";
  }
  const auto s = load_setting_file(path);
  EXPECT_NEAR(angular_to_ghz(s.b0), 2.0, 1e-12);
  std::filesystem::remove(path);
  EXPECT_THROW(load_setting_file(path), ConfigError);
}
