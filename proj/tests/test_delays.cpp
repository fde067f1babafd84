#include <cmath>
#include <random>

#include "doctest.h"
#include "fcfs/delays.hpp"
#include "support.hpp"

using namespace fcfs;

namespace {

std::vector<int> order(std::initializer_list<int> xs) { return xs; }

}  // namespace

TEST_SUITE("delays") {

TEST_CASE("geometric stage parameters") {
  CHECK(geometric_stage(testing::single_pair(0.5, 1.0), order({0})).p == doctest::Approx(1.0 / 3.0));
  const auto m = testing::three_by_three();
  CHECK(geometric_stage(m, order({0})).p == doctest::Approx(0.229412).epsilon(1e-5));
  CHECK(geometric_stage(m, order({0, 1, 2})).p == doctest::Approx(0.176471).epsilon(1e-5));
  CHECK_THROWS_AS(geometric_stage(m, order({0, 0})), Error);
  CHECK_THROWS_AS(geometric_stage(m, order({})), Error);
  try {
    geometric_stage(testing::disjoint_pairs(0.9), order({0}));
    FAIL("expected UnstableModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnstableModel);
  }
}

TEST_CASE("single pair closed forms") {
  const auto d = delay_moments(testing::single_pair(0.5, 1.0));
  REQUIRE(d.pair_delay[0][0]);
  CHECK(d.pair_delay[0][0]->mean == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.pair_delay[0][0]->variance == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(d.pair_wait[0][0]->mean == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.pair_wait[0][0]->variance == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(d.agent_delay[0]->mean == doctest::Approx(3.0));
}

TEST_CASE("3x3 delay tables: cells that agree with the tabulated values") {
  const auto d = delay_moments(testing::three_by_three());
  struct Cell {
    int j, i;
    double mean, sd;
  };
  // (s2,c3) mean and (s1,c2) sd are covered separately below.
  const Cell cells[] = {{0, 0, 7.63, 6.14}, {0, 1, 7.64, -1}, {1, 0, 7.14, 5.97}, {1, 2, -1, 5.41},
                        {2, 1, 7.40, 6.21}, {2, 2, 6.45, 5.46}};
  for (const auto& c : cells) {
    REQUIRE(d.pair_delay[c.j][c.i]);
    if (c.mean > 0) CHECK(std::abs(d.pair_delay[c.j][c.i]->mean - c.mean) <= 0.005);
    if (c.sd > 0) CHECK(std::abs(d.pair_delay[c.j][c.i]->stddev() - c.sd) <= 0.005);
  }
  const double agent_mean[] = {7.35, 7.50, 6.38};
  const double agent_sd[] = {6.05, 6.25, 5.44};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(d.agent_delay[i]->mean - agent_mean[i]) <= 0.005);
    CHECK(std::abs(d.agent_delay[i]->stddev() - agent_sd[i]) <= 0.005);
  }
}

TEST_CASE("3x3 delay cells pinned by the agent mixture") {
  // The tabulated agent mean E(L_c3) = 6.38 mixes E(L_{s2,c3}) and
  // E(L_{s3,c3}) = 6.45 with weights theta_c3. Solving for the first gives
  // a value near 6.31, which is what the enumeration returns.
  const auto m = testing::three_by_three();
  const auto r = matching_rates(m);
  const auto d = delay_moments(m);
  const double implied = (6.38 - r.theta[2][2] * 6.45) / r.theta[2][1];
  CHECK(std::abs(implied - 6.31) < 0.03);
  CHECK(std::abs(d.pair_delay[1][2]->mean - 6.31) <= 0.005);
  CHECK(std::abs(d.pair_delay[0][1]->stddev() - 6.305) < 0.001);
}

TEST_CASE("3x3 wait means") {
  const auto d = wait_moments(testing::three_by_three());
  const double tabulated[] = {4.33, 4.41, 3.75};
  const double sd[] = {3.90, 4.01, 3.53};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(d.agent_wait[i]->mean - tabulated[i]) <= 0.005);
    CHECK(std::abs(d.agent_wait[i]->stddev() - sd[i]) <= 0.005);
  }
}

TEST_CASE("moment invariants on random models") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto m = testing::random_model(rng, 5, 5);
    const auto a = analyze(m);
    const auto& d = a.delays;
    for (int i = 0; i < m.agent_count(); ++i) {
      double mix_mean = 0.0, mix_second = 0.0;
      for (int j = 0; j < m.good_count(); ++j) {
        const auto& p = d.pair_delay[j][i];
        CHECK(p.has_value() == m.compatible(j, i));
        if (!p) continue;
        CHECK(p->mean >= 1.0);
        CHECK(p->variance >= 0.0);
        CHECK(d.pair_wait[j][i]->mean > 0.0);
        CHECK(d.pair_wait[j][i]->variance >= 0.0);
        CHECK(d.pair_wait[j][i]->mean == doctest::Approx(p->mean / m.total_rate()).epsilon(1e-9));
        const double w = a.rates.theta[i][j];
        mix_mean += w * p->mean;
        mix_second += w * (p->variance + p->mean * p->mean);
      }
      CHECK(d.agent_delay[i]->mean == doctest::Approx(mix_mean).epsilon(1e-9));
      CHECK(d.agent_delay[i]->variance == doctest::Approx(mix_second - mix_mean * mix_mean).epsilon(1e-9));
    }
  }
}

TEST_CASE("delay PGF") {
  const auto m = testing::three_by_three();
  const auto d = delay_moments(m);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (!m.compatible(j, i)) continue;
      CHECK(std::abs(delay_pgf(m, j, i, 1.0) - 1.0) <= 1e-12);
      const double h = 1e-6;
      const double slope = (delay_pgf(m, j, i, 1.0) - delay_pgf(m, j, i, 1.0 - h)) / h;
      CHECK(std::abs(slope / d.pair_delay[j][i]->mean - 1.0) < 1e-4);
      const double k = 1e-5;
      const double curve =
          (delay_pgf(m, j, i, 1.0) - 2 * delay_pgf(m, j, i, 1.0 - k) + delay_pgf(m, j, i, 1.0 - 2 * k)) / (k * k);
      const auto& mo = *d.pair_delay[j][i];
      CHECK(curve == doctest::Approx(mo.variance + mo.mean * mo.mean - mo.mean).epsilon(1e-3));
    }
  }
  CHECK(delay_pgf(testing::single_pair(0.5, 1.0), 0, 0, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(delay_pgf(m, 0, 0, 0.0) == 0.0);
  CHECK_THROWS_AS(delay_pgf(m, 0, 0, 1.5), Error);
  CHECK_THROWS_AS(delay_pgf(m, 0, 0, -0.1), Error);
  try {
    delay_pgf(m, 0, 2, 0.5);
    FAIL("expected ZeroRate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroRate);
  }
}

TEST_CASE("wait MGF") {
  const auto m = testing::three_by_three();
  const auto d = wait_moments(m);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (!m.compatible(j, i)) continue;
      CHECK(std::abs(wait_mgf(m, j, i, 0.0) - 1.0) <= 1e-12);
      const double h = 1e-8;
      CHECK(std::abs((wait_mgf(m, j, i, h) - 1.0) / h / d.pair_wait[j][i]->mean - 1.0) < 1e-4);
    }
  }
  CHECK(wait_mgf(testing::single_pair(0.5, 1.0), 0, 0, 0.25) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(min_stage_rate(testing::single_pair(0.5, 1.0), 0) == doctest::Approx(0.5));
  try {
    wait_mgf(testing::single_pair(0.5, 1.0), 0, 0, 0.5);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
}

}
