#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "alliance_lab/dynamics.hpp"

using namespace alab;

namespace {

double closed_form_player2_payoff(double x, double y, double z) {
  return x * y * z / 3 + (1 - x) * (1 - y) * (1 - z) / 3 + x * y * (1 - z) +
         (1 - x) * (1 - y) * z;
}

double finite_difference(const ThreePlayerGame& g, PolicyTriple pi, int player,
                         double h = 1e-5) {
  PolicyTriple hi = pi, lo = pi;
  hi[player] += h;
  lo[player] -= h;
  return (expected_payoffs(g, hi)[player] - expected_payoffs(g, lo)[player]) /
         (2 * h);
}

}  // namespace

TEST_CASE("expected_payoffs: polynomial, symmetry, table lookups") {
  const auto ooo = odd_one_out_game();
  auto rng = make_rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const PolicyTriple pi{uniform01(rng), uniform01(rng), uniform01(rng)};
    const auto u = expected_payoffs(ooo, pi);
    CHECK(u[2] == doctest::Approx(closed_form_player2_payoff(pi.x, pi.y, pi.z))
                      .epsilon(1e-12));
  }

  const auto any = build_pq_game(0.7, 0.2);
  const auto uniform = expected_payoffs(any, {0.5, 0.5, 0.5});
  for (int i = 0; i < 3; ++i) CHECK(uniform[i] == doctest::Approx(1.0 / 3));

  // Deterministic policies index the payoff table directly.
  const auto matching = matching_game();
  const auto corner = expected_payoffs(matching, {1, 1, 0});
  CHECK(corner[0] == doctest::Approx(0.5));
  CHECK(corner[1] == doctest::Approx(0.5));
  CHECK(corner[2] == doctest::Approx(0.0));

  // Payoffs sum to one for random games and policies.
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = build_pq_game(uniform01(rng), uniform01(rng));
    const auto u = expected_payoffs(
        g, {uniform01(rng), uniform01(rng), uniform01(rng)});
    CHECK(u[0] + u[1] + u[2] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("exact_gradient: closed form and finite differences") {
  const auto ooo = odd_one_out_game();
  auto rng = make_rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = uniform01(rng);
    const PolicyTriple pi{x, 1.0 - x, uniform01(rng)};
    CHECK(exact_gradient(ooo, pi, 2) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(exact_gradient(ooo, {0, 0, uniform01(rng)}, 2) ==
        doctest::Approx(2.0 / 3));
  for (int trial = 0; trial < 1000; ++trial) {
    const PolicyTriple pi{uniform01(rng), uniform01(rng), uniform01(rng)};
    CHECK(exact_gradient(ooo, pi, 2) ==
          doctest::Approx(2.0 * (1 - pi.x - pi.y) / 3).epsilon(1e-12));
    const auto g = build_pq_game(uniform01(rng), uniform01(rng));
    for (int player = 0; player < 3; ++player) {
      const double fd = finite_difference(g, pi, player);
      CHECK(std::abs(exact_gradient(g, pi, player) - fd) < 1e-8);
    }
  }
}

TEST_CASE("zero-sum conservation: ascent field of the total payoff vanishes") {
  auto rng = make_rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = build_pq_game(uniform01(rng), uniform01(rng));
    const PolicyTriple pi{uniform01(rng), uniform01(rng), uniform01(rng)};
    for (int j = 0; j < 3; ++j) {
      // d(sum of payoffs)/d pi_j via finite differences of the total.
      PolicyTriple hi = pi, lo = pi;
      hi[j] += 1e-6;
      lo[j] -= 1e-6;
      const auto uh = expected_payoffs(g, hi);
      const auto ul = expected_payoffs(g, lo);
      const double total =
          (uh[0] + uh[1] + uh[2] - ul[0] - ul[1] - ul[2]) / 2e-6;
      CHECK(std::abs(total) < 1e-9);
    }
  }
}

TEST_CASE("simulate_learning: Matching converges to matching the stubborn") {
  DynamicsConfig config;
  config.learners = {true, true, false};
  config.stubborn_policy = 0.0;  // stubborn plays action 1
  config.learning_rate = 1.0;
  config.n_steps = 200000;
  auto rng = make_rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const PolicyTriple init{0.2 + 0.6 * uniform01(rng),
                            0.2 + 0.6 * uniform01(rng), 0.0};
    const auto traj = simulate_learning(matching_game(), config, init);
    const auto& end = traj.back();
    CHECK(end.policy.x < 1e-3);  // action-0 prob -> 0, i.e. matching
    CHECK(end.policy.y < 1e-3);
    CHECK(end.payoffs[0] == doctest::Approx(1.0 / 3).epsilon(1e-3));
    CHECK(end.payoffs[1] == doctest::Approx(1.0 / 3).epsilon(1e-3));
  }
}

TEST_CASE("simulate_learning: Odd One Out learners end with nothing") {
  // Both learners flee the stubborn action, match each other, and hand the
  // stubborn agent the win. The boundary is only approached at a power-law
  // rate, so drive the logit flow hard and keep inits away from the
  // one-learner-wins rest points near the simplex boundary.
  DynamicsConfig config;
  config.learners = {true, true, false};
  config.stubborn_policy = 0.0;
  config.learning_rate = 200.0;
  config.n_steps = 500000;
  auto rng = make_rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    // Generic interior init, slightly asymmetric.
    const PolicyTriple init{0.3 + 0.4 * uniform01(rng),
                            0.3 + 0.4 * uniform01(rng), 0.0};
    const auto traj = simulate_learning(odd_one_out_game(), config, init);
    const auto& end = traj.back();
    CHECK(end.payoffs[0] < 1e-3);
    CHECK(end.payoffs[1] < 1e-3);
  }
}

TEST_CASE("simulate_learning: fixed point stays fixed; probabilities interior") {
  DynamicsConfig config;
  config.learning_rate = 0.1;
  config.n_steps = 1000;
  config.parameterization = Parameterization::kDirectProbability;
  // The uniform profile is the interior fixed point of the 3-learner
  // Odd One Out field.
  const auto traj =
      simulate_learning(odd_one_out_game(), config, {0.5, 0.5, 0.5});
  for (const auto& pt : traj) {
    CHECK(pt.policy.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pt.policy.y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pt.policy.z == doctest::Approx(0.5).epsilon(1e-12));
  }

  config.parameterization = Parameterization::kLogitSigmoid;
  config.n_steps = 5000;
  const auto traj2 =
      simulate_learning(odd_one_out_game(), config, {0.3, 0.6, 0.8});
  for (const auto& pt : traj2) {
    for (int i = 0; i < 3; ++i) {
      CHECK(pt.policy[i] > 0.0);
      CHECK(pt.policy[i] < 1.0);
    }
  }
}

TEST_CASE("sensitivity: nearby interior inits diverge in Odd One Out") {
  // Full 3-learner system: which corner wins depends on the initial tilt.
  DynamicsConfig config;
  config.learning_rate = 1.0;
  config.n_steps = 50000;
  const PolicyTriple a{0.495, 0.505, 0.5};
  const PolicyTriple b{0.505, 0.495, 0.5};
  const auto ta = simulate_learning(odd_one_out_game(), config, a);
  const auto tb = simulate_learning(odd_one_out_game(), config, b);
  const double init_dist = std::hypot(a.x - b.x, a.y - b.y);
  const double end_dist = std::hypot(ta.back().policy.x - tb.back().policy.x,
                                     ta.back().policy.y - tb.back().policy.y);
  CHECK(end_dist > init_dist);
}

TEST_CASE("fixed_point_report for Odd One Out") {
  const auto report = fixed_point_report(odd_one_out_game());
  CHECK(report.analytic);
  bool interior_unstable = false;
  int boundary_families = 0;
  for (const auto& e : report.entries) {
    if (e.pattern == "(0.5, 0.5, 0.5)") interior_unstable = !e.stable;
    if (e.pattern.find('z') != std::string::npos) ++boundary_families;
  }
  CHECK(interior_unstable);
  CHECK(boundary_families == 6);

  // Numeric cross-check: a perturbation of the interior point diverges.
  DynamicsConfig config;
  config.learning_rate = 0.1;
  config.n_steps = 2000;
  config.parameterization = Parameterization::kDirectProbability;
  const auto traj =
      simulate_learning(odd_one_out_game(), config, {0.5 + 1e-3, 0.5, 0.5});
  const double d0 = 1e-3;
  const auto& end = traj.back().policy;
  const double d1 = std::sqrt(std::pow(end.x - 0.5, 2) +
                              std::pow(end.y - 0.5, 2) +
                              std::pow(end.z - 0.5, 2));
  CHECK(d1 > 10 * d0);
}

TEST_CASE("alliance_optimum") {
  const auto ooo = alliance_optimum(odd_one_out_game(), 0.0);
  CHECK(ooo.match_prob == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(ooo.per_learner_value == doctest::Approx(0.375).epsilon(1e-9));

  const auto matching = alliance_optimum(matching_game(), 0.0);
  CHECK(matching.match_prob == 0.0);
  CHECK(matching.per_learner_value == doctest::Approx(0.5));

  const auto constant = alliance_optimum(build_pq_game(1. / 3, 1. / 3), 1.0);
  CHECK(constant.per_learner_value == doctest::Approx(1.0 / 3));

  CHECK_THROWS(alliance_optimum(odd_one_out_game(), 0.5));
}
