#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "alliance_lab/training.hpp"

using namespace alab;

namespace {

TrainConfig small_config(Scenario scenario) {
  TrainConfig c = default_config(scenario);
  c.trunk_widths = {8, 8};
  c.recurrent_width = 8;
  c.episodes_per_update = 4;
  c.total_updates = 3;
  c.n_seeds = 1;
  c.eval_every = 2;
  c.eval_episodes = 4;
  return c;
}

std::vector<Network> make_nets(const TrainConfig& c, std::uint64_t seed) {
  const auto slots = scenario_slots(c.scenario, c.env.n_players);
  const NetworkSpec spec = network_spec_for(c);
  std::vector<Network> nets;
  for (int p = 0; p < c.env.n_players; ++p) {
    nets.emplace_back(spec);
    if (slots[p].kind == AgentSlot::kLearner) {
      nets[p].init_params(mix_seed(seed, p));
    }
  }
  return nets;
}

std::vector<const Network*> pointers(const std::vector<Network>& nets) {
  std::vector<const Network*> ptrs;
  for (const auto& n : nets) ptrs.push_back(&n);
  return ptrs;
}

}  // namespace

TEST_CASE("discounted returns") {
  SUBCASE("terminal-only reward") {
    AgentEpisode ep;
    ep.steps.resize(15);
    ep.steps.back().reward = 1.0 / 3.0;
    RolloutBatch batch;
    batch.episodes.push_back({ep});
    returns_and_advantages(batch, 0.99);
    const auto& steps = batch.episodes[0][0].steps;
    CHECK(steps[14].ret == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(steps[0].ret ==
          doctest::Approx(std::pow(0.99, 14) / 3.0).epsilon(1e-12));
    CHECK(steps[0].adv == steps[0].ret);  // zero value estimate
  }

  SUBCASE("matches brute-force per-step summation") {
    auto rng = make_rng(5);
    AgentEpisode ep;
    ep.steps.resize(9);
    for (auto& s : ep.steps) {
      s.reward = 2.0 * uniform01(rng) - 1.0;
      s.value = uniform01(rng);
    }
    RolloutBatch batch;
    batch.episodes.push_back({ep});
    const double gamma = 0.9;
    returns_and_advantages(batch, gamma);
    for (std::size_t t = 0; t < ep.steps.size(); ++t) {
      double g = 0.0;
      for (std::size_t k = t; k < ep.steps.size(); ++k) {
        g += std::pow(gamma, static_cast<double>(k - t)) * ep.steps[k].reward;
      }
      const auto& s = batch.episodes[0][0].steps[t];
      CHECK(s.ret == doctest::Approx(g).epsilon(1e-12));
      CHECK(s.adv == doctest::Approx(g - s.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("optimizer step") {
  SUBCASE("first step has closed form") {
    OptimizerState opt;
    Vec params = Vec::Zero(3);
    const Vec grad = Vec::Ones(3);
    const double lr = 0.01;
    opt.step(params, grad, lr, 0.99, 0.001);
    // acc = 0.01 * 1; delta = lr / sqrt(0.011).
    const double expected = -lr / std::sqrt(0.011);
    for (int k = 0; k < 3; ++k) {
      CHECK(params[k] == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("zero gradient leaves parameters unchanged") {
    OptimizerState opt;
    Vec params = Vec::LinSpaced(4, -1.0, 2.0);
    const Vec before = params;
    opt.step(params, Vec::Zero(4), 0.1, 0.99, 0.001);
    CHECK((params - before).norm() == 0.0);
  }
}

TEST_CASE("rollout collection") {
  SUBCASE("deterministic under a fixed seed") {
    const TrainConfig c = small_config(Scenario::kBaseline);
    const auto slots = scenario_slots(c.scenario, 3);
    const auto nets = make_nets(c, 1);
    const auto a = collect_episodes(c, slots, pointers(nets), 6,
                                    RolloutMode::kTrain, 99);
    const auto b = collect_episodes(c, slots, pointers(nets), 6,
                                    RolloutMode::kTrain, 99);
    REQUIRE(a.stats.size() == 6);
    for (std::size_t e = 0; e < 6; ++e) {
      CHECK(a.stats[e].payoffs == b.stats[e].payoffs);
      CHECK(a.stats[e].discards == b.stats[e].discards);
      for (int p = 0; p < 3; ++p) {
        REQUIRE(a.episodes[p][e].steps.size() == b.episodes[p][e].steps.size());
        for (std::size_t t = 0; t < a.episodes[p][e].steps.size(); ++t) {
          CHECK(a.episodes[p][e].steps[t].env_action ==
                b.episodes[p][e].steps[t].env_action);
        }
      }
    }
  }

  SUBCASE("every learner records one step per environment tick") {
    const TrainConfig c = small_config(Scenario::kBaseline);
    const auto nets = make_nets(c, 2);
    const auto batch = collect_episodes(c, scenario_slots(c.scenario, 3),
                                        pointers(nets), 2, RolloutMode::kTrain,
                                        7);
    for (int p = 0; p < 3; ++p) {
      for (const auto& ep : batch.episodes[p]) {
        CHECK(ep.steps.size() == 15);
        int acting = 0;
        for (const auto& s : ep.steps) acting += (s.env_action >= 0);
        CHECK(acting == 5);  // 15 ticks round-robin over 3 players
      }
    }
  }

  SUBCASE("copybot slot produces no learner steps") {
    const TrainConfig c = small_config(Scenario::kCopybot);
    const auto slots = scenario_slots(c.scenario, 3);
    CHECK(slots[1].kind == AgentSlot::kCopyBot);
    auto nets = make_nets(c, 3);
    std::vector<const Network*> ptrs = pointers(nets);
    ptrs[1] = nullptr;  // scripted slot never touches a network
    const auto batch =
        collect_episodes(c, slots, ptrs, 3, RolloutMode::kTrain, 11);
    for (const auto& ep : batch.episodes[1]) CHECK(ep.steps.empty());
    for (const auto& s : batch.stats) {
      CHECK(s.discards[1] + s.gifts[1] == 5);
    }
  }

  SUBCASE("trembling directives fire in punishment training, never in eval") {
    const TrainConfig c = small_config(Scenario::kPunishment);
    const auto slots = scenario_slots(c.scenario, 3);
    const auto nets = make_nets(c, 4);
    int train_forced = 0, eval_forced = 0;
    const auto train = collect_episodes(c, slots, pointers(nets), 20,
                                        RolloutMode::kTrain, 13);
    const auto eval = collect_episodes(c, slots, pointers(nets), 20,
                                       RolloutMode::kEval, 13);
    for (const auto& s : train.stats) train_forced += s.forced_directives;
    for (const auto& s : eval.stats) eval_forced += s.forced_directives;
    CHECK(train_forced > 0);
    CHECK(eval_forced == 0);
  }
}

TEST_CASE("batch loss gradient matches finite differences on rollout data") {
  TrainConfig c = small_config(Scenario::kPunishment);
  c.trunk_widths = {6};
  c.recurrent_width = 5;
  const auto slots = scenario_slots(c.scenario, 3);
  auto nets = make_nets(c, 6);
  auto batch = collect_episodes(c, slots, pointers(nets), 2,
                                RolloutMode::kTrain, 17);
  returns_and_advantages(batch, c.gamma);

  Network& net = nets[0];
  Vec grad = Vec::Zero(net.n_params());
  batch_loss(net, batch.episodes[0], c, true, &grad);

  Network probe = net;
  const double h = 1e-6;
  double max_rel = 0.0;
  for (int k = 0; k < net.n_params(); k += std::max(1, net.n_params() / 150)) {
    Vec theta = net.params();
    theta[k] += h;
    probe.set_params(theta);
    const double up = batch_loss(probe, batch.episodes[0], c, true, nullptr);
    theta[k] -= 2 * h;
    probe.set_params(theta);
    const double down = batch_loss(probe, batch.episodes[0], c, true, nullptr);
    const double fd = (up - down) / (2 * h);
    const double denom = std::max(1.0, std::abs(fd));
    max_rel = std::max(max_rel, std::abs(grad[k] - fd) / denom);
  }
  CHECK(max_rel < 1e-4);
}

TEST_CASE("a step along the negative gradient lowers the loss") {
  TrainConfig c = small_config(Scenario::kBaseline);
  c.trunk_widths = {6};
  c.recurrent_width = 5;
  const auto slots = scenario_slots(c.scenario, 3);
  auto nets = make_nets(c, 8);
  auto batch = collect_episodes(c, slots, pointers(nets), 4,
                                RolloutMode::kTrain, 19);
  returns_and_advantages(batch, c.gamma);

  Network& net = nets[0];
  Vec grad = Vec::Zero(net.n_params());
  const double before = batch_loss(net, batch.episodes[0], c, false, &grad);
  REQUIRE(grad.norm() > 0.0);
  Network probe = net;
  probe.set_params(net.params() - (1e-4 / grad.norm()) * grad);
  const double after = batch_loss(probe, batch.episodes[0], c, false, nullptr);
  CHECK(after < before);
}

TEST_CASE("batch summaries") {
  const TrainConfig c = small_config(Scenario::kBaseline);
  const auto nets = make_nets(c, 9);
  const auto batch = collect_episodes(c, scenario_slots(c.scenario, 3),
                                      pointers(nets), 8, RolloutMode::kTrain,
                                      23);
  const auto rows = summarize_batch(batch, 42, 3);
  REQUIRE(rows.size() == 3);
  double total_reward = 0.0;
  for (const auto& row : rows) {
    CHECK(row.update == 42);
    CHECK(row.discard_rate + row.gift_rate == doctest::Approx(1.0));
    CHECK(row.penalties == 0.0);
    total_reward += row.mean_reward;
  }
  CHECK(total_reward == doctest::Approx(1.0).epsilon(1e-9));  // constant sum
}

TEST_CASE("training driver runs end to end at desk scale") {
  TrainConfig c = small_config(Scenario::kContracts2);
  const auto result = train_one_seed(c, 31);
  CHECK(result.train_metrics.size() ==
        static_cast<std::size_t>(c.total_updates * 3));
  CHECK_FALSE(result.eval_metrics.empty());
  REQUIRE(result.final_nets.size() == 3);
  // Updates moved the learner parameters.
  const auto fresh = make_nets(c, 31);
  bool any_moved = false;
  for (int p = 0; p < 3; ++p) {
    if ((result.final_nets[p].params() - fresh[p].params()).norm() > 0.0) {
      any_moved = true;
    }
  }
  CHECK(any_moved);
}

TEST_CASE("ordinary least squares") {
  SUBCASE("recovers a planted slope") {
    auto rng = make_rng(37);
    std::vector<std::pair<double, double>> points;
    for (int k = 0; k < 200; ++k) {
      const double x = uniform01(rng) * 10.0;
      const double noise = 0.01 * (uniform01(rng) - 0.5);
      points.emplace_back(x, 2.0 * x + 1.0 + noise);
    }
    const auto r = ols_regression(points);
    CHECK_FALSE(r.degenerate);
    CHECK(r.slope == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(r.intercept == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(r.p_value < 1e-10);
  }

  SUBCASE("flat noise gives an insignificant slope") {
    auto rng = make_rng(41);
    std::vector<std::pair<double, double>> points;
    for (int k = 0; k < 200; ++k) {
      points.emplace_back(uniform01(rng), uniform01(rng));
    }
    const auto r = ols_regression(points);
    CHECK(r.p_value > 0.001);
  }

  SUBCASE("degenerate x variance is flagged") {
    std::vector<std::pair<double, double>> points{{1, 0}, {1, 1}, {1, 2}};
    const auto r = ols_regression(points);
    CHECK(r.degenerate);
  }

  SUBCASE("too few points throws") {
    CHECK_THROWS(ols_regression({{0, 0}, {1, 1}}));
  }
}

TEST_CASE("regression report yields one record per player per episode") {
  const TrainConfig c = small_config(Scenario::kContracts3);
  const auto nets = make_nets(c, 43);
  const auto r = regression_report(c, nets, 50, 47);
  CHECK(r.scatter.size() == 150);
}
