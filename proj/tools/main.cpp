// Experiment front door: one subcommand per experiment, flat key-value
// configs, CSV/JSON artifacts for offline plotting.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alliance_lab/dynamics.hpp"
#include "alliance_lab/matrix_games.hpp"
#include "alliance_lab/training.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace alab;

namespace {

// Flat dotted key-value config. Every lookup records the resolved value, so
// the snapshot written next to the outputs suffices to rerun the experiment.
class Config {
 public:
  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": expected key = value");
      }
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
      };
      kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }

  double get(const std::string& key, double fallback) {
    const auto it = kv_.find(key);
    const double v = it == kv_.end() ? fallback : std::stod(it->second);
    note(key, v);
    return v;
  }

  int get(const std::string& key, int fallback) {
    const auto it = kv_.find(key);
    const int v = it == kv_.end() ? fallback : std::stoi(it->second);
    note(key, v);
    return v;
  }

  std::string get(const std::string& key, const std::string& fallback) {
    const auto it = kv_.find(key);
    const std::string v = it == kv_.end() ? fallback : it->second;
    resolved_[key] = v;
    if (it != kv_.end()) used_.insert(key);
    return v;
  }

  void note(const std::string& key, double value) {
    std::ostringstream os;
    os << value;
    resolved_[key] = os.str();
    if (kv_.count(key)) used_.insert(key);
  }

  // Unknown keys are configuration typos; fail loudly.
  void reject_unknown() const {
    for (const auto& [key, value] : kv_) {
      if (!used_.count(key)) {
        throw std::runtime_error("unknown config key: " + key);
      }
    }
  }

  const std::map<std::string, std::string>& resolved() const {
    return resolved_;
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
  std::map<std::string, std::string> resolved_;
};

struct RunContext {
  std::uint64_t seed = 1;
  fs::path out = ".";
  Config config;
  std::vector<std::string> manifest;

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    fs::create_directories(out);
    std::ofstream f(out / name);
    if (!f) throw std::runtime_error("cannot write " + (out / name).string());
    f << header << "\n";
    manifest.push_back(name);
    return f;
  }

  void write_snapshot() {
    fs::create_directories(out);
    std::ofstream f(out / "resolved_config.txt");
    f << "seed = " << seed << "\n";
    for (const auto& [k, v] : config.resolved()) f << k << " = " << v << "\n";
    manifest.push_back("resolved_config.txt");
  }

  void write_report(json headline, std::vector<std::uint64_t> seeds,
                    bool complete) {
    json report;
    report["headline"] = std::move(headline);
    report["complete"] = complete;
    report["seed"] = seed;
    report["seeds"] = seeds;
    json cfg;
    for (const auto& [k, v] : config.resolved()) cfg[k] = v;
    report["resolved_config"] = cfg;
    manifest.push_back("report.json");
    std::sort(manifest.begin(), manifest.end());
    report["manifest"] = manifest;
    std::ofstream f(out / "report.json");
    f << report.dump(2) << "\n";
  }
};

// --------------------------------------------------------------------------
// Subcommands.
// --------------------------------------------------------------------------

int cmd_epsilon_hist(RunContext& ctx, int games, int bins) {
  games = ctx.config.get("histogram.games", games);
  bins = ctx.config.get("histogram.bins", bins);
  ctx.config.reject_unknown();
  const auto histogram = run_epsilon_histogram(games, bins, ctx.seed);
  auto csv = ctx.open_csv("histogram.csv", "bin_lo,bin_hi,count");
  std::int64_t modal = 0;
  for (const auto& b : histogram) {
    csv << b.lo << "," << b.hi << "," << b.count << "\n";
    modal = std::max(modal, b.count);
  }
  ctx.write_snapshot();
  ctx.write_report({{"games", games}, {"bins", bins}, {"modal_count", modal}},
                   {ctx.seed}, true);
  std::cout << "epsilon histogram: " << games << " games, " << bins
            << " bins, modal count " << modal << "\n";
  return 0;
}

int cmd_dilemma_count(RunContext& ctx, int games) {
  games = ctx.config.get("counting.games", games);
  ctx.config.reject_unknown();
  const auto summary = run_counting_experiment(games, ctx.seed);
  auto csv = ctx.open_csv("counting.csv", "game_index,p,q,has_dilemma,has_strict");
  for (const auto& r : summary.records) {
    csv << r.game_index << "," << r.p << "," << r.q << "," << r.has_dilemma
        << "," << r.has_strict << "\n";
  }
  auto grid = ctx.open_csv("gridpoint_counts.csv",
                           "gridpoint,stubborn_prob,games_with_dilemma");
  for (std::size_t k = 0; k < summary.games_with_dilemma_at.size(); ++k) {
    grid << k << "," << 0.1 * k << "," << summary.games_with_dilemma_at[k]
         << "\n";
  }
  ctx.write_snapshot();
  ctx.write_report({{"games", games},
                    {"dilemma_fraction", summary.dilemma_fraction},
                    {"strict_fraction_of_dilemmas",
                     summary.strict_fraction_of_dilemmas},
                    {"strict_fraction_of_games",
                     summary.strict_fraction_of_games}},
                   {ctx.seed}, true);
  std::cout << "dilemma fraction " << summary.dilemma_fraction
            << ", strict fraction of dilemmas "
            << summary.strict_fraction_of_dilemmas << " over " << games
            << " games\n";
  return 0;
}

ThreePlayerGame game_by_name(const std::string& name, Config& config) {
  if (name == "odd-one-out") return odd_one_out_game();
  if (name == "matching") return matching_game();
  if (name == "pq") {
    return build_pq_game(config.get("game.p", 0.5), config.get("game.q", 0.5));
  }
  throw std::runtime_error("unknown game: " + name +
                           " (expected odd-one-out, matching, or pq)");
}

int cmd_dynamics(RunContext& ctx, const std::string& game_name,
                 const std::string& init_str, int runs) {
  DynamicsConfig dc;
  dc.learning_rate = ctx.config.get("dynamics.learning_rate", 1.0);
  dc.n_steps = ctx.config.get("dynamics.steps", 200000);
  dc.stubborn_policy = ctx.config.get("dynamics.stubborn_policy", 0.0);
  dc.learners = {true, true, false};
  if (ctx.config.get("dynamics.learners", 2) == 3) {
    dc.learners = {true, true, true};
  }
  const auto game = game_by_name(game_name, ctx.config);
  ctx.config.reject_unknown();

  std::vector<PolicyTriple> inits;
  if (!init_str.empty()) {
    std::stringstream ss(init_str);
    std::vector<double> v;
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    if (v.size() < 2 || v.size() > 3) {
      throw std::runtime_error("--init expects x,y or x,y,z");
    }
    inits.push_back({v[0], v[1], v.size() == 3 ? v[2] : dc.stubborn_policy});
  } else {
    auto rng = make_rng(ctx.seed);
    for (int r = 0; r < runs; ++r) {
      inits.push_back({uniform01(rng), uniform01(rng), uniform01(rng)});
    }
  }

  auto csv = ctx.open_csv("trajectory.csv", "run_id,step,x,y,z,r0,r1,r2");
  double final_learner_reward = 0.0;
  for (std::size_t run = 0; run < inits.size(); ++run) {
    const auto traj = simulate_learning(game, dc, inits[run]);
    for (const auto& pt : traj) {
      csv << run << "," << pt.step << "," << pt.policy.x << "," << pt.policy.y
          << "," << pt.policy.z << "," << pt.payoffs[0] << "," << pt.payoffs[1]
          << "," << pt.payoffs[2] << "\n";
    }
    final_learner_reward += (traj.back().payoffs[0] + traj.back().payoffs[1]) /
                            (2.0 * inits.size());
  }

  const auto fp = fixed_point_report(game);
  json fixed_points = json::array();
  for (const auto& e : fp.entries) {
    fixed_points.push_back({{"pattern", e.pattern},
                            {"stability", e.stability},
                            {"representative",
                             {e.representative.x, e.representative.y,
                              e.representative.z}}});
  }
  {
    std::ofstream f(ctx.out / "fixed_points.json");
    f << json{{"analytic", fp.analytic}, {"entries", fixed_points}}.dump(2)
      << "\n";
    ctx.manifest.push_back("fixed_points.json");
  }
  ctx.write_snapshot();
  ctx.write_report({{"game", game_name},
                    {"runs", inits.size()},
                    {"mean_final_learner_reward", final_learner_reward}},
                   {ctx.seed}, true);
  std::cout << "dynamics: " << inits.size()
            << " run(s), mean final learner reward " << final_learner_reward
            << "\n";
  return 0;
}

TrainConfig config_for_scenario(const std::string& name, Config& config) {
  Scenario scenario;
  if (name == "baseline") scenario = Scenario::kBaseline;
  else if (name == "copybot") scenario = Scenario::kCopybot;
  else if (name == "contracts-2") scenario = Scenario::kContracts2;
  else if (name == "contracts-3") scenario = Scenario::kContracts3;
  else if (name == "punishment") scenario = Scenario::kPunishment;
  else throw std::runtime_error("unknown scenario: " + name);

  TrainConfig c = default_config(scenario);
  c.gamma = config.get("train.gamma", c.gamma);
  c.learning_rate = config.get("train.learning_rate", c.learning_rate);
  c.env_entropy_cost = config.get("train.env_entropy_cost", c.env_entropy_cost);
  c.contract_entropy_cost =
      config.get("train.contract_entropy_cost", c.contract_entropy_cost);
  c.contract_loss_weight =
      config.get("train.contract_loss_weight", c.contract_loss_weight);
  c.value_loss_coef = config.get("train.value_loss_coef", c.value_loss_coef);
  c.episodes_per_update =
      config.get("train.episodes_per_update", c.episodes_per_update);
  c.total_updates = config.get("train.total_updates", c.total_updates);
  c.n_seeds = config.get("train.n_seeds", c.n_seeds);
  c.eval_every = config.get("train.eval_every", c.eval_every);
  c.eval_episodes = config.get("train.eval_episodes", c.eval_episodes);
  const int width = config.get("net.width", 128);
  c.trunk_widths = {width, width};
  c.recurrent_width = config.get("net.recurrent_width", width);
  c.env.m_chips = config.get("env.m_chips", c.env.m_chips);
  c.contracts.p_c = config.get("contracts.p_c", c.contracts.p_c);
  c.contracts.b = config.get("contracts.b", c.contracts.b);
  c.contracts.r_c = config.get("contracts.r_c", c.contracts.r_c);
  return c;
}

void write_metrics_csv(std::ofstream& csv, const std::vector<MetricsRow>& rows) {
  for (const auto& r : rows) {
    csv << r.update << "," << r.agent << "," << r.mean_reward << ","
        << r.discard_rate << "," << r.gift_rate << ","
        << r.contracts_signed_gg << "," << r.contracts_signed_ngng << ","
        << r.contracts_signed_mixed << "," << r.penalties << "\n";
  }
}

constexpr const char* kMetricsHeader =
    "update,agent,mean_reward,discard_rate,gift_rate,contracts_signed_GG,"
    "contracts_signed_NGNG,contracts_signed_mixed,penalties";

std::vector<Network> load_agent_checkpoints(const std::string& prefix, int n) {
  std::vector<Network> nets;
  for (int p = 0; p < n; ++p) {
    nets.push_back(load_checkpoint(prefix + "agent" + std::to_string(p) +
                                   ".json"));
  }
  return nets;
}

int cmd_train(RunContext& ctx, const std::string& scenario_name, int updates,
              int episodes, bool eval_only, const std::string& checkpoint) {
  TrainConfig config = config_for_scenario(scenario_name, ctx.config);
  if (updates > 0) config.total_updates = updates;
  if (episodes > 0) config.episodes_per_update = episodes;
  ctx.config.note("train.total_updates", config.total_updates);
  ctx.config.note("train.episodes_per_update", config.episodes_per_update);
  ctx.config.reject_unknown();
  const int n = config.env.n_players;
  const auto slots = scenario_slots(config.scenario, n);

  if (eval_only) {
    if (checkpoint.empty()) {
      throw std::runtime_error("--eval-only requires --checkpoint <prefix>");
    }
    const auto nets = load_agent_checkpoints(checkpoint, n);
    std::vector<const Network*> ptrs;
    for (const auto& net : nets) ptrs.push_back(&net);
    const auto batch = collect_episodes(config, slots, ptrs,
                                        config.eval_episodes,
                                        RolloutMode::kEval, ctx.seed);
    auto csv = ctx.open_csv("eval_metrics.csv", kMetricsHeader);
    const auto rows = summarize_batch(batch, 0, n);
    write_metrics_csv(csv, rows);
    json rewards = json::array();
    for (const auto& r : rows) rewards.push_back(r.mean_reward);
    ctx.write_snapshot();
    ctx.write_report({{"scenario", scenario_name},
                      {"eval_episodes", config.eval_episodes},
                      {"mean_rewards", rewards}},
                     {ctx.seed}, true);
    std::cout << "eval-only: " << config.eval_episodes << " episodes\n";
    return 0;
  }

  std::vector<std::uint64_t> seeds;
  json final_rewards = json::array();
  bool complete = true;
  for (int s = 0; s < config.n_seeds; ++s) {
    const std::uint64_t seed = mix_seed(ctx.seed, s);
    seeds.push_back(seed);
    const auto result = train_one_seed(config, seed);
    const std::string tag = "seed" + std::to_string(s) + "_";
    auto train_csv = ctx.open_csv(tag + "train_metrics.csv", kMetricsHeader);
    write_metrics_csv(train_csv, result.train_metrics);
    auto eval_csv = ctx.open_csv(tag + "eval_metrics.csv", kMetricsHeader);
    write_metrics_csv(eval_csv, result.eval_metrics);
    json triple = json::array();
    int last = -1;
    for (const auto& r : result.eval_metrics) last = std::max(last, r.update);
    for (int p = 0; p < n; ++p) {
      double v = 0.0;
      for (const auto& r : result.eval_metrics) {
        if (r.update == last && r.agent == p) v = r.mean_reward;
      }
      triple.push_back(v);
      if (slots[p].kind == AgentSlot::kLearner) {
        const std::string name = tag + "agent" + std::to_string(p) + ".json";
        save_checkpoint(result.final_nets[p], (ctx.out / name).string());
        ctx.manifest.push_back(name);
      }
    }
    final_rewards.push_back(triple);
    std::cout << "seed " << s << " final eval rewards " << triple.dump()
              << "\n";
  }
  ctx.write_snapshot();
  ctx.write_report({{"scenario", scenario_name},
                    {"updates", config.total_updates},
                    {"final_eval_rewards", final_rewards}},
                   seeds, complete);
  return 0;
}

int cmd_regress(RunContext& ctx, const std::string& scenario_name,
                const std::string& checkpoint, int episodes) {
  if (checkpoint.empty()) {
    throw std::runtime_error("regress requires --checkpoint <prefix>");
  }
  TrainConfig config = config_for_scenario(scenario_name, ctx.config);
  ctx.config.reject_unknown();
  const auto nets = load_agent_checkpoints(checkpoint, config.env.n_players);
  const auto result = regression_report(config, nets, episodes, ctx.seed);
  auto csv = ctx.open_csv("scatter.csv", "contracts_signed,chips_accrued");
  for (const auto& [x, y] : result.scatter) csv << x << "," << y << "\n";
  json headline{{"episodes", episodes},
                {"records", result.scatter.size()},
                {"degenerate", result.degenerate}};
  if (!result.degenerate) {
    headline["slope"] = result.slope;
    headline["intercept"] = result.intercept;
    headline["p_value"] = result.p_value;
  }
  {
    std::ofstream f(ctx.out / "regression.json");
    f << headline.dump(2) << "\n";
    ctx.manifest.push_back("regression.json");
  }
  ctx.write_snapshot();
  ctx.write_report(headline, {ctx.seed}, true);
  if (result.degenerate) {
    std::cout << "regression degenerate: no variance in contracts signed\n";
  } else {
    std::cout << "slope " << result.slope << ", p " << result.p_value
              << " over " << result.scatter.size() << " records\n";
  }
  return 0;
}

// --------------------------------------------------------------------------
// verify: fast oracle/property sweep; nonzero exit iff any check fails.
// --------------------------------------------------------------------------

int cmd_verify(std::uint64_t seed) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << "check " << name << ": " << (ok ? "ok" : "FAIL") << "\n";
    failures += !ok;
  };

  {
    auto rng = make_rng(seed);
    bool ok = true;
    const auto game = odd_one_out_game();
    for (int k = 0; k < 200; ++k) {
      const PolicyTriple pi{uniform01(rng), uniform01(rng), uniform01(rng)};
      ok &= std::abs(exact_gradient(game, pi, 2) -
                     2.0 * (1.0 - pi.x - pi.y) / 3.0) < 1e-12;
    }
    check("gradient closed form", ok);
  }
  {
    const auto m =
        classify(extract_payoffs(reduce_two_player(matching_game(), 2, 0.0), 0));
    const auto o = classify(
        extract_payoffs(reduce_two_player(odd_one_out_game(), 2, 0.0), 1));
    check("reduced-game classifications",
          m.is_dilemma && m.fear && m.strict && o.is_dilemma && o.greed &&
              !o.strict);
  }
  {
    const auto ooo = alliance_optimum(odd_one_out_game(), 0.0);
    const auto match = alliance_optimum(matching_game(), 0.0);
    check("alliance optima", std::abs(ooo.match_prob - 0.75) < 1e-9 &&
                                 std::abs(ooo.per_learner_value - 0.375) <
                                     1e-9 &&
                                 match.per_learner_value == 0.5);
  }
  {
    const auto a = run_counting_experiment(100, seed);
    const auto b = run_counting_experiment(100, seed);
    check("counting determinism",
          a.dilemma_fraction == b.dilemma_fraction &&
              a.records.size() == b.records.size());
  }
  {
    bool ok = true;
    auto rng = make_rng(seed + 1);
    for (int trial = 0; trial < 50 && ok; ++trial) {
      GiftingConfig config;
      config.contract_obs_len = 0;
      auto env = GiftingState::reset(config, mix_seed(seed, trial));
      int steps = 0;
      while (!env.terminal()) {
        const auto legal = env.legal_actions(env.current_player());
        env.step(legal[static_cast<std::size_t>(uniform01(rng) *
                                                legal.size()) %
                       legal.size()]);
        ++steps;
      }
      double sum = 0.0, chips = 0.0;
      for (int p = 0; p < 3; ++p) {
        sum += env.score().payoffs[p];
        chips += env.total_held(p) + env.own_remaining(p) + env.discarded(p);
      }
      ok = steps == 15 && std::abs(sum - 1.0) < 1e-12 && chips == 15.0;
    }
    check("gifting conservation and constant sum", ok);
  }
  {
    bool ok = offer_alphabet_size(3) == 19;
    for (int idx = 0; idx < 19 && ok; ++idx) {
      ok = offer_to_index(0, offer_from_index(0, idx, 3), 3) == idx;
    }
    check("contract offer codec", ok);
  }
  {
    OptimizerState opt;
    Vec params = Vec::Zero(1);
    opt.step(params, Vec::Ones(1), 0.01, 0.99, 0.001);
    const bool closed = std::abs(params[0] + 0.01 / std::sqrt(0.011)) <= 1e-12;
    Vec fixed = Vec::Ones(2);
    OptimizerState opt2;
    opt2.step(fixed, Vec::Zero(2), 0.1, 0.99, 0.001);
    check("optimizer closed form and zero-grad identity",
          closed && fixed[0] == 1.0 && fixed[1] == 1.0);
  }
  {
    TrainConfig c = default_config(Scenario::kPunishment);
    c.trunk_widths = {6};
    c.recurrent_width = 5;
    const auto slots = scenario_slots(c.scenario, 3);
    const NetworkSpec spec = network_spec_for(c);
    std::vector<Network> nets;
    for (int p = 0; p < 3; ++p) {
      nets.emplace_back(spec);
      nets[p].init_params(mix_seed(seed, 100 + p));
    }
    std::vector<const Network*> ptrs;
    for (const auto& net : nets) ptrs.push_back(&net);
    auto batch = collect_episodes(c, slots, ptrs, 1, RolloutMode::kTrain, seed);
    returns_and_advantages(batch, c.gamma);
    Vec grad = Vec::Zero(nets[0].n_params());
    batch_loss(nets[0], batch.episodes[0], c, true, &grad);
    Network probe = nets[0];
    double max_rel = 0.0;
    const double h = 1e-6;
    for (int k = 0; k < nets[0].n_params();
         k += std::max(1, nets[0].n_params() / 60)) {
      Vec theta = nets[0].params();
      theta[k] += h;
      probe.set_params(theta);
      const double up = batch_loss(probe, batch.episodes[0], c, true, nullptr);
      theta[k] -= 2 * h;
      probe.set_params(theta);
      const double dn = batch_loss(probe, batch.episodes[0], c, true, nullptr);
      const double fd = (up - dn) / (2 * h);
      max_rel = std::max(max_rel,
                         std::abs(grad[k] - fd) / std::max(1.0, std::abs(fd)));
    }
    check("A2C gradient vs finite differences", max_rel < 1e-4);

    const auto again =
        collect_episodes(c, slots, ptrs, 1, RolloutMode::kTrain, seed);
    bool same = true;
    for (int p = 0; p < 3; ++p) {
      same &= again.episodes[p][0].steps.size() ==
              batch.episodes[p][0].steps.size();
    }
    check("rollout determinism", same);
  }

  std::cout << (failures == 0 ? "verify: all checks passed"
                              : "verify: FAILURES") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alliance laboratory experiments"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_dir;
  bool single_thread = false;
  if (const char* env = std::getenv("ALAB_OUT_DIR")) out_dir = env;
  if (out_dir.empty()) out_dir = ".";
  app.add_option("--seed", seed, "master seed");
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--single-thread", single_thread,
               "force serial mode (runs are serial regardless)");
  // Options are shared with subcommands.
  app.fallthrough();

  int games = 1000, bins = 20, runs = 10, updates = -1, episodes = -1;
  int regress_episodes = 50;
  std::string game_name = "odd-one-out", init_str, scenario = "baseline";
  std::string checkpoint;
  bool eval_only = false;

  auto* hist = app.add_subcommand("epsilon-hist", "outcome-sum range histogram");
  hist->add_option("--games", games, "number of sampled games");
  hist->add_option("--bins", bins, "histogram bins over [0,2]");

  auto* count = app.add_subcommand("dilemma-count", "alliance dilemma counting");
  count->add_option("--games", games, "number of sampled games");

  auto* dyn = app.add_subcommand("dynamics", "exact policy-gradient dynamics");
  dyn->add_option("--game", game_name, "odd-one-out | matching | pq");
  dyn->add_option("--init", init_str, "initial policy x,y[,z]");
  dyn->add_option("--runs", runs, "random inits when --init is absent");

  auto* train = app.add_subcommand("train", "A2C training scenarios");
  train->add_option("--scenario", scenario,
                    "baseline | copybot | contracts-2 | contracts-3 | punishment");
  train->add_option("--updates", updates, "updates per seed");
  train->add_option("--episodes", episodes, "episodes per update");
  train->add_flag("--eval-only", eval_only, "evaluate a checkpoint, no training");
  train->add_option("--checkpoint", checkpoint,
                    "checkpoint path prefix (expects <prefix>agent<k>.json)");

  auto* regress = app.add_subcommand("regress", "chips vs contracts regression");
  regress->add_option("--checkpoint", checkpoint, "checkpoint path prefix");
  regress->add_option("--episodes", regress_episodes, "evaluation episodes");
  regress->add_option("--scenario", scenario, "scenario of the checkpoint");

  auto* verify = app.add_subcommand("verify", "run the property/oracle sweep");
  (void)verify;

  CLI11_PARSE(app, argc, argv);

  try {
    RunContext ctx;
    ctx.seed = seed;
    ctx.out = out_dir;
    if (!config_path.empty()) ctx.config.load(config_path);

    if (hist->parsed()) return cmd_epsilon_hist(ctx, games, bins);
    if (count->parsed()) return cmd_dilemma_count(ctx, games);
    if (dyn->parsed()) return cmd_dynamics(ctx, game_name, init_str, runs);
    if (train->parsed()) {
      return cmd_train(ctx, scenario, updates, episodes, eval_only, checkpoint);
    }
    if (regress->parsed()) {
      if (scenario == "baseline") scenario = "contracts-3";
      return cmd_regress(ctx, scenario, checkpoint, regress_episodes);
    }
    if (verify->parsed()) return cmd_verify(seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
