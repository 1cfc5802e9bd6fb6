#ifndef ALLIANCE_LAB_TRAINING_HPP
#define ALLIANCE_LAB_TRAINING_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "alliance_lab/agents.hpp"
#include "alliance_lab/contracts.hpp"
#include "alliance_lab/gifting.hpp"
#include "alliance_lab/net.hpp"

namespace alab {

// ---------------------------------------------------------------------------
// Configuration.
// ---------------------------------------------------------------------------

enum class Scenario { kBaseline, kCopybot, kContracts2, kContracts3, kPunishment };

inline std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kBaseline: return "baseline";
    case Scenario::kCopybot: return "copybot";
    case Scenario::kContracts2: return "contracts-2";
    case Scenario::kContracts3: return "contracts-3";
    case Scenario::kPunishment: return "punishment";
  }
  return "?";
}

struct TrainConfig {
  Scenario scenario = Scenario::kBaseline;
  GiftingConfig env;
  ContractConfig contracts;

  double gamma = 0.99;
  double learning_rate = 0.000763;
  double env_entropy_cost = 0.001443;
  double contract_entropy_cost = 0.000534;
  double contract_loss_weight = 1.801635;
  double value_loss_coef = 0.5;

  // RMS-style optimizer.
  double rms_decay = 0.99;
  double rms_epsilon = 0.001;
  double rms_momentum = 0.0;

  int episodes_per_update = 16;
  int total_updates = 2000;
  int n_seeds = 10;
  int eval_every = 50;
  int eval_episodes = 16;

  std::vector<int> trunk_widths{128, 128};
  int recurrent_width = 128;
};

// Reference hyperparameters per experiment; network widths stay at the
// caller's discretion.
inline TrainConfig default_config(Scenario scenario) {
  TrainConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case Scenario::kBaseline:
    case Scenario::kCopybot:
      break;
    case Scenario::kContracts2:
    case Scenario::kContracts3:
      c.contracts.mode = ContractMode::kBinding;
      break;
    case Scenario::kPunishment:
      c.contracts.mode = ContractMode::kPunishment;
      c.learning_rate = 0.002738;
      c.env_entropy_cost = 0.004006;
      c.contract_loss_weight = 3.371262;
      c.contract_entropy_cost = 0.002278;
      break;
  }
  c.env.contract_obs_len =
      contract_observation_size(c.env.n_players, c.contracts.mode);
  return c;
}

struct AgentSlot {
  enum Kind { kLearner, kCopyBot } kind = kLearner;
  bool contract_enabled = false;
  int copy_target = 0;
};

inline std::vector<AgentSlot> scenario_slots(Scenario scenario, int n_players) {
  std::vector<AgentSlot> slots(n_players);
  switch (scenario) {
    case Scenario::kBaseline:
      break;
    case Scenario::kCopybot:
      slots[1].kind = AgentSlot::kCopyBot;
      slots[1].copy_target = 0;
      break;
    case Scenario::kContracts2:
      slots[0].contract_enabled = true;
      slots[1].contract_enabled = true;
      break;
    case Scenario::kContracts3:
    case Scenario::kPunishment:
      for (auto& s : slots) s.contract_enabled = true;
      break;
  }
  return slots;
}

inline NetworkSpec network_spec_for(const TrainConfig& c) {
  const int n = c.env.n_players;
  GiftingConfig env = c.env;
  NetworkSpec spec;
  spec.input_size = n * n + 4 * n + 1 + env.contract_obs_len;
  spec.trunk_widths = c.trunk_widths;
  spec.recurrent_width = c.recurrent_width;
  spec.env_actions = action_alphabet_size(n);
  spec.offer_actions = offer_alphabet_size(n);
  return spec;
}

// ---------------------------------------------------------------------------
// Rollouts.
// ---------------------------------------------------------------------------

enum class RolloutMode { kTrain, kEval };

struct StepRecord {
  Vec obs;
  std::vector<bool> env_mask;   // over the env action alphabet
  int env_action = -1;          // -1 when the agent did not act this step
  int offer_action = -1;        // -1 when the contract head is disabled
  bool has_floor = false;
  TremblingFloor floor;
  double reward = 0.0;
  double value = 0.0;           // behavior value estimate
  double ret = 0.0;             // filled by returns_and_advantages
  double adv = 0.0;
};

struct AgentEpisode {
  std::vector<StepRecord> steps;
};

struct EpisodeStats {
  std::vector<double> payoffs;          // per agent, environment only
  std::vector<int> discards;            // per agent
  std::vector<int> gifts;               // per agent
  std::vector<int> contracts_signed;    // per agent
  std::vector<double> chips_accrued;    // per agent, total held at the end
  std::vector<double> penalties;        // per agent, total penalty reward
  int signed_gg = 0;
  int signed_ngng = 0;
  int signed_mixed = 0;
  // Per-agent count of signed contracts where both parties promised to gift
  // each other (the alliance-forming special case of G-G).
  std::vector<int> mutual_exchange;
  int forced_directives = 0;
  bool two_way_draw = false;
};

struct RolloutBatch {
  // episodes[agent][episode]
  std::vector<std::vector<AgentEpisode>> episodes;
  std::vector<EpisodeStats> stats;
};

// Roll out one episode. Learner networks act for learner slots; scripted
// slots need no network. Trembling-hand directives apply only in punishment
// mode during training.
inline void run_episode(const TrainConfig& config,
                        const std::vector<AgentSlot>& slots,
                        const std::vector<const Network*>& nets,
                        RolloutMode mode, std::uint64_t episode_seed,
                        RolloutBatch& batch) {
  const int n = config.env.n_players;
  const int n_actions = action_alphabet_size(n);
  auto rng = make_rng(episode_seed);
  GiftingState env = GiftingState::reset(config.env, mix_seed(episode_seed, 1));
  ContractBook book(n);
  const bool any_contracts = config.contracts.mode == ContractMode::kPunishment ||
                             [&] {
                               for (const auto& s : slots)
                                 if (s.contract_enabled) return true;
                               return false;
                             }();
  std::vector<bool> enabled(n, false);
  for (int p = 0; p < n; ++p) enabled[p] = slots[p].contract_enabled;

  std::vector<Vec> memories(n);
  std::vector<AgentEpisode> episode(n);
  for (int p = 0; p < n; ++p) {
    if (slots[p].kind == AgentSlot::kLearner) memories[p] = nets[p]->initial_memory();
  }
  CopyBot copybot;
  for (int p = 0; p < n; ++p) {
    if (slots[p].kind == AgentSlot::kCopyBot) copybot = CopyBot(slots[p].copy_target);
  }

  EpisodeStats stats;
  stats.payoffs.assign(n, 0.0);
  stats.discards.assign(n, 0);
  stats.gifts.assign(n, 0);
  stats.contracts_signed.assign(n, 0);
  stats.chips_accrued.assign(n, 0.0);
  stats.penalties.assign(n, 0.0);
  stats.mutual_exchange.assign(n, 0);

  std::vector<ContractOffer> prev_offers;  // empty at episode start
  const int episode_len = env.episode_length();
  for (int t = 0; t < episode_len; ++t) {
    const int actor = env.current_player();
    const std::vector<double> contract_block =
        any_contracts ? contract_observation(prev_offers, book,
                                             config.contracts.mode)
                      : std::vector<double>{};

    std::optional<TremblingDirective> directive;
    if (mode == RolloutMode::kTrain &&
        config.contracts.mode == ContractMode::kPunishment) {
      directive = trembling_hand_directive(book, enabled, rng);
      if (directive.has_value()) ++stats.forced_directives;
    }

    // Binding obligations captured before this step's contract phase: a
    // contract signed now binds each party from its next turn onward.
    const ActiveContract* actor_obligation = book.active_contract(actor);

    std::vector<ContractOffer> offers(n);
    std::vector<ForwardResult> results(n);
    for (int p = 0; p < n; ++p) {
      if (slots[p].kind != AgentSlot::kLearner) continue;
      std::vector<bool> mask(n_actions, true);
      if (config.contracts.mode == ContractMode::kBinding && p == actor) {
        mask = book.binding_mask(p, n_actions);
      }
      std::optional<TremblingFloor> floor;
      if (directive.has_value() && slots[p].contract_enabled) {
        for (int side = 0; side < 2; ++side) {
          if (directive->players[side] == p) {
            floor = TremblingFloor{
                offer_to_index(p, directive->offers[side], n),
                config.contracts.p_c};
          }
        }
      }
      const Vec obs = Eigen::Map<const Vec>(
          env.observation(p, contract_block).data(),
          env.observation_size());
      results[p] = agent_forward(*nets[p], memories[p], obs, mask, floor);
      memories[p] = results[p].memory;

      StepRecord rec;
      rec.obs = obs;
      rec.env_mask = mask;
      rec.value = results[p].value;
      if (slots[p].contract_enabled) {
        rec.offer_action = sample_index(results[p].offer_probs, rng);
        offers[p] = offer_from_index(p, rec.offer_action, n);
        if (floor.has_value()) {
          rec.has_floor = true;
          rec.floor = *floor;
        }
      }
      episode[p].steps.push_back(std::move(rec));
    }

    const auto signed_now = book.contract_phase(offers, t, config.contracts, rng);
    for (const auto& c : signed_now) {
      ++stats.contracts_signed[c.parties[0]];
      ++stats.contracts_signed[c.parties[1]];
      if (c.obligation[0] == GiftAction::GiftTo(c.parties[1]) &&
          c.obligation[1] == GiftAction::GiftTo(c.parties[0])) {
        ++stats.mutual_exchange[c.parties[0]];
        ++stats.mutual_exchange[c.parties[1]];
      }
      switch (categorize(c)) {
        case ContractCategory::kGiftGift: ++stats.signed_gg; break;
        case ContractCategory::kNoGiftNoGift: ++stats.signed_ngng; break;
        case ContractCategory::kMixed: ++stats.signed_mixed; break;
      }
    }

    GiftAction action;
    if (slots[actor].kind == AgentSlot::kLearner) {
      const int idx = sample_index(results[actor].env_probs, rng);
      episode[actor].steps.back().env_action = idx;
      action = action_from_index(actor, idx, n);
    } else {
      action = copybot.act(actor, env);
    }
    copybot.observe_action(actor, action);
    if (action.is_discard()) {
      ++stats.discards[actor];
    } else {
      ++stats.gifts[actor];
    }

    env.step(action);

    if (config.contracts.mode == ContractMode::kBinding) {
      if (actor_obligation != nullptr) book.note_binding_action(actor);
    } else if (any_contracts) {
      const auto outcome =
          book.punishment_update(actor, action, t, config.contracts);
      for (int p = 0; p < n; ++p) {
        if (outcome.penalties[p] == 0.0) continue;
        stats.penalties[p] += outcome.penalties[p];
        if (slots[p].kind == AgentSlot::kLearner) {
          episode[p].steps.back().reward += outcome.penalties[p];
        }
      }
    }
    prev_offers = std::move(offers);
  }

  const EpisodeResult result = env.score();
  stats.two_way_draw = result.winners.size() == 2;
  for (int p = 0; p < n; ++p) {
    stats.payoffs[p] = result.payoffs[p];
    stats.chips_accrued[p] = env.total_held(p);
    if (slots[p].kind == AgentSlot::kLearner) {
      episode[p].steps.back().reward += result.payoffs[p];
    }
  }
  for (int p = 0; p < n; ++p) {
    batch.episodes[p].push_back(std::move(episode[p]));
  }
  batch.stats.push_back(std::move(stats));
}

inline RolloutBatch collect_episodes(const TrainConfig& config,
                                     const std::vector<AgentSlot>& slots,
                                     const std::vector<const Network*>& nets,
                                     int count, RolloutMode mode,
                                     std::uint64_t seed) {
  RolloutBatch batch;
  batch.episodes.resize(config.env.n_players);
  for (int e = 0; e < count; ++e) {
    run_episode(config, slots, nets, mode, mix_seed(seed, e), batch);
  }
  return batch;
}

// Discounted Monte-Carlo returns over full episodes; advantage is return
// minus the behavior value estimate.
inline void returns_and_advantages(RolloutBatch& batch, double gamma) {
  for (auto& agent_eps : batch.episodes) {
    for (auto& ep : agent_eps) {
      double g = 0.0;
      for (int t = static_cast<int>(ep.steps.size()) - 1; t >= 0; --t) {
        g = ep.steps[t].reward + gamma * g;
        ep.steps[t].ret = g;
        ep.steps[t].adv = g - ep.steps[t].value;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// A2C loss and gradient.
// ---------------------------------------------------------------------------

namespace detail {

// d(-H)/dlogit_k for a softmax distribution: pi_k * (log pi_k + H).
inline Vec neg_entropy_logit_grad(const Vec& probs) {
  const double h = entropy(probs);
  Vec g = Vec::Zero(probs.size());
  for (int k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) g[k] = probs[k] * (std::log(probs[k]) + h);
  }
  return g;
}

}  // namespace detail

// Loss of one agent's episode under the frozen batch data (actions, returns,
// advantages, masks, floors are all constants; only the forward pass depends
// on the parameters). Optionally accumulates BPTT step gradients.
inline double episode_loss(const Network& net, const AgentEpisode& ep,
                           const TrainConfig& config, bool contract_enabled,
                           std::vector<Network::StepGrad>* out_grads,
                           std::vector<Network::StepCache>* out_caches) {
  Vec memory = net.initial_memory();
  double loss = 0.0;
  for (const StepRecord& rec : ep.steps) {
    Network::StepCache cache;
    const auto out = net.forward(rec.obs, memory, &cache);
    memory = out.memory;
    Network::StepGrad grad;

    // Value head: c_v * (return - value)^2.
    const double verr = out.value - rec.ret;
    loss += config.value_loss_coef * verr * verr;
    grad.d_value = 2.0 * config.value_loss_coef * verr;

    // Environment policy head, on acting turns only.
    if (rec.env_action >= 0) {
      const Vec probs = masked_softmax(out.env_logits, rec.env_mask);
      loss += -rec.adv * std::log(probs[rec.env_action]) -
              config.env_entropy_cost * entropy(probs);
      Vec g = probs * rec.adv;
      g[rec.env_action] -= rec.adv;
      g += config.env_entropy_cost * detail::neg_entropy_logit_grad(probs);
      for (int k = 0; k < g.size(); ++k) {
        if (!rec.env_mask.empty() && !rec.env_mask[k]) g[k] = 0.0;
      }
      grad.d_env_logits = g;
    }

    // Contract policy head, every step while enabled. The trembling-hand
    // floor is part of the sampled distribution, so gradients flow through
    // the mixture with weight (1 - p_c).
    if (contract_enabled && rec.offer_action >= 0) {
      const Vec raw = masked_softmax(out.offer_logits, {});
      Vec probs = raw;
      double mix = 1.0;
      if (rec.has_floor) {
        mix = 1.0 - rec.floor.p_c;
        probs *= mix;
        probs[rec.floor.forced_offer_index] += rec.floor.p_c;
      }
      const double alpha = config.contract_loss_weight;
      loss += alpha * (-rec.adv * std::log(probs[rec.offer_action]) -
                       config.contract_entropy_cost * entropy(probs));
      // dL/dprobs, then through the mixture and the softmax Jacobian.
      Vec dprobs = Vec::Zero(probs.size());
      dprobs[rec.offer_action] += -rec.adv / probs[rec.offer_action];
      for (int k = 0; k < probs.size(); ++k) {
        if (probs[k] > 0.0) {
          dprobs[k] += config.contract_entropy_cost * (std::log(probs[k]) + 1.0);
        }
      }
      dprobs *= alpha * mix;
      const double dot = dprobs.dot(raw);
      Vec g(probs.size());
      for (int k = 0; k < probs.size(); ++k) {
        g[k] = raw[k] * (dprobs[k] - dot);
      }
      grad.d_offer_logits = g;
    }

    if (out_grads != nullptr) out_grads->push_back(std::move(grad));
    if (out_caches != nullptr) out_caches->push_back(std::move(cache));
  }
  return loss;
}

// Mean loss over the batch; gradient accumulated into *grad if non-null.
inline double batch_loss(const Network& net,
                         const std::vector<AgentEpisode>& episodes,
                         const TrainConfig& config, bool contract_enabled,
                         Vec* grad) {
  double total = 0.0;
  if (grad != nullptr) grad->setZero();
  for (const auto& ep : episodes) {
    std::vector<Network::StepGrad> grads;
    std::vector<Network::StepCache> caches;
    total += episode_loss(net, ep, config, contract_enabled,
                          grad != nullptr ? &grads : nullptr,
                          grad != nullptr ? &caches : nullptr);
    if (grad != nullptr) *grad += net.backward(caches, grads);
  }
  const double scale = 1.0 / std::max<std::size_t>(1, episodes.size());
  if (grad != nullptr) *grad *= scale;
  return total * scale;
}

// ---------------------------------------------------------------------------
// RMS-style optimizer.
// ---------------------------------------------------------------------------

struct OptimizerState {
  Vec acc;  // squared-gradient accumulator

  void step(Vec& params, const Vec& grad, double lr, double decay, double eps) {
    if (acc.size() != grad.size()) acc = Vec::Zero(grad.size());
    acc = decay * acc + (1.0 - decay) * grad.cwiseProduct(grad);
    params -= lr * grad.cwiseQuotient((acc.array() + eps).sqrt().matrix());
  }
};

struct UpdateMetrics {
  double loss = 0.0;
  double grad_norm = 0.0;
};

inline UpdateMetrics a2c_update(Network& net, OptimizerState& opt,
                                const std::vector<AgentEpisode>& episodes,
                                const TrainConfig& config,
                                bool contract_enabled) {
  Vec grad = Vec::Zero(net.n_params());
  const double loss =
      batch_loss(net, episodes, config, contract_enabled, &grad);
  if (!std::isfinite(loss)) {
    throw std::runtime_error("non-finite A2C loss; aborting update");
  }
  opt.step(net.params(), grad, config.learning_rate, config.rms_decay,
           config.rms_epsilon);
  return UpdateMetrics{loss, grad.norm()};
}

// ---------------------------------------------------------------------------
// Training driver.
// ---------------------------------------------------------------------------

struct MetricsRow {
  int update = 0;
  int agent = 0;
  double mean_reward = 0.0;
  double discard_rate = 0.0;
  double gift_rate = 0.0;
  double contracts_signed_gg = 0.0;    // per episode
  double contracts_signed_ngng = 0.0;
  double contracts_signed_mixed = 0.0;
  double penalties = 0.0;
  double two_way_draw_rate = 0.0;
  // Signed contracts where the parties promised to gift each other, per
  // episode (a subset of contracts_signed_gg; not part of the CSV schema).
  double mutual_exchange = 0.0;
};

inline std::vector<MetricsRow> summarize_batch(const RolloutBatch& batch,
                                               int update, int n_players) {
  std::vector<MetricsRow> rows;
  const double n_eps = static_cast<double>(batch.stats.size());
  double gg = 0, ngng = 0, mixed = 0, draws2 = 0, me = 0;
  for (const auto& s : batch.stats) {
    gg += s.signed_gg;
    ngng += s.signed_ngng;
    mixed += s.signed_mixed;
    draws2 += s.two_way_draw ? 1.0 : 0.0;
    for (int k : s.mutual_exchange) me += k;
  }
  me /= 2.0;  // each signing is counted once per party
  for (int p = 0; p < n_players; ++p) {
    MetricsRow row;
    row.update = update;
    row.agent = p;
    double reward = 0, discards = 0, gifts = 0, penalty = 0;
    for (const auto& s : batch.stats) {
      reward += s.payoffs[p] + s.penalties[p];
      discards += s.discards[p];
      gifts += s.gifts[p];
      penalty += s.penalties[p];
    }
    row.mean_reward = reward / n_eps;
    const double acts = discards + gifts;
    row.discard_rate = acts > 0 ? discards / acts : 0.0;
    row.gift_rate = acts > 0 ? gifts / acts : 0.0;
    row.contracts_signed_gg = gg / n_eps;
    row.contracts_signed_ngng = ngng / n_eps;
    row.contracts_signed_mixed = mixed / n_eps;
    row.penalties = penalty / n_eps;
    row.two_way_draw_rate = draws2 / n_eps;
    row.mutual_exchange = me / n_eps;
    rows.push_back(row);
  }
  return rows;
}

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<MetricsRow> train_metrics;  // one row per agent per update
  std::vector<MetricsRow> eval_metrics;   // sampled at eval cadence
  std::vector<Network> final_nets;        // empty entries for scripted slots
};

struct TrainingResult {
  std::vector<SeedResult> seeds;
};

inline SeedResult train_one_seed(const TrainConfig& config,
                                 std::uint64_t seed) {
  const int n = config.env.n_players;
  const auto slots = scenario_slots(config.scenario, n);
  const NetworkSpec spec = network_spec_for(config);

  std::vector<Network> nets;
  std::vector<OptimizerState> opts(n);
  nets.reserve(n);
  for (int p = 0; p < n; ++p) {
    nets.emplace_back(spec);
    if (slots[p].kind == AgentSlot::kLearner) {
      nets[p].init_params(mix_seed(seed, 1000 + p));
    }
  }
  std::vector<const Network*> net_ptrs;
  for (const auto& net : nets) net_ptrs.push_back(&net);

  SeedResult result;
  result.seed = seed;
  for (int update = 0; update < config.total_updates; ++update) {
    RolloutBatch batch = collect_episodes(
        config, slots, net_ptrs, config.episodes_per_update, RolloutMode::kTrain,
        mix_seed(seed, 2000000ULL + update));
    returns_and_advantages(batch, config.gamma);
    for (int p = 0; p < n; ++p) {
      if (slots[p].kind != AgentSlot::kLearner) continue;
      a2c_update(nets[p], opts[p], batch.episodes[p], config,
                 slots[p].contract_enabled);
    }
    for (auto row : summarize_batch(batch, update, n)) {
      result.train_metrics.push_back(row);
    }
    const bool last = update + 1 == config.total_updates;
    if (config.eval_every > 0 &&
        (update % config.eval_every == config.eval_every - 1 || last)) {
      const RolloutBatch eval = collect_episodes(
          config, slots, net_ptrs, config.eval_episodes, RolloutMode::kEval,
          mix_seed(seed, 3000000ULL + update));
      for (auto row : summarize_batch(eval, update, n)) {
        result.eval_metrics.push_back(row);
      }
    }
  }
  result.final_nets = std::move(nets);
  return result;
}

inline TrainingResult run_training(const TrainConfig& config,
                                   std::uint64_t seed) {
  TrainingResult result;
  for (int s = 0; s < config.n_seeds; ++s) {
    result.seeds.push_back(train_one_seed(config, mix_seed(seed, s)));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Regression: chips accrued vs contracts signed (Fig 6-style analysis).
// ---------------------------------------------------------------------------

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // all-identical x: slope undefined
  std::vector<std::pair<double, double>> scatter;  // (contracts, chips)
};

inline RegressionResult ols_regression(
    const std::vector<std::pair<double, double>>& points) {
  RegressionResult r;
  r.scatter = points;
  const std::size_t n = points.size();
  if (n < 3) throw std::invalid_argument("need at least 3 points");
  double mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0;
  for (const auto& [x, y] : points) {
    const double e = y - (r.intercept + r.slope * x);
    sse += e * e;
  }
  const double dof = static_cast<double>(n) - 2.0;
  const double se = std::sqrt(sse / dof / sxx);
  if (se == 0.0) {
    r.p_value = 0.0;
    return r;
  }
  const double t = r.slope / se;
  boost::math::students_t dist(dof);
  r.p_value = 2.0 * boost::math::cdf(dist, -std::abs(t));
  return r;
}

// Roll out eval episodes from trained networks and regress chips accrued on
// contracts signed, one record per player per episode.
inline RegressionResult regression_report(const TrainConfig& config,
                                          const std::vector<Network>& nets,
                                          int episodes, std::uint64_t seed) {
  const auto slots = scenario_slots(config.scenario, config.env.n_players);
  std::vector<const Network*> net_ptrs;
  for (const auto& net : nets) net_ptrs.push_back(&net);
  const RolloutBatch batch = collect_episodes(config, slots, net_ptrs, episodes,
                                              RolloutMode::kEval, seed);
  std::vector<std::pair<double, double>> points;
  for (const auto& s : batch.stats) {
    for (int p = 0; p < config.env.n_players; ++p) {
      points.emplace_back(s.contracts_signed[p], s.chips_accrued[p]);
    }
  }
  return ols_regression(points);
}

}  // namespace alab

#endif  // ALLIANCE_LAB_TRAINING_HPP
