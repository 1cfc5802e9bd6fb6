#ifndef ALLIANCE_LAB_AGENTS_HPP
#define ALLIANCE_LAB_AGENTS_HPP

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "alliance_lab/contracts.hpp"
#include "alliance_lab/gifting.hpp"
#include "alliance_lab/net.hpp"

namespace alab {

// ---------------------------------------------------------------------------
// Scripted agents.
// ---------------------------------------------------------------------------

// Bernoulli policy over a 2-action matrix game: plays action 0 with the given
// probability.
inline int stubborn_act(double prob, std::mt19937_64& rng) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("bad prob");
  if (prob == 1.0) return 0;
  if (prob == 0.0) return 1;
  return uniform01(rng) < prob ? 0 : 1;
}

// Mimics the target player's most recent action. Gifts aimed at the bot are
// reciprocated back to the target; gifts aimed at a third party are copied to
// that same player; before the target has acted the bot discards. Absolute
// mimicry matters: the target can only gain chips through genuine exchange
// with the bot, so the best achievable outcome is a two-way draw.
class CopyBot {
 public:
  explicit CopyBot(int target = 0) : target_(target) {}

  int target() const { return target_; }

  void observe_action(int actor, const GiftAction& action) {
    if (actor == target_) last_target_action_ = action;
  }

  void reset() { last_target_action_.reset(); }

  GiftAction act(int self, const GiftingState& /*state*/) const {
    if (!last_target_action_.has_value()) return GiftAction::Discard();
    const GiftAction& a = *last_target_action_;
    if (a.is_discard()) return GiftAction::Discard();
    if (a.recipient == self) return GiftAction::GiftTo(target_);
    return a;
  }

 private:
  int target_ = 0;
  std::optional<GiftAction> last_target_action_;
};

// ---------------------------------------------------------------------------
// Learnable contract-aware agent.
// ---------------------------------------------------------------------------

struct ForwardResult {
  Vec env_probs;           // masked, renormalized
  Vec offer_probs;         // after any trembling-hand floor mixture
  Vec raw_offer_probs;     // pre-mixture head distribution
  double value = 0.0;
  Vec memory;
  Network::StepCache cache;
};

struct TremblingFloor {
  int forced_offer_index = -1;
  double p_c = 0.0;
};

// One forward step: masked env policy, contract policy with optional floor.
inline ForwardResult agent_forward(const Network& net, const Vec& memory,
                                   const Vec& observation,
                                   const std::vector<bool>& env_mask,
                                   const std::optional<TremblingFloor>& floor =
                                       std::nullopt) {
  ForwardResult r;
  const auto out = net.forward(observation, memory, &r.cache);
  r.env_probs = masked_softmax(out.env_logits, env_mask);
  r.raw_offer_probs = masked_softmax(out.offer_logits, {});
  r.offer_probs = r.raw_offer_probs;
  if (floor.has_value()) {
    r.offer_probs *= (1.0 - floor->p_c);
    r.offer_probs[floor->forced_offer_index] += floor->p_c;
  }
  r.value = out.value;
  r.memory = out.memory;
  return r;
}

inline int sample_index(const Vec& probs, std::mt19937_64& rng) {
  double u = uniform01(rng);
  for (int k = 0; k < probs.size(); ++k) {
    u -= probs[k];
    if (u <= 0.0) return k;
  }
  for (int k = static_cast<int>(probs.size()) - 1; k >= 0; --k) {
    if (probs[k] > 0.0) return k;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Checkpoints: JSON weight dump with a NetworkSpec header.
// ---------------------------------------------------------------------------

inline nlohmann::json spec_to_json(const NetworkSpec& spec) {
  return nlohmann::json{{"input_size", spec.input_size},
                        {"trunk_widths", spec.trunk_widths},
                        {"recurrent_width", spec.recurrent_width},
                        {"env_actions", spec.env_actions},
                        {"offer_actions", spec.offer_actions}};
}

inline NetworkSpec spec_from_json(const nlohmann::json& j) {
  NetworkSpec spec;
  spec.input_size = j.at("input_size").get<int>();
  spec.trunk_widths = j.at("trunk_widths").get<std::vector<int>>();
  spec.recurrent_width = j.at("recurrent_width").get<int>();
  spec.env_actions = j.at("env_actions").get<int>();
  spec.offer_actions = j.at("offer_actions").get<int>();
  return spec;
}

inline void save_checkpoint(const Network& net, const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["spec"] = spec_to_json(net.spec());
  std::vector<double> theta(net.params().data(),
                            net.params().data() + net.n_params());
  j["theta"] = theta;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump();
}

inline Network load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("version").get<int>() != 1) {
    throw std::runtime_error("unsupported checkpoint version");
  }
  Network net(spec_from_json(j.at("spec")));
  const auto theta = j.at("theta").get<std::vector<double>>();
  if (static_cast<int>(theta.size()) != net.n_params()) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  Vec v(net.n_params());
  for (int k = 0; k < net.n_params(); ++k) v[k] = theta[k];
  net.set_params(v);
  return net;
}

}  // namespace alab

#endif  // ALLIANCE_LAB_AGENTS_HPP
