#ifndef ALLIANCE_LAB_GIFTING_HPP
#define ALLIANCE_LAB_GIFTING_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "alliance_lab/rng.hpp"

namespace alab {

struct GiftingConfig {
  int n_players = 3;
  int m_chips = 5;
  // Length of the contract-channel slot appended to observations; zeros when
  // contracts are disabled. Defaults to the n=3 one-hot offer block.
  int contract_obs_len = 57;
  bool observe_discards = true;
};

// Discard, or gift the chip to another player (absolute player index).
struct GiftAction {
  int recipient = -1;  // -1 means discard

  bool is_discard() const { return recipient < 0; }
  static GiftAction Discard() { return GiftAction{-1}; }
  static GiftAction GiftTo(int r) { return GiftAction{r}; }
  bool operator==(const GiftAction& o) const = default;
};

// Per-player env action alphabet: index 0 = Discard, indices 1..n-1 = gift to
// the other players in ascending index order (skipping self).
inline int action_alphabet_size(int n_players) { return n_players; }

inline GiftAction action_from_index(int actor, int index, int n_players) {
  if (index < 0 || index >= n_players) throw std::out_of_range("action index");
  if (index == 0) return GiftAction::Discard();
  int r = index - 1;
  if (r >= actor) ++r;
  return GiftAction::GiftTo(r);
}

inline int action_to_index(int actor, const GiftAction& a, int n_players) {
  if (a.is_discard()) return 0;
  if (a.recipient == actor || a.recipient < 0 || a.recipient >= n_players) {
    throw std::invalid_argument("bad gift recipient");
  }
  return 1 + (a.recipient < actor ? a.recipient : a.recipient - 1);
}

struct EpisodeResult {
  std::vector<double> payoffs;  // per player, sums to 1
  std::vector<int> winners;
};

class GiftingState {
 public:
  GiftingState() = default;

  static GiftingState reset(const GiftingConfig& config, std::uint64_t seed) {
    if (config.n_players < 2 || config.m_chips < 1) {
      throw std::invalid_argument("need n_players >= 2 and m_chips >= 1");
    }
    GiftingState s;
    s.config_ = config;
    const int n = config.n_players;
    s.own_remaining_.assign(n, config.m_chips);
    s.holdings_.assign(n, std::vector<int>(n, 0));
    s.discarded_.assign(n, 0);
    s.turn_ = 0;
    s.seat_of_.resize(n);
    std::iota(s.seat_of_.begin(), s.seat_of_.end(), 0);
    auto rng = make_rng(seed);
    std::shuffle(s.seat_of_.begin(), s.seat_of_.end(), rng);
    s.occupant_of_.resize(n);
    for (int p = 0; p < n; ++p) s.occupant_of_[s.seat_of_[p]] = p;
    return s;
  }

  const GiftingConfig& config() const { return config_; }
  int n_players() const { return config_.n_players; }
  int turn() const { return turn_; }
  int episode_length() const { return config_.n_players * config_.m_chips; }
  bool terminal() const { return turn_ == episode_length(); }
  int seat_of(int player) const { return seat_of_[player]; }
  int occupant_of(int seat) const { return occupant_of_[seat]; }
  int own_remaining(int player) const { return own_remaining_[player]; }
  int holdings(int holder, int colour) const { return holdings_[holder][colour]; }
  int discarded(int colour) const { return discarded_[colour]; }

  int total_held(int player) const {
    int total = 0;
    for (int c = 0; c < n_players(); ++c) total += holdings_[player][c];
    return total;
  }

  int current_player() const {
    if (terminal()) throw std::logic_error("episode over");
    return occupant_of_[turn_ % n_players()];
  }

  std::vector<GiftAction> legal_actions(int player) const {
    if (terminal()) return {};
    if (player != current_player()) throw std::logic_error("out of turn");
    std::vector<GiftAction> actions;
    if (own_remaining_[player] > 0) {
      actions.reserve(n_players());
      for (int k = 0; k < n_players(); ++k) {
        actions.push_back(action_from_index(player, k, n_players()));
      }
    }
    return actions;
  }

  void step(const GiftAction& action) {
    const int p = current_player();
    if (own_remaining_[p] <= 0) throw std::logic_error("no chips left");
    if (action.is_discard()) {
      ++discarded_[p];
    } else {
      if (action.recipient == p || action.recipient < 0 ||
          action.recipient >= n_players()) {
        throw std::invalid_argument("illegal gift recipient");
      }
      ++holdings_[action.recipient][p];
    }
    --own_remaining_[p];
    ++turn_;
  }

  // Winners hold the most chips of any colour; they share the unit payoff.
  EpisodeResult score() const {
    if (!terminal()) throw std::logic_error("episode not over");
    const int n = n_players();
    EpisodeResult result;
    result.payoffs.assign(n, 0.0);
    int best = 0;
    for (int p = 0; p < n; ++p) best = std::max(best, total_held(p));
    for (int p = 0; p < n; ++p) {
      if (total_held(p) == best) result.winners.push_back(p);
    }
    const double share = 1.0 / result.winners.size();
    for (int w : result.winners) result.payoffs[w] = share;
    return result;
  }

  // Flattened observation: holdings matrix, own piles, discards, current-seat
  // and own-seat one-hots, turn progress, then the contract slot.
  std::vector<double> observation(int player,
                                  const std::vector<double>& contract_block =
                                      {}) const {
    const int n = n_players();
    const double m = config_.m_chips;
    std::vector<double> obs;
    obs.reserve(observation_size());
    for (int h = 0; h < n; ++h) {
      for (int c = 0; c < n; ++c) obs.push_back(holdings_[h][c] / m);
    }
    for (int p = 0; p < n; ++p) obs.push_back(own_remaining_[p] / m);
    for (int c = 0; c < n; ++c) {
      obs.push_back(config_.observe_discards ? discarded_[c] / m : 0.0);
    }
    const int current_seat = terminal() ? -1 : turn_ % n;
    for (int s = 0; s < n; ++s) obs.push_back(s == current_seat ? 1.0 : 0.0);
    for (int s = 0; s < n; ++s) {
      obs.push_back(s == seat_of_[player] ? 1.0 : 0.0);
    }
    obs.push_back(static_cast<double>(turn_) / episode_length());
    for (int k = 0; k < config_.contract_obs_len; ++k) {
      obs.push_back(k < static_cast<int>(contract_block.size())
                        ? contract_block[k]
                        : 0.0);
    }
    return obs;
  }

  int observation_size() const {
    const int n = n_players();
    return n * n + n + n + n + n + 1 + config_.contract_obs_len;
  }

 private:
  GiftingConfig config_;
  std::vector<int> own_remaining_;            // by colour/player
  std::vector<std::vector<int>> holdings_;    // [holder][colour]
  std::vector<int> discarded_;                // by colour
  int turn_ = 0;
  std::vector<int> seat_of_;                  // player -> seat
  std::vector<int> occupant_of_;              // seat -> player
};

}  // namespace alab

#endif  // ALLIANCE_LAB_GIFTING_HPP
