#ifndef ALLIANCE_LAB_CONTRACTS_HPP
#define ALLIANCE_LAB_CONTRACTS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "alliance_lab/gifting.hpp"

namespace alab {

enum class ContractMode { kBinding, kPunishment };

struct ContractConfig {
  ContractMode mode = ContractMode::kBinding;
  int b = 6;            // timesteps to fulfil (punishment mode)
  double r_c = -1.0;    // penalty reward for a broken contract
  double p_c = 0.5;     // trembling-hand floor probability
  std::vector<bool> enabled;  // per player; empty means all enabled
};

// An offer is either nothing, or (partner, promised-by-self,
// requested-of-partner).
struct ContractOffer {
  bool none = true;
  int partner = -1;
  GiftAction promised;   // action of the offering player
  GiftAction requested;  // action of the partner

  static ContractOffer NoOffer() { return ContractOffer{}; }
  static ContractOffer Make(int partner, GiftAction promised,
                            GiftAction requested) {
    return ContractOffer{false, partner, promised, requested};
  }
  bool operator==(const ContractOffer& o) const = default;
};

// Index codec over a player's offer alphabet: index 0 is NoOffer, the rest
// enumerate (partner, promised, requested). Size 1 + (n-1) * |A|^2.
inline int offer_alphabet_size(int n_players) {
  const int a = action_alphabet_size(n_players);
  return 1 + (n_players - 1) * a * a;
}

inline int offer_to_index(int player, const ContractOffer& offer,
                          int n_players) {
  if (offer.none) return 0;
  if (offer.partner == player || offer.partner < 0 ||
      offer.partner >= n_players) {
    throw std::invalid_argument("bad offer partner");
  }
  const int a = action_alphabet_size(n_players);
  const int partner_pos =
      offer.partner < player ? offer.partner : offer.partner - 1;
  const int promised = action_to_index(player, offer.promised, n_players);
  const int requested =
      action_to_index(offer.partner, offer.requested, n_players);
  return 1 + (partner_pos * a + promised) * a + requested;
}

inline ContractOffer offer_from_index(int player, int index, int n_players) {
  if (index == 0) return ContractOffer::NoOffer();
  const int a = action_alphabet_size(n_players);
  int k = index - 1;
  if (k < 0 || k >= (n_players - 1) * a * a) {
    throw std::out_of_range("offer index");
  }
  const int requested_idx = k % a;
  k /= a;
  const int promised_idx = k % a;
  const int partner_pos = k / a;
  int partner = partner_pos;
  if (partner >= player) ++partner;
  return ContractOffer::Make(partner,
                             action_from_index(player, promised_idx, n_players),
                             action_from_index(partner, requested_idx, n_players));
}

// Two offers match when they are mirrored: each names the other as partner,
// and each player's promise is what the other requested.
inline bool offers_match(int i, const ContractOffer& oi, int j,
                         const ContractOffer& oj) {
  if (oi.none || oj.none) return false;
  return oi.partner == j && oj.partner == i && oi.promised == oj.requested &&
         oi.requested == oj.promised;
}

struct ActiveContract {
  int parties[2] = {-1, -1};
  GiftAction obligation[2];  // obligation[k] is what parties[k] must do
  int signed_at = -1;
  int deadline = -1;         // punishment mode only
  bool fulfilled[2] = {false, false};
  bool closed = false;

  int side_of(int player) const {
    if (player == parties[0]) return 0;
    if (player == parties[1]) return 1;
    return -1;
  }
};

// Contract category tags for the signing metrics: G-G (both promised gifts),
// NG-NG (both discards), mixed otherwise.
enum class ContractCategory { kGiftGift, kNoGiftNoGift, kMixed };

inline ContractCategory categorize(const ActiveContract& c) {
  const bool g0 = !c.obligation[0].is_discard();
  const bool g1 = !c.obligation[1].is_discard();
  if (g0 && g1) return ContractCategory::kGiftGift;
  if (!g0 && !g1) return ContractCategory::kNoGiftNoGift;
  return ContractCategory::kMixed;
}

struct ContractEvent {
  int timestep = 0;
  std::string event;  // offered | signed | fulfilled | broken | penalized | forced
  int parties[2] = {-1, -1};
  int offer_index = -1;
};

class ContractBook {
 public:
  explicit ContractBook(int n_players = 3) : active_of_(n_players, -1) {}

  int n_players() const { return static_cast<int>(active_of_.size()); }
  bool under_contract(int player) const { return active_of_[player] >= 0; }
  const std::vector<ActiveContract>& contracts() const { return contracts_; }

  const ActiveContract* active_contract(int player) const {
    const int idx = active_of_[player];
    return idx < 0 ? nullptr : &contracts_[idx];
  }

  std::vector<int> free_players(const std::vector<bool>& enabled) const {
    std::vector<int> free;
    for (int p = 0; p < n_players(); ++p) {
      const bool on = enabled.empty() || enabled[p];
      if (on && !under_contract(p)) free.push_back(p);
    }
    return free;
  }

  // Sign matching pairs among free players. Disjoint matches all sign;
  // overlapping candidates are resolved by repeated uniform draws.
  std::vector<ActiveContract> contract_phase(
      const std::vector<ContractOffer>& offers, int timestep,
      const ContractConfig& config, std::mt19937_64& rng) {
    struct Pair {
      int i, j;
    };
    std::vector<Pair> candidates;
    for (int i = 0; i < n_players(); ++i) {
      if (under_contract(i) || offers[i].none) continue;
      for (int j = i + 1; j < n_players(); ++j) {
        if (under_contract(j) || offers[j].none) continue;
        if (offers_match(i, offers[i], j, offers[j])) candidates.push_back({i, j});
      }
    }
    std::vector<ActiveContract> signed_now;
    while (!candidates.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const Pair chosen = candidates[pick(rng)];
      ActiveContract c;
      c.parties[0] = chosen.i;
      c.parties[1] = chosen.j;
      c.obligation[0] = offers[chosen.i].promised;
      c.obligation[1] = offers[chosen.j].promised;
      c.signed_at = timestep;
      if (config.mode == ContractMode::kPunishment) {
        c.deadline = timestep + config.b;
      }
      const int idx = static_cast<int>(contracts_.size());
      contracts_.push_back(c);
      active_of_[chosen.i] = idx;
      active_of_[chosen.j] = idx;
      signed_now.push_back(c);
      std::erase_if(candidates, [&](const Pair& p) {
        return p.i == chosen.i || p.i == chosen.j || p.j == chosen.i ||
               p.j == chosen.j;
      });
    }
    return signed_now;
  }

  // Binding mode: an unresolved obligation restricts the player's turn to the
  // promised action.
  std::vector<bool> binding_mask(int player, int n_actions) const {
    std::vector<bool> mask(n_actions, true);
    const ActiveContract* c = active_contract(player);
    if (c == nullptr) return mask;
    const int side = c->side_of(player);
    if (c->fulfilled[side]) return mask;
    std::fill(mask.begin(), mask.end(), false);
    mask[action_to_index(player, c->obligation[side], n_players())] = true;
    return mask;
  }

  // Binding mode: record that the player took its (enforced) turn. The
  // contract dissolves once both parties have acted.
  void note_binding_action(int player) {
    const int idx = active_of_[player];
    if (idx < 0) return;
    ActiveContract& c = contracts_[idx];
    c.fulfilled[c.side_of(player)] = true;
    if (c.fulfilled[0] && c.fulfilled[1]) close(idx);
  }

  struct PunishmentOutcome {
    std::vector<double> penalties;       // per player, 0 or r_c
    std::vector<ActiveContract> closed;  // contracts closed this call
  };

  // Punishment mode: credit a fulfilment if the acted player carried out its
  // obligation in time, then settle any contract whose deadline has arrived.
  PunishmentOutcome punishment_update(int acted_player,
                                      const GiftAction& action_taken,
                                      int timestep,
                                      const ContractConfig& config) {
    PunishmentOutcome out;
    out.penalties.assign(n_players(), 0.0);
    const int idx = active_of_[acted_player];
    if (idx >= 0) {
      ActiveContract& c = contracts_[idx];
      const int side = c.side_of(acted_player);
      if (!c.fulfilled[side] && timestep <= c.deadline &&
          action_taken == c.obligation[side]) {
        c.fulfilled[side] = true;
      }
      if (c.fulfilled[0] && c.fulfilled[1]) {
        out.closed.push_back(c);
        close(idx);
      }
    }
    for (std::size_t k = 0; k < contracts_.size(); ++k) {
      ActiveContract& c = contracts_[k];
      if (c.closed || timestep < c.deadline) continue;
      for (int side = 0; side < 2; ++side) {
        if (!c.fulfilled[side]) out.penalties[c.parties[side]] += config.r_c;
      }
      out.closed.push_back(c);
      close(static_cast<int>(k));
    }
    return out;
  }

 private:
  void close(int idx) {
    ActiveContract& c = contracts_[idx];
    c.closed = true;
    for (int side = 0; side < 2; ++side) {
      if (active_of_[c.parties[side]] == idx) active_of_[c.parties[side]] = -1;
    }
  }

  std::vector<ActiveContract> contracts_;
  std::vector<int> active_of_;  // player -> contract index, -1 if free
};

// A trembling-hand directive: a random free pair is nudged toward a random
// mirrored offer with minimum probability p_c.
struct TremblingDirective {
  int players[2] = {-1, -1};
  ContractOffer offers[2];
};

inline std::optional<TremblingDirective> trembling_hand_directive(
    const ContractBook& book, const std::vector<bool>& enabled,
    std::mt19937_64& rng) {
  const std::vector<int> free = book.free_players(enabled);
  if (free.size() < 2) return std::nullopt;
  const int n = book.n_players();
  std::uniform_int_distribution<std::size_t> pick_first(0, free.size() - 1);
  const std::size_t fi = pick_first(rng);
  std::uniform_int_distribution<std::size_t> pick_second(0, free.size() - 2);
  std::size_t fj = pick_second(rng);
  if (fj >= fi) ++fj;
  const int i = free[fi];
  const int j = free[fj];
  const int a = action_alphabet_size(n);
  std::uniform_int_distribution<int> pick_action(0, a - 1);
  const GiftAction act_i = action_from_index(i, pick_action(rng), n);
  const GiftAction act_j = action_from_index(j, pick_action(rng), n);
  TremblingDirective d;
  d.players[0] = i;
  d.players[1] = j;
  d.offers[0] = ContractOffer::Make(j, act_i, act_j);
  d.offers[1] = ContractOffer::Make(i, act_j, act_i);
  return d;
}

// One-hot block of every player's previous-timestep offer; in punishment mode,
// per-player under-contract flags follow.
inline std::vector<double> contract_observation(
    const std::vector<ContractOffer>& previous_offers, const ContractBook& book,
    ContractMode mode) {
  const int n = book.n_players();
  const int alphabet = offer_alphabet_size(n);
  std::vector<double> block;
  block.reserve(n * alphabet + (mode == ContractMode::kPunishment ? n : 0));
  for (int p = 0; p < n; ++p) {
    std::vector<double> onehot(alphabet, 0.0);
    if (p < static_cast<int>(previous_offers.size())) {
      onehot[offer_to_index(p, previous_offers[p], n)] = 1.0;
    }
    block.insert(block.end(), onehot.begin(), onehot.end());
  }
  if (mode == ContractMode::kPunishment) {
    for (int p = 0; p < n; ++p) block.push_back(book.under_contract(p) ? 1.0 : 0.0);
  }
  return block;
}

inline int contract_observation_size(int n_players, ContractMode mode) {
  return n_players * offer_alphabet_size(n_players) +
         (mode == ContractMode::kPunishment ? n_players : 0);
}

}  // namespace alab

#endif  // ALLIANCE_LAB_CONTRACTS_HPP
