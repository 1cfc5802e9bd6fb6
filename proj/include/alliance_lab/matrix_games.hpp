#ifndef ALLIANCE_LAB_MATRIX_GAMES_HPP
#define ALLIANCE_LAB_MATRIX_GAMES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "alliance_lab/rng.hpp"

namespace alab {

// ---------------------------------------------------------------------------
// Two-player 2x2 games and the epsilon-constant-sum measure.
// ---------------------------------------------------------------------------

struct TwoPlayerGame {
  // u1[a][b]: row player's payoff, u2[a][b]: column player's payoff.
  std::array<std::array<double, 2>, 2> u1{};
  std::array<std::array<double, 2>, 2> u2{};
};

// Minimal epsilon such that all four outcome payoff-sums are mutually within
// epsilon of each other, i.e. the range max(sums) - min(sums).
inline double epsilon_of_game(const TwoPlayerGame& g) {
  double lo = g.u1[0][0] + g.u2[0][0];
  double hi = lo;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double s = g.u1[a][b] + g.u2[a][b];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  return hi - lo;
}

inline TwoPlayerGame sample_two_player_game(std::mt19937_64& rng) {
  TwoPlayerGame g;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      g.u1[a][b] = uniform01(rng);
      g.u2[a][b] = uniform01(rng);
    }
  }
  return g;
}

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
};

// Histogram of epsilon_of_game over freshly sampled games, binned on [0, 2].
inline std::vector<HistogramBin> run_epsilon_histogram(int n_games, int n_bins,
                                                       std::uint64_t seed) {
  if (n_games < 1) throw std::invalid_argument("n_games must be >= 1");
  if (n_bins < 2) throw std::invalid_argument("n_bins must be >= 2");
  const double width = 2.0 / n_bins;
  std::vector<HistogramBin> bins(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    bins[b].lo = b * width;
    bins[b].hi = (b + 1) * width;
  }
  for (int i = 0; i < n_games; ++i) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(i));
    const double eps = epsilon_of_game(sample_two_player_game(rng));
    int b = static_cast<int>(eps / width);
    b = std::clamp(b, 0, n_bins - 1);
    ++bins[b].count;
  }
  return bins;
}

// ---------------------------------------------------------------------------
// The p-q family of symmetric zero-sum (constant-sum-1) three-player games.
// ---------------------------------------------------------------------------

struct ThreePlayerGame {
  double p = 0.0;
  double q = 0.0;

  // Payoff triple for a joint action (a0, a1, a2), each in {0, 1}.
  // A player in the minority gets p (if their action is 1) or q (if 0);
  // the majority pair splits the remainder. Unanimity pays 1/3 each.
  std::array<double, 3> payoffs(int a0, int a1, int a2) const {
    const std::array<int, 3> a{a0, a1, a2};
    const int zeros = (a0 == 0) + (a1 == 0) + (a2 == 0);
    std::array<double, 3> u{};
    if (zeros == 0 || zeros == 3) {
      u.fill(1.0 / 3.0);
      return u;
    }
    const int minority_action = (zeros == 1) ? 0 : 1;
    const double lone = (minority_action == 1) ? p : q;
    for (int i = 0; i < 3; ++i) {
      u[i] = (a[i] == minority_action) ? lone : (1.0 - lone) / 2.0;
    }
    return u;
  }
};

inline ThreePlayerGame build_pq_game(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("p and q must lie in [0, 1]");
  }
  return ThreePlayerGame{p, q};
}

inline ThreePlayerGame odd_one_out_game() { return build_pq_game(1.0, 1.0); }
inline ThreePlayerGame matching_game() { return build_pq_game(0.0, 0.0); }

// ---------------------------------------------------------------------------
// Reduction by a stubborn player and social-dilemma classification.
// ---------------------------------------------------------------------------

struct ReducedGame {
  // u[a_self][a_other]: payoff of either remaining player (the reduced game
  // is symmetric).
  std::array<std::array<double, 2>, 2> u{};
  double stubborn_prob = 0.0;  // probability the stubborn player plays 0
};

inline ReducedGame reduce_two_player(const ThreePlayerGame& game,
                                     int stubborn_player,
                                     double stubborn_prob) {
  if (stubborn_player < 0 || stubborn_player > 2) {
    throw std::invalid_argument("stubborn_player must be 0, 1 or 2");
  }
  if (!(stubborn_prob >= 0.0 && stubborn_prob <= 1.0)) {
    throw std::invalid_argument("stubborn_prob must lie in [0, 1]");
  }
  const int i = (stubborn_player == 0) ? 1 : 0;
  const int j = (stubborn_player == 2) ? 1 : 2;
  ReducedGame r;
  r.stubborn_prob = stubborn_prob;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double expect = 0.0;
      for (int s = 0; s < 2; ++s) {
        std::array<int, 3> joint{};
        joint[i] = a;
        joint[j] = b;
        joint[stubborn_player] = s;
        const double w = (s == 0) ? stubborn_prob : 1.0 - stubborn_prob;
        expect += w * game.payoffs(joint[0], joint[1], joint[2])[i];
      }
      r.u[a][b] = expect;
    }
  }
  return r;
}

struct DilemmaPayoffs {
  double R = 0.0, S = 0.0, T = 0.0, P = 0.0;
  int cooperate_action = 0;
};

inline DilemmaPayoffs extract_payoffs(const ReducedGame& g,
                                      int cooperate_action) {
  const int c = cooperate_action;
  const int d = 1 - c;
  return DilemmaPayoffs{g.u[c][c], g.u[c][d], g.u[d][c], g.u[d][d], c};
}

struct DilemmaClassification {
  bool is_dilemma = false;
  bool greed = false;
  bool fear = false;
  bool strict = false;
};

// Social-dilemma conditions, all strict inequalities; ties never qualify.
inline DilemmaClassification classify(const DilemmaPayoffs& x) {
  DilemmaClassification c;
  c.greed = x.T > x.R;
  c.fear = x.P > x.S;
  c.is_dilemma = (x.R > x.P) && (x.R > x.S) && (c.greed || c.fear);
  c.strict = c.is_dilemma && (2.0 * x.R > x.T + x.S);
  return c;
}

struct GridpointClassification {
  double stubborn_prob = 0.0;
  // Indexed by the action labeled as "cooperate".
  std::array<DilemmaClassification, 2> by_labeling{};
  bool any_dilemma() const {
    return by_labeling[0].is_dilemma || by_labeling[1].is_dilemma;
  }
  bool any_strict() const {
    return by_labeling[0].strict || by_labeling[1].strict;
  }
};

struct AllianceDilemmaReport {
  std::vector<GridpointClassification> gridpoints;
  bool has_dilemma = false;
  bool has_strict_dilemma = false;
};

// Sweep the stubborn player's policy over a grid and test both cooperate
// labelings at each gridpoint. The stubborn index is fixed to player 2; the
// game family is symmetric so the choice does not matter.
inline AllianceDilemmaReport detect_alliance_dilemma(
    const ThreePlayerGame& game, double grid_step = 0.1,
    int stubborn_player = 2) {
  const int n_points = static_cast<int>(std::lround(1.0 / grid_step)) + 1;
  if (std::abs((n_points - 1) * grid_step - 1.0) > 1e-12) {
    throw std::invalid_argument("grid_step must divide 1 evenly");
  }
  AllianceDilemmaReport report;
  report.gridpoints.reserve(n_points);
  for (int k = 0; k < n_points; ++k) {
    GridpointClassification gp;
    gp.stubborn_prob = std::min(1.0, k * grid_step);
    const ReducedGame reduced =
        reduce_two_player(game, stubborn_player, gp.stubborn_prob);
    for (int c = 0; c < 2; ++c) {
      gp.by_labeling[c] = classify(extract_payoffs(reduced, c));
    }
    report.has_dilemma |= gp.any_dilemma();
    report.has_strict_dilemma |= gp.any_strict();
    report.gridpoints.push_back(gp);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Counting experiment over randomly sampled (p, q) games.
// ---------------------------------------------------------------------------

struct CountingRecord {
  int game_index = 0;
  double p = 0.0;
  double q = 0.0;
  bool has_dilemma = false;
  bool has_strict = false;
};

struct CountingSummary {
  std::vector<CountingRecord> records;
  double dilemma_fraction = 0.0;
  // Both denominators are reported: the strict count over dilemma-containing
  // games, and over all sampled games. At large n the former converges to
  // roughly 0.20 and the latter to roughly 0.11 for this family.
  double strict_fraction_of_dilemmas = 0.0;
  double strict_fraction_of_games = 0.0;
  // games_with_dilemma_at[k]: number of games whose reduction at gridpoint k
  // contains a dilemma.
  std::vector<std::int64_t> games_with_dilemma_at;
  // dilemma_gridpoint_histogram[c]: number of games with exactly c dilemma
  // gridpoints (c in 0..11).
  std::vector<std::int64_t> dilemma_gridpoint_histogram;
};

inline CountingSummary run_counting_experiment(int n_games,
                                               std::uint64_t seed) {
  if (n_games < 1) throw std::invalid_argument("n_games must be >= 1");
  CountingSummary summary;
  summary.records.reserve(n_games);
  summary.games_with_dilemma_at.assign(11, 0);
  summary.dilemma_gridpoint_histogram.assign(12, 0);
  std::int64_t n_dilemma = 0;
  std::int64_t n_strict = 0;
  for (int i = 0; i < n_games; ++i) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(i));
    const double p = uniform01(rng);
    const double q = uniform01(rng);
    const auto report = detect_alliance_dilemma(build_pq_game(p, q));
    summary.records.push_back(
        {i, p, q, report.has_dilemma, report.has_strict_dilemma});
    int gridpoints_with_dilemma = 0;
    for (std::size_t k = 0; k < report.gridpoints.size(); ++k) {
      if (report.gridpoints[k].any_dilemma()) {
        ++summary.games_with_dilemma_at[k];
        ++gridpoints_with_dilemma;
      }
    }
    ++summary.dilemma_gridpoint_histogram[gridpoints_with_dilemma];
    n_dilemma += report.has_dilemma;
    n_strict += report.has_strict_dilemma;
  }
  summary.dilemma_fraction = static_cast<double>(n_dilemma) / n_games;
  summary.strict_fraction_of_dilemmas =
      (n_dilemma > 0) ? static_cast<double>(n_strict) / n_dilemma : 0.0;
  summary.strict_fraction_of_games = static_cast<double>(n_strict) / n_games;
  return summary;
}

}  // namespace alab

#endif  // ALLIANCE_LAB_MATRIX_GAMES_HPP
