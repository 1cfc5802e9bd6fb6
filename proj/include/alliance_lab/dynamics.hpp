#ifndef ALLIANCE_LAB_DYNAMICS_HPP
#define ALLIANCE_LAB_DYNAMICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "alliance_lab/matrix_games.hpp"

namespace alab {

// Probabilities of taking action 0 for players 0, 1, 2.
struct PolicyTriple {
  double x = 0.5, y = 0.5, z = 0.5;
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

// Expected payoff triple: trilinear expectation over the 8 joint actions.
inline std::array<double, 3> expected_payoffs(const ThreePlayerGame& game,
                                              const PolicyTriple& pi) {
  std::array<double, 3> u{};
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        const double w = (a0 == 0 ? pi.x : 1.0 - pi.x) *
                         (a1 == 0 ? pi.y : 1.0 - pi.y) *
                         (a2 == 0 ? pi.z : 1.0 - pi.z);
        const auto pay = game.payoffs(a0, a1, a2);
        for (int i = 0; i < 3; ++i) u[i] += w * pay[i];
      }
    }
  }
  return u;
}

// Analytic partial derivative of player's own expected payoff with respect to
// its own action-0 probability. The expectation is linear in that probability,
// so the derivative is E[u | a=0] - E[u | a=1] over the co-players' mixture.
inline double exact_gradient(const ThreePlayerGame& game,
                             const PolicyTriple& pi, int player) {
  if (player < 0 || player > 2) throw std::invalid_argument("bad player");
  double diff = 0.0;
  const int i = (player == 0) ? 1 : 0;
  const int j = (player == 2) ? 1 : 2;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double w = (a == 0 ? pi[i] : 1.0 - pi[i]) *
                       (b == 0 ? pi[j] : 1.0 - pi[j]);
      std::array<int, 3> joint{};
      joint[i] = a;
      joint[j] = b;
      joint[player] = 0;
      const double u0 = game.payoffs(joint[0], joint[1], joint[2])[player];
      joint[player] = 1;
      const double u1 = game.payoffs(joint[0], joint[1], joint[2])[player];
      diff += w * (u0 - u1);
    }
  }
  return diff;
}

enum class Parameterization { kDirectProbability, kLogitSigmoid };

struct DynamicsConfig {
  double learning_rate = 0.1;
  int n_steps = 10000;
  Parameterization parameterization = Parameterization::kLogitSigmoid;
  std::array<bool, 3> learners{true, true, true};
  double stubborn_policy = 0.5;  // action-0 probability of non-learners
  // Early-exit when the largest parameter change drops below this.
  double convergence_tol = 1e-9;
};

struct TrajectoryPoint {
  int step = 0;
  PolicyTriple policy;
  std::array<double, 3> payoffs{};
};

using TrajectoryRecord = std::vector<TrajectoryPoint>;

namespace detail {
inline double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }
inline double logit(double p) {
  const double eps = 1e-12;
  const double c = std::min(1.0 - eps, std::max(eps, p));
  return std::log(c / (1.0 - c));
}
}  // namespace detail

// Simultaneous gradient ascent: each learner follows its own payoff gradient
// while non-learners are pinned at stubborn_policy.
inline TrajectoryRecord simulate_learning(const ThreePlayerGame& game,
                                          const DynamicsConfig& config,
                                          PolicyTriple init) {
  bool any_learner = false;
  for (int i = 0; i < 3; ++i) any_learner |= config.learners[i];
  if (!any_learner) throw std::invalid_argument("learner set must be non-empty");

  PolicyTriple pi = init;
  std::array<double, 3> theta{};
  const bool logit_space =
      config.parameterization == Parameterization::kLogitSigmoid;
  for (int i = 0; i < 3; ++i) {
    if (!config.learners[i]) pi[i] = config.stubborn_policy;
    theta[i] = logit_space ? detail::logit(pi[i]) : pi[i];
  }

  TrajectoryRecord traj;
  traj.reserve(config.n_steps + 1);
  traj.push_back({0, pi, expected_payoffs(game, pi)});
  for (int step = 1; step <= config.n_steps; ++step) {
    std::array<double, 3> grad{};
    for (int i = 0; i < 3; ++i) {
      if (!config.learners[i]) continue;
      double g = exact_gradient(game, pi, i);
      if (logit_space) {
        const double s = detail::sigmoid(theta[i]);
        g *= s * (1.0 - s);
      }
      grad[i] = g;
    }
    double max_delta = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (!config.learners[i]) continue;
      const double delta = config.learning_rate * grad[i];
      theta[i] += delta;
      pi[i] = logit_space ? detail::sigmoid(theta[i])
                          : std::min(1.0, std::max(0.0, theta[i]));
      max_delta = std::max(max_delta, std::abs(delta));
    }
    traj.push_back({step, pi, expected_payoffs(game, pi)});
    if (max_delta < config.convergence_tol) break;
  }
  return traj;
}

struct FixedPointEntry {
  std::string pattern;      // e.g. "(0.5, 0.5, 0.5)" or "(1, 0, z)"
  PolicyTriple representative;
  bool stable = false;
  std::string stability;    // "unstable" / "stable (boundary)" / ...
};

struct FixedPointReport {
  bool analytic = false;
  std::vector<FixedPointEntry> entries;
};

namespace detail {

// Jacobian of the simultaneous-ascent field F_i = d u_i / d pi_i, by central
// finite differences of the analytic gradients.
inline std::array<std::array<double, 3>, 3> ascent_jacobian(
    const ThreePlayerGame& game, const PolicyTriple& pi, double h = 1e-6) {
  std::array<std::array<double, 3>, 3> jac{};
  for (int j = 0; j < 3; ++j) {
    PolicyTriple hi = pi, lo = pi;
    hi[j] += h;
    lo[j] -= h;
    for (int i = 0; i < 3; ++i) {
      jac[i][j] =
          (exact_gradient(game, hi, i) - exact_gradient(game, lo, i)) / (2 * h);
    }
  }
  return jac;
}

// Largest real part over the eigenvalues of a real 3x3 matrix, via the power
// iteration-free route: roots of the characteristic cubic.
inline double max_eigen_real_part(const std::array<std::array<double, 3>, 3>& m) {
  // Characteristic polynomial lambda^3 - tr lambda^2 + c2 lambda - det.
  const double tr = m[0][0] + m[1][1] + m[2][2];
  const double c2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] +
                    m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                    m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double det =
      m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  // Solve lambda^3 + a lambda^2 + b lambda + c = 0.
  const double a = -tr, b = c2, c = -det;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0) {
    // One real root, two complex-conjugate roots with real part -t/2 + shift.
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    const double real_root = u + v + shift;
    const double conj_real = -(u + v) / 2.0 + shift;
    return std::max(real_root, conj_real);
  }
  // Three real roots.
  const double r = std::sqrt(std::max(0.0, -p * p * p / 27.0));
  const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
  const double mag = 2.0 * std::cbrt(r);
  double best = -1e300;
  for (int k = 0; k < 3; ++k) {
    best = std::max(best, mag * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift);
  }
  return best;
}

}  // namespace detail

inline bool is_odd_one_out(const ThreePlayerGame& g) {
  return std::abs(g.p - 1.0) < 1e-12 && std::abs(g.q - 1.0) < 1e-12;
}

// Fixed points of the 3-learner simultaneous-ascent field. Analytic for the
// Odd One Out game; other games fall back to a numeric grid scan.
inline FixedPointReport fixed_point_report(const ThreePlayerGame& game) {
  FixedPointReport report;
  if (is_odd_one_out(game)) {
    report.analytic = true;
    FixedPointEntry interior;
    interior.pattern = "(0.5, 0.5, 0.5)";
    interior.representative = {0.5, 0.5, 0.5};
    const double lam = detail::max_eigen_real_part(
        detail::ascent_jacobian(game, interior.representative));
    interior.stable = lam < 0;
    interior.stability = interior.stable ? "stable" : "unstable";
    report.entries.push_back(interior);

    // Boundary families (1, 0, z) and permutations: one player pinned at 1,
    // another at 0, the third free. Attracting from the interior.
    const std::array<std::array<int, 2>, 6> perms{
        {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}};
    for (const auto& pr : perms) {
      FixedPointEntry e;
      const int one = pr[0], zero = pr[1];
      const int free_idx = 3 - one - zero;
      std::array<std::string, 3> sym;
      sym[one] = "1";
      sym[zero] = "0";
      sym[free_idx] = "z";
      e.pattern = "(" + sym[0] + ", " + sym[1] + ", " + sym[2] + ")";
      e.representative[one] = 1.0;
      e.representative[zero] = 0.0;
      e.representative[free_idx] = 0.5;
      e.stable = true;
      e.stability = "stable (boundary)";
      report.entries.push_back(e);
    }
    return report;
  }

  // Numeric-only fallback: scan a grid for near-zero ascent field (projected
  // onto the feasible box: boundary coordinates only count if the field does
  // not push back inside).
  report.analytic = false;
  const int n = 21;
  auto projected_norm = [&](const PolicyTriple& pi) {
    double norm = 0.0;
    for (int i = 0; i < 3; ++i) {
      double g = exact_gradient(game, pi, i);
      if (pi[i] <= 0.0 && g < 0) g = 0;
      if (pi[i] >= 1.0 && g > 0) g = 0;
      norm += g * g;
    }
    return std::sqrt(norm);
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        PolicyTriple pi{a / (n - 1.0), b / (n - 1.0), c / (n - 1.0)};
        if (projected_norm(pi) > 1e-9) continue;
        bool duplicate = false;
        for (const auto& e : report.entries) {
          const double d = std::abs(e.representative.x - pi.x) +
                           std::abs(e.representative.y - pi.y) +
                           std::abs(e.representative.z - pi.z);
          if (d < 1e-6) duplicate = true;
        }
        if (duplicate) continue;
        FixedPointEntry e;
        e.representative = pi;
        e.pattern = "numeric";
        const double lam =
            detail::max_eigen_real_part(detail::ascent_jacobian(game, pi));
        e.stable = lam < 0;
        e.stability = e.stable ? "stable" : "unstable";
        report.entries.push_back(e);
      }
    }
  }
  return report;
}

struct AllianceOptimum {
  double match_prob = 0.0;   // symmetric probability of playing the stubborn
                             // agent's action
  double per_learner_value = 0.0;
};

// Optimal symmetric alliance policy against a deterministic stubborn player 2.
// The joint learner return is quadratic in the match probability, so a
// three-point quadratic fit recovers it exactly.
inline AllianceOptimum alliance_optimum(const ThreePlayerGame& game,
                                        double stubborn_prob) {
  if (stubborn_prob != 0.0 && stubborn_prob != 1.0) {
    throw std::invalid_argument("stubborn policy must be deterministic");
  }
  const double z = stubborn_prob;  // action-0 probability of the stubborn

  auto joint = [&](double t) {
    // Both learners play the stubborn action with probability t.
    const double own0 = (z == 1.0) ? t : 1.0 - t;
    const auto u = expected_payoffs(game, PolicyTriple{own0, own0, z});
    return u[0] + u[1];
  };

  const double j0 = joint(0.0), jh = joint(0.5), j1 = joint(1.0);
  // joint(t) = A t^2 + B t + C with C = j0.
  const double A = 2.0 * (j1 + j0) - 4.0 * jh;
  const double B = j1 - j0 - A;

  double best_t = 0.0;
  double best_j = j0;
  if (j1 > best_j) {
    best_t = 1.0;
    best_j = j1;
  }
  if (A < 0.0) {
    const double vertex = -B / (2.0 * A);
    if (vertex > 0.0 && vertex < 1.0) {
      const double jv = joint(vertex);
      if (jv > best_j) {
        best_t = vertex;
        best_j = jv;
      }
    }
  }
  return AllianceOptimum{best_t, best_j / 2.0};
}

}  // namespace alab

#endif  // ALLIANCE_LAB_DYNAMICS_HPP
