#ifndef ALLIANCE_LAB_NET_HPP
#define ALLIANCE_LAB_NET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "alliance_lab/rng.hpp"

namespace alab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Rectifier MLP trunk, one gated recurrent cell, and three linear heads:
// environment-action logits, contract-offer logits, scalar value.
struct NetworkSpec {
  int input_size = 0;
  std::vector<int> trunk_widths{128, 128};
  int recurrent_width = 128;
  int env_actions = 3;
  int offer_actions = 19;

  bool operator==(const NetworkSpec&) const = default;
};

namespace detail {

struct ParamBlock {
  int offset = 0;
  int rows = 0;
  int cols = 0;  // cols == 1 for bias vectors
  int size() const { return rows * cols; }
};

}  // namespace detail

class Network {
 public:
  explicit Network(const NetworkSpec& spec) : spec_(spec) { build_layout(); }

  const NetworkSpec& spec() const { return spec_; }
  int n_params() const { return n_params_; }
  const Vec& params() const { return theta_; }
  Vec& params() { return theta_; }
  void set_params(const Vec& theta) {
    if (theta.size() != n_params_) throw std::invalid_argument("bad params");
    theta_ = theta;
  }

  // Small uniform init scaled by fan-in.
  void init_params(std::uint64_t seed) {
    theta_ = Vec::Zero(n_params_);
    auto rng = make_rng(seed);
    for (const auto& blk : blocks_) {
      if (blk.cols == 1) continue;  // biases stay zero
      const double scale = 1.0 / std::sqrt(static_cast<double>(blk.cols));
      std::uniform_real_distribution<double> dist(-scale, scale);
      for (int k = 0; k < blk.size(); ++k) theta_[blk.offset + k] = dist(rng);
    }
  }

  Vec initial_memory() const { return Vec::Zero(spec_.recurrent_width); }

  struct StepCache {
    Vec input;
    std::vector<Vec> trunk_pre;   // pre-activation per trunk layer
    std::vector<Vec> trunk_post;  // post-relu per trunk layer
    Vec h_prev, z, r, hhat, h;
  };

  struct StepOutput {
    Vec env_logits;
    Vec offer_logits;
    double value = 0.0;
    Vec memory;  // new recurrent state
  };

  StepOutput forward(const Vec& input, const Vec& memory,
                     StepCache* cache = nullptr) const {
    if (input.size() != spec_.input_size) {
      throw std::invalid_argument("observation size mismatch");
    }
    if (memory.size() != spec_.recurrent_width) {
      throw std::invalid_argument("memory size mismatch");
    }
    Vec x = input;
    std::vector<Vec> pre, post;
    for (std::size_t l = 0; l < spec_.trunk_widths.size(); ++l) {
      Vec a = mat(theta_, trunk_w_[l]) * x + vec(theta_, trunk_b_[l]);
      Vec y = a.cwiseMax(0.0);
      pre.push_back(a);
      post.push_back(y);
      x = std::move(y);
    }
    const Vec z =
        sigmoid(mat(theta_, wz_) * x + mat(theta_, uz_) * memory + vec(theta_, bz_));
    const Vec r =
        sigmoid(mat(theta_, wr_) * x + mat(theta_, ur_) * memory + vec(theta_, br_));
    const Vec hhat = (mat(theta_, wh_) * x +
                      mat(theta_, uh_) * r.cwiseProduct(memory) + vec(theta_, bh_))
                         .array()
                         .tanh();
    const Vec h = (Vec::Ones(z.size()) - z).cwiseProduct(memory) +
                  z.cwiseProduct(hhat);

    StepOutput out;
    out.env_logits = mat(theta_, we_) * h + vec(theta_, be_);
    out.offer_logits = mat(theta_, wc_) * h + vec(theta_, bc_);
    out.value = vec(theta_, wv_).dot(h) + vec(theta_, bv_)[0];
    out.memory = h;
    if (cache != nullptr) {
      cache->input = input;
      cache->trunk_pre = std::move(pre);
      cache->trunk_post = std::move(post);
      cache->h_prev = memory;
      cache->z = z;
      cache->r = r;
      cache->hhat = hhat;
      cache->h = h;
    }
    return out;
  }

  // Per-step upstream gradients on the heads; zero-length vectors mean no
  // contribution at that step.
  struct StepGrad {
    Vec d_env_logits;
    Vec d_offer_logits;
    double d_value = 0.0;
  };

  // Backpropagation through time over one episode. caches[t] must come from
  // forward() calls chained through memory.
  Vec backward(const std::vector<StepCache>& caches,
               const std::vector<StepGrad>& grads) const {
    if (caches.size() != grads.size()) throw std::invalid_argument("bpp size");
    Vec g = Vec::Zero(n_params_);
    const int hw = spec_.recurrent_width;
    Vec dh_carry = Vec::Zero(hw);
    for (int t = static_cast<int>(caches.size()) - 1; t >= 0; --t) {
      const StepCache& c = caches[t];
      const StepGrad& up = grads[t];
      Vec dh = dh_carry;
      if (up.d_env_logits.size() > 0) {
        dh += mat(theta_, we_).transpose() * up.d_env_logits;
        mat(g, we_) += up.d_env_logits * c.h.transpose();
        vec(g, be_) += up.d_env_logits;
      }
      if (up.d_offer_logits.size() > 0) {
        dh += mat(theta_, wc_).transpose() * up.d_offer_logits;
        mat(g, wc_) += up.d_offer_logits * c.h.transpose();
        vec(g, bc_) += up.d_offer_logits;
      }
      if (up.d_value != 0.0) {
        dh += up.d_value * vec(theta_, wv_);
        vec(g, wv_) += up.d_value * c.h;
        vec(g, bv_)[0] += up.d_value;
      }

      const Vec& xin = c.trunk_post.empty() ? c.input : c.trunk_post.back();
      const Vec dz = dh.cwiseProduct(c.hhat - c.h_prev);
      const Vec dhhat = dh.cwiseProduct(c.z);
      Vec dh_prev = dh.cwiseProduct(Vec::Ones(hw) - c.z);

      const Vec da_h =
          dhhat.cwiseProduct(Vec::Ones(hw) - c.hhat.cwiseProduct(c.hhat));
      mat(g, wh_) += da_h * xin.transpose();
      mat(g, uh_) += da_h * c.r.cwiseProduct(c.h_prev).transpose();
      vec(g, bh_) += da_h;
      const Vec drh = mat(theta_, uh_).transpose() * da_h;
      const Vec dr = drh.cwiseProduct(c.h_prev);
      dh_prev += drh.cwiseProduct(c.r);

      const Vec da_z =
          dz.cwiseProduct(c.z.cwiseProduct(Vec::Ones(hw) - c.z));
      mat(g, wz_) += da_z * xin.transpose();
      mat(g, uz_) += da_z * c.h_prev.transpose();
      vec(g, bz_) += da_z;
      dh_prev += mat(theta_, uz_).transpose() * da_z;

      const Vec da_r =
          dr.cwiseProduct(c.r.cwiseProduct(Vec::Ones(hw) - c.r));
      mat(g, wr_) += da_r * xin.transpose();
      mat(g, ur_) += da_r * c.h_prev.transpose();
      vec(g, br_) += da_r;
      dh_prev += mat(theta_, ur_).transpose() * da_r;

      Vec dx = mat(theta_, wz_).transpose() * da_z +
               mat(theta_, wr_).transpose() * da_r +
               mat(theta_, wh_).transpose() * da_h;
      for (int l = static_cast<int>(spec_.trunk_widths.size()) - 1; l >= 0; --l) {
        const Vec da =
            dx.cwiseProduct((c.trunk_pre[l].array() > 0.0).cast<double>().matrix());
        const Vec& below = (l == 0) ? c.input : c.trunk_post[l - 1];
        mat(g, trunk_w_[l]) += da * below.transpose();
        vec(g, trunk_b_[l]) += da;
        dx = mat(theta_, trunk_w_[l]).transpose() * da;
      }
      dh_carry = dh_prev;
    }
    return g;
  }

 private:
  static Vec sigmoid(const Vec& v) {
    return (1.0 / (1.0 + (-v.array()).exp())).matrix();
  }

  using Block = detail::ParamBlock;

  static Eigen::Map<const Mat> mat(const Vec& v, const Block& b) {
    return Eigen::Map<const Mat>(v.data() + b.offset, b.rows, b.cols);
  }
  static Eigen::Map<Mat> mat(Vec& v, const Block& b) {
    return Eigen::Map<Mat>(v.data() + b.offset, b.rows, b.cols);
  }
  static Eigen::Map<const Vec> vec(const Vec& v, const Block& b) {
    return Eigen::Map<const Vec>(v.data() + b.offset, b.rows);
  }
  static Eigen::Map<Vec> vec(Vec& v, const Block& b) {
    return Eigen::Map<Vec>(v.data() + b.offset, b.rows);
  }

  Block add_block(int rows, int cols) {
    Block b{n_params_, rows, cols};
    blocks_.push_back(b);
    n_params_ += b.size();
    return b;
  }

  void build_layout() {
    n_params_ = 0;
    blocks_.clear();
    int in = spec_.input_size;
    for (int w : spec_.trunk_widths) {
      trunk_w_.push_back(add_block(w, in));
      trunk_b_.push_back(add_block(w, 1));
      in = w;
    }
    const int h = spec_.recurrent_width;
    wz_ = add_block(h, in);
    uz_ = add_block(h, h);
    bz_ = add_block(h, 1);
    wr_ = add_block(h, in);
    ur_ = add_block(h, h);
    br_ = add_block(h, 1);
    wh_ = add_block(h, in);
    uh_ = add_block(h, h);
    bh_ = add_block(h, 1);
    we_ = add_block(spec_.env_actions, h);
    be_ = add_block(spec_.env_actions, 1);
    wc_ = add_block(spec_.offer_actions, h);
    bc_ = add_block(spec_.offer_actions, 1);
    wv_ = add_block(h, 1);
    bv_ = add_block(1, 1);
  }

  NetworkSpec spec_;
  int n_params_ = 0;
  std::vector<Block> blocks_;
  std::vector<Block> trunk_w_, trunk_b_;
  Block wz_, uz_, bz_, wr_, ur_, br_, wh_, uh_, bh_;
  Block we_, be_, wc_, bc_, wv_, bv_;
  Vec theta_;
};

// Masked softmax over logits; disallowed entries get probability 0.
inline Vec masked_softmax(const Vec& logits, const std::vector<bool>& mask) {
  double max_logit = -1e300;
  for (int k = 0; k < logits.size(); ++k) {
    if (mask.empty() || mask[k]) max_logit = std::max(max_logit, logits[k]);
  }
  Vec probs = Vec::Zero(logits.size());
  double total = 0.0;
  for (int k = 0; k < logits.size(); ++k) {
    if (mask.empty() || mask[k]) {
      probs[k] = std::exp(logits[k] - max_logit);
      total += probs[k];
    }
  }
  return probs / total;
}

inline double entropy(const Vec& probs) {
  double h = 0.0;
  for (int k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) h -= probs[k] * std::log(probs[k]);
  }
  return h;
}

}  // namespace alab

#endif  // ALLIANCE_LAB_NET_HPP
