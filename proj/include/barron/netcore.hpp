#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "barron/pwl.hpp"

namespace barron {

struct DenseLayer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;
};

/// x -> w_out . ReLU(W_{L-1} ... ReLU(W_0 x + b_0) ...) + b_out.
/// `depth()` counts hidden layers; every hidden layer has width >= 1.
class ReluNetwork {
 public:
  ReluNetwork(int d, std::vector<DenseLayer> hidden, Eigen::VectorXd out_w, double out_b);

  int input_dim() const { return d_; }
  int depth() const { return static_cast<int>(hidden_.size()); }
  std::vector<int> widths() const;
  const std::vector<DenseLayer>& hidden() const { return hidden_; }
  const Eigen::VectorXd& out_w() const { return out_w_; }
  double out_b() const { return out_b_; }

  double forward(std::span<const double> x) const;
  /// Columns of X are points (d x n).
  Eigen::VectorXd forward_batch(const Eigen::MatrixXd& X) const;

 private:
  int d_;
  std::vector<DenseLayer> hidden_;
  Eigen::VectorXd out_w_;
  double out_b_;
};

enum class Activation { heaviside, clipped_ramp, logistic };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Heaviside with H(0) = 1; clipped ramp min(max(t, 0), 1); logistic 1/(1+e^{-t}).
double activate(Activation a, double t);

struct ShallowUnit {
  double c = 0.0;
  Eigen::VectorXd w;
  double b = 0.0;
  double tau = 1.0;  // sharpness; the unit computes c * sigma(tau (w.x + b))
};

/// x -> sum_i c_i sigma(tau_i (w_i . x + b_i)) + c0.
struct ShallowNet {
  int d = 1;
  std::vector<ShallowUnit> units;
  double c0 = 0.0;
  Activation act = Activation::heaviside;
};

double forward_shallow(const ShallowNet& net, std::span<const double> x);
Eigen::VectorXd forward_shallow_batch(const ShallowNet& net, const Eigen::MatrixXd& X);

/// Exact restriction t -> net(base + t dir) on [t0, t1].
PiecewiseLinear restrict_to_line(const ReluNetwork& net, std::span<const double> base,
                                 std::span<const double> dir, double t0 = 0.0, double t1 = 1.0);

/// Product of induced l-infinity norms of the hidden layers times |w_out|_1.
double lipschitz_bound(const ReluNetwork& net);

/// Same function, hidden rows rescaled to unit l1 norm (positive homogeneity
/// of ReLU); tightens lipschitz_bound to a path-norm-like value.
ReluNetwork normalize_rows(const ReluNetwork& net);

struct NetworkStats {
  int depth = 0;
  std::vector<int> widths;
  std::size_t parameters = 0;
  double lipschitz = 0.0;
};

NetworkStats stats(const ReluNetwork& net);

/// Depth-1 ReLU network equal to a clipped-ramp ShallowNet everywhere, or to a
/// Heaviside ShallowNet except within 1/(ramp |w_i|_2) of each unit's
/// hyperplane, on its negative side: H(z) is replaced by
/// ReLU(ramp z + 1) - ReLU(ramp z).
ReluNetwork embed_shallow(const ShallowNet& net, double ramp = 1e9);

/// Appends identity layers (hidden activations are nonnegative, so ReLU(I a) = a)
/// until the network has `depth` hidden layers.
ReluNetwork deepen(const ReluNetwork& net, int depth);

/// Block-diagonal stacking; outputs add. Depths and input dims must match.
ReluNetwork stack(const ReluNetwork& a, const ReluNetwork& b);

std::string serialize(const ReluNetwork& net);
std::string serialize(const ShallowNet& net);
std::variant<ReluNetwork, ShallowNet> deserialize(const std::string& text);

}  // namespace barron
