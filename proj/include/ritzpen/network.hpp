#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ritzpen/field.hpp"
#include "ritzpen/geometry.hpp"
#include "ritzpen/problem.hpp"

namespace ritzpen {

enum class Activation { relu, tanh };

/// Fully connected scalar network u_theta: R^d -> R with layer widths
/// (N_0=d, ..., N_L=1).  theta flattens (W_1, b_1, ..., W_L, b_L) with
/// row-major weight blocks.  The hidden activation is applied after
/// every layer except the last.
struct NetworkFamily {
  std::vector<int> widths;
  Activation activation = Activation::tanh;
  std::vector<double> theta;
  std::uint64_t seed = 0;

  /// Parse "d-W-...-1:activation" (e.g. "1-16-16-1:tanh") and initialize
  /// weights uniformly in +-sqrt(6/(fan_in+fan_out)) with zero biases,
  /// deterministically from the seed.
  static NetworkFamily from_spec(const std::string& spec, std::uint64_t seed);

  /// Wrap explicit parameters; theta length must match the widths.
  static NetworkFamily with_parameters(std::vector<int> widths, Activation activation,
                                       std::vector<double> theta);

  int input_dim() const { return widths.front(); }
  int layer_count() const { return static_cast<int>(widths.size()) - 1; }
  int parameter_count() const;
  std::string spec_string() const;
};

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

/// Forward evaluation with spatial gradients at each point.
std::vector<ValueGrad> eval_network(const NetworkFamily& fam,
                                    std::span<const Vec2> points);

/// Recorded forward pass over a batch of points.  Supplies the batch
/// results and accumulates d(objective)/d(theta) for any objective of
/// the form sum_p [ value_bar_p * u(x_p) + grad_bar_p . grad u(x_p) ].
class GradientTape {
public:
  GradientTape(const NetworkFamily& fam, std::span<const Vec2> points);

  int batch_size() const { return batch_; }
  ValueGrad result(int i) const;

  void accumulate(std::span<const double> value_bar, std::span<const Vec2> grad_bar,
                  std::vector<double>& theta_bar) const;

private:
  const NetworkFamily* fam_;
  int batch_ = 0;
  int dim_ = 0;
  // act[l]: post-activation outputs (batch x N_l), l = 0..L.
  // pre[l]: pre-activation values, l = 1..L (pre[0] unused).
  // jac[l]: post-activation spatial jacobians (batch x N_l x d), l = 0..L.
  // pre_jac[l]: pre-activation jacobians, l = 1..L.
  std::vector<std::vector<double>> act_, pre_, jac_, pre_jac_;
};

/// Where the volume integral of the energy is sampled: the mesh
/// quadrature (deterministic) or a seeded uniform Monte-Carlo draw.
/// The boundary term always uses the mesh's boundary quadrature.
struct SamplingSpec {
  int mc_samples = 0;
  std::uint64_t seed = 0;
};

struct EnergyGradient {
  double energy = 0.0;
  std::vector<double> grad;
};

/// Energy of the network under the problem's quadrature (or the Monte
/// Carlo sample) together with the exact gradient of that discretized
/// objective with respect to theta.
EnergyGradient energy_gradient(const NetworkFamily& fam, const PenalizedProblem& p,
                               const SamplingSpec& sampling = {});

/// The network as a DiscreteFunction on the problem domain.
DiscreteFunction network_function(const NetworkFamily& fam, DomainKind domain);

/// The Monte-Carlo volume sample used by energy_gradient for a given
/// spec (exposed so experiments can reuse identical draws).
std::vector<QuadPoint> monte_carlo_sample(const DomainMesh& mesh, int count,
                                          std::uint64_t seed);

}  // namespace ritzpen
