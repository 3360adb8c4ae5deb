#include "ritzpen/network.hpp"

#include <cmath>
#include <sstream>

#include "ritzpen/errors.hpp"
#include "ritzpen/rng.hpp"

namespace ritzpen {

namespace {

int weight_count(const std::vector<int>& widths) {
  int n = 0;
  for (std::size_t l = 1; l < widths.size(); ++l)
    n += widths[l] * widths[l - 1] + widths[l];
  return n;
}

void validate_widths(const std::vector<int>& widths) {
  require_config(widths.size() >= 2, "network needs at least one layer");
  require_config(widths.front() == 1 || widths.front() == 2,
                 "network input width must be 1 or 2");
  require_config(widths.back() == 1, "network output width must be 1");
  for (int w : widths) require_config(w >= 1, "network widths must be positive");
}

struct Act {
  double (*f)(double);
  double (*d1)(double);
  double (*d2)(double);
};

double relu_f(double z) { return z > 0.0 ? z : 0.0; }
double relu_d1(double z) { return z > 0.0 ? 1.0 : 0.0; }  // convention: rho'(0) = 0
double relu_d2(double) { return 0.0; }
double tanh_f(double z) { return std::tanh(z); }
double tanh_d1(double z) {
  const double t = std::tanh(z);
  return 1.0 - t * t;
}
double tanh_d2(double z) {
  const double t = std::tanh(z);
  return -2.0 * t * (1.0 - t * t);
}

Act activation_table(Activation a) {
  if (a == Activation::relu) return {relu_f, relu_d1, relu_d2};
  return {tanh_f, tanh_d1, tanh_d2};
}

// Offset of W_l within theta; biases follow the weight block.
int layer_offset(const std::vector<int>& widths, int layer) {
  int off = 0;
  for (int l = 1; l < layer; ++l) off += widths[l] * widths[l - 1] + widths[l];
  return off;
}

}  // namespace

int NetworkFamily::parameter_count() const { return weight_count(widths); }

std::string NetworkFamily::spec_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i) os << '-';
    os << widths[i];
  }
  os << ':' << to_string(activation);
  return os.str();
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw ConfigError("unknown activation '" + name + "' (expected relu or tanh)");
}

std::string to_string(Activation a) {
  return a == Activation::relu ? "relu" : "tanh";
}

NetworkFamily NetworkFamily::from_spec(const std::string& spec, std::uint64_t seed) {
  const std::size_t colon = spec.find(':');
  require_config(colon != std::string::npos,
                 "network spec must look like 'd-W-...-1:activation'");
  NetworkFamily fam;
  fam.activation = activation_from_string(spec.substr(colon + 1));
  std::stringstream widths_part(spec.substr(0, colon));
  std::string token;
  while (std::getline(widths_part, token, '-')) {
    try {
      std::size_t used = 0;
      const int w = std::stoi(token, &used);
      require_config(used == token.size(), "bad width token");
      fam.widths.push_back(w);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad width '" + token + "' in network spec '" + spec + "'");
    }
  }
  validate_widths(fam.widths);
  fam.seed = seed;
  fam.theta.assign(fam.parameter_count(), 0.0);
  Rng rng(seed);
  for (int l = 1; l <= fam.layer_count(); ++l) {
    const int rows = fam.widths[l], cols = fam.widths[l - 1];
    const double limit = std::sqrt(6.0 / (rows + cols));
    double* w = fam.theta.data() + layer_offset(fam.widths, l);
    for (int k = 0; k < rows * cols; ++k) w[k] = rng.uniform(-limit, limit);
    // biases stay zero
  }
  return fam;
}

NetworkFamily NetworkFamily::with_parameters(std::vector<int> widths, Activation activation,
                                             std::vector<double> theta) {
  validate_widths(widths);
  require_config(static_cast<int>(theta.size()) == weight_count(widths),
                 "parameter vector length does not match the layer widths");
  NetworkFamily fam;
  fam.widths = std::move(widths);
  fam.activation = activation;
  fam.theta = std::move(theta);
  return fam;
}

GradientTape::GradientTape(const NetworkFamily& fam, std::span<const Vec2> points)
    : fam_(&fam), batch_(static_cast<int>(points.size())), dim_(fam.input_dim()) {
  require_config(static_cast<int>(fam.theta.size()) == fam.parameter_count(),
                 "parameter vector length does not match the layer widths");
  const int L = fam.layer_count();
  const Act act = activation_table(fam.activation);
  act_.resize(L + 1);
  pre_.resize(L + 1);
  jac_.resize(L + 1);
  pre_jac_.resize(L + 1);

  act_[0].resize(static_cast<std::size_t>(batch_) * dim_);
  jac_[0].assign(static_cast<std::size_t>(batch_) * dim_ * dim_, 0.0);
  for (int p = 0; p < batch_; ++p) {
    act_[0][p * dim_ + 0] = points[p].x;
    if (dim_ == 2) act_[0][p * dim_ + 1] = points[p].y;
    for (int k = 0; k < dim_; ++k) jac_[0][(p * dim_ + k) * dim_ + k] = 1.0;
  }

  for (int l = 1; l <= L; ++l) {
    const int rows = fam.widths[l], cols = fam.widths[l - 1];
    const double* W = fam.theta.data() + layer_offset(fam.widths, l);
    const double* b = W + rows * cols;
    pre_[l].assign(static_cast<std::size_t>(batch_) * rows, 0.0);
    pre_jac_[l].assign(static_cast<std::size_t>(batch_) * rows * dim_, 0.0);
    for (int p = 0; p < batch_; ++p) {
      const double* ain = act_[l - 1].data() + static_cast<std::size_t>(p) * cols;
      const double* gin = jac_[l - 1].data() + static_cast<std::size_t>(p) * cols * dim_;
      double* z = pre_[l].data() + static_cast<std::size_t>(p) * rows;
      double* gz = pre_jac_[l].data() + static_cast<std::size_t>(p) * rows * dim_;
      for (int i = 0; i < rows; ++i) {
        const double* wrow = W + static_cast<std::size_t>(i) * cols;
        double zi = b[i];
        for (int j = 0; j < cols; ++j) zi += wrow[j] * ain[j];
        z[i] = zi;
        for (int k = 0; k < dim_; ++k) {
          double g = 0.0;
          for (int j = 0; j < cols; ++j) g += wrow[j] * gin[j * dim_ + k];
          gz[i * dim_ + k] = g;
        }
      }
    }
    if (l < L) {
      act_[l].resize(pre_[l].size());
      jac_[l].resize(pre_jac_[l].size());
      for (std::size_t idx = 0; idx < pre_[l].size(); ++idx) {
        act_[l][idx] = act.f(pre_[l][idx]);
        const double d1 = act.d1(pre_[l][idx]);
        for (int k = 0; k < dim_; ++k)
          jac_[l][idx * dim_ + k] = d1 * pre_jac_[l][idx * dim_ + k];
      }
    } else {
      act_[l] = pre_[l];
      jac_[l] = pre_jac_[l];
    }
  }
}

ValueGrad GradientTape::result(int i) const {
  const int L = fam_->layer_count();
  ValueGrad out;
  out.value = act_[L][i];
  out.grad.x = jac_[L][static_cast<std::size_t>(i) * dim_ + 0];
  out.grad.y = dim_ == 2 ? jac_[L][static_cast<std::size_t>(i) * dim_ + 1] : 0.0;
  return out;
}

void GradientTape::accumulate(std::span<const double> value_bar,
                              std::span<const Vec2> grad_bar,
                              std::vector<double>& theta_bar) const {
  const NetworkFamily& fam = *fam_;
  const int L = fam.layer_count();
  const Act act = activation_table(fam.activation);
  require(static_cast<int>(value_bar.size()) == batch_ &&
              static_cast<int>(grad_bar.size()) == batch_,
          "cotangent batch size mismatch");
  require(static_cast<int>(theta_bar.size()) == fam.parameter_count(),
          "theta_bar length mismatch");

  // Adjoints of the current layer's pre-activation value and jacobian.
  std::vector<double> zbar(static_cast<std::size_t>(batch_) * 1);
  std::vector<double> gzbar(static_cast<std::size_t>(batch_) * dim_);
  for (int p = 0; p < batch_; ++p) {
    zbar[p] = value_bar[p];
    gzbar[p * dim_ + 0] = grad_bar[p].x;
    if (dim_ == 2) gzbar[p * dim_ + 1] = grad_bar[p].y;
  }

  for (int l = L; l >= 1; --l) {
    const int rows = fam.widths[l], cols = fam.widths[l - 1];
    const double* W = fam.theta.data() + layer_offset(fam.widths, l);
    double* Wbar = theta_bar.data() + layer_offset(fam.widths, l);
    double* bbar = Wbar + rows * cols;

    // z_l = W_l a_{l-1} + b_l,  Gz_l = W_l G_{l-1}.
    std::vector<double> abar;
    std::vector<double> gbar_prev;
    if (l > 1) {
      abar.assign(static_cast<std::size_t>(batch_) * cols, 0.0);
      gbar_prev.assign(static_cast<std::size_t>(batch_) * cols * dim_, 0.0);
    }
    for (int p = 0; p < batch_; ++p) {
      const double* ain = act_[l - 1].data() + static_cast<std::size_t>(p) * cols;
      const double* gin = jac_[l - 1].data() + static_cast<std::size_t>(p) * cols * dim_;
      const double* zb = zbar.data() + static_cast<std::size_t>(p) * rows;
      const double* gzb = gzbar.data() + static_cast<std::size_t>(p) * rows * dim_;
      for (int i = 0; i < rows; ++i) {
        const double* wrow = W + static_cast<std::size_t>(i) * cols;
        double* wbrow = Wbar + static_cast<std::size_t>(i) * cols;
        bbar[i] += zb[i];
        for (int j = 0; j < cols; ++j) {
          double wb = zb[i] * ain[j];
          for (int k = 0; k < dim_; ++k) wb += gzb[i * dim_ + k] * gin[j * dim_ + k];
          wbrow[j] += wb;
        }
        if (l > 1) {
          double* ab = abar.data() + static_cast<std::size_t>(p) * cols;
          double* gb = gbar_prev.data() + static_cast<std::size_t>(p) * cols * dim_;
          for (int j = 0; j < cols; ++j) {
            ab[j] += wrow[j] * zb[i];
            for (int k = 0; k < dim_; ++k)
              gb[j * dim_ + k] += wrow[j] * gzb[i * dim_ + k];
          }
        }
      }
    }
    if (l > 1) {
      // Pull the adjoint through the activation of layer l-1:
      //   a = rho(z), G = rho'(z) (.) Gz
      // so zbar = abar rho'(z) + rho''(z) sum_k Gbar_k Gz_k and
      // Gzbar = Gbar rho'(z).
      const int prev = cols;
      zbar.assign(static_cast<std::size_t>(batch_) * prev, 0.0);
      gzbar.assign(static_cast<std::size_t>(batch_) * prev * dim_, 0.0);
      for (int p = 0; p < batch_; ++p) {
        for (int i = 0; i < prev; ++i) {
          const std::size_t idx = static_cast<std::size_t>(p) * prev + i;
          const double z = pre_[l - 1][idx];
          const double d1 = act.d1(z), d2 = act.d2(z);
          double dot = 0.0;
          for (int k = 0; k < dim_; ++k)
            dot += gbar_prev[idx * dim_ + k] * pre_jac_[l - 1][idx * dim_ + k];
          zbar[idx] = abar[idx] * d1 + d2 * dot;
          for (int k = 0; k < dim_; ++k)
            gzbar[idx * dim_ + k] = gbar_prev[idx * dim_ + k] * d1;
        }
      }
    }
  }
}

std::vector<ValueGrad> eval_network(const NetworkFamily& fam,
                                    std::span<const Vec2> points) {
  GradientTape tape(fam, points);
  std::vector<ValueGrad> out(points.size());
  for (int i = 0; i < tape.batch_size(); ++i) out[i] = tape.result(i);
  return out;
}

DiscreteFunction network_function(const NetworkFamily& fam, DomainKind domain) {
  require_config(fam.input_dim() == dimension(domain),
                 "network input width does not match the domain dimension");
  return {domain, [fam](const Vec2& p) {
            const Vec2 pts[1] = {p};
            GradientTape tape(fam, pts);
            return tape.result(0);
          }};
}

std::vector<QuadPoint> monte_carlo_sample(const DomainMesh& mesh, int count,
                                          std::uint64_t seed) {
  require_config(count > 0, "Monte Carlo sample size must be positive");
  Rng rng(seed);
  std::vector<QuadPoint> pts;
  pts.reserve(count);
  switch (mesh.kind()) {
    case DomainKind::interval:
      for (int k = 0; k < count; ++k) pts.push_back({{rng.uniform(), 0.0}, 1.0 / count});
      break;
    case DomainKind::unit_square:
      for (int k = 0; k < count; ++k)
        pts.push_back({{rng.uniform(), rng.uniform()}, 1.0 / count});
      break;
    case DomainKind::unit_disk_polar:
      for (int k = 0; k < count; ++k) {
        const double r = std::sqrt(rng.uniform());
        const double t = rng.uniform(0.0, 2.0 * M_PI);
        pts.push_back({{r * std::cos(t), r * std::sin(t)}, M_PI / count});
      }
      break;
  }
  return pts;
}

namespace {

void check_finite_batch(const GradientTape& tape, std::span<const QuadPoint> pts) {
  for (int i = 0; i < tape.batch_size(); ++i) {
    const ValueGrad vg = tape.result(i);
    if (!std::isfinite(vg.value) || !std::isfinite(vg.grad.x) ||
        !std::isfinite(vg.grad.y)) {
      std::ostringstream os;
      os << "non-finite network output at point (" << pts[i].x.x << ", " << pts[i].x.y
         << ")";
      throw NumericalError(os.str());
    }
  }
}

}  // namespace

EnergyGradient energy_gradient(const NetworkFamily& fam, const PenalizedProblem& p,
                               const SamplingSpec& sampling) {
  const DomainMesh& mesh = *p.mesh;
  EnergyGradient out;
  out.grad.assign(fam.parameter_count(), 0.0);

  std::vector<QuadPoint> mc;
  std::span<const QuadPoint> volume;
  if (sampling.mc_samples > 0) {
    mc = monte_carlo_sample(mesh, sampling.mc_samples, sampling.seed);
    volume = mc;
  } else {
    volume = mesh.volume_quadrature();
  }

  // Batches cover whole cells (or fixed-size slices of the Monte Carlo
  // draw); accumulation runs in batch order, so results are
  // reproducible bit for bit.
  const int ppc = sampling.mc_samples > 0 ? 64 : mesh.points_per_cell();
  const int chunk = std::max(1, 256 / ppc) * ppc;

  std::vector<Vec2> xs;
  std::vector<double> vbar;
  std::vector<Vec2> gbar;
  for (std::size_t start = 0; start < volume.size(); start += chunk) {
    const std::size_t stop = std::min(volume.size(), start + chunk);
    const std::span<const QuadPoint> batch = volume.subspan(start, stop - start);
    xs.clear();
    for (const QuadPoint& q : batch) xs.push_back(q.x);
    GradientTape tape(fam, xs);
    check_finite_batch(tape, batch);
    vbar.assign(batch.size(), 0.0);
    gbar.assign(batch.size(), Vec2{});
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const QuadPoint& q = batch[i];
      const ValueGrad u = tape.result(static_cast<int>(i));
      const Vec2 flux = p.A(q.x) * u.grad;
      double integrand = 0.5 * flux.dot(u.grad) - p.f(q.x) * u.value;
      vbar[i] = -q.w * p.f(q.x);
      if (p.mass_term) {
        integrand += 0.5 * u.value * u.value;
        vbar[i] += q.w * u.value;
      }
      out.energy += q.w * integrand;
      gbar[i] = q.w * flux;
    }
    tape.accumulate(vbar, gbar, out.grad);
  }

  if (p.boundary_mode == BoundaryMode::penalty) {
    const std::span<const QuadPoint> bdry(mesh.boundary_quadrature());
    for (std::size_t start = 0; start < bdry.size(); start += 256) {
      const std::size_t stop = std::min(bdry.size(), start + 256);
      const std::span<const QuadPoint> batch = bdry.subspan(start, stop - start);
      xs.clear();
      for (const QuadPoint& q : batch) xs.push_back(q.x);
      GradientTape tape(fam, xs);
      check_finite_batch(tape, batch);
      vbar.assign(batch.size(), 0.0);
      gbar.assign(batch.size(), Vec2{});
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const double u = tape.result(static_cast<int>(i)).value;
        out.energy += batch[i].w * 0.5 * p.lambda * u * u;
        vbar[i] = batch[i].w * p.lambda * u;
      }
      tape.accumulate(vbar, gbar, out.grad);
    }
  }
  return out;
}

}  // namespace ritzpen
