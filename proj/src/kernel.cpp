#include "cae/kernel.hpp"

#include <cmath>
#include <numbers>

namespace cae {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::coulomb:
      return "coulomb";
    case KernelFamily::gaussian:
      return "gaussian";
    case KernelFamily::imq:
      return "imq";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "coulomb") return KernelFamily::coulomb;
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "imq") return KernelFamily::imq;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::coulomb(int h, double epsilon) {
  KernelSpec s;
  s.family = KernelFamily::coulomb;
  s.h = h;
  s.epsilon = epsilon;
  return s;
}

KernelSpec KernelSpec::gaussian(double sigma, int h) {
  KernelSpec s;
  s.family = KernelFamily::gaussian;
  s.h = h;
  s.sigma = sigma;
  return s;
}

KernelSpec KernelSpec::imq(int h, double c) {
  KernelSpec s;
  s.family = KernelFamily::imq;
  s.h = h;
  s.c = c > 0.0 ? c : 2.0 * h;
  return s;
}

void KernelSpec::validate() const {
  if (h < 1) throw std::invalid_argument("kernel: h must be >= 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("kernel: epsilon must be finite and >= 0");
  if (family == KernelFamily::gaussian && !(sigma > 0.0))
    throw std::invalid_argument("kernel: sigma must be > 0");
  if (family == KernelFamily::imq && !(c > 0.0))
    throw std::invalid_argument("kernel: c must be > 0");
}

double unit_ball_surface(int h) {
  if (h < 1) throw std::domain_error("unit_ball_surface: h must be >= 1");
  const double half = 0.5 * h;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

Kernel::Kernel(const KernelSpec& spec) : spec_(spec) {
  spec_.validate();
  surface_ = unit_ball_surface(spec_.h);
  beta_ = spec_.h - 2.0;
  eps_sq_ = spec_.epsilon * spec_.epsilon;
  inv_two_sigma_sq_ = 1.0 / (2.0 * spec_.sigma * spec_.sigma);
}

void Kernel::check_singular(double dist_sq) const {
  if (dist_sq == 0.0 && eps_sq_ == 0.0)
    throw SingularityError("coulomb kernel evaluated at coincident points with epsilon = 0");
}

double Kernel::value(double dist_sq) const {
  switch (spec_.family) {
    case KernelFamily::coulomb: {
      // -|d|/2 is continuous at d = 0; only its gradient is undefined there.
      if (spec_.h > 1) check_singular(dist_sq);
      const double r2 = dist_sq + eps_sq_;
      if (spec_.h == 1) return -0.5 * std::sqrt(r2);
      if (spec_.h == 2) return -std::log(r2) / (4.0 * std::numbers::pi);
      return std::pow(r2, -0.5 * beta_) / (beta_ * surface_);
    }
    case KernelFamily::gaussian:
      return std::exp(-dist_sq * inv_two_sigma_sq_);
    case KernelFamily::imq:
      return spec_.c / (spec_.c + dist_sq);
  }
  return 0.0;
}

double Kernel::grad_scale(double dist_sq) const {
  switch (spec_.family) {
    case KernelFamily::coulomb: {
      check_singular(dist_sq);
      const double r2 = dist_sq + eps_sq_;
      if (spec_.h == 1) return -0.5 / std::sqrt(r2);
      if (spec_.h == 2) return -1.0 / (surface_ * r2);
      return -std::pow(r2, -0.5 * spec_.h) / surface_;
    }
    case KernelFamily::gaussian:
      return -std::exp(-dist_sq * inv_two_sigma_sq_) / (spec_.sigma * spec_.sigma);
    case KernelFamily::imq: {
      const double denom = spec_.c + dist_sq;
      return -2.0 * spec_.c / (denom * denom);
    }
  }
  return 0.0;
}

namespace {

void require_same_dim(const PointRef& z, const PointRef& z_prime) {
  if (z.size() != z_prime.size())
    throw std::invalid_argument("kernel: points have different dimensions");
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const PointRef& z, const PointRef& z_prime) {
  require_same_dim(z, z_prime);
  return Kernel(spec).value((z - z_prime).squaredNorm());
}

Point kernel_grad(const KernelSpec& spec, const PointRef& z, const PointRef& z_prime) {
  require_same_dim(z, z_prime);
  const Point diff = z - z_prime;
  return Kernel(spec).grad_scale(diff.squaredNorm()) * diff;
}

double harmonicity_check(const KernelSpec& spec, const PointRef& z, const PointRef& z_prime,
                         double step) {
  if (spec.family != KernelFamily::coulomb || spec.epsilon != 0.0)
    throw std::invalid_argument("harmonicity_check: requires the coulomb kernel with epsilon = 0");
  if (!(step > 0.0)) throw std::invalid_argument("harmonicity_check: step must be > 0");
  require_same_dim(z, z_prime);
  const Kernel k(spec);
  const double centre = k.value((z - z_prime).squaredNorm());
  double laplacian = 0.0;
  Point probe = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    probe(i) = z(i) + step;
    const double plus = k.value((probe - z_prime).squaredNorm());
    probe(i) = z(i) - step;
    const double minus = k.value((probe - z_prime).squaredNorm());
    probe(i) = z(i);
    laplacian += (plus - 2.0 * centre + minus) / (step * step);
  }
  return laplacian;
}

}  // namespace cae
