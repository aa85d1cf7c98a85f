#pragma once

#include "cae/sample_set.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace cae {

enum class KernelFamily { coulomb, gaussian, imq };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

// Kernel selector. `h` is the latent dimension and fixes the Coulomb exponent
// (h - 2); `epsilon` smooths the Coulomb singularity as r^2 = |z - z'|^2 + eps^2.
// `sigma` is read only by the Gaussian family, `c` only by the IMQ family.
struct KernelSpec {
  KernelFamily family = KernelFamily::coulomb;
  int h = 2;
  double epsilon = 0.0;
  double sigma = 1.0;
  double c = 4.0;

  static KernelSpec coulomb(int h, double epsilon = 0.0);
  static KernelSpec gaussian(double sigma = 1.0, int h = 2);
  // Default offset ties the length scale to the prior's E|z|^2 = h.
  static KernelSpec imq(int h, double c = 0.0);

  void validate() const;
};

class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Surface area of the unit sphere bounding the h-dimensional unit ball:
// 2 pi^(h/2) / Gamma(h/2).
double unit_ball_surface(int h);

// The unsmoothed Coulomb kernel throws SingularityError at d = 0, except the
// h = 1 value -|d|/2, which is finite (its gradient still throws).
//
// Validated kernel with its normalisation constants resolved once. Both
// members take the squared distance |z - z'|^2; the gradient with respect to
// the first argument is grad_scale(d2) * (z - z').
class Kernel {
 public:
  explicit Kernel(const KernelSpec& spec);

  double value(double dist_sq) const;
  double grad_scale(double dist_sq) const;

  const KernelSpec& spec() const { return spec_; }

 private:
  void check_singular(double dist_sq) const;

  KernelSpec spec_;
  double surface_ = 0.0;   // S_h
  double beta_ = 0.0;      // h - 2
  double eps_sq_ = 0.0;
  double inv_two_sigma_sq_ = 0.0;
};

double kernel_eval(const KernelSpec& spec, const PointRef& z, const PointRef& z_prime);
Point kernel_grad(const KernelSpec& spec, const PointRef& z, const PointRef& z_prime);

// Central-difference Laplacian of k(., z') at z. Only meaningful for the
// unsmoothed Coulomb kernel, which is harmonic away from z'.
double harmonicity_check(const KernelSpec& spec, const PointRef& z, const PointRef& z_prime,
                         double step);

}  // namespace cae
