// Copyright 2026 The rotorforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROTORFORGE_DOMAIN_HPP
#define ROTORFORGE_DOMAIN_HPP

// Complex domains D_{L,r,sigma} (|I_i - L d_ik| < rL, |Im phi_i| < sigma) and
// sup-norm estimation on them. The estimate samples the distinguished
// boundary with a deterministic low-discrepancy sequence, so it is a lower
// bound of the true sup norm, monotone in the sample budget, and reproducible.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rotorforge/trigpoly.hpp"

namespace rotorforge {

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainSpec {
  double L;
  double r;
  double sigma;
  int k;  // site carrying the large action (1-based)

  DomainSpec(double L_, double r_, double sigma_, int k_) : L(L_), r(r_), sigma(sigma_), k(k_) {
    if (L <= 0 || r <= 0 || sigma <= 0) throw domain_error("DomainSpec: L, r, sigma must be > 0");
    if (sigma > 1.0) throw domain_error("DomainSpec: sigma must be <= 1");
    if (k < 1) throw domain_error("DomainSpec: k must be >= 1");
  }

  // Radius hypothesis that keeps every non-resonant denominator away from 0:
  // |I.nu| > L/2 whenever r < 1/(2 n |nu|).
  bool radius_ok(int n, int max_form) const {
    return max_form == 0 || r < 1.0 / (2.0 * n * max_form);
  }
};

// Default fitting domain: r = 1/(4 n maxmode), sigma = 1/2. Satisfies the
// radius hypothesis with a factor-2 margin.
inline DomainSpec default_domain(const FourierFunction& f, double L, int k) {
  const int m = std::max({f.max_mode_abs(), f.max_form_abs(), 1});
  return DomainSpec(L, 1.0 / (4.0 * f.n() * m), 0.5, k);
}

// R_d low-discrepancy sequence (generalized golden ratio).
class LowDiscrepancy {
 public:
  explicit LowDiscrepancy(int dim) : alpha_(dim) {
    double phi = 1.5;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    double a = 1.0 / phi;
    for (int j = 0; j < dim; ++j) {
      alpha_[j] = a;
      a /= phi;
    }
  }
  // Component j of sample m (m >= 1), in [0, 1).
  double operator()(long m, int j) const {
    double v = 0.5 + static_cast<double>(m) * alpha_[j];
    return v - std::floor(v);
  }
  int dim() const { return static_cast<int>(alpha_.size()); }

 private:
  std::vector<double> alpha_;
};

// Lower estimate of sup |f| over D_{L,r,sigma} by sampling the distinguished
// boundary (|I_i - L d_ik| = rL, Im phi_i in [-sigma, sigma]).
inline double sup_norm_estimate(const FourierFunction& f, const DomainSpec& dom,
                                long budget = 512) {
  const int n = f.n();
  if (f.has_denominators() && !dom.radius_ok(n, f.max_form_abs()))
    throw domain_error("sup_norm_estimate: r >= 1/(2 n |form|), denominators may vanish");
  LowDiscrepancy seq(3 * n);
  std::vector<std::complex<double>> I(n), phi(n);
  double best = 0;
  for (long m = 1; m <= budget; ++m) {
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * M_PI * seq(m, i);
      const double center = (i + 1 == dom.k) ? dom.L : 0.0;
      I[i] = std::complex<double>(center + dom.r * dom.L * std::cos(a),
                                  dom.r * dom.L * std::sin(a));
      const double re = 2.0 * M_PI * seq(m, n + i);
      const double im = dom.sigma * (2.0 * seq(m, 2 * n + i) - 1.0);
      phi[i] = std::complex<double>(re, im);
    }
    best = std::max(best, std::abs(f.evaluate(I, phi)));
  }
  return best;
}

// Analytic upper bound of sup |f| over D_{L,r,sigma}: triangle inequality over
// modes, |I_i| <= (d_ik + r) L, |nu.I| > L/2 (radius hypothesis), and
// |e^{i mu.phi}| <= e^{sigma sum|mu_i|}.
inline double sup_norm_upper_bound(const FourierFunction& f, const DomainSpec& dom) {
  const int n = f.n();
  if (f.has_denominators() && !dom.radius_ok(n, f.max_form_abs()))
    throw domain_error("sup_norm_upper_bound: radius hypothesis violated");
  double total = 0;
  for (const auto& [mu, c] : f.modes()) {
    long l1 = 0;
    for (auto v : mu.e) l1 += std::abs(v);
    const double mode_factor = std::exp(dom.sigma * static_cast<double>(l1));
    double coeff = 0;
    for (const auto& t : c.terms()) {
      double v = to_double(t.c.abs_bound());
      for (int i = 0; i < n; ++i) {
        const double bound = ((i + 1 == dom.k) ? (1.0 + dom.r) : dom.r) * dom.L;
        for (int p = 0; p < t.mono[i]; ++p) v *= bound;
      }
      for (const auto& [form, p] : t.dens)
        for (int q = 0; q < p; ++q) v /= dom.L / 2.0;
      coeff += v;
    }
    total += mode_factor * coeff;
  }
  return total * (1.0 + 1e-12);
}

}  // namespace rotorforge

#endif  // ROTORFORGE_DOMAIN_HPP
