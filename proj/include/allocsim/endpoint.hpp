#pragma once

#include "allocsim/rng.hpp"

namespace allocsim {

enum class EndpointKind { Binary, Continuous };

// One arm's outcome distribution: Bernoulli(p) or Normal(mu, sigma).
// Construct through the factories; they enforce p in [0,1] and sigma > 0.
struct EndpointModel {
  EndpointKind kind = EndpointKind::Binary;
  double p = 0.0;
  double mu = 0.0;
  double sigma = 1.0;

  static EndpointModel binary(double p);
  static EndpointModel continuous(double mu, double sigma);

  double sample(Xoshiro256pp& rng) const;
  double true_mean() const;
  double true_sd() const;
};

// Control/treatment pairing. Arm 0 is control, arm 1 is treatment throughout.
struct ArmPair {
  EndpointModel control;
  EndpointModel treatment;

  const EndpointModel& arm(int index) const { return index == 0 ? control : treatment; }

  // Both arms must share the endpoint kind; mixed pairs are rejected.
  EndpointKind kind() const;
};

}
