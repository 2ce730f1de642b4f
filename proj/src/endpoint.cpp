#include "allocsim/endpoint.hpp"

#include <cmath>
#include <stdexcept>

namespace allocsim {

EndpointModel EndpointModel::binary(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binary endpoint: p must be in [0,1]");
  }
  EndpointModel m;
  m.kind = EndpointKind::Binary;
  m.p = p;
  return m;
}

EndpointModel EndpointModel::continuous(double mu, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("continuous endpoint: sigma must be > 0");
  }
  if (!std::isfinite(mu)) {
    throw std::invalid_argument("continuous endpoint: mu must be finite");
  }
  EndpointModel m;
  m.kind = EndpointKind::Continuous;
  m.mu = mu;
  m.sigma = sigma;
  return m;
}

double EndpointModel::sample(Xoshiro256pp& rng) const {
  if (kind == EndpointKind::Binary) return rng.bernoulli(p) ? 1.0 : 0.0;
  return rng.normal(mu, sigma);
}

double EndpointModel::true_mean() const {
  return kind == EndpointKind::Binary ? p : mu;
}

double EndpointModel::true_sd() const {
  return kind == EndpointKind::Binary ? std::sqrt(p * (1.0 - p)) : sigma;
}

EndpointKind ArmPair::kind() const {
  if (control.kind != treatment.kind) {
    throw std::invalid_argument("arm pair: control and treatment endpoint kinds differ");
  }
  return control.kind;
}

}
