#include "rdescent/descent/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace rdescent {

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

void validate(const DescentCertificate& cert) {
  if (!(cert.p > 1.0) || !std::isfinite(cert.p)) throw std::invalid_argument("certificate: p must exceed 1");
  if (!(cert.c > 0.0) || !std::isfinite(cert.c)) throw std::invalid_argument("certificate: c must be finite and positive");
}

RateConstants rate_constants(double p, double c) {
  validate(DescentCertificate{p, c, Direction::forward});
  const double scale = std::pow(c, 1.0 - p);
  return {scale * std::pow(p * p - p, p - 1.0), scale * std::pow(p - 1.0, p - 1.0)};
}

CertifyResult certify(const IterateTrace& trace, const DescentCertificate& cert, double tol) {
  validate(cert);
  if (trace.values.size() < 2) throw std::invalid_argument("certify: need at least two iterates");
  const double e = cert.exponent();
  CertifyResult out;
  out.worst_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < trace.values.size(); ++k) {
    const double g = cert.direction == Direction::forward ? trace.grad_norms[k + 1] : trace.grad_norms[k];
    const double slack = trace.values[k + 1] - trace.values[k] + cert.c * std::pow(g, e);
    if (slack > out.worst_slack) {
      out.worst_slack = slack;
      out.worst_step = static_cast<int>(k);
    }
  }
  out.pass = out.worst_slack <= tol;
  return out;
}

double default_tolerance(double f0) { return 1e-9 * (1.0 + std::abs(f0)); }

double rate_bound_gconvex(double p, double c, double diam, int k, Direction direction) {
  if (k < 1) throw std::invalid_argument("rate_bound_gconvex: k must be >= 1");
  const RateConstants rc = rate_constants(p, c);
  const double C = direction == Direction::forward ? rc.C_fwd : rc.C_bwd;
  return C * std::pow(diam, p) / std::pow(static_cast<double>(k), p - 1.0);
}

double rate_bound_nonconvex(double c, double p, double f0_gap, int k) {
  if (k < 1) throw std::invalid_argument("rate_bound_nonconvex: k must be >= 1");
  if (f0_gap < 0.0) throw std::invalid_argument("rate_bound_nonconvex: negative gap");
  validate(DescentCertificate{p, c, Direction::forward});
  return std::pow(f0_gap / (c * k), (p - 1.0) / p);
}

double rate_bound_graddom(double c, double tau, int k, Direction direction, double f0_gap) {
  if (!(tau > 0.0)) throw std::invalid_argument("rate_bound_graddom: tau must be positive");
  if (k < 0) throw std::invalid_argument("rate_bound_graddom: k must be >= 0");
  if (direction == Direction::forward) return std::pow(1.0 + c / tau, -k) * f0_gap;
  if (c > tau) throw std::invalid_argument("rate_bound_graddom: backward mode needs c <= tau");
  return std::pow(1.0 - c / tau, k) * f0_gap;
}

}  // namespace rdescent
