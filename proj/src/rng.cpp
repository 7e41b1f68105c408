#include "trls/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace trls {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (a + 0x632be59bd9b4e019ULL));
  s = splitmix64(s ^ (b + 0x9e3779b97f4a7c15ULL));
  return s;
}

double Rng::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("Rng::gamma: shape and scale must be > 0");
  std::gamma_distribution<double> dist(shape, scale);
  return dist(engine_);
}

double Rng::student_t(double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("Rng::student_t: dof must be > 0");
  const double z = normal();
  const double w = chi_square(dof);
  return z / std::sqrt(w / dof);
}

double Rng::pareto(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("Rng::pareto: alpha must be > 0");
  // Inverse CDF of the Pareto(alpha) law on [1, inf).
  double u = uniform();
  if (u >= 1.0) u = std::nextafter(1.0, 0.0);
  return std::pow(1.0 - u, -1.0 / alpha);
}

}  // namespace trls
