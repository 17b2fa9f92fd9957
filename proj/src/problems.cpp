#include "stochopt/problems.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "stochopt/errors.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/sampling.hpp"

namespace stochopt {
namespace {

double parse_positive(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse " + what + " from '" + text + "'");
  }
  if (used != text.size()) throw ValidationError("cannot parse " + what + " from '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

void check_dim(const PhaseRetrievalInstance& inst, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != inst.d()) {
    throw ValidationError("dimension mismatch: instance has d=" + std::to_string(inst.d()) +
                          ", point has " + std::to_string(x.size()));
  }
}

void check_index(const PhaseRetrievalInstance& inst, std::size_t i) {
  if (i >= inst.n()) {
    throw ValidationError("sample index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(inst.n()) + ")");
  }
}

}  // namespace

NoiseSpec NoiseSpec::laplace(double sigma) {
  NoiseSpec spec;
  spec.kind = Kind::laplace;
  spec.sigma = sigma;
  spec.validate();
  return spec;
}

NoiseSpec NoiseSpec::corrupted(double fraction, double variance) {
  NoiseSpec spec;
  spec.kind = Kind::corrupted;
  spec.fraction = fraction;
  spec.variance = variance;
  spec.validate();
  return spec;
}

void NoiseSpec::validate() const {
  switch (kind) {
    case Kind::noiseless:
      return;
    case Kind::laplace:
      if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ValidationError("laplace noise scale must be positive");
      return;
    case Kind::corrupted:
      if (!(fraction >= 0.0 && fraction <= 1.0))
        throw ValidationError("corruption fraction must lie in [0, 1]");
      if (!(variance > 0.0) || !std::isfinite(variance))
        throw ValidationError("corruption variance must be positive");
      return;
  }
}

std::string NoiseSpec::to_string() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind) {
    case Kind::noiseless:
      return "none";
    case Kind::laplace:
      out << "laplace:" << sigma;
      break;
    case Kind::corrupted:
      out << "corrupt:" << fraction << ':' << variance;
      break;
  }
  return out.str();
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw ValidationError("empty noise spec");
  if (parts[0] == "none" && parts.size() == 1) return none();
  if (parts[0] == "laplace" && parts.size() == 2)
    return laplace(parse_positive(parts[1], "laplace scale"));
  if (parts[0] == "corrupt" && parts.size() == 3)
    return corrupted(parse_positive(parts[1], "corruption fraction"),
                     parse_positive(parts[2], "corruption variance"));
  throw ValidationError("unknown noise spec '" + text +
                        "' (expected none, laplace:SIGMA or corrupt:P:VAR)");
}

void DesignSpec::validate() const {
  if (!(kappa >= 1.0) || !std::isfinite(kappa))
    throw ValidationError("condition number kappa must be >= 1");
}

DesignSpec::Kind DesignSpec::parse_kind(const std::string& text) {
  if (text == "ur" || text == "UR") return Kind::UR;
  if (text == "ru" || text == "RU") return Kind::RU;
  throw ValidationError("unknown design '" + text + "' (expected ur or ru)");
}

Vector linear_spacing(std::size_t m, double kappa) {
  Vector r(static_cast<Eigen::Index>(m));
  if (m == 1) {
    r[0] = kappa;
    return r;
  }
  for (std::size_t j = 0; j < m; ++j)
    r[static_cast<Eigen::Index>(j)] =
        1.0 + (kappa - 1.0) * static_cast<double>(j) / static_cast<double>(m - 1);
  return r;
}

PhaseRetrievalInstance generate_instance(std::size_t n, std::size_t d, const DesignSpec& design,
                                         const NoiseSpec& noise, std::uint64_t seed) {
  if (d == 0 || n < d) {
    throw ValidationError("generate_instance: need n >= d >= 1, got n=" + std::to_string(n) +
                          " d=" + std::to_string(d));
  }
  design.validate();
  noise.validate();

  PhaseRetrievalInstance inst;
  inst.design = design;
  inst.noise = noise;
  inst.seed = seed;

  Rng signal_rng = Rng::derive(seed, 0);
  Rng design_rng = Rng::derive(seed, 1);
  Rng noise_rng = Rng::derive(seed, 2);

  inst.x_star = sample_unit_sphere(d, signal_rng);
  Matrix u = sample_orthogonal(n, d, design_rng);
  if (design.kind == DesignSpec::Kind::UR) {
    inst.A = u * linear_spacing(d, design.kappa).asDiagonal();
  } else {
    inst.A = linear_spacing(n, design.kappa).asDiagonal() * u;
  }

  inst.b = (inst.A * inst.x_star).array().square().matrix();
  switch (noise.kind) {
    case NoiseSpec::Kind::noiseless:
      break;
    case NoiseSpec::Kind::laplace:
      for (Eigen::Index i = 0; i < inst.b.size(); ++i)
        inst.b[i] += sample_laplace(noise.sigma, noise_rng);
      break;
    case NoiseSpec::Kind::corrupted: {
      const double stddev = std::sqrt(noise.variance);
      for (Eigen::Index i = 0; i < inst.b.size(); ++i) {
        // Two draws per row regardless of the outcome keeps rows independent
        // of earlier corruption decisions.
        const bool corrupt = noise_rng.uniform() < noise.fraction;
        const double replacement = stddev * noise_rng.normal();
        if (corrupt) inst.b[i] = replacement;
      }
      break;
    }
  }
  return inst;
}

double residual(const Sample& s, const Vector& x) {
  const double inner = s.a.dot(x);
  return inner * inner - s.b;
}

double sample_value(const Sample& s, const Vector& x) { return std::abs(residual(s, x)); }

Vector sample_subgradient(const Sample& s, const Vector& x) {
  const double inner = s.a.dot(x);
  const double c = inner * inner - s.b;
  if (c == 0.0) return Vector::Zero(x.size());
  const double sign = c > 0.0 ? 1.0 : -1.0;
  return (sign * 2.0 * inner) * s.a;
}

double sample_weak_convexity(const Sample& s) { return 2.0 * s.a.squaredNorm(); }

double objective(const PhaseRetrievalInstance& inst, const Vector& x) {
  check_dim(inst, x);
  const Vector inner = inst.A * x;
  return (inner.array().square() - inst.b.array()).abs().sum() / static_cast<double>(inst.n());
}

ResidualGrad residual_and_grad(const PhaseRetrievalInstance& inst, std::size_t i, const Vector& x) {
  check_index(inst, i);
  check_dim(inst, x);
  const Sample s = inst.sample(i);
  const double inner = s.a.dot(x);
  return {inner * inner - s.b, (2.0 * inner) * s.a};
}

Vector subgradient(const PhaseRetrievalInstance& inst, std::size_t i, const Vector& x) {
  check_index(inst, i);
  check_dim(inst, x);
  return sample_subgradient(inst.sample(i), x);
}

double weak_convexity_constant(const PhaseRetrievalInstance& inst, std::size_t i) {
  check_index(inst, i);
  return sample_weak_convexity(inst.sample(i));
}

}  // namespace stochopt
