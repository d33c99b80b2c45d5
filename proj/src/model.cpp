#include "hotcavity/model.hpp"

#include <cmath>

namespace hotcavity {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::PumpBelowInversion: return "PumpBelowInversion";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::ZeroAtoms: return "ZeroAtoms";
    case ErrorCode::DeterminantNearZero: return "DeterminantNearZero";
    case ErrorCode::ZetaOutOfRange: return "ZetaOutOfRange";
    case ErrorCode::NodeSingularity: return "NodeSingularity";
    case ErrorCode::NonConvergentQuadrature: return "NonConvergentQuadrature";
    case ErrorCode::NoCooling: return "NoCooling";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::EvaluatorFailure: return "EvaluatorFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoPeriodicState: return "NoPeriodicState";
    case ErrorCode::UnstableLinearization: return "UnstableLinearization";
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

void require(bool ok, const char* bound) {
  if (!ok) throw Error(ErrorCode::InvariantViolation, bound);
}

}  // namespace

void check_invariants(const SystemParams& p) {
  for (double v : {p.gamma, p.nu, p.delta, p.g, p.kappa, p.omega_rec, p.wavenumber})
    require(std::isfinite(v), "all parameters finite");
  require(p.gamma >= 0, "gamma >= 0");
  require(p.nu >= 0, "nu >= 0");
  require(p.g >= 0, "g >= 0");
  require(p.kappa > 0, "kappa > 0");
  require(p.omega_rec > 0, "omega_rec > 0");
  require(p.m_atoms >= 0, "m_atoms >= 0");
  require(p.gamma + p.nu > 0, "gamma + nu > 0");
  require(p.wavenumber > 0, "wavenumber > 0");
}

SystemParams validate_params(const std::map<std::string, double>& raw) {
  auto need = [&](const char* key) {
    auto it = raw.find(key);
    if (it == raw.end()) throw Error(ErrorCode::MissingKey, key);
    return it->second;
  };
  auto opt = [&](const char* key, double fallback) {
    auto it = raw.find(key);
    return it == raw.end() ? fallback : it->second;
  };

  SystemParams p;
  p.gamma = need("gamma");
  p.nu = need("nu");
  p.delta = need("delta");
  p.g = need("g");
  p.kappa = opt("kappa", 1.0);
  p.omega_rec = opt("omega_rec", 0.01);
  p.wavenumber = opt("wavenumber", 1.0);
  const double m = opt("m", 0.0);
  if (!std::isfinite(m) || m < 0 || m != std::floor(m))
    throw Error(ErrorCode::InvariantViolation, "m_atoms must be a non-negative integer");
  p.m_atoms = static_cast<int>(m);
  check_invariants(p);
  return p;
}

}  // namespace hotcavity
