#include "mgs/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mgs {

namespace {

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

double GsParams::delta(int k) const {
  return delta1 * std::pow(delta_decay, static_cast<double>(k - 1));
}

std::vector<std::string> validate_params(const GsParams& p, int n) {
  std::vector<std::string> errors;
  if (n < 1) errors.emplace_back("dimension n < 1");
  if (!in_open_unit(p.alpha)) errors.emplace_back("alpha not in (0,1)");
  if (!in_open_unit(p.beta)) errors.emplace_back("beta not in (0,1)");
  if (!in_open_unit(p.gamma)) errors.emplace_back("gamma not in (0,1)");
  if (!(p.eps1 > 0.0) || !std::isfinite(p.eps1)) errors.emplace_back("eps1 not positive");
  if (!(p.nu1 > 0.0) || !std::isfinite(p.nu1)) errors.emplace_back("nu1 not positive");
  if (!in_open_unit(p.mu)) errors.emplace_back("mu not in (0,1)");
  if (!in_open_unit(p.vartheta)) errors.emplace_back("vartheta not in (0,1)");
  if (p.m < 0 || (p.m != 0 && p.m < n + 1)) errors.emplace_back("m < n+1");
  if (!(p.delta1 > 0.0) || !std::isfinite(p.delta1)) errors.emplace_back("delta1 not positive");
  if (!in_open_unit(p.delta_decay)) errors.emplace_back("delta_decay not in (0,1)");
  if (!(p.t_init_factor > 0.0) || !std::isfinite(p.t_init_factor)) {
    errors.emplace_back("t_init_factor not positive");
  } else if (in_open_unit(p.gamma) && p.t_init_factor < p.gamma / 3.0) {
    errors.emplace_back("t_init_factor < gamma/3");
  }
  if (p.max_iters < 0) errors.emplace_back("max_iters negative");
  if (!(p.eps_min >= 0.0)) errors.emplace_back("eps_min negative");
  if (!(p.nu_min >= 0.0)) errors.emplace_back("nu_min negative");
  return errors;
}

void require_valid_params(const GsParams& p, int n) {
  const auto errors = validate_params(p, n);
  if (errors.empty()) return;
  std::ostringstream os;
  os << "invalid parameters:";
  for (const auto& e : errors) os << ' ' << e << ';';
  throw std::invalid_argument(os.str());
}

GsState GsState::initial(const GsParams& p, Vec x1) {
  GsState s;
  s.k = 1;
  s.x = std::move(x1);
  s.eps = p.eps1;
  s.nu = p.nu1;
  s.discounts = 0;
  return s;
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Descent: return "Descent";
    case StepKind::NullTolerance: return "NullTolerance";
    case StepKind::NullLineSearch: return "NullLineSearch";
    case StepKind::Terminal: return "Terminal";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::MaxIters: return "MaxIters";
    case Termination::TolerancesReached: return "TolerancesReached";
    case Termination::NonsmoothSampleStop: return "NonsmoothSampleStop";
    case Termination::Stalled: return "Stalled";
    case Termination::LeftDomain: return "LeftDomain";
  }
  return "?";
}

std::string to_string(NonsmoothPolicy p) {
  return p == NonsmoothPolicy::Stop ? "Stop" : "Resample";
}

StepKind step_kind_from_string(const std::string& s) {
  if (s == "Descent") return StepKind::Descent;
  if (s == "NullTolerance") return StepKind::NullTolerance;
  if (s == "NullLineSearch") return StepKind::NullLineSearch;
  if (s == "Terminal") return StepKind::Terminal;
  throw std::invalid_argument("unknown step kind '" + s + "'");
}

Termination termination_from_string(const std::string& s) {
  if (s == "MaxIters") return Termination::MaxIters;
  if (s == "TolerancesReached") return Termination::TolerancesReached;
  if (s == "NonsmoothSampleStop") return Termination::NonsmoothSampleStop;
  if (s == "Stalled") return Termination::Stalled;
  if (s == "LeftDomain") return Termination::LeftDomain;
  throw std::invalid_argument("unknown termination '" + s + "'");
}

NonsmoothPolicy nonsmooth_policy_from_string(const std::string& s) {
  if (s == "Stop") return NonsmoothPolicy::Stop;
  if (s == "Resample") return NonsmoothPolicy::Resample;
  throw std::invalid_argument("unknown nonsmooth policy '" + s + "'");
}

double accuracy_to_distance(double value_gap, double strong_concavity_rho) {
  if (!(value_gap > 0.0) || !(strong_concavity_rho > 0.0)) {
    throw std::invalid_argument("accuracy_to_distance: arguments must be positive");
  }
  return std::sqrt(2.0 * value_gap / strong_concavity_rho);
}

double regularization_rho(double epsilon, double theta_max_norm_sq) {
  if (!(epsilon > 0.0) || !(theta_max_norm_sq > 0.0)) {
    throw std::invalid_argument("regularization_rho: arguments must be positive");
  }
  return 2.0 * epsilon / theta_max_norm_sq;
}

}  // namespace mgs
