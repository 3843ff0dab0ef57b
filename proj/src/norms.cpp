#include "bmild/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bmild/error.hpp"
#include "bmild/spectral.hpp"

namespace bmild {

namespace {

std::vector<double> magnitudes(const ScalarField& f) {
  const ScalarField r = to_real(f);
  std::vector<double> out(r.values().size());
  std::transform(r.values().begin(), r.values().end(), out.begin(),
                 [](double v) { return std::abs(v); });
  return out;
}

std::vector<double> magnitudes(const VectorField& v) {
  const VectorField r = to_real(v);
  const auto a = r[0].values();
  const auto b = r[1].values();
  const auto c = r[2].values();
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  }
  return out;
}

double lp_of_samples(const std::vector<double>& mag, double p, double cell) {
  if (!(p >= 1.0)) throw ConfigError("L^p norm requires p >= 1");
  const double peak = mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
  if (std::isinf(p) || peak == 0.0) return peak;
  if (p == 1.0) {
    double s = 0.0;
    for (double m : mag) s += m;
    return s * cell;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double m : mag) s += m * m;
    return std::sqrt(s * cell);
  }
  double s = 0.0;
  for (double m : mag) s += std::pow(m / peak, p);
  return peak * std::pow(s * cell, 1.0 / p);
}

double weak_of_samples(std::vector<double> mag, double q, double cell) {
  if (!(q >= 1.0) || std::isinf(q)) throw ConfigError("weak L^q norm requires 1 <= q < inf");
  std::sort(mag.begin(), mag.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    if (mag[i] == 0.0) break;
    best = std::max(best, mag[i] * std::pow(static_cast<double>(i + 1) * cell, 1.0 / q));
  }
  return best;
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
  return lp_of_samples(magnitudes(f), p, f.grid().cell_volume());
}
double lp_norm(const VectorField& v, double p) {
  return lp_of_samples(magnitudes(v), p, v.grid().cell_volume());
}
double weak_lq_norm(const ScalarField& f, double q) {
  return weak_of_samples(magnitudes(f), q, f.grid().cell_volume());
}
double weak_lq_norm(const VectorField& v, double q) {
  return weak_of_samples(magnitudes(v), q, v.grid().cell_volume());
}

double NormKind::time_weight_exponent() const {
  switch (family) {
    case NormFamily::Xp:
      return std::isinf(exponent) ? 0.5 : 0.5 * (1.0 - 3.0 / exponent);
    case NormFamily::Yq:
    case NormFamily::Yqweak:
      return std::isinf(exponent) ? 1.5 : 1.5 * (1.0 - 1.0 / exponent);
    case NormFamily::KatoX:
      return 0.5;
    case NormFamily::KatoY:
      return 1.5;
    case NormFamily::BesovHeat:
      return 0.5 * sigma;
    default:
      return 0.0;
  }
}

std::string NormKind::name() const {
  std::ostringstream os;
  auto exp_str = [&] {
    std::ostringstream e;
    if (std::isinf(exponent)) {
      e << "inf";
    } else {
      e << exponent;
    }
    return e.str();
  };
  const char* who = target == NormTarget::velocity ? "u" : "theta";
  switch (family) {
    case NormFamily::Lp: os << "L" << exp_str() << "(" << who << ")"; break;
    case NormFamily::WeakLq: os << "L" << exp_str() << ",inf(" << who << ")"; break;
    case NormFamily::Xp: os << "X" << exp_str(); break;
    case NormFamily::Yq: os << "Y" << exp_str(); break;
    case NormFamily::X3weak: os << "X3,inf"; break;
    case NormFamily::Yqweak: os << "Y" << exp_str() << ",inf"; break;
    case NormFamily::BesovHeat: os << "B-" << sigma << "_" << exp_str() << "(" << who << ")"; break;
    case NormFamily::KatoX: os << "X"; break;
    case NormFamily::KatoY: os << "Y"; break;
  }
  return os.str();
}

NormKind make_norm_kind(NormFamily family, double exponent, double sigma, double horizon) {
  NormKind k;
  k.family = family;
  k.exponent = exponent;
  k.sigma = sigma;
  k.horizon = horizon;
  switch (family) {
    case NormFamily::Xp:
    case NormFamily::X3weak:
    case NormFamily::KatoX:
      k.target = NormTarget::velocity;
      break;
    case NormFamily::Yq:
    case NormFamily::Yqweak:
    case NormFamily::KatoY:
      k.target = NormTarget::temperature;
      break;
    default:
      break;
  }
  if (family == NormFamily::X3weak) k.exponent = 3.0;
  if (family == NormFamily::KatoX) k.exponent = 3.0;
  if (family == NormFamily::KatoY) k.exponent = 1.0;
  if (!(k.exponent >= 1.0)) throw ConfigError("norm exponent must be >= 1");
  if (family == NormFamily::Yqweak && !(k.exponent > 1.0 && std::isfinite(k.exponent))) {
    throw ConfigError("Y_{q,inf} requires 1 < q < inf");
  }
  if (family == NormFamily::WeakLq && std::isinf(k.exponent)) {
    throw ConfigError("weak L^q requires q < inf");
  }
  if (family == NormFamily::BesovHeat && !(sigma > 0.0)) {
    throw ConfigError("Besov norm requires sigma > 0");
  }
  return k;
}

NormKind velocity_norm(double p) { return make_norm_kind(NormFamily::Xp, p); }
NormKind temperature_norm(double q) { return make_norm_kind(NormFamily::Yq, q); }

namespace {

template <class Field>
NormProfile profile_of(const std::vector<Field>& fields, double dt, const NormKind& kind) {
  if (fields.empty()) throw ConfigError("trajectory norm of an empty trajectory");
  NormProfile prof;
  prof.kind = kind;
  const double a = kind.time_weight_exponent();
  const double cell = fields.front().grid().cell_volume();
  for (std::size_t j = 0; j < fields.size(); ++j) {
    const double t = static_cast<double>(j) * dt;
    NormSample s{t, 0.0, 0.0};
    auto mag = magnitudes(fields[j]);
    switch (kind.family) {
      case NormFamily::WeakLq:
      case NormFamily::X3weak:
      case NormFamily::Yqweak:
        s.value = weak_of_samples(std::move(mag), kind.exponent, cell);
        s.weighted = (a == 0.0 ? 1.0 : std::pow(t, a)) * s.value;
        break;
      case NormFamily::KatoX:
        s.value = lp_of_samples(mag, 3.0, cell);
        s.weighted = std::sqrt(t) * lp_of_samples(mag, kInf, cell);
        break;
      case NormFamily::KatoY:
        s.value = lp_of_samples(mag, 1.0, cell);
        s.weighted = std::pow(t, 1.5) * lp_of_samples(mag, kInf, cell);
        break;
      case NormFamily::BesovHeat: {
        // Data norm of the sample, evaluated on a fixed log-spaced grid.
        const double horizon = kind.horizon > 0.0 ? kind.horizon : 1.0;
        const auto pts = log_spaced(horizon * 1e-4, horizon, 24);
        const auto est = besov_norm(fields[j], kind.sigma, kind.exponent, horizon, pts);
        s.value = est.value;
        s.weighted = est.value;
        break;
      }
      default:
        s.value = lp_of_samples(mag, kind.exponent, cell);
        s.weighted = (a == 0.0 ? 1.0 : std::pow(t, a)) * s.value;
        break;
    }
    prof.samples.push_back(s);
  }
  const bool include_zero = kind.time_weight_exponent() == 0.0 ||
                            kind.family == NormFamily::BesovHeat;
  for (const auto& s : prof.samples) {
    prof.sup_value = std::max(prof.sup_value, s.value);
    if (s.t > 0.0 || include_zero) prof.sup_weighted = std::max(prof.sup_weighted, s.weighted);
  }
  if (kind.family == NormFamily::KatoX || kind.family == NormFamily::KatoY) {
    prof.supremum = prof.sup_value + prof.sup_weighted;
  } else {
    prof.supremum = prof.sup_weighted;
  }
  for (const auto& s : prof.samples) {
    if (s.t > 0.0) {
      prof.limit_at_zero_estimate = s.weighted;
      break;
    }
  }
  return prof;
}

}  // namespace

NormProfile trajectory_norm(const Trajectory& traj, const NormKind& kind) {
  if (traj.size() == 0) throw ConfigError("trajectory norm of an empty trajectory");
  return kind.target == NormTarget::velocity ? profile_of(traj.u, traj.dt, kind)
                                             : profile_of(traj.theta, traj.dt, kind);
}

NormProfile sequence_norm(const std::vector<VectorField>& u, double dt, const NormKind& kind) {
  return profile_of(u, dt, kind);
}
NormProfile sequence_norm(const std::vector<ScalarField>& theta, double dt, const NormKind& kind) {
  return profile_of(theta, dt, kind);
}

VanishingDiagnostic diagnose_vanishing(const NormProfile& profile, double fraction) {
  VanishingDiagnostic d;
  std::vector<double> early;
  for (const auto& s : profile.samples) {
    if (s.t > 0.0) early.push_back(s.weighted);
    if (early.size() == 3) break;
  }
  if (profile.sup_weighted == 0.0) {
    d.monotone = true;
    d.ratio = 0.0;
    d.vanishing = true;
    return d;
  }
  d.monotone = early.size() == 3 && early[0] < early[1] && early[1] < early[2];
  d.ratio = early.empty() ? 1.0 : early.front() / profile.sup_weighted;
  d.vanishing = d.monotone && d.ratio <= fraction;
  return d;
}

NormProfile merge_profiles(const std::vector<NormProfile>& profiles) {
  if (profiles.empty()) throw ConfigError("merge of zero profiles");
  NormProfile out;
  out.kind = profiles.front().kind;
  for (const auto& p : profiles) {
    out.samples.insert(out.samples.end(), p.samples.begin(), p.samples.end());
    out.sup_value = std::max(out.sup_value, p.sup_value);
    out.sup_weighted = std::max(out.sup_weighted, p.sup_weighted);
  }
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const NormSample& a, const NormSample& b) { return a.t < b.t; });
  const bool kato = out.kind.family == NormFamily::KatoX || out.kind.family == NormFamily::KatoY;
  out.supremum = kato ? out.sup_value + out.sup_weighted : out.sup_weighted;
  for (const auto& s : out.samples) {
    if (s.t > 0.0) {
      out.limit_at_zero_estimate = s.weighted;
      break;
    }
  }
  return out;
}

namespace {

template <class Field>
BesovEstimate besov_impl(const Field& f, double sigma, double q, double horizon,
                         const std::vector<double>& t_points, bool weak) {
  if (!(sigma > 0.0)) throw ConfigError("Besov norm requires sigma > 0");
  if (!(q > 1.0)) throw ConfigError("Besov norm requires q in (1, inf]");
  if (!(horizon > 0.0)) throw ConfigError("Besov norm requires T > 0");
  if (weak && std::isinf(q)) throw ConfigError("weak Besov norm requires q < inf");
  const Field spec = to_spectral(f);
  BesovEstimate est;
  for (double t : t_points) {
    if (!(t > 0.0) || t > horizon * (1.0 + 1e-12)) {
      throw ConfigError("Besov t_points must lie in (0, T]");
    }
    const Field flowed = to_real(heat_semigroup(spec, t));
    const double norm = weak ? weak_lq_norm(flowed, q) : lp_norm(flowed, q);
    const double w = std::pow(t, 0.5 * sigma) * norm;
    est.samples.push_back({t, norm, w});
    if (w > est.value) {
      est.value = w;
      est.argmax_t = t;
    }
  }
  return est;
}

}  // namespace

BesovEstimate besov_norm(const ScalarField& f, double sigma, double q, double horizon,
                         const std::vector<double>& t_points, bool weak) {
  return besov_impl(f, sigma, q, horizon, t_points, weak);
}
BesovEstimate besov_norm(const VectorField& f, double sigma, double q, double horizon,
                         const std::vector<double>& t_points, bool weak) {
  return besov_impl(f, sigma, q, horizon, t_points, weak);
}

std::vector<double> log_spaced(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max >= t_min) || count < 1) {
    throw ConfigError("log_spaced requires 0 < t_min <= t_max and count >= 1");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = t_max;
    return out;
  }
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  out.back() = t_max;
  return out;
}

}  // namespace bmild
