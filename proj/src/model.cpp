#include "heitler/model.hpp"

#include <array>
#include <string>

namespace heitler {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be finite");
  }
}

}  // namespace

void validate(const EmitterParams& p) {
  require_finite(p.gamma_sigma, "gamma_sigma");
  require_finite(p.gamma_phi, "gamma_phi");
  require_finite(p.omega_sigma, "omega_sigma");
  require_finite(p.delta_sigma, "delta_sigma");
  if (p.gamma_sigma <= 0) throw ConfigError("gamma_sigma must be > 0");
  if (p.gamma_phi < 0) throw ConfigError("gamma_phi must be >= 0");
  if (p.omega_sigma < 0) throw ConfigError("omega_sigma must be >= 0");
}

void validate(const DetectionParams& d) {
  require_finite(d.Gamma, "Gamma");
  require_finite(d.delta_a, "delta_a");
  require_finite(d.g, "g");
  if (d.Gamma <= 0) throw ConfigError("Gamma must be > 0");
  if (d.g < 0) throw ConfigError("g must be >= 0");
  validate(d.trunc);
}

void validate(const CorrectionParams& c) {
  require_finite(c.F, "F");
  require_finite(c.phi, "phi");
  require_finite(c.t, "t");
  require_finite(c.r, "r");
  if (c.F < 0) throw ConfigError("F must be >= 0");
  if (c.t < 0 || c.t > 1 || c.r < 0 || c.r > 1) {
    throw ConfigError("beam-splitter coefficients t, r must lie in [0, 1]");
  }
  if (std::abs(c.t * c.t + c.r * c.r - 1.0) > 1e-9) {
    throw ConfigError("beam splitter must be lossless: t^2 + r^2 = 1");
  }
}

void validate(const SystemParams& s) {
  validate(s.emitter);
  validate(s.detection);
  validate(s.correction);
}

double beta_amplitude(const EmitterParams& p, const DetectionParams& d,
                      const CorrectionParams& c) {
  if (c.F == 0.0) return 0.0;
  if (c.r == 0.0) {
    throw ConfigError("correction laser with F > 0 needs a reflection coefficient r > 0");
  }
  return d.g * (p.omega_sigma / p.gamma_sigma) * (c.t / c.r) * c.F;
}

CMatrixd hamiltonian_2ls(const EmitterParams& p) {
  const auto s = sigma_ops<double>();
  return p.delta_sigma * s.raise * s.lower + p.omega_sigma * (s.raise + s.lower);
}

CMatrixd joint_sigma(const FockTruncation& trunc) {
  validate(trunc);
  return kron(sigma_ops<double>().lower, CMatrixd::Identity(trunc.n_max, trunc.n_max));
}

CMatrixd joint_sensor(const FockTruncation& trunc) {
  return kron(CMatrixd::Identity(2, 2), boson_ops<double>(trunc).lower);
}

CMatrixd hamiltonian_corrected(const EmitterParams& p, const DetectionParams& d,
                               const CorrectionParams& c) {
  validate(d.trunc);
  const int n = d.trunc.n_max;
  const CMatrixd s = joint_sigma(d.trunc);
  const CMatrixd a = joint_sensor(d.trunc);
  const CMatrixd sd = s.adjoint();
  const CMatrixd ad = a.adjoint();
  const std::complex<double> i_unit(0, 1);
  const std::complex<double> phase = std::polar(1.0, c.phi);

  const double drive = c.r * beta_amplitude(p, d, c);
  CMatrixd h = kron(hamiltonian_2ls(p), CMatrixd::Identity(n, n));
  h += d.delta_a * ad * a;
  h += -i_unit * drive * (phase * ad - std::conj(phase) * a);
  h += d.g * c.t * (sd * a + ad * s);
  return h;
}

std::vector<Jump<double>> jump_set(const EmitterParams& p, const DetectionParams& d) {
  const CMatrixd s = joint_sigma(d.trunc);
  std::vector<Jump<double>> jumps;
  jumps.push_back({p.gamma_sigma, s});
  if (p.gamma_phi > 0) jumps.push_back({p.gamma_phi, s.adjoint() * s});
  jumps.push_back({d.Gamma, joint_sensor(d.trunc)});
  return jumps;
}

SystemParams in_emitter_units(const SystemParams& s) {
  SystemParams out = s;
  const double unit = s.emitter.gamma_sigma;
  out.emitter.gamma_sigma = 1.0;
  out.emitter.gamma_phi /= unit;
  out.emitter.omega_sigma /= unit;
  out.emitter.delta_sigma /= unit;
  out.detection.Gamma /= unit;
  out.detection.delta_a /= unit;
  out.detection.g /= unit;
  return out;
}

nlohmann::ordered_json params_to_json(const SystemParams& s) {
  nlohmann::ordered_json j;
  j["gamma_sigma"] = s.emitter.gamma_sigma;
  j["gamma_phi"] = s.emitter.gamma_phi;
  j["omega_sigma"] = s.emitter.omega_sigma;
  j["delta_sigma"] = s.emitter.delta_sigma;
  j["Gamma"] = s.detection.Gamma;
  j["delta_a"] = s.detection.delta_a;
  j["g"] = s.detection.g;
  j["n_max"] = s.detection.trunc.n_max;
  j["F"] = s.correction.F;
  j["phi"] = s.correction.phi;
  j["t"] = s.correction.t;
  j["r"] = s.correction.r;
  return j;
}

SystemParams params_from_json(const nlohmann::json& j, SystemParams base) {
  if (!j.is_object()) throw ConfigError("parameter record must be a JSON object");
  auto number = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("parameter '" + key + "' must be a number");
    return v.get<double>();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "gamma_sigma") base.emitter.gamma_sigma = number(value, key);
    else if (key == "gamma_phi") base.emitter.gamma_phi = number(value, key);
    else if (key == "omega_sigma") base.emitter.omega_sigma = number(value, key);
    else if (key == "delta_sigma") base.emitter.delta_sigma = number(value, key);
    else if (key == "Gamma") base.detection.Gamma = number(value, key);
    else if (key == "delta_a") base.detection.delta_a = number(value, key);
    else if (key == "g") base.detection.g = number(value, key);
    else if (key == "n_max") {
      if (!value.is_number_integer()) throw ConfigError("parameter 'n_max' must be an integer");
      base.detection.trunc.n_max = value.get<int>();
    } else if (key == "F") base.correction.F = number(value, key);
    else if (key == "phi") base.correction.phi = number(value, key);
    else if (key == "t") base.correction.t = number(value, key);
    else if (key == "r") base.correction.r = number(value, key);
    else throw ConfigError("unknown parameter '" + key + "'");
  }
  return base;
}

}  // namespace heitler
