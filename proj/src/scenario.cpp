#include "dsdirac/scenario.hpp"

#include "dsdirac/diagnostics.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dsdirac {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) {
      fail("scenario: unknown key '" + key + "' in " + where);
    }
  }
}

Real get_real(const json& j, const std::string& key, Real fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail("scenario: '" + key + "' must be a number");
  return j[key].get<Real>();
}

Vec3 get_vec3(const json& j, const std::string& key, const Vec3& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 3) {
    fail("scenario: '" + key + "' must be an array of 3 numbers");
  }
  return Vec3(a[0].get<Real>(), a[1].get<Real>(), a[2].get<Real>());
}

Complex get_complex(const json& j, const std::string& key, Complex fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  if (v.is_number()) return Complex(v.get<Real>(), 0.0);
  if (v.is_array() && v.size() == 2) {
    return Complex(v[0].get<Real>(), v[1].get<Real>());
  }
  fail("scenario: '" + key + "' must be a number or [re, im]");
}

Spinor get_spinor(const json& j, const std::string& key,
                  const Spinor& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 4) {
    fail("scenario: '" + key + "' must be an array of 4 entries");
  }
  Spinor s;
  for (int i = 0; i < 4; ++i) {
    const auto& v = a[i];
    if (v.is_number()) {
      s(i) = Complex(v.get<Real>(), 0.0);
    } else if (v.is_array() && v.size() == 2) {
      s(i) = Complex(v[0].get<Real>(), v[1].get<Real>());
    } else {
      fail("scenario: spinor entries must be numbers or [re, im]");
    }
  }
  return s;
}

PotentialSpec parse_potential(const json& j) {
  PotentialSpec V;
  if (j.is_null()) return V;
  require_keys(j, "params.potential", {"kind", "amplitude", "width", "center"});
  const std::string kind = j.value("kind", "none");
  if (kind == "none") {
    V.kind = PotentialSpec::Kind::None;
    return V;
  }
  if (kind == "gamma0_gauss") {
    V.kind = PotentialSpec::Kind::Gamma0Gauss;
  } else if (kind == "gamma5_gauss") {
    V.kind = PotentialSpec::Kind::Gamma5Gauss;
  } else if (kind == "anticommuting_mix") {
    V.kind = PotentialSpec::Kind::AnticommutingMix;
  } else if (kind == "identity_gauss") {
    V.kind = PotentialSpec::Kind::IdentityGauss;
  } else {
    fail("scenario: unknown potential kind '" + kind + "'");
  }
  V.amplitude = get_real(j, "amplitude", 0.0);
  V.width = get_real(j, "width", 1.0);
  if (!(V.width > 0)) fail("scenario: potential width must be > 0");
  V.center = get_vec3(j, "center", Vec3::Zero());
  return V;
}

NonlinSpec parse_nonlinearity(const json& j) {
  NonlinSpec nl;
  if (j.is_null()) return nl;
  require_keys(j, "params.nonlinearity",
               {"kind", "alpha", "c0", "sign", "scale_alpha", "scale_beta"});
  const std::string kind = j.value("kind", "none");
  if (kind == "none") return nl;
  if (kind == "chiral") {
    nl = make_chiral_default();
    const Real ca = get_real(j, "scale_alpha", 1.0);
    const Real cb = get_real(j, "scale_beta", 1.0);
    nl.alpha_fn = [ca](Real xi, Real) { return ca * xi; };
    nl.beta_fn = [cb](Real, Real eta) { return cb * eta; };
  } else if (kind == "power_abs") {
    nl.kind = NonlinKind::PowerAbs;
    nl.alpha = get_real(j, "alpha", 2.0);
    nl.sign = j.value("sign", 1);
  } else if (kind == "power_abs_psi") {
    nl.kind = NonlinKind::PowerAbsPsi;
    nl.alpha = get_real(j, "alpha", 2.0);
    nl.sign = j.value("sign", 1);
  } else if (kind == "cubic_gamma0") {
    nl.kind = NonlinKind::CubicGamma0;
  } else if (kind == "blowup_g") {
    nl.kind = NonlinKind::BlowupG;
    nl.alpha = get_real(j, "alpha", 2.0);
    nl.c0 = get_real(j, "c0", 1.0);
  } else {
    fail("scenario: unknown nonlinearity kind '" + kind + "'");
  }
  validate(nl);
  return nl;
}

InitialSpec parse_initial(const json& j) {
  InitialSpec in;
  if (j.is_null()) fail("scenario: missing 'initial' block");
  require_keys(j, "initial",
               {"profile", "amplitude", "width", "radius", "center",
                "spinor_direction", "upper1", "upper2", "z", "mode_index",
                "normalize_energy"});
  const std::string prof = j.value("profile", "gaussian_bump");
  if (prof == "gaussian_bump") {
    in.profile = InitialSpec::Profile::GaussianBump;
  } else if (prof == "compact_bump") {
    in.profile = InitialSpec::Profile::CompactBump;
  } else if (prof == "majorana_bump") {
    in.profile = InitialSpec::Profile::MajoranaBump;
  } else if (prof == "plane_mode") {
    in.profile = InitialSpec::Profile::PlaneMode;
  } else {
    fail("scenario: unknown initial profile '" + prof + "'");
  }
  in.amplitude = get_real(j, "amplitude", 1.0);
  in.width = get_real(j, "width", get_real(j, "radius", 0.5));
  if (in.profile != InitialSpec::Profile::PlaneMode && !(in.width > 0)) {
    fail("scenario: initial width/radius must be > 0");
  }
  in.center = get_vec3(j, "center", Vec3::Zero());
  in.direction = get_spinor(j, "spinor_direction",
                            (Spinor() << 1, 0, 0, 0).finished());
  in.upper1 = get_complex(j, "upper1", Complex(1, 0));
  in.upper2 = get_complex(j, "upper2", Complex(0, 0));
  in.majorana_z = get_complex(j, "z", Complex(1, 0));
  if (std::abs(std::abs(in.majorana_z) - 1.0) > 1e-9) {
    fail("scenario: majorana z must be unimodular");
  }
  if (j.contains("mode_index")) {
    const auto& a = j["mode_index"];
    if (!a.is_array() || a.size() != 3) {
      fail("scenario: mode_index must be 3 integers");
    }
    in.mode_index =
        Eigen::Vector3i(a[0].get<int>(), a[1].get<int>(), a[2].get<int>());
  }
  if (j.contains("normalize_energy")) {
    in.normalize_energy = get_real(j, "normalize_energy", 0.0);
    if (!(*in.normalize_energy > 0)) {
      fail("scenario: normalize_energy must be > 0");
    }
  }
  return in;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(std::string("scenario: JSON parse error: ") + e.what());
  }
  require_keys(j, "top level",
               {"version", "name", "grid", "params", "initial", "run",
                "checks", "blowup", "scattering", "output_dir"});
  Scenario sc;
  if (!j.contains("version") || !j["version"].is_number_integer()) {
    fail("scenario: missing integer 'version'");
  }
  sc.version = j["version"].get<int>();
  if (sc.version != 1) fail("scenario: unsupported version");
  sc.name = j.value("name", "unnamed");

  if (!j.contains("grid")) fail("scenario: missing 'grid'");
  require_keys(j["grid"], "grid", {"n", "L"});
  sc.grid = Grid3(j["grid"].value("n", 0), get_real(j["grid"], "L", 0.0));

  if (!j.contains("params")) fail("scenario: missing 'params'");
  const json& jp = j["params"];
  require_keys(jp, "params",
               {"H", "m_re", "m_im", "potential", "nonlinearity"});
  sc.params.H = get_real(jp, "H", 1.0);
  sc.params.m = Complex(get_real(jp, "m_re", 0.0), get_real(jp, "m_im", 0.0));
  sc.params.potential =
      parse_potential(jp.contains("potential") ? jp["potential"] : json());
  sc.params.nonlin = parse_nonlinearity(
      jp.contains("nonlinearity") ? jp["nonlinearity"] : json());

  sc.initial = parse_initial(j.contains("initial") ? j["initial"] : json());

  if (j.contains("run")) {
    const json& jr = j["run"];
    require_keys(jr, "run",
                 {"t_end", "cfl", "dissipation", "sample_every", "max_dt",
                  "norm_cap_factor", "keep_fields_stride"});
    sc.run.t_end = get_real(jr, "t_end", 1.0);
    sc.run.cfl = get_real(jr, "cfl", 0.4);
    sc.run.dissipation = get_real(jr, "dissipation", 0.0);
    sc.run.sample_dt = get_real(jr, "sample_every", 0.05);
    sc.run.max_dt = get_real(jr, "max_dt", 1e30);
    sc.run.norm_cap_factor = get_real(jr, "norm_cap_factor", 1e6);
    sc.run.keep_fields_stride = jr.value("keep_fields_stride", 0);
    if (!(sc.run.cfl > 0) || sc.run.cfl > 1.0) {
      fail("scenario: cfl must lie in (0, 1]");
    }
    if (!(sc.run.sample_dt > 0)) fail("scenario: sample_every must be > 0");
  }
  sc.params.dissipation = sc.run.dissipation;

  if (j.contains("checks")) {
    const json& jc = j["checks"];
    require_keys(jc, "checks",
                 {"energy_identity", "decay_envelope", "gamma2_law",
                  "chiral_bound", "support"});
    sc.checks.energy_identity = jc.value("energy_identity", true);
    sc.checks.decay_envelope = jc.value("decay_envelope", true);
    sc.checks.gamma2_law = jc.value("gamma2_law", true);
    sc.checks.chiral_bound = jc.value("chiral_bound", true);
    sc.checks.support = jc.value("support", true);
  }

  if (j.contains("blowup") && !j["blowup"].is_null()) {
    const json& jb = j["blowup"];
    require_keys(jb, "blowup", {"c0", "alpha", "R"});
    BlowupAnalysisSpec b;
    b.c0 = get_real(jb, "c0", 1.0);
    b.alpha = get_real(jb, "alpha", 2.0);
    b.R = get_real(jb, "R", 1.0);
    sc.blowup = b;
  }
  if (j.contains("scattering") && !j["scattering"].is_null()) {
    const json& js = j["scattering"];
    require_keys(js, "scattering",
                 {"T_max", "max_nodes", "fit_t_lo", "fit_t_hi"});
    ScatteringAnalysisSpec s;
    s.T_max = get_real(js, "T_max", 6.0);
    s.max_nodes = js.value("max_nodes", 64);
    s.fit_t_lo = get_real(js, "fit_t_lo", -1.0);
    s.fit_t_hi = get_real(js, "fit_t_hi", 1e30);
    sc.scattering = s;
  }
  sc.output_dir = j.value("output_dir", std::string("out"));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

SpinorData initial_data(const Scenario& sc) {
  const InitialSpec& in = sc.initial;
  switch (in.profile) {
    case InitialSpec::Profile::GaussianBump:
      return spinor_data_from_profile(
          gaussian_profile(in.amplitude, in.width, in.center), in.direction);
    case InitialSpec::Profile::CompactBump:
      return spinor_data_from_profile(
          compact_bump_profile(in.amplitude, in.width, in.center),
          in.direction);
    case InitialSpec::Profile::MajoranaBump: {
      const Spinor dir =
          majorana_spinor(in.upper1, in.upper2, in.majorana_z);
      return spinor_data_from_profile(
          compact_bump_profile(in.amplitude, in.width, in.center), dir);
    }
    case InitialSpec::Profile::PlaneMode: {
      const Real k0 = 3.14159265358979323846 / sc.grid.L;
      const Vec3 k(k0 * in.mode_index(0), k0 * in.mode_index(1),
                   k0 * in.mode_index(2));
      SpinorData d = spinor_data_from_profile(plane_mode_profile(k),
                                              in.amplitude * in.direction);
      return d;
    }
  }
  throw ConfigError("initial_data: unknown profile");
}

SpinorField build_initial_field(const Scenario& sc) {
  SpinorField f = sample_to_grid(initial_data(sc), sc.grid, 0.0);
  if (sc.initial.normalize_energy) {
    const Real e = energy(f);
    if (!(e > 0)) throw ConfigError("build_initial_field: zero datum");
    f.values *= std::sqrt(*sc.initial.normalize_energy / e);
  }
  return f;
}

EvolveOptions evolve_options(const Scenario& sc) {
  EvolveOptions o;
  o.cfl = sc.run.cfl;
  o.sample_dt = sc.run.sample_dt;
  o.max_dt = sc.run.max_dt;
  o.norm_cap_factor = sc.run.norm_cap_factor;
  o.keep_fields_stride = sc.run.keep_fields_stride;
  o.support_center = sc.initial.center;
  if (sc.initial.profile == InitialSpec::Profile::MajoranaBump) {
    o.majorana_z = sc.initial.majorana_z;
  }
  return o;
}

}  // namespace dsdirac
