#include "hotcavity/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace hotcavity::io {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string labelled(const std::string& c) {
  static const std::map<std::string, std::string> units = {
      {"t", "1/kappa"},         {"theta", "rad"},          {"gamma", "kappa"},       {"nu", "kappa"},
      {"delta", "kappa"},       {"g", "kappa"},            {"kappa", "kappa"},       {"omega_rec", "kappa"},
      {"W", "kappa"},           {"N", "photons"},          {"N_end", "photons"},     {"N_pulled", "photons"},
      {"F", "hbar*k*kappa"},    {"V", "hbar*kappa"},       {"depth", "hbar*kappa"},  {"eta", "kappa"},
      {"kappa_eff", "kappa"},   {"beta", "hbar*k^2"},      {"beta_avg", "hbar*k^2"}, {"d_act", "hbar^2*k^2*kappa"},
      {"d_sin", "hbar^2*k^2*kappa"}, {"d_se", "hbar^2*k^2*kappa"}, {"d_tot", "hbar^2*k^2*kappa"},
      {"d_avg", "hbar^2*k^2*kappa"}, {"T", "hbar*kappa/k_B"}, {"T_over_TD", "T_D"}, {"T_over_kappa", "hbar*kappa_M/k_B"},
      {"vbar", "v_D"},         {"vbar_end", "v_D"},       {"dbar", "lambda"},       {"dbar_end", "lambda"},
      {"dmax_end", "lambda"},   {"balance_residual", "kappa"}};
  auto it = units.find(c);
  if (it != units.end()) return c + "[" + it->second + "]";
  if (c.rfind("theta_", 0) == 0) return c + "[rad]";
  if (c.rfind("p_", 0) == 0) return c + "[hbar*k]";
  return c;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + tmp.string());
    f << content;
    if (!f) throw Error(ErrorCode::Io, "write failed " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

json to_json(const SystemParams& p) {
  return {{"gamma", p.gamma}, {"nu", p.nu},         {"delta", p.delta},          {"g", p.g},
          {"kappa", p.kappa}, {"m", p.m_atoms},     {"omega_rec", p.omega_rec}, {"wavenumber", p.wavenumber}};
}

json to_json(const MotionOptions& m) {
  return {{"friction_form", to_string(m.friction_form)},
          {"dsin_form", to_string(m.dsin_form)},
          {"gamma_eff_mode", to_string(m.gamma_eff_mode)},
          {"gamma_eff_used", m.dsin_form == DsinForm::kPaper},
          {"geom_factor", m.geom_factor},
          {"quadrature_nodes", m.quadrature_nodes},
          {"averaging_measure", "uniform"}};
}

json to_json(const SweepSpec& s) {
  json axes = json::array();
  for (const auto& a : s.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  json knobs = json::object();
  for (const auto& [k, v] : s.knobs) knobs[k] = v;
  return {{"name", s.name},     {"evaluator", to_string(s.evaluator)}, {"rescale_rule", to_string(s.rule)},
          {"axes", axes},       {"fixed_params", to_json(s.fixed)},   {"motion_options", to_json(s.motion)},
          {"knobs", knobs},     {"notes", s.notes}};
}

json to_json(const OracleReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(fmt(v)); };
  return {{"quantity", r.quantity}, {"point", r.point},         {"analytic", num(r.analytic)},
          {"oracle", num(r.oracle)}, {"rel_error", num(r.rel_error)}, {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

std::string table_csv(const SweepTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << labelled(t.columns[i]);
  os << ",reason\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) os << (i ? "," : "") << fmt(t.rows[r][i]);
    std::string reason = t.reasons[r];
    for (char& c : reason)
      if (c == ',' || c == '\n' || c == '"') c = ';';
    os << "," << reason << "\n";
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj, const SystemParams& p) {
  const auto obs = trajectory_observables(traj, p);
  const int m = traj.states.empty() ? 0 : traj.states.front().atoms();
  std::ostringstream os;
  os << labelled("t") << "," << labelled("N") << "," << labelled("vbar") << "," << labelled("dbar");
  for (int i = 1; i <= m; ++i) os << "," << labelled("theta_" + std::to_string(i));
  for (int i = 1; i <= m; ++i) os << "," << labelled("p_" + std::to_string(i));
  os << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& x = traj.states[k];
    os << fmt(traj.times[k]) << "," << fmt(obs.N[k]) << "," << fmt(obs.vbar[k]) << "," << fmt(obs.dbar[k]);
    for (int i = 0; i < m; ++i) os << "," << fmt(x.theta[i]);
    for (int i = 0; i < m; ++i) os << "," << fmt(x.p[i]);
    os << "\n";
  }
  return os.str();
}

std::string profile_csv(const SystemParams& p, const std::vector<double>& theta) {
  const auto pot = optical_potential(p, theta);
  std::ostringstream os;
  os << labelled("theta") << "," << labelled("W") << ",Z," << labelled("N") << "," << labelled("F") << ","
     << labelled("V") << "\n";
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto h = extra_atom_steady(p, theta[i]);
    os << fmt(theta[i]) << "," << fmt(h.W) << "," << fmt(h.Z) << "," << fmt(h.N) << "," << fmt(h.F) << ","
       << fmt(pot.V[i]) << "\n";
  }
  return os.str();
}

std::string coeffs_csv(const SystemParams& p, const std::vector<double>& theta, const MotionOptions& opt) {
  std::ostringstream os;
  os << labelled("theta") << "," << labelled("beta") << "," << labelled("d_act") << "," << labelled("d_sin") << ","
     << labelled("d_se") << "," << labelled("d_tot") << "\n";
  for (double t : theta) {
    const auto m = motion_point(p, t, opt);
    os << fmt(t) << "," << fmt(m.beta) << "," << fmt(m.d_act) << "," << fmt(m.d_sin) << "," << fmt(m.d_se) << ","
       << fmt(m.d_tot) << "\n";
  }
  return os.str();
}

void write_csv_with_meta(const std::filesystem::path& dir, const std::string& stem, const std::string& csv,
                         json meta) {
  meta["csv_file"] = stem + ".csv";
  meta["csv_hash"] = git_blob_hash(csv);
  write_atomic(dir / (stem + ".csv"), csv);
  write_atomic(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
}

json load_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot read " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Usage, "bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

json load_config(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (!j.is_object()) throw Error(ErrorCode::Usage, "config must be a flat JSON object");
  for (auto& [k, v] : j.items())
    if (!v.is_number() && !v.is_string() && !v.is_boolean())
      throw Error(ErrorCode::Usage, "config value for " + k + " must be a number, string or boolean");
  return j;
}

}  // namespace hotcavity::io
