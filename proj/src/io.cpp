#include "minsurf/io.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "minsurf/error.hpp"

namespace minsurf {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void cfg_fail(const std::string& path, const std::string& what) {
  fail(ErrorKind::config, path + ": " + what);
}

// nlohmann reports a 1-based byte offset; humans want line and column.
[[noreturn]] void malformed(const std::string& text, std::size_t byte,
                            const std::string& what) {
  std::size_t line = 1, col = 1;
  std::size_t stop = byte > 0 ? byte - 1 : 0;
  for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "malformed at line " << line << ", column " << col << ": " << what;
  fail(ErrorKind::config, os.str());
}

void check_keys(const ordered_json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) known = true;
    if (!known)
      cfg_fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

double get_number(const ordered_json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) cfg_fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const ordered_json& obj, const std::string& path, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) cfg_fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const ordered_json& obj, const std::string& path,
                       const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) cfg_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Domain domain_from_json(const ordered_json& j, const std::string& path,
                        bool allow_slit) {
  if (!j.is_object()) cfg_fail(path, "expected an object");
  check_keys(j, path, {"kind", "inner", "outer", "slit_angle", "slit_half_width"});
  std::string kind = get_string(j, path, "kind", "");
  double inner = get_number(j, path, "inner", 0.0);
  double outer = get_number(j, path, "outer", 0.0);
  if (!(outer > 0.0)) cfg_fail(path + ".outer", "must be positive");
  if (kind == "disk") {
    if (j.contains("inner")) cfg_fail(path + ".inner", "a disk has no inner radius");
    return Domain::disk(outer);
  }
  if (kind == "annulus") {
    if (!(inner > 0.0) || !(inner < outer))
      cfg_fail(path + ".inner", "need 0 < inner < outer");
    return Domain::annulus(inner, outer);
  }
  if (kind == "slit_annulus" && allow_slit) {
    if (!(inner > 0.0) || !(inner < outer))
      cfg_fail(path + ".inner", "need 0 < inner < outer");
    return Domain::slit_annulus(inner, outer, get_number(j, path, "slit_angle", 0.0),
                                get_number(j, path, "slit_half_width", 0.0));
  }
  cfg_fail(path + ".kind", "expected \"disk\" or \"annulus\"");
}

ordered_json domain_to_json(const Domain& d) {
  ordered_json j;
  switch (d.kind()) {
    case Domain::Kind::disk:
      j["kind"] = "disk";
      break;
    case Domain::Kind::annulus:
      j["kind"] = "annulus";
      j["inner"] = d.inner_radius();
      break;
    case Domain::Kind::slit_annulus:
      j["kind"] = "slit_annulus";
      j["inner"] = d.inner_radius();
      j["slit_angle"] = d.slit_angle();
      j["slit_half_width"] = d.slit_half_width();
      break;
  }
  j["outer"] = d.outer_radius();
  return j;
}

void validate_flux(const RunConfig& c) {
  constexpr double tol = 1e-9;
  const double two_pi = 2.0 * std::numbers::pi;
  if (c.prescription == "re-z") {
    for (double f : c.flux)
      if (std::abs(f) > tol)
        cfg_fail("flux", "must vanish for the \"re-z\" prescription");
  } else if (c.prescription == "log-abs") {
    if (std::abs(c.flux[2] - two_pi) > tol) {
      std::ostringstream os;
      os << "third component must equal the vertical form's cycle integral 2*pi"
         << " (got " << c.flux[2] << ", need " << two_pi << ")";
      cfg_fail("flux", os.str());
    }
    if (std::abs(c.flux[0]) > tol || std::abs(c.flux[1]) > tol)
      cfg_fail("flux", "horizontal components must vanish for \"log-abs\"");
  }
  // "custom" is checked against its own residue in prescription_from.
}

LaurentSeries custom_series(const RunConfig& c) {
  if (c.custom_dh.empty())
    cfg_fail("custom_dh", "the \"custom\" prescription needs coefficients");
  LaurentSeries dh;
  std::set<int> seen;
  for (const auto& row : c.custom_dh) {
    double kd = row[0];
    int k = static_cast<int>(kd);
    if (static_cast<double>(k) != kd)
      cfg_fail("custom_dh", "degree must be an integer");
    if (!seen.insert(k).second) cfg_fail("custom_dh", "duplicate degree");
    dh.set_coeff(k, cplx(row[1], row[2]));
  }
  return dh;
}

const char* kConventionTag = "dX=Re(phi)";

void append(std::string& out, const char* fmt, ...) {
  char buf[320];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  out += buf;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  return spec_version == o.spec_version && domain.kind() == o.domain.kind() &&
         domain.inner_radius() == o.domain.inner_radius() &&
         domain.outer_radius() == o.domain.outer_radius() &&
         prescription == o.prescription && custom_dh == o.custom_dh &&
         flux == o.flux && stages == o.stages && eps == o.eps && K == o.K &&
         newton_max == o.newton_max && grid_radial == o.grid_radial &&
         grid_angular == o.grid_angular && mesh_path == o.mesh_path &&
         report_csv == o.report_csv && report_jsonl == o.report_jsonl &&
         triple_path == o.triple_path;
}

RunConfig parse_config(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(text, e.byte, e.what());
  }
  if (!j.is_object()) cfg_fail("", "top level must be an object");
  check_keys(j, "", {"spec_version", "domain", "prescription", "custom_dh", "flux",
                     "solver", "grid", "output"});

  RunConfig c;
  c.spec_version = get_string(j, "", "spec_version", "");
  if (c.spec_version != "1")
    cfg_fail("spec_version", "missing or unsupported (this reader understands \"1\")");

  if (!j.contains("domain")) cfg_fail("domain", "required");
  c.domain = domain_from_json(j.at("domain"), "domain", /*allow_slit=*/false);

  c.prescription = get_string(j, "", "prescription", c.prescription);
  if (c.prescription != "re-z" && c.prescription != "log-abs" &&
      c.prescription != "custom")
    cfg_fail("prescription", "unknown catalog name \"" + c.prescription + "\"");

  if (j.contains("custom_dh")) {
    const auto& rows = j.at("custom_dh");
    if (!rows.is_array()) cfg_fail("custom_dh", "expected an array of [k, re, im]");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (!r.is_array() || r.size() != 3 || !r[0].is_number() ||
          !r[1].is_number() || !r[2].is_number())
        cfg_fail("custom_dh[" + std::to_string(i) + "]", "expected [k, re, im]");
      c.custom_dh.push_back({r[0].get<double>(), r[1].get<double>(), r[2].get<double>()});
    }
  }
  if (c.prescription != "custom" && !c.custom_dh.empty())
    cfg_fail("custom_dh", "only meaningful with the \"custom\" prescription");

  if (j.contains("flux")) {
    const auto& f = j.at("flux");
    if (!f.is_array() || f.size() != 3 || !f[0].is_number() || !f[1].is_number() ||
        !f[2].is_number())
      cfg_fail("flux", "expected [f1, f2, f3]");
    c.flux = {f[0].get<double>(), f[1].get<double>(), f[2].get<double>()};
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (!s.is_object()) cfg_fail("solver", "expected an object");
    check_keys(s, "solver", {"stages", "eps", "K", "newton_max"});
    c.stages = get_int(s, "solver", "stages", c.stages);
    c.eps = get_number(s, "solver", "eps", c.eps);
    c.K = get_int(s, "solver", "K", c.K);
    c.newton_max = get_int(s, "solver", "newton_max", c.newton_max);
  }
  if (c.stages < 1 || c.stages > 6) cfg_fail("solver.stages", "must lie in 1..6");
  if (!(c.eps > 0.0) || c.eps > 100.0) cfg_fail("solver.eps", "must lie in (0, 100]");
  if (c.K < 1 || c.K > 512) cfg_fail("solver.K", "must lie in 1..512");
  if (c.newton_max < 0 || c.newton_max > 1000)
    cfg_fail("solver.newton_max", "must lie in 0..1000");

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) cfg_fail("grid", "expected an object");
    check_keys(g, "grid", {"radial", "angular"});
    c.grid_radial = get_int(g, "grid", "radial", c.grid_radial);
    c.grid_angular = get_int(g, "grid", "angular", c.grid_angular);
  }
  if (c.grid_radial < 9 || c.grid_radial > 4097)
    cfg_fail("grid.radial", "must lie in 9..4097");
  if (c.grid_angular < 8 || c.grid_angular > 8192)
    cfg_fail("grid.angular", "must lie in 8..8192");

  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) cfg_fail("output", "expected an object");
    check_keys(o, "output", {"mesh", "report_csv", "report_jsonl", "triple"});
    c.mesh_path = get_string(o, "output", "mesh", "");
    c.report_csv = get_string(o, "output", "report_csv", "");
    c.report_jsonl = get_string(o, "output", "report_jsonl", "");
    c.triple_path = get_string(o, "output", "triple", "");
  }

  validate_flux(c);
  prescription_from(c);  // surfaces custom-residue/flux mismatches at parse time
  return c;
}

std::string serialize(const RunConfig& c) {
  ordered_json j;
  j["spec_version"] = c.spec_version;
  j["domain"] = domain_to_json(c.domain);
  j["prescription"] = c.prescription;
  if (!c.custom_dh.empty()) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : c.custom_dh) rows.push_back({r[0], r[1], r[2]});
    j["custom_dh"] = rows;
  }
  j["flux"] = {c.flux[0], c.flux[1], c.flux[2]};
  j["solver"] = {{"stages", c.stages},
                 {"eps", c.eps},
                 {"K", c.K},
                 {"newton_max", c.newton_max}};
  j["grid"] = {{"radial", c.grid_radial}, {"angular", c.grid_angular}};
  j["output"] = {{"mesh", c.mesh_path},
                 {"report_csv", c.report_csv},
                 {"report_jsonl", c.report_jsonl},
                 {"triple", c.triple_path}};
  return j.dump(2) + "\n";
}

HarmonicPrescription prescription_from(const RunConfig& c) {
  if (c.prescription == "re-z") return prescription_re_z();
  if (c.prescription == "log-abs") return prescription_log_abs();
  return prescription_custom(custom_series(c), c.flux, "custom");
}

std::string triple_to_json(const WeierstrassTriple& t) {
  ordered_json j;
  j["spec_version"] = "1";
  j["convention"] = kConventionTag;
  j["carrier"] = domain_to_json(t.carrier);
  int degree = 0;
  for (const auto& p : t.phi)
    degree = std::max({degree, std::abs(p.min_degree()), std::abs(p.max_degree())});
  j["degree"] = degree;
  ordered_json phis = ordered_json::array();
  for (const auto& p : t.phi) {
    ordered_json entry;
    entry["min_degree"] = p.min_degree();
    ordered_json coeffs = ordered_json::array();
    for (const cplx& a : p.raw()) coeffs.push_back({a.real(), a.imag()});
    entry["coeffs"] = coeffs;
    phis.push_back(entry);
  }
  j["phi"] = phis;
  return j.dump(2) + "\n";
}

WeierstrassTriple triple_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(text, e.byte, e.what());
  }
  if (!j.is_object() || get_string(j, "triple", "convention", "") != kConventionTag)
    fail(ErrorKind::config,
         "triple: convention tag missing or unrecognized — expected \"dX=Re(phi)\"");
  if (!j.contains("carrier")) cfg_fail("carrier", "required");
  WeierstrassTriple t;
  t.carrier = domain_from_json(j.at("carrier"), "carrier", /*allow_slit=*/true);
  if (!j.contains("phi") || !j.at("phi").is_array() || j.at("phi").size() != 3)
    cfg_fail("phi", "expected three coefficient series");
  for (int i = 0; i < 3; ++i) {
    const auto& entry = j.at("phi")[static_cast<std::size_t>(i)];
    std::string path = "phi[" + std::to_string(i) + "]";
    if (!entry.is_object()) cfg_fail(path, "expected an object");
    int lo = get_int(entry, path, "min_degree", 0);
    if (!entry.contains("coeffs") || !entry.at("coeffs").is_array())
      cfg_fail(path + ".coeffs", "expected an array of [re, im]");
    std::vector<cplx> coeffs;
    for (const auto& pair : entry.at("coeffs")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number())
        cfg_fail(path + ".coeffs", "expected [re, im] pairs");
      coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    if (coeffs.empty()) coeffs.push_back(cplx(0.0, 0.0));
    t.phi[static_cast<std::size_t>(i)] = LaurentSeries(lo, std::move(coeffs));
  }
  return t;
}

std::string export_mesh(const ImmersionField& field) {
  const Grid& g = *field.grid;
  const std::size_t n = g.node_count();
  if (field.position.size() != n)
    fail(ErrorKind::config, "mesh export: field does not match its grid");
  for (std::size_t i = 0; i < n; ++i)
    for (double v : field.position[i])
      if (!std::isfinite(v)) {
        auto [ring, ang] = g.ring_angle_of(i);
        std::ostringstream os;
        os << "mesh export: non-finite coordinate at node " << i << " (ring "
           << ring << ", angle " << ang << ")";
        fail(ErrorKind::representation, os.str());
      }

  std::string out;
  out.reserve(n * 40);
  for (std::size_t i = 0; i < n; ++i)
    append(out, "v %.9g %.9g %.9g\n", field.position[i][0], field.position[i][1],
           field.position[i][2]);

  const int rings = g.radial_count();
  const int A = g.angular_count();
  const int wedge = g.wraps() ? A : A - 1;
  for (int r = 0; r + 1 < rings; ++r) {
    for (int jj = 0; jj < wedge; ++jj) {
      int j2 = (jj + 1) % A;
      std::size_t a = g.index_of(r, jj), b = g.index_of(r + 1, jj);
      std::size_t cidx = g.index_of(r + 1, j2), d = g.index_of(r, j2);
      append(out, "f %zu %zu %zu %zu\n", a + 1, b + 1, cidx + 1, d + 1);
    }
  }
  if (g.has_center()) {
    std::size_t ctr = g.center_index();
    for (int jj = 0; jj < wedge; ++jj) {
      int j2 = (jj + 1) % A;
      append(out, "f %zu %zu %zu\n", ctr + 1, g.index_of(0, jj) + 1,
             g.index_of(0, j2) + 1);
    }
  }
  return out;
}

namespace {
const char* kReportColumns =
    "stage,sup_change,sup_change_target,distance,distance_target,flux_err,"
    "h_err,min_phi3,N,M,mu";
}

std::string reports_to_csv(const std::vector<StageReport>& reports) {
  std::string out = std::string(kReportColumns) + "\n";
  for (const StageReport& r : reports)
    append(out, "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d,%.12g,%.12g\n",
           r.stage, r.sup_change, r.sup_change_target, r.distance,
           r.distance_target, r.flux_err, r.h_err, r.min_phi3, r.N, r.M, r.mu);
  return out;
}

std::string reports_to_jsonl(const std::vector<StageReport>& reports) {
  std::string out;
  for (const StageReport& r : reports) {
    ordered_json j;
    j["stage"] = r.stage;
    j["sup_change"] = r.sup_change;
    j["sup_change_target"] = r.sup_change_target;
    j["distance"] = r.distance;
    j["distance_target"] = r.distance_target;
    j["flux_err"] = r.flux_err;
    j["h_err"] = r.h_err;
    j["min_phi3"] = r.min_phi3;
    j["N"] = r.N;
    j["M"] = r.M;
    j["mu"] = r.mu;
    out += j.dump();
    out += "\n";
  }
  return out;
}

std::string labyrinth_to_json(const LabyrinthSpec& spec) {
  ordered_json j;
  j["N"] = spec.N;
  j["inner"] = spec.carrier.inner_radius();
  j["outer"] = spec.carrier.outer_radius();
  j["band_pitch"] = spec.band_pitch;
  j["inset"] = spec.inset;
  ordered_json bands = ordered_json::array();
  for (const Band& b : spec.bands)
    bands.push_back({{"r_lo", b.r_lo},
                     {"r_hi", b.r_hi},
                     {"slit_angle", b.slit_angle},
                     {"slit_half_width", b.slit_half_width}});
  j["bands"] = bands;
  return j.dump(2) + "\n";
}

std::string labyrinth_membership_csv(const LabyrinthSpec& spec, const Grid& grid) {
  std::string out = "node,re,im,band\n";
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    cplx z = grid.node(i);
    append(out, "%zu,%.12g,%.12g,%d\n", i, z.real(), z.imag(), band_of(spec, z));
  }
  return out;
}

std::string distance_to_csv(const std::vector<double>& field) {
  std::string out = "node,value\n";
  for (std::size_t i = 0; i < field.size(); ++i)
    append(out, "%zu,%.12g\n", i, field[i]);
  return out;
}

}  // namespace minsurf
