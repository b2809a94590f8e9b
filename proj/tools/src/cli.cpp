#include "cli.hpp"

#include "report_io.hpp"

#include "newtonflux/boundary.hpp"
#include "newtonflux/catalog.hpp"
#include "newtonflux/flux.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace newtonflux::cli {

namespace {

using io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string catalog;
  std::string descriptor_file;
  std::string r_text;
  std::string out_path;
  std::string format;
  int order = 0;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

std::string sci(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string param_text(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  throw Error(ErrorKind::configuration, "descriptor field '" + key + "': expected a number, string or boolean");
}

Descriptor descriptor_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open descriptor file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::configuration, "descriptor file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::configuration, "descriptor file: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "params") {
      throw Error(ErrorKind::configuration, "descriptor file: unknown field '" + key + "'");
    }
  }
  if (!j.contains("family") || !j["family"].is_string()) {
    throw Error(ErrorKind::configuration, "descriptor field 'family': required string");
  }
  Descriptor d;
  d.family = j["family"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw Error(ErrorKind::configuration, "descriptor field 'params': expected an object");
    for (const auto& [key, value] : j["params"].items()) d.params.emplace_back(key, param_text(value, key));
  }
  return d;
}

void set_param(Descriptor& d, const std::string& key, const std::string& value) {
  for (auto& [k, v] : d.params) {
    if (k == key) {
      v = value;
      return;
    }
  }
  d.params.emplace_back(key, value);
}

Descriptor load_descriptor(const Common& c) {
  if (c.catalog.empty() == c.descriptor_file.empty()) {
    throw UsageError("exactly one of --catalog or --descriptor is required");
  }
  Descriptor d = c.catalog.empty() ? descriptor_from_file(c.descriptor_file) : parse_descriptor(c.catalog);
  if (c.seed && d.family.rfind("perturbed_", 0) == 0) set_param(d, "seed", std::to_string(*c.seed));
  return d;
}

std::vector<int> parse_r_list(const std::string& text, int n, std::vector<int> fallback) {
  if (text.empty()) return fallback;
  std::vector<int> rs;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    int r = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), r);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw UsageError("--r: expected a comma-separated list of integers, got '" + text + "'");
    }
    if (r < 1 || r > n) throw UsageError("--r: r = " + std::to_string(r) + " is outside [1, " + std::to_string(n) + "]");
    if (std::find(rs.begin(), rs.end(), r) == rs.end()) rs.push_back(r);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return rs;
}

std::vector<int> all_r(int n) {
  std::vector<int> rs;
  for (int r = 1; r <= n; ++r) rs.push_back(r);
  return rs;
}

Json r_json(int r) { return r > 0 ? Json(r) : Json(nullptr); }

/// Writes the artifact when --out is given.
void emit(const Common& c, const std::string& default_format, const Json& j,
          const std::function<void(io::CsvWriter&)>& csv) {
  if (c.out_path.empty()) return;
  const std::string format = c.format.empty() ? default_format : c.format;
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + c.out_path + "'");
  if (format == "json") {
    f << j.dump(2) << '\n';
  } else {
    io::CsvWriter w(f);
    csv(w);
  }
  if (!f) throw UsageError("failed writing output file '" + c.out_path + "'");
}

Json header(const std::string& command, const CatalogEntry& e) {
  Json j = Json::object();
  j["schema"] = io::kSchema;
  j["command"] = command;
  j["config"] = e.id;
  j["space"] = to_string(e.space().kind());
  j["n"] = e.n();
  return j;
}

void line(std::ostream& out, bool pass, const std::string& text) { out << (pass ? "PASS " : "FAIL ") << text << '\n'; }

// ---------------------------------------------------------------------------
// identity

struct IdentityRow {
  int index;
  Vector t;
  std::string check;
  int r;
  double lhs;
  double rhs;
  double residual;
};

struct CheckSummary {
  std::string check;
  int r;
  double tol;
  double max = 0.0;
};

int cmd_identity(const Common& c, std::ostream& out) {
  const CatalogEntry e = make_entry(load_descriptor(c));
  if (!e.config.P) throw Error(ErrorKind::configuration, "identity: configuration has no reference hypersurface P");
  validate_configuration(e.config);
  const int n = e.n();
  const AmbientSpace& space = e.space();
  const std::vector<int> rs = parse_r_list(c.r_text, n, all_r(n));
  const int order = c.order > 0 ? c.order : 8;
  const auto tol = [&](double fallback) { return c.tol.value_or(fallback); };

  std::vector<CheckSummary> checks = {
      {"nueta", 0, tol(1e-9)},       {"xi_span", 0, tol(1e-9)},  {"unit", 0, tol(1e-9)},
      {"orthogonality", 0, tol(1e-9)}, {"formaA2", 0, tol(1e-8)}, {"bordered", 0, tol(1e-8)},
  };
  for (int r : rs) {
    if (r <= n - 1) checks.push_back({"umbilic", r, tol(1e-7)});
  }
  for (int r : rs) checks.push_back({"Sr", r, tol(1e-7)});
  const auto summary = [&](const std::string& check, int r) -> CheckSummary& {
    for (auto& s : checks) {
      if (s.check == check && s.r == r) return s;
    }
    throw std::logic_error("unknown identity check");
  };

  std::vector<IdentityRow> rows;
  const std::vector<BoundaryFrame> frames = boundary_frames(e.config, order);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const BoundaryFrame& f = frames[i];
    const CurvatureData curv = curvature_at(e.M(), f.u);
    const int idx = static_cast<int>(i);
    const auto add = [&](const std::string& check, int r, double lhs, double rhs, double res) {
      rows.push_back({idx, f.t, check, r, lhs, rhs, res});
      CheckSummary& s = summary(check, r);
      s.max = std::max(s.max, std::isfinite(res) ? res : std::numeric_limits<double>::infinity());
    };
    const double nan = std::nan("");
    const FrameResiduals fr = frame_residuals(space, f);
    add("nueta", 0, nan, nan, fr.nueta);
    add("xi_span", 0, nan, nan, fr.xi_span);
    add("unit", 0, nan, nan, fr.unit);
    add("orthogonality", 0, nan, nan, fr.orthogonality);
    add("formaA2", 0, nan, nan, formaA2_residual(space, f, curv));
    add("bordered", 0, nan, nan, bordered_residual(space, f, curv));
    for (int r : rs) {
      if (r > n - 1) continue;
      const IdentityValue v = identity_umbilic(space, f, curv, r);
      add("umbilic", r, v.lhs, v.rhs, v.residual);
    }
    for (int r : rs) {
      const IdentityValue v = identity_Sr(space, f, curv, r);
      add("Sr", r, v.lhs, v.rhs, v.residual);
    }
  }

  bool pass = true;
  Json jchecks = Json::array();
  for (const auto& s : checks) {
    const bool ok = s.max < s.tol;
    pass = pass && ok;
    std::string text = "identity " + s.check;
    if (s.r > 0) text += " r=" + std::to_string(s.r);
    text += " max_residual=" + sci(s.max) + " tol=" + sci(s.tol) + " samples=" + std::to_string(frames.size());
    line(out, ok, text);
    Json js = Json::object();
    js["check"] = s.check;
    js["r"] = r_json(s.r);
    js["max_residual"] = io::number(s.max);
    js["tol"] = s.tol;
    js["pass"] = ok;
    jchecks.push_back(js);
  }

  Json j = header("identity", e);
  Json settings = Json::object();
  settings["boundary_order"] = order;
  settings["r"] = rs;
  settings["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["settings"] = settings;
  j["checks"] = jchecks;
  Json jrows = Json::array();
  for (const auto& row : rows) {
    Json jr = Json::object();
    jr["index"] = row.index;
    jr["t"] = std::vector<double>(row.t.data(), row.t.data() + row.t.size());
    jr["check"] = row.check;
    jr["r"] = r_json(row.r);
    jr["lhs"] = io::number(row.lhs);
    jr["rhs"] = io::number(row.rhs);
    jr["residual"] = io::number(row.residual);
    jrows.push_back(jr);
  }
  j["points"] = jrows;
  j["pass"] = pass;
  emit(c, "json", j, [&](io::CsvWriter& w) {
    w.header({"index", "t", "check", "r", "lhs", "rhs", "residual"});
    for (const auto& row : rows) {
      std::string t;
      for (Eigen::Index k = 0; k < row.t.size(); ++k) t += (k ? ";" : "") + format_number(row.t(k));
      w.field(row.index).field(t).field(row.check);
      if (row.r > 0) w.field(row.r); else w.field(std::string());
      w.field(row.lhs).field(row.rhs).field(row.residual);
      w.end_row();
    }
  });
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// flux

struct FluxOutcome {
  std::optional<FluxReport> report;
  std::string formula;
  std::string field;
  int r = 0;
  std::string status;  // pass | fail | precondition | skipped
  std::string message;
};

int cmd_flux(const Common& c, const std::string& field_mode, std::ostream& out) {
  const CatalogEntry e = make_entry(load_descriptor(c));
  const int n = e.n();
  const std::vector<int> rs = parse_r_list(c.r_text, n, all_r(n));
  FluxOptions opts;
  opts.order = c.order > 0 ? c.order : default_order(n);
  opts.label = e.id;
  const double tol = c.tol.value_or(1e-6);

  const bool use_minimal = field_mode == "minimal" || (field_mode == "auto" && e.minimal);
  const bool use_killing = field_mode == "killing" || (field_mode == "auto" && !e.minimal);
  const bool use_conformal = field_mode == "conformal" || (field_mode == "auto" && !e.minimal);
  if ((use_minimal || use_conformal) && !e.conformal_field) {
    throw Error(ErrorKind::configuration, "flux: the entry provides no conformal field");
  }

  std::vector<FluxOutcome> outcomes;
  const auto run_one = [&](const std::string& formula, const AmbientField& Y, int r, bool optional_support) {
    FluxOutcome o;
    o.formula = formula;
    o.field = Y.describe();
    o.r = r;
    try {
      FluxReport rep = formula == "killing"     ? flux_killing(e.config, Y, r, opts)
                       : formula == "conformal" ? flux_conformal(e.config, Y, r, opts)
                                                : flux_minimal(e.config, Y, r, opts);
      o.status = rep.rel_residual < tol ? "pass" : "fail";
      o.report = std::move(rep);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::precondition_violation) {
        o.status = "precondition";
        o.message = err.what();
      } else if (err.kind() == ErrorKind::unsupported_region && optional_support) {
        o.status = "skipped";
        o.message = err.what();
      } else {
        throw;
      }
    }
    outcomes.push_back(std::move(o));
  };
  for (int r : rs) {
    if (use_killing) {
      for (const AmbientField& Y : e.killing_fields) run_one("killing", Y, r, false);
    }
    if (use_conformal) run_one("conformal", *e.conformal_field, r, field_mode == "auto");
    if (use_minimal) run_one("minimal", *e.conformal_field, r, false);
  }

  bool pass = true;
  Json reports = Json::array();
  Json problems = Json::array();
  for (const auto& o : outcomes) {
    std::string text = "flux " + o.formula + " r=" + std::to_string(o.r) + " field=\"" + o.field + "\"";
    if (o.report) {
      const FluxReport& rep = *o.report;
      text += " lhs=" + format_number(rep.lhs) + " rhs=" + format_number(rep.rhs) +
              " rel_residual=" + sci(rep.rel_residual) + " tol=" + sci(tol);
      line(out, o.status == "pass", text);
      pass = pass && o.status == "pass";
      Json jr = io::to_json(rep);
      jr["pass"] = o.status == "pass";
      reports.push_back(jr);
    } else if (o.status == "skipped") {
      out << "SKIP " << text << ": " << o.message << '\n';
      Json jp = Json::object();
      jp["formula"] = o.formula;
      jp["r"] = o.r;
      jp["field"] = o.field;
      jp["status"] = o.status;
      jp["message"] = o.message;
      problems.push_back(jp);
    } else {
      line(out, false, text + ": " + o.message);
      pass = false;
      Json jp = Json::object();
      jp["formula"] = o.formula;
      jp["r"] = o.r;
      jp["field"] = o.field;
      jp["status"] = o.status;
      jp["message"] = o.message;
      problems.push_back(jp);
    }
  }

  Json j = header("flux", e);
  Json settings = Json::object();
  settings["order"] = opts.order;
  settings["refine"] = opts.refine;
  settings["tol"] = tol;
  settings["constancy_tolerance"] = opts.constancy_tolerance;
  settings["minimality_tolerance"] = opts.minimality_tolerance;
  settings["field"] = field_mode;
  settings["r"] = rs;
  settings["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["settings"] = settings;
  j["reports"] = reports;
  j["not_evaluated"] = problems;
  j["pass"] = pass;
  emit(c, "json", j, [&](io::CsvWriter& w) {
    w.header({"formula", "r", "field", "lhs", "rhs", "abs_residual", "rel_residual", "orders", "refine_delta",
              "refined_rel_residual", "status"});
    for (const auto& o : outcomes) {
      w.field(o.formula).field(o.r).field(o.field);
      if (o.report) {
        const FluxReport& rep = *o.report;
        w.field(rep.lhs).field(rep.rhs).field(rep.abs_residual).field(rep.rel_residual);
        w.field(io::join_orders(rep.quadrature.orders));
        w.field(rep.quadrature.refine_delta < 0.0 ? std::nan("") : rep.quadrature.refine_delta);
        w.field(rep.quadrature.refined_rel_residual < 0.0 ? std::nan("") : rep.quadrature.refined_rel_residual);
      } else {
        for (int k = 0; k < 7; ++k) w.field(std::string());
      }
      w.field(o.status);
      w.end_row();
    }
  });
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// sweep / estimate

struct SweepSpec {
  std::string param;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec s;
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--sweep: expected param=lo:hi:steps, got '" + text + "'");
  s.param = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("--sweep: expected param=lo:hi:steps, got '" + text + "'");
  const auto num = [&](const std::string& part, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc() || res.ptr != part.data() + part.size() || !std::isfinite(v)) {
      throw UsageError(std::string("--sweep: malformed ") + what + " '" + part + "'");
    }
    return v;
  };
  s.lo = num(rest.substr(0, c1), "lower bound");
  s.hi = num(rest.substr(c1 + 1, c2 - c1 - 1), "upper bound");
  const std::string steps = rest.substr(c2 + 1);
  const auto res = std::from_chars(steps.data(), steps.data() + steps.size(), s.steps);
  if (steps.empty() || res.ec != std::errc() || res.ptr != steps.data() + steps.size() || s.steps < 1 ||
      s.steps > 10000) {
    throw UsageError("--sweep: steps must be an integer in [1, 10000], got '" + steps + "'");
  }
  return s;
}

double max_identity_residual(const CatalogEntry& e, int r, int order) {
  double worst = 0.0;
  const int n = e.n();
  for (const BoundaryFrame& f : boundary_frames(e.config, order)) {
    const CurvatureData curv = curvature_at(e.M(), f.u);
    const IdentityValue v = r <= n - 1 ? identity_umbilic(e.space(), f, curv, r) : identity_Sr(e.space(), f, curv, r);
    worst = std::max(worst, v.residual);
  }
  return worst;
}

struct SweepRow {
  double value;
  int r;
  HrEstimate est;
  double identity_residual;
  double flux_residual;
};

int cmd_sweep(const Common& c, const std::string& sweep_text, std::ostream& out) {
  if (sweep_text.empty()) throw UsageError("sweep: --sweep param=lo:hi:steps is required");
  const SweepSpec spec = parse_sweep(sweep_text);
  const Descriptor base = load_descriptor(c);
  const double tol = c.tol.value_or(1e-9);
  std::vector<SweepRow> rows;
  std::vector<int> rs;
  std::string first_id;
  for (int i = 0; i < spec.steps; ++i) {
    const double value =
        spec.steps == 1 ? spec.lo : (i == spec.steps - 1 ? spec.hi : spec.lo + (spec.hi - spec.lo) * i / (spec.steps - 1));
    Descriptor d = base;
    set_param(d, spec.param, format_number(value));
    const CatalogEntry e = make_entry(d);
    if (i == 0) {
      first_id = e.id;
      rs = parse_r_list(c.r_text, e.n(), {1});
    }
    FluxOptions opts;
    opts.order = c.order > 0 ? c.order : default_order(e.n());
    opts.refine = false;
    opts.label = e.id;
    for (int r : rs) {
      if (r > e.n()) throw UsageError("--r: r = " + std::to_string(r) + " exceeds n for " + e.id);
      SweepRow row{value, r, hr_estimate(e.config, r, opts), 0.0, std::nan("")};
      row.identity_residual = max_identity_residual(e, r, 8);
      if (!e.killing_fields.empty()) row.flux_residual = flux_killing(e.config, e.killing_fields.front(), r, opts).rel_residual;
      rows.push_back(row);
    }
  }

  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_identity = 0.0;
  double worst_flux = 0.0;
  for (const auto& row : rows) {
    worst_slack = std::min(worst_slack, row.est.slack);
    worst_identity = std::max(worst_identity, row.identity_residual);
    if (std::isfinite(row.flux_residual)) worst_flux = std::max(worst_flux, row.flux_residual);
  }
  const bool ok_bound = worst_slack >= -tol;
  const bool ok_identity = worst_identity < 1e-7;
  const bool ok_flux = worst_flux < 1e-6;
  const std::string where = "sweep " + spec.param + "=" + format_number(spec.lo) + ":" + format_number(spec.hi) + ":" +
                            std::to_string(spec.steps) + " rows=" + std::to_string(rows.size());
  line(out, ok_bound, where + " bound min_slack=" + sci(worst_slack) + " tol=" + sci(tol));
  line(out, ok_identity, where + " identity max_residual=" + sci(worst_identity) + " tol=1.000e-07");
  line(out, ok_flux, where + " flux max_rel_residual=" + sci(worst_flux) + " tol=1.000e-06");

  Json j = Json::object();
  j["schema"] = io::kSchema;
  j["command"] = "sweep";
  j["config"] = first_id;
  Json settings = Json::object();
  settings["param"] = spec.param;
  settings["lo"] = spec.lo;
  settings["hi"] = spec.hi;
  settings["steps"] = spec.steps;
  settings["r"] = rs;
  settings["order"] = c.order > 0 ? Json(c.order) : Json("default");
  settings["tol"] = tol;
  settings["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["settings"] = settings;
  Json jrows = Json::array();
  for (const auto& row : rows) {
    Json jr = io::to_json(row.est);
    jr["value"] = row.value;
    jr["identity_residual"] = io::number(row.identity_residual);
    jr["flux_rel_residual"] = io::number(row.flux_residual);
    jrows.push_back(jr);
  }
  j["rows"] = jrows;
  j["pass"] = ok_bound && ok_identity && ok_flux;
  emit(c, "csv", j, [&](io::CsvWriter& w) {
    w.header({"param", "value", "r", "H_r", "bound", "bound_round", "slack", "identity_residual", "flux_rel_residual"});
    for (const auto& row : rows) {
      w.field(spec.param).field(row.value).field(row.r).field(row.est.H_r).field(row.est.bound);
      w.field(row.est.bound_round ? *row.est.bound_round : std::nan(""));
      w.field(row.est.slack).field(row.identity_residual).field(row.flux_residual);
      w.end_row();
    }
  });
  return ok_bound && ok_identity && ok_flux ? kExitPass : kExitFail;
}

int cmd_estimate(const Common& c, std::ostream& out) {
  const CatalogEntry e = make_entry(load_descriptor(c));
  const int n = e.n();
  const std::vector<int> rs = parse_r_list(c.r_text, n, all_r(n));
  FluxOptions opts;
  opts.order = c.order > 0 ? c.order : default_order(n);
  opts.label = e.id;
  const double tol = c.tol.value_or(1e-9);
  bool pass = true;
  std::vector<HrEstimate> ests;
  for (int r : rs) {
    const HrEstimate est = hr_estimate(e.config, r, opts);
    const bool ok = est.slack >= -tol;
    pass = pass && ok;
    std::string text = "estimate r=" + std::to_string(r) + " abs_H_r=" + format_number(est.abs_Hr) +
                       " bound=" + format_number(est.bound);
    if (est.bound_round) text += " bound_round=" + format_number(*est.bound_round);
    text += " slack=" + sci(est.slack) + " tol=" + sci(tol);
    line(out, ok, text);
    ests.push_back(est);
  }
  Json j = header("estimate", e);
  Json settings = Json::object();
  settings["order"] = opts.order;
  settings["tol"] = tol;
  settings["constancy_tolerance"] = opts.constancy_tolerance;
  settings["r"] = rs;
  j["settings"] = settings;
  Json jr = Json::array();
  for (const auto& est : ests) jr.push_back(io::to_json(est));
  j["estimates"] = jr;
  j["pass"] = pass;
  emit(c, "json", j, [&](io::CsvWriter& w) {
    w.header({"r", "H_r", "abs_H_r", "bound", "bound_general", "bound_round", "constant_C", "slack"});
    for (const auto& est : ests) {
      w.field(est.r).field(est.H_r).field(est.abs_Hr).field(est.bound).field(est.bound_general);
      w.field(est.bound_round ? *est.bound_round : std::nan("")).field(est.constant_C).field(est.slack);
      w.end_row();
    }
  });
  return pass ? kExitPass : kExitFail;
}

int cmd_volume(const Common& c, std::ostream& out) {
  const CatalogEntry e = make_entry(load_descriptor(c));
  FluxOptions opts;
  opts.order = c.order > 0 ? c.order : default_order(e.n());
  opts.label = e.id;
  const double tol = c.tol.value_or(1e-9);
  const VolumeBound vb = volume_bound(e.config, opts);
  const bool ok = vb.slack >= -tol * vb.bound;
  line(out, ok, "volume vol_M=" + format_number(vb.vol_M) + " bound=" + format_number(vb.bound) +
                    " slack=" + sci(vb.slack) + " equality=" + (vb.equality ? "yes" : "no") + " tol=" + sci(tol));
  Json j = header("volume", e);
  Json settings = Json::object();
  settings["order"] = opts.order;
  settings["tol"] = tol;
  settings["minimality_tolerance"] = opts.minimality_tolerance;
  j["settings"] = settings;
  j["volume"] = io::to_json(vb);
  j["pass"] = ok;
  emit(c, "json", j, [&](io::CsvWriter& w) {
    w.header({"vol_M", "vol_boundary", "bound", "slack", "equality", "rho", "rho0"});
    w.field(vb.vol_M).field(vb.vol_boundary).field(vb.bound).field(vb.slack).field(vb.equality ? 1 : 0);
    w.field(vb.rho).field(vb.rho0);
    w.end_row();
  });
  return ok ? kExitPass : kExitFail;
}

int cmd_transverse(const Common& c, std::ostream& out) {
  const CatalogEntry e = make_entry(load_descriptor(c));
  const int n = e.n();
  const std::vector<int> rs = parse_r_list(c.r_text, n, {1});
  const int order = c.order > 0 ? c.order : 8;
  const double threshold = c.tol.value_or(1e-6);
  bool pass = true;
  Json reports = Json::array();
  std::vector<std::pair<int, TransversalityReport>> trs;
  for (int r : rs) {
    const TransversalityReport tr = transversality_report(e.config, r, order, order, threshold);
    pass = pass && tr.transverse;
    line(out, tr.transverse, "transverse r=" + std::to_string(r) + " min_abs_xi_nu=" + sci(tr.min_abs_xi_nu) +
                                 " threshold=" + sci(threshold) + " verdict=" +
                                 (tr.transverse ? "transverse" : "non-transverse"));
    Json jr = io::to_json(tr);
    jr["r"] = r;
    reports.push_back(jr);
    trs.emplace_back(r, tr);
  }
  Json j = header("transverse", e);
  Json settings = Json::object();
  settings["order"] = order;
  settings["threshold"] = threshold;
  settings["r"] = rs;
  j["settings"] = settings;
  j["reports"] = reports;
  j["pass"] = pass;
  emit(c, "json", j, [&](io::CsvWriter& w) {
    w.header({"r", "min_abs_xi_nu", "min_T_eigenvalue", "min_S2", "min_abs_Sn", "transverse"});
    for (const auto& [r, tr] : trs) {
      w.field(r).field(tr.min_abs_xi_nu).field(tr.min_T_eigenvalue).field(tr.min_S2).field(tr.min_abs_Sn);
      w.field(tr.transverse ? 1 : 0);
      w.end_row();
    }
  });
  return pass ? kExitPass : kExitFail;
}

void add_common(CLI::App* sub, Common& c, bool with_r = true) {
  sub->add_option("--catalog", c.catalog, "Catalog descriptor, e.g. euclidean_cap:n=2,R=2,rho=1");
  sub->add_option("--descriptor", c.descriptor_file, "JSON file {\"family\": ..., \"params\": {...}}");
  if (with_r) sub->add_option("--r", c.r_text, "Comma-separated curvature orders");
  sub->add_option("--order", c.order, "Gauss-Legendre order per axis (0 selects the default)")->check(CLI::Range(0, 256));
  sub->add_option("--tol", c.tol, "Pass/fail tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out_path, "Write the report to this file");
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", c.seed, "Seed for perturbed families");
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration:
    case ErrorKind::invalid_parameters:
    case ErrorKind::invalid_input:
    case ErrorKind::unsupported_region:
      return kExitUsage;
    case ErrorKind::precondition_violation:
    case ErrorKind::degenerate_immersion:
    case ErrorKind::out_of_domain:
    case ErrorKind::integration:
      return kExitFail;
  }
  return kExitFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton transformations, r-mean curvatures and flux formulas on space-form hypersurfaces"};
  app.name("newtonflux");
  app.require_subcommand(1);
  Common c;
  std::string field_mode = "auto";
  std::string sweep_text;

  CLI::App* identity = app.add_subcommand("identity", "Pointwise boundary identities");
  add_common(identity, c);
  CLI::App* flux = app.add_subcommand("flux", "Flux formulas");
  add_common(flux, c);
  flux->add_option("--field", field_mode, "Which formula to evaluate")
      ->check(CLI::IsMember({"auto", "killing", "conformal", "minimal"}));
  CLI::App* sweep = app.add_subcommand("sweep", "Estimate sweep over one descriptor parameter");
  add_common(sweep, c);
  sweep->add_option("--sweep", sweep_text, "param=lo:hi:steps")->required();
  CLI::App* estimate = app.add_subcommand("estimate", "|H_r| estimate");
  add_common(estimate, c);
  CLI::App* volume = app.add_subcommand("volume", "Volume bound for minimal configurations");
  add_common(volume, c, false);
  CLI::App* transverse = app.add_subcommand("transverse", "Transversality verdict");
  add_common(transverse, c);
  CLI::App* families = app.add_subcommand("families", "List catalog families");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (families->parsed()) {
      for (const auto& f : catalog_families()) out << f << '\n';
      return kExitPass;
    }
    if (identity->parsed()) return cmd_identity(c, out);
    if (flux->parsed()) return cmd_flux(c, field_mode, out);
    if (sweep->parsed()) return cmd_sweep(c, sweep_text, out);
    if (estimate->parsed()) return cmd_estimate(c, out);
    if (volume->parsed()) return cmd_volume(c, out);
    if (transverse->parsed()) return cmd_transverse(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    if (code == kExitFail) {
      out << "FAIL " << e.what() << '\n';
    }
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return code;
  }
  return kExitUsage;
}

}  // namespace newtonflux::cli
