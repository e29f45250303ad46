#include "signorini/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "signorini/error.hpp"
#include "signorini/format.hpp"

namespace signorini {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const char* context) {
  if (!obj.is_object()) parse_fail(std::string(context) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok |= key == a;
    if (!ok) parse_fail("unknown key '" + key + "' in " + context);
  }
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) parse_fail(std::string(what) + " must be a number");
  return v.get<double>();
}

int integer(const Json& v, const char* what) {
  if (!v.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return v.get<int>();
}

Vec2 point(const Json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) parse_fail(std::string(what) + " must be a pair [x, y]");
  return {number(v[0], what), number(v[1], what)};
}

/// JSON number, or null for non-finite values.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json field_json(const AnalyticField& f) {
  Json terms = Json::array();
  for (const auto& term : f.terms()) {
    if (const auto* m = std::get_if<Monomial>(&term)) {
      terms.push_back({{"kind", "monomial"}, {"coef", m->coef}, {"px", m->px}, {"py", m->py}});
    } else {
      const auto& c = std::get<CornerPower>(term);
      terms.push_back({{"kind", "corner_power"},
                       {"center", {c.center.x, c.center.y}},
                       {"exponent", c.exponent},
                       {"scale", c.scale},
                       {"phase", c.phase},
                       {"cut", c.cut}});
    }
  }
  return {{"terms", terms}};
}

AnalyticField parse_field(const Json& j) {
  check_keys(j, {"terms"}, "field");
  if (!j.contains("terms") || !j["terms"].is_array()) parse_fail("field needs a 'terms' array");
  std::vector<AnalyticField::Term> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string()) {
      parse_fail("field term needs a 'kind'");
    }
    const auto kind = t["kind"].get<std::string>();
    if (kind == "monomial") {
      check_keys(t, {"kind", "coef", "px", "py"}, "monomial");
      Monomial m;
      m.coef = number(t.value("coef", Json(0.0)), "coef");
      m.px = integer(t.value("px", Json(0)), "px");
      m.py = integer(t.value("py", Json(0)), "py");
      if (m.px < 0 || m.py < 0) parse_fail("monomial powers must be non-negative");
      terms.emplace_back(m);
    } else if (kind == "corner_power") {
      check_keys(t, {"kind", "center", "exponent", "scale", "phase", "cut"}, "corner_power");
      CornerPower c;
      if (!t.contains("center") || !t.contains("exponent")) {
        parse_fail("corner_power needs 'center' and 'exponent'");
      }
      c.center = point(t["center"], "center");
      c.exponent = number(t["exponent"], "exponent");
      c.scale = number(t.value("scale", Json(1.0)), "scale");
      c.phase = number(t.value("phase", Json(0.0)), "phase");
      c.cut = number(t.value("cut", Json(0.0)), "cut");
      terms.emplace_back(c);
    } else {
      parse_fail("unknown field term kind '" + kind + "'");
    }
  }
  return AnalyticField(std::move(terms));
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

char kind_letter(DofKind k) {
  switch (k) {
    case DofKind::Free: return 'F';
    case DofKind::Dirichlet: return 'D';
    case DofKind::Signorini: return 'S';
  }
  return '?';
}

Json point_json(Vec2 p) { return Json::array({p.x, p.y}); }

Json critical_json(const CriticalPoint& cp) {
  const char* kind = "corner";
  switch (cp.kind) {
    case CriticalKind::Corner: kind = "corner"; break;
    case CriticalKind::ConditionChange: kind = "condition_change"; break;
    case CriticalKind::Both: kind = "corner_and_condition_change"; break;
    case CriticalKind::CoincidenceEndpoint: kind = "coincidence_endpoint"; break;
  }
  Json j{{"location", point_json(cp.location)},
         {"angle", cp.angle},
         {"kind", kind},
         {"pair", ConditionPair::of(cp).label()}};
  if (cp.vertex) j["vertex"] = *cp.vertex;
  return j;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  const Json j = parse_text(text);
  check_keys(j, {"name", "description", "vertices", "segments", "lifting", "load", "gap", "exact"},
             "problem");
  ProblemFile p;
  try {
    if (j.contains("name")) p.name = j["name"].get<std::string>();
    if (j.contains("description")) p.description = j["description"].get<std::string>();
  } catch (const nlohmann::json::exception&) {
    parse_fail("'name' and 'description' must be strings");
  }
  if (!j.contains("vertices") || !j["vertices"].is_array()) parse_fail("problem needs 'vertices'");
  for (const auto& v : j["vertices"]) p.spec.polygon.vertices.push_back(point(v, "vertex"));
  if (!j.contains("segments") || !j["segments"].is_array()) parse_fail("problem needs 'segments'");
  for (const auto& s : j["segments"]) {
    check_keys(s, {"edges", "tag", "data"}, "segment");
    if (!s.contains("edges") || !s["edges"].is_array() || s["edges"].size() != 2) {
      parse_fail("segment needs 'edges': [first, last]");
    }
    const int first = integer(s["edges"][0], "edge index");
    const int last = integer(s["edges"][1], "edge index");
    if (first < 0 || last < 0) parse_fail("edge indices must be non-negative");
    if (!s.contains("tag") || !s["tag"].is_string() || s["tag"].get<std::string>().size() != 1) {
      parse_fail("segment needs a one-letter 'tag' (D, N, U or S)");
    }
    Segment seg{static_cast<std::size_t>(first), static_cast<std::size_t>(last),
                tag_from_letter(s["tag"].get<std::string>()[0]), {}};
    if (s.contains("data")) {
      if (!s["data"].is_array()) parse_fail("segment 'data' must be an array");
      for (const auto& c : s["data"]) seg.data.push_back(number(c, "segment datum"));
    }
    p.spec.segments.push_back(std::move(seg));
  }
  if (j.contains("lifting")) p.spec.lifting = parse_field(j["lifting"]);
  if (j.contains("load")) p.spec.load = parse_field(j["load"]);
  if (j.contains("gap")) p.spec.gap = parse_field(j["gap"]);
  if (j.contains("exact")) p.exact = parse_field(j["exact"]);
  p.spec = validate_boundary(p.spec);
  return p;
}

ProblemFile read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open problem file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_problem(os.str());
}

std::string write_problem(const ProblemFile& p) {
  Json j;
  j["name"] = p.name;
  if (!p.description.empty()) j["description"] = p.description;
  Json vertices = Json::array();
  for (const auto& v : p.spec.polygon.vertices) vertices.push_back(point_json(v));
  j["vertices"] = vertices;
  Json segments = Json::array();
  for (const auto& s : p.spec.segments) {
    Json js{{"edges", {s.first_edge, s.last_edge}}, {"tag", std::string(1, tag_letter(s.tag))}};
    if (!s.data.empty()) js["data"] = s.data;
    segments.push_back(js);
  }
  j["segments"] = segments;
  if (p.spec.lifting) j["lifting"] = field_json(*p.spec.lifting);
  if (!p.spec.load.is_zero()) j["load"] = field_json(p.spec.load);
  if (!p.spec.gap.is_zero()) j["gap"] = field_json(p.spec.gap);
  if (p.exact) j["exact"] = field_json(*p.exact);
  return j.dump(2) + "\n";
}

ProblemFile problem_from_case(const CaseSpec& c) {
  return {c.name, c.description, c.spec, c.exact};
}

std::string field_to_json(const AnalyticField& field) { return field_json(field).dump(); }

AnalyticField field_from_json(const std::string& text) { return parse_field(parse_text(text)); }

void write_solution_csv(std::ostream& out, const TriMesh& mesh, const DofPartition& partition,
                        const DiscreteSolution& sol) {
  out << "node,x,y,value,psi,multiplier,active,kind\n";
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const int n = static_cast<int>(i);
    out << i << ',' << format_double(mesh.nodes[i].x) << ',' << format_double(mesh.nodes[i].y) << ','
        << format_double(sol.y[i]) << ',' << format_double(sol.psi[i]) << ','
        << format_double(sol.multiplier[i]) << ',' << (sol.is_active(n) ? 1 : 0) << ','
        << kind_letter(partition.kind[i]) << '\n';
  }
}

DiscreteSolution read_solution_csv(std::istream& in, const TriMesh& mesh) {
  std::string line;
  if (!std::getline(in, line) || line != "node,x,y,value,psi,multiplier,active,kind") {
    parse_fail("solution file has no valid header");
  }
  DiscreteSolution sol;
  const std::size_t n = mesh.num_nodes();
  sol.y.assign(n, 0.0);
  sol.psi.assign(n, 0.0);
  sol.multiplier.assign(n, 0.0);
  std::vector<char> seen(n, 0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) parse_fail("solution row needs 8 fields: '" + line + "'");
    const double idx = parse_double(f[0]);
    if (idx < 0 || idx >= static_cast<double>(n) || idx != std::floor(idx)) {
      parse_fail("solution row has an invalid node index");
    }
    const auto i = static_cast<std::size_t>(idx);
    if (seen[i]) parse_fail("solution lists node " + f[0] + " twice");
    seen[i] = 1;
    if (parse_double(f[1]) != mesh.nodes[i].x || parse_double(f[2]) != mesh.nodes[i].y) {
      parse_fail("solution node " + f[0] + " does not match the mesh");
    }
    sol.y[i] = parse_double(f[3]);
    sol.psi[i] = parse_double(f[4]);
    sol.multiplier[i] = parse_double(f[5]);
    if (f[6] == "1") {
      sol.active.push_back(static_cast<int>(i));
    } else if (f[6] != "0") {
      parse_fail("solution 'active' column must be 0 or 1");
    }
    ++rows;
  }
  if (rows != n) parse_fail("solution has " + std::to_string(rows) + " rows for " + std::to_string(n) + " nodes");
  std::sort(sol.active.begin(), sol.active.end());
  return sol;
}

std::string trace_json(const DiscreteSolution& sol, const KktResiduals& kkt) {
  Json trace = Json::array();
  for (const auto& r : sol.trace) {
    trace.push_back({{"active", r.active},
                     {"cg_iterations", r.cg_iterations},
                     {"cg_residual", num(r.cg_residual)},
                     {"energy", num(r.energy)}});
  }
  Json j{{"iterations", sol.iterations},
         {"active_count", sol.active.size()},
         {"kkt",
          {{"primal", kkt.primal},
           {"dual", kkt.dual},
           {"complementarity", kkt.complementarity},
           {"stationarity", kkt.stationarity},
           {"y_scale", kkt.y_scale},
           {"flux_scale", kkt.flux_scale},
           {"scaled_max", kkt.scaled_max()}}},
         {"trace", trace}};
  return j.dump(2) + "\n";
}

std::string coincidence_json(std::span<const CoincidenceReport> levels,
                             const std::optional<StabilityVerdict>& verdict) {
  Json lv = Json::array();
  for (const auto& r : levels) {
    Json intervals = Json::array();
    for (const auto& iv : r.intervals) {
      intervals.push_back({{"s", {iv.s_begin, iv.s_end}},
                           {"begin", point_json(iv.begin)},
                           {"end", point_json(iv.end)}});
    }
    Json isolated = Json::array();
    for (const auto& p : r.isolated) isolated.push_back({{"s", p.s}, {"location", point_json(p.location)}});
    Json endpoints = Json::array();
    for (const auto& e : r.endpoints) endpoints.push_back({{"s", e.s}, {"location", point_json(e.location)}});
    lv.push_back({{"level", r.level},
                  {"h", r.h},
                  {"components", r.components()},
                  {"interval_count", r.intervals.size()},
                  {"isolated_count", r.isolated.size()},
                  {"intervals", intervals},
                  {"isolated", isolated},
                  {"endpoints", endpoints}});
  }
  Json j{{"levels", lv}};
  if (verdict) {
    Json shifts = Json::array();
    for (double s : verdict->endpoint_shifts) shifts.push_back(num(s));
    j["stability"] = {{"stable", verdict->stable},
                      {"components", verdict->components},
                      {"endpoint_shifts", shifts},
                      {"reason", verdict->reason}};
  } else {
    j["stability"] = nullptr;
  }
  return j.dump(2) + "\n";
}

void write_complementarity_csv(std::ostream& out, int level, const ComplementarityReport& report,
                               bool header) {
  if (header) out << "level,node,s,tangential,normal,product,excluded\n";
  for (const auto& s : report.samples) {
    out << level << ',' << s.node << ',' << format_double(s.s) << ',' << format_double(s.tangential)
        << ',' << format_double(s.normal) << ',' << format_double(s.product) << ','
        << (s.excluded ? 1 : 0) << '\n';
  }
}

std::string exponents_json(std::span<const FitOutcome> fits) {
  Json arr = Json::array();
  for (const auto& f : fits) {
    Json j{{"label", f.label}, {"point", critical_json(f.point)}};
    if (f.report) {
      const auto& r = *f.report;
      j["fitted"] = num(r.fitted);
      j["predicted"] = r.predicted;
      j["predicted_index"] = r.predicted_index;
      j["window"] = {r.r_min, r.r_max};
      j["arcs"] = r.arcs;
      j["r_squared"] = num(r.r_squared);
      j["coefficient_proxy"] = num(r.coefficient_proxy);
    } else if (f.error) {
      j["error"] = {{"code", std::string(to_string(*f.error))}, {"message", f.message}};
    }
    arr.push_back(j);
  }
  return Json{{"fits", arr}}.dump(2) + "\n";
}

void write_arcs_csv(std::ostream& out, std::span<const FitOutcome> fits) {
  out << "point,r,g,inside\n";
  for (const auto& f : fits) {
    if (!f.report) continue;
    for (const auto& a : f.report->samples) {
      out << f.label << ',' << format_double(a.r) << ',' << format_double(a.g) << ',' << a.inside
          << '\n';
    }
  }
}

ConvergenceRates fitted_rates(std::span<const ConvergenceRow> rows) {
  std::vector<double> lh, l2, h1;
  for (const auto& r : rows) {
    lh.push_back(std::log(r.h));
    l2.push_back(std::log(r.l2));
    h1.push_back(std::log(r.h1));
  }
  if (rows.size() < 2) return {};
  return {least_squares(lh, l2).slope, least_squares(lh, h1).slope};
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  out << "level,h,nodes,l2_error,h1_error,l2_rate,h1_rate\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    out << r.level << ',' << format_double(r.h) << ',' << r.nodes << ',' << format_double(r.l2)
        << ',' << format_double(r.h1) << ',';
    if (k > 0) {
      const double dh = std::log(rows[k - 1].h / r.h);
      out << format_double(std::log(rows[k - 1].l2 / r.l2) / dh) << ','
          << format_double(std::log(rows[k - 1].h1 / r.h1) / dh);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

std::string convergence_json(std::span<const ConvergenceRow> rows, const ConvergenceRates& rates) {
  Json lv = Json::array();
  for (const auto& r : rows) {
    lv.push_back({{"level", r.level}, {"h", r.h}, {"nodes", r.nodes}, {"l2", num(r.l2)}, {"h1", num(r.h1)}});
  }
  return Json{{"levels", lv}, {"rates", {{"l2", num(rates.l2)}, {"h1", num(rates.h1)}}}}.dump(2) +
         "\n";
}

std::string energy_identity_json(double alpha, int resolution,
                                 std::span<const std::pair<std::string, EnergyIdentity>> results) {
  Json arr = Json::array();
  for (const auto& [name, e] : results) {
    arr.push_back({{"field", name},
                   {"sector_energy", e.sector},
                   {"mapped_energy", e.mapped},
                   {"relative_difference", e.relative_difference}});
  }
  return Json{{"alpha", alpha}, {"resolution", resolution}, {"checks", arr}}.dump(2) + "\n";
}

std::string error_json(ErrorCode code, const std::string& message) {
  return Json{{"error", {{"code", std::string(to_string(code))}, {"message", message}}}}.dump();
}

}  // namespace signorini
