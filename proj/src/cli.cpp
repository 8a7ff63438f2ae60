#include "cusp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "cusp/oracle.hpp"

namespace cusp::cli {

namespace {

constexpr const char* kVersion = "1.0.0";

const std::vector<std::string> kCommands = {"bound2d",      "bound-nd",      "bound-twist",
                                            "phase-space",  "compare-thin",  "cross-section",
                                            "verify"};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::Validation, what); }

const Json& empty_object() {
  static const Json e = Json::object();
  return e;
}

const Json& block(const Json& parent, const char* key) {
  if (!parent.is_object() || !parent.contains(key)) return empty_object();
  const Json& b = parent.at(key);
  if (!b.is_object()) invalid(std::string("config: '") + key + "' must be an object");
  return b;
}

std::optional<Scalar> opt_number(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) invalid(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<Scalar>();
}

Scalar number(const Json& j, const char* key, Scalar fallback) {
  return opt_number(j, key).value_or(fallback);
}

Scalar required_number(const Json& j, const char* key) {
  const auto v = opt_number(j, key);
  if (!v) invalid(std::string("config: missing number '") + key + "'");
  return *v;
}

std::string text(const Json& j, const char* key, const std::string& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_string()) invalid(std::string("config: '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::vector<Scalar> number_list(const Json& j, const char* key, std::vector<Scalar> fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const Json& a = j.at(key);
  if (!a.is_array()) invalid(std::string("config: '") + key + "' must be an array of numbers");
  std::vector<Scalar> out;
  for (const auto& x : a) {
    if (!x.is_number()) invalid(std::string("config: '") + key + "' must hold numbers");
    out.push_back(x.get<Scalar>());
  }
  return out;
}

std::pair<Scalar, Scalar> number_pair(const Json& j, const char* key) {
  const auto v = number_list(j, key, {});
  if (v.size() != 2) invalid(std::string("config: '") + key + "' must be [a, b]");
  return {v[0], v[1]};
}

CsvTable table_from(const Json& spec) {
  if (spec.contains("path")) return read_csv_table(text(spec, "path", ""));
  CsvTable t;
  t.header = {"s", "value"};
  t.columns = {number_list(spec, "s", {}), number_list(spec, "values", {})};
  if (t.columns[0].size() < 2 || t.columns[0].size() != t.columns[1].size()) {
    invalid("config: table needs 'path' or matching 's'/'values' arrays");
  }
  return t;
}

std::vector<Scalar> column_or_empty(const CsvTable& t, const char* name) {
  const auto* c = t.column(name);
  return c ? *c : std::vector<Scalar>{};
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain:
    case ErrorCode::Validation:
      return kExitValidation;
    case ErrorCode::WidthCondition:
    case ErrorCode::TwistCondition:
    case ErrorCode::SelfIntersection:
      return kExitCondition;
    default:
      return kExitNumerical;
  }
}

std::string format_double(Scalar x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ScalarFunction parse_function(const Json& spec) {
  if (spec.is_number()) return ScalarFunction::constant(spec.get<Scalar>());
  if (!spec.is_object()) invalid("config: function spec must be an object or a number");
  const std::string family = text(spec, "family", "");
  if (family == "zero") return ScalarFunction::zero();
  if (family == "constant") return ScalarFunction::constant(required_number(spec, "value"));
  if (family == "gaussian") {
    return ScalarFunction::gaussian(required_number(spec, "a"), number(spec, "s0", 0.0),
                                    required_number(spec, "w"));
  }
  if (family == "power_tail") {
    return ScalarFunction::power_tail(required_number(spec, "alpha"), number(spec, "N", 1.0));
  }
  if (family == "table") {
    const CsvTable t = table_from(spec);
    return ScalarFunction::table(column_or_empty(t, "s"), column_or_empty(t, "value"),
                                 column_or_empty(t, "d1"), column_or_empty(t, "d2"));
  }
  invalid("config: unknown function family '" + family + "'");
}

ProfileSpec parse_profile(const Json& spec) {
  if (!spec.is_object()) invalid("config: geometry.profile is required");
  const std::string family = text(spec, "family", "");
  ProfileParams p;
  if (family == "power_tail") {
    p.alpha = required_number(spec, "alpha");
    p.n = number(spec, "N", 1.0);
    return make_profile(ProfileFamily::PowerTail, p);
  }
  if (family == "constant") {
    p.a = required_number(spec, "value");
    return make_profile(ProfileFamily::Constant, p);
  }
  if (family == "gaussian") {
    p.a = required_number(spec, "a");
    p.s0 = number(spec, "s0", 0.0);
    p.w = required_number(spec, "w");
    return make_profile(ProfileFamily::Gaussian, p);
  }
  if (family == "table") {
    const CsvTable t = table_from(spec);
    p.s = column_or_empty(t, "s");
    p.values = column_or_empty(t, "value");
    p.d1 = column_or_empty(t, "d1");
    p.d2 = column_or_empty(t, "d2");
    p.table_decays = spec.value("decays", false);
    return make_profile(ProfileFamily::Table, p);
  }
  invalid("config: unknown profile family '" + family + "'");
}

PlaneCurveSpec parse_curve(const Json& spec) {
  if (spec.is_null() || (spec.is_object() && spec.empty())) return PlaneCurveSpec::zero();
  const std::string family = text(spec, "family", "");
  if (family == "zero") return PlaneCurveSpec::zero();
  if (family == "constant") return PlaneCurveSpec::constant(required_number(spec, "value"));
  if (family == "gaussian_bump" || family == "gaussian") {
    return PlaneCurveSpec::gaussian_bump(required_number(spec, "c"), number(spec, "s0", 0.0),
                                         required_number(spec, "w"));
  }
  if (family == "table") {
    const CsvTable t = table_from(spec);
    return PlaneCurveSpec::table(column_or_empty(t, "s"), column_or_empty(t, "value"),
                                 column_or_empty(t, "d1"), column_or_empty(t, "d2"));
  }
  invalid("config: unknown curve family '" + family + "'");
}

CurveSpecNd parse_curve_nd(const Json& geometry) {
  const int d = static_cast<int>(number(geometry, "dimension", 3.0));
  if (d < 3) invalid("config: geometry.dimension must be >= 3");
  std::vector<ScalarFunction> kappa;
  if (geometry.contains("curvatures")) {
    const Json& list = geometry.at("curvatures");
    if (!list.is_array()) invalid("config: geometry.curvatures must be an array");
    for (const auto& k : list) kappa.push_back(parse_function(k));
  }
  if (static_cast<int>(kappa.size()) > d - 1) invalid("config: more curvatures than d - 1");
  while (static_cast<int>(kappa.size()) < d - 1) kappa.push_back(ScalarFunction::zero());
  return CurveSpecNd(d, std::move(kappa));
}

CrossSection parse_section(const Json& spec) {
  if (!spec.is_object()) invalid("config: cross section spec must be an object");
  const std::string shape = text(spec, "shape", "");
  CrossSection cs = CrossSection::disc(1.0);
  if (shape == "disc") {
    cs = CrossSection::disc(number(spec, "r", 1.0));
  } else if (shape == "rectangle") {
    cs = CrossSection::rectangle(required_number(spec, "a"), required_number(spec, "b"));
  } else if (shape == "ellipse") {
    cs = CrossSection::ellipse(required_number(spec, "a"), required_number(spec, "b"));
  } else if (shape == "polygon") {
    if (spec.contains("path")) {
      cs = CrossSection::polygon_csv(text(spec, "path", ""));
    } else {
      if (!spec.contains("vertices") || !spec.at("vertices").is_array()) {
        invalid("config: polygon needs 'vertices' or 'path'");
      }
      std::vector<Vector2> v;
      for (const auto& p : spec.at("vertices")) {
        if (!p.is_array() || p.size() != 2) invalid("config: polygon vertices must be [x, y]");
        v.emplace_back(p[0].get<Scalar>(), p[1].get<Scalar>());
      }
      cs = CrossSection::polygon(std::move(v));
    }
  } else {
    invalid("config: unknown cross-section shape '" + shape + "'");
  }
  if (spec.contains("axis")) {
    const auto [x, y] = number_pair(spec, "axis");
    cs = cs.with_axis(Vector2(x, y));
  }
  return cs;
}

IntegrationRange parse_range(const Json& spec) {
  if (spec.is_null()) return IntegrationRange::two_sided();
  if (spec.is_string()) {
    const std::string kind = spec.get<std::string>();
    if (kind == "two_sided") return IntegrationRange::two_sided();
    invalid("config: range '" + kind + "' needs parameters");
  }
  const std::string kind = text(spec, "kind", "two_sided");
  if (kind == "two_sided") return IntegrationRange::two_sided(number(spec, "center", 0.0));
  if (kind == "one_sided") return IntegrationRange::one_sided(required_number(spec, "s_min"));
  if (kind == "finite") {
    return IntegrationRange::finite(required_number(spec, "a"), required_number(spec, "b"));
  }
  invalid("config: unknown range kind '" + kind + "'");
}

namespace {

struct Options {
  std::string config;
  std::string out;
  bool heavy = false;
  int threads = 1;
  std::optional<Scalar> alpha, n, lambda, sigma, vol, c;
};

struct Context {
  std::string command;
  Options opt;
  Json config = Json::object();
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  std::string summary;
};

std::string short_number(Scalar x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.7g", x);
  return buf;
}

std::string file_stem(const std::string& command) {
  std::string s = command;
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  return s;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
  return os.str();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

BoundQuery build_query(const Context& ctx) {
  const Json& query = block(ctx.config, "query");
  const Json& numerics = block(ctx.config, "numerics");
  BoundQuery q;
  q.sigma = ctx.opt.sigma.value_or(number(query, "sigma", 1.5));
  const Scalar lambda = ctx.opt.lambda.value_or(number(query, "lambda", 0.0));
  if (lambda < 0.0) invalid("query: lambda must be >= 0");
  if (query.contains("v")) {
    const ScalarFunction v = parse_function(query.at("v"));
    q.v = [lambda, v](Scalar s) { return lambda + v(s); };
  } else {
    q.v = [lambda](Scalar) { return lambda; };
  }
  q.range = parse_range(query.contains("range") ? query.at("range") : Json());
  const std::string regime = text(query, "regime", "standard");
  if (regime == "standard") {
    q.regime = Regime::Standard;
  } else if (regime == "extended") {
    q.regime = Regime::Extended;
  } else {
    invalid("query: regime must be 'standard' or 'extended'");
  }
  q.quad_tol = number(numerics, "quad_tol", q.quad_tol);
  q.support_margin = static_cast<int>(number(numerics, "support_margin", q.support_margin));
  q.scan_limit = number(numerics, "scan_limit", q.scan_limit);
  return q;
}

MultiplicityMode parse_mode(const Json& query) {
  const std::string mode = text(query, "multiplicity_mode", "weighted");
  if (mode == "weighted") return MultiplicityMode::Weighted;
  if (mode == "verbatim") return MultiplicityMode::Verbatim;
  invalid("query: multiplicity_mode must be 'weighted' or 'verbatim'");
}

Json range_json(const IntegrationRange& r) {
  switch (r.kind) {
    case IntegrationRange::Kind::TwoSided: return {{"kind", "two_sided"}, {"center", r.a}};
    case IntegrationRange::Kind::OneSided: return {{"kind", "one_sided"}, {"s_min", r.a}};
    case IntegrationRange::Kind::Finite: return {{"kind", "finite"}, {"a", r.a}, {"b", r.b}};
  }
  return nullptr;
}

Json bound_json(Context& ctx, const BoundReport& rep, const BoundQuery& q) {
  const std::string samples = file_stem(ctx.command) + "_samples.csv";
  std::vector<std::vector<std::string>> rows;
  for (const auto& smp : rep.samples) {
    rows.push_back({format_double(smp.s), format_double(smp.value), std::to_string(smp.truncation)});
  }
  ctx.files.emplace_back(samples, csv_table({"s", "value", "truncation"}, rows));
  ctx.summary = ctx.command + " value=" + short_number(rep.value);
  Json support = nullptr;
  if (rep.support) support = {rep.support->first, rep.support->second};
  return {{"value", rep.value},
          {"l_constant", rep.l_constant},
          {"norm", rep.norm},
          {"support", support},
          {"window", {rep.window.first, rep.window.second}},
          {"quad_error", rep.quad_error},
          {"sigma", q.sigma},
          {"regime", q.regime == Regime::Standard ? "standard" : "extended"},
          {"range", range_json(q.range)},
          {"samples_csv", samples}};
}

Json run_bound2d(Context& ctx) {
  const Json& geometry = block(ctx.config, "geometry");
  const PlaneCurveSpec curve =
      parse_curve(geometry.contains("curve") ? geometry.at("curve") : Json());
  const ProfileSpec profile = parse_profile(geometry.contains("profile") ? geometry.at("profile") : Json());
  const BoundQuery q = build_query(ctx);
  return bound_json(ctx, bound_moment_2d(curve, profile, q), q);
}

Json run_bound_nd(Context& ctx) {
  const Json& geometry = block(ctx.config, "geometry");
  const Json& numerics = block(ctx.config, "numerics");
  const CurveSpecNd curve = parse_curve_nd(geometry);
  const ProfileSpec profile = parse_profile(geometry.contains("profile") ? geometry.at("profile") : Json());
  const BoundQuery q = build_query(ctx);
  std::pair<Scalar, Scalar> frame_range;
  if (numerics.contains("frame_range")) {
    frame_range = number_pair(numerics, "frame_range");
  } else if (q.range.kind == IntegrationRange::Kind::Finite) {
    frame_range = {q.range.a, q.range.b};
  } else if (q.range.kind == IntegrationRange::Kind::OneSided) {
    frame_range = {q.range.a, q.range.a + 100.0};
  } else {
    frame_range = {q.range.a - 50.0, q.range.a + 50.0};
  }
  const TangFrame frame = tang_frame(curve, frame_range, number(numerics, "frame_step", 1e-3));
  const BoundReport rep =
      bound_moment_nd(curve, frame, profile, q, curve.dimension, parse_mode(block(ctx.config, "query")));
  Json out = bound_json(ctx, rep, q);
  out["dimension"] = curve.dimension;
  out["multiplicity_mode"] = text(block(ctx.config, "query"), "multiplicity_mode", "weighted");
  out["frame_range"] = {frame_range.first, frame_range.second};
  out["frame_projections"] = frame.projection_events().size();
  return out;
}

TwistSpec parse_twist(const Json& geometry) {
  const Json& tw = block(geometry, "twist");
  if (!tw.contains("section")) invalid("config: geometry.twist.section is required");
  const ScalarFunction theta_dot =
      tw.contains("theta_dot") ? parse_function(tw.at("theta_dot")) : ScalarFunction::zero();
  return {theta_dot, parse_section(tw.at("section"))};
}

Json run_bound_twist(Context& ctx) {
  const Json& geometry = block(ctx.config, "geometry");
  const Json& query = block(ctx.config, "query");
  const Json& numerics = block(ctx.config, "numerics");
  const TwistSpec twist = parse_twist(geometry);
  const ProfileSpec profile = parse_profile(geometry.contains("profile") ? geometry.at("profile") : Json());
  const BoundQuery q = build_query(ctx);
  const std::string source = text(query, "level_source", "analytic");
  Json extra = Json::object();
  BoundReport rep;
  if (source == "analytic") {
    if (twist.section.shape() != CrossSection::Shape::Disc || !twist.section.centroid_at_origin()) {
      invalid("query: analytic level source needs a centred disc cross section");
    }
    rep = bound_moment_twist(twist, profile, q,
                             DiscLevelSource{twist.section.radius(), parse_mode(query)});
  } else if (source == "table") {
    TwistTableOptions topt;
    topt.points = static_cast<int>(number(numerics, "table_points", topt.points));
    const Scalar h = number(numerics, "table_step", 1.0 / 32.0) * twist.section.circumradius();
    const int count = static_cast<int>(number(numerics, "table_count", 12));
    const Scalar c2 = twist_c2_extent(twist, profile, q);
    const TwistTable table = build_twist_table(twist.section, c2, count, h, topt);
    rep = bound_moment_twist(twist, profile, q, &table);
    extra = {{"table_points", table.grid().size()}, {"table_c2_max", table.c2_max()},
             {"table_count", table.count()}};
  } else {
    invalid("query: level_source must be 'analytic' or 'table'");
  }
  Json out = bound_json(ctx, rep, q);
  out["level_source"] = source;
  out["twist_sup"] = rep.norm;
  out["rho"] = twist.section.circumradius();
  if (!extra.empty()) out["table"] = extra;
  return out;
}

Json run_phase_space(Context& ctx) {
  const Json& ps = block(ctx.config, "phase_space");
  const Json& query = block(ctx.config, "query");
  const Scalar lambda = ctx.opt.lambda.value_or(number(ps, "lambda", number(query, "lambda", -1.0)));
  const Scalar sigma = ctx.opt.sigma.value_or(number(ps, "sigma", number(query, "sigma", 1.5)));
  const auto vol = ctx.opt.vol ? ctx.opt.vol : opt_number(ps, "vol");
  if (lambda < 0.0) invalid("phase-space: lambda is required");
  if (!vol) invalid("phase-space: vol is required");
  const Scalar value = phase_space_bound(lambda, *vol, sigma);
  ctx.files.emplace_back("phase_space.csv",
                         csv_table({"lambda", "vol", "sigma", "bound"},
                                   {{format_double(lambda), format_double(*vol),
                                     format_double(sigma), format_double(value)}}));
  ctx.summary = "phase-space value=" + short_number(value);
  return {{"lambda", lambda}, {"vol", *vol}, {"sigma", sigma}, {"value", value},
          {"l_constant", lt_constant(sigma)}};
}

Json run_compare_thin(Context& ctx) {
  const Json& cmp = block(ctx.config, "compare");
  auto pick = [&](const std::optional<Scalar>& flag, const char* key, const char* name) {
    if (flag) return *flag;
    const auto v = opt_number(cmp, key);
    if (!v) invalid(std::string("compare-thin: --") + name + " is required");
    return *v;
  };
  const Scalar alpha = pick(ctx.opt.alpha, "alpha", "alpha");
  const Scalar n = pick(ctx.opt.n, "N", "N");
  const Scalar lambda = pick(ctx.opt.lambda, "lambda", "lambda");
  const Scalar sigma = ctx.opt.sigma.value_or(number(cmp, "sigma", 1.5));
  const auto c = ctx.opt.c ? ctx.opt.c : opt_number(cmp, "c");
  const ThinComparison t = thin_comparison(alpha, n, lambda, sigma, c);
  ctx.files.emplace_back(
      "compare_thin.csv",
      csv_table({"alpha", "N", "lambda", "sigma", "cusp_rhs", "phase_rhs", "ratio", "lambda_admissible"},
                {{format_double(alpha), format_double(n), format_double(lambda),
                  format_double(sigma), format_double(t.cusp_rhs), format_double(t.phase_rhs),
                  format_double(t.ratio), bool_text(t.lambda_admissible)}}));
  char buf[160];
  std::snprintf(buf, sizeof buf, "compare-thin ratio=%.6f cusp_rhs=%.6f phase_rhs=%.6f lambda_admissible=%s",
                t.ratio, t.cusp_rhs, t.phase_rhs, t.lambda_admissible ? "true" : "false");
  ctx.summary = buf;
  Json out = {{"alpha", alpha},
              {"N", n},
              {"lambda", lambda},
              {"sigma", sigma},
              {"cusp_rhs", t.cusp_rhs},
              {"phase_rhs", t.phase_rhs},
              {"ratio", t.ratio},
              {"lambda_admissible", t.lambda_admissible},
              {"curved_diagnostic", nullptr}};
  if (t.curved_diagnostic) out["curved_diagnostic"] = {{"c", *c}, {"value", *t.curved_diagnostic}};
  return out;
}

Json run_cross_section(Context& ctx) {
  const Json& geometry = block(ctx.config, "geometry");
  const Json& numerics = block(ctx.config, "numerics");
  Json spec;
  if (geometry.contains("section")) {
    spec = geometry.at("section");
  } else if (block(geometry, "twist").contains("section")) {
    spec = geometry.at("twist").at("section");
  } else {
    invalid("cross-section: geometry.section is required");
  }
  const CrossSection cs = parse_section(spec);
  const Scalar h = number(numerics, "h", 1.0 / 64.0);
  const int count = static_cast<int>(number(numerics, "count", 6));
  const std::vector<Scalar> c2s = number_list(numerics, "c2", {0.0});
  const TwistOperator op = assemble_twist_operator(cs, h);
  std::vector<std::vector<std::string>> rows;
  Json spectra = Json::array();
  for (Scalar c2 : c2s) {
    if (c2 < 0.0) invalid("cross-section: c2 values must be >= 0");
    EigenSolverOptions eo;
    eo.lower_bound = 0.0;
    const EigenPairs pairs = smallest_eigenpairs(op.matrix(c2), count, eo);
    Json values = Json::array();
    for (int j = 0; j < count; ++j) {
      rows.push_back({format_double(c2), std::to_string(j + 1), format_double(pairs.values[j])});
      values.push_back(pairs.values[j]);
    }
    spectra.push_back({{"c2", c2}, {"eigenvalues", values}});
  }
  ctx.files.emplace_back("cross_section.csv", csv_table({"c2", "index", "eigenvalue"}, rows));
  ctx.summary = "cross-section lambda1=" + short_number(spectra[0]["eigenvalues"][0].get<Scalar>()) +
                " rho=" + short_number(cs.circumradius());
  return {{"shape", cs.shape_name()},
          {"rho", cs.circumradius()},
          {"area", cs.area()},
          {"centroid_at_origin", cs.centroid_at_origin()},
          {"h", op.grid.step()},
          {"unknowns", op.grid.size()},
          {"spectra", spectra}};
}

Json run_verify(Context& ctx) {
  const Json& geometry = block(ctx.config, "geometry");
  const Json& query = block(ctx.config, "query");
  const Json& numerics = block(ctx.config, "numerics");
  const Json& output = block(ctx.config, "output");
  VerifyScenario sc;
  const std::string form = text(numerics, "form", "cartesian");
  if (form == "cartesian") {
    sc.form = OracleForm::Cartesian;
  } else if (form == "straightened") {
    sc.form = OracleForm::Straightened;
  } else if (form == "twisted") {
    sc.form = OracleForm::Twisted3d;
  } else {
    invalid("verify: numerics.form must be cartesian, straightened or twisted");
  }
  sc.profile = parse_profile(geometry.contains("profile") ? geometry.at("profile") : Json());
  sc.curve = parse_curve(geometry.contains("curve") ? geometry.at("curve") : Json());
  sc.s_cut = number_pair(numerics, "s_cut");
  sc.lambda = ctx.opt.lambda.value_or(required_number(query, "lambda"));
  sc.sigma = ctx.opt.sigma.value_or(number(query, "sigma", 1.5));
  sc.grid_steps = number_list(numerics, "grid_steps", sc.grid_steps);
  sc.batch = static_cast<int>(number(numerics, "eig_count", sc.batch));
  sc.quad_tol = number(numerics, "quad_tol", sc.quad_tol);
  sc.phase_space = numerics.value("phase_space", true);
  if (query.contains("v")) {
    const ScalarFunction v = parse_function(query.at("v"));
    sc.potential = [v](Scalar s, Scalar) { return v(s); };
    sc.potential_sup = [v](Scalar s) { return v(s); };
  }
  if (sc.form == OracleForm::Twisted3d) {
    if (!ctx.opt.heavy && !numerics.value("heavy", false)) {
      invalid("verify: twisted 3D verification requires --heavy");
    }
    sc.twist = parse_twist(geometry);
    const Scalar cap = number(numerics, "max_nodes", 120.0 * 40.0 * 40.0);
    const Scalar fmax = sup_abs([&](Scalar s) { return sc.profile(s); }, sc.s_cut.first, sc.s_cut.second);
    const Scalar side = 2.0 * sc.twist->section.circumradius() * fmax;
    for (Scalar h : sc.grid_steps) {
      const Scalar nodes = ((sc.s_cut.second - sc.s_cut.first) / h + 1) * std::pow(side / h + 1, 2);
      if (nodes > cap) {
        invalid("verify: grid step " + short_number(h) + " gives ~" + short_number(nodes) +
                " lattice nodes, above numerics.max_nodes = " + short_number(cap));
      }
    }
  }
  const VerifyReport rep = verify_bound(sc);

  Json bounds = Json::object(), margins = Json::object(), verdicts = Json::object();
  std::string summary = "verify moment=" + short_number(rep.moment);
  for (const auto& b : rep.bounds) {
    bounds[b.name] = b.value;
    margins[b.name] = b.margin;
    verdicts[b.name] = b.verdict;
    summary += " " + b.name + "=" + b.verdict;
  }
  Json grids = Json::array();
  for (const auto& g : rep.grids) {
    grids.push_back({{"h", g.h},
                     {"moment", g.moment},
                     {"eigenvalues_below", g.eigenvalues_below},
                     {"unknowns", g.unknowns},
                     {"eigenvalues", g.eigs.values}});
  }
  if (output.value("eigenvalues", false)) {
    const auto& fine = rep.grids.back().eigs;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < fine.values.size(); ++i) {
      rows.push_back({std::to_string(i + 1), format_double(fine.values[i]),
                      format_double(fine.residuals[i])});
    }
    ctx.files.emplace_back("verify_eigenvalues.csv",
                           csv_table({"index", "eigenvalue", "residual"}, rows));
  }
  ctx.summary = summary;
  return {{"lambda", rep.lambda},
          {"sigma", rep.sigma},
          {"moment", rep.moment},
          {"convergence_error", rep.convergence_error},
          {"observed_order", rep.observed_order ? Json(*rep.observed_order) : Json(nullptr)},
          {"bounds", bounds},
          {"margins", margins},
          {"verdicts", verdicts},
          {"grids", grids},
          {"form", form},
          {"potential_exact", rep.potential_exact},
          {"volume", rep.volume}};
}

Json dispatch(Context& ctx) {
  const std::string& c = ctx.command;
  if (c == "bound2d") return run_bound2d(ctx);
  if (c == "bound-nd") return run_bound_nd(ctx);
  if (c == "bound-twist") return run_bound_twist(ctx);
  if (c == "phase-space") return run_phase_space(ctx);
  if (c == "compare-thin") return run_compare_thin(ctx);
  if (c == "cross-section") return run_cross_section(ctx);
  if (c == "verify") return run_verify(ctx);
  invalid("unknown command '" + c + "'");
}

Json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) invalid("config: cannot open '" + path + "'");
  try {
    Json j = Json::parse(f);
    if (!j.is_object()) invalid("config: top level must be an object");
    return j;
  } catch (const Json::parse_error& e) {
    invalid("config: " + path + ": " + e.what());
  }
}

const std::map<std::string, std::vector<std::string>>& required_fields() {
  static const std::map<std::string, std::vector<std::string>> fields = {
      {"bound2d", {"value", "l_constant", "norm", "support", "quad_error", "samples_csv"}},
      {"bound-nd", {"value", "l_constant", "norm", "support", "quad_error", "samples_csv", "dimension"}},
      {"bound-twist", {"value", "l_constant", "twist_sup", "support", "quad_error", "samples_csv"}},
      {"phase-space", {"lambda", "vol", "sigma", "value"}},
      {"compare-thin",
       {"alpha", "N", "lambda", "sigma", "cusp_rhs", "phase_rhs", "ratio", "lambda_admissible"}},
      {"cross-section", {"shape", "rho", "h", "unknowns", "spectra"}},
      {"verify",
       {"lambda", "sigma", "moment", "convergence_error", "bounds", "margins", "verdicts", "grids"}},
  };
  return fields;
}

}  // namespace

bool validate_report(const Json& report, std::string* why) {
  auto fail = [why](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  if (!report.is_object()) return fail("report is not an object");
  for (const char* key : {"command", "status", "version"}) {
    if (!report.contains(key) || !report.at(key).is_string()) return fail(std::string("missing ") + key);
  }
  const std::string command = report.at("command");
  const std::string status = report.at("status");
  if (status == "error") {
    if (!report.contains("error") || !report.at("error").is_object()) return fail("missing error");
    const Json& e = report.at("error");
    if (!e.contains("code") || !e.at("code").is_string()) return fail("missing error.code");
    if (!e.contains("message") || !e.at("message").is_string()) return fail("missing error.message");
    return true;
  }
  if (status != "ok") return fail("status must be ok or error");
  const auto it = required_fields().find(command);
  if (it == required_fields().end()) return fail("unknown command " + command);
  if (!report.contains("result") || !report.at("result").is_object()) return fail("missing result");
  const Json& r = report.at("result");
  for (const auto& key : it->second) {
    if (!r.contains(key)) return fail("missing result." + key);
  }
  if (command == "verify") {
    for (const auto& [name, verdict] : r.at("verdicts").items()) {
      const std::string v = verdict.get<std::string>();
      if (v != "certified" && v != "inconclusive" && v != "violated") return fail("bad verdict " + v);
      const Scalar bound = r.at("bounds").at(name).get<Scalar>();
      if (v == "certified" &&
          r.at("moment").get<Scalar>() + r.at("convergence_error").get<Scalar>() > bound) {
        return fail("certified verdict with moment + error above bound for " + name);
      }
    }
  }
  return true;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalue-moment bounds for cusped, curved and twisted regions", "cusp-spectra"};
  Options opt;
  Scalar alpha = 0, n = 0, lambda = 0, sigma = 0, vol = 0, c = 0;
  app.add_option("--config", opt.config, "JSON scenario file");
  app.add_option("--out", opt.out, "output directory");
  app.add_flag("--heavy", opt.heavy, "allow 3D twisted verification");
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  auto* o_alpha = app.add_option("--alpha", alpha, "thin-cusp exponent");
  auto* o_n = app.add_option("--N", n, "thin-cusp plateau half-length");
  auto* o_lambda = app.add_option("--lambda", lambda, "spectral level Lambda");
  auto* o_sigma = app.add_option("--sigma", sigma, "moment order");
  auto* o_vol = app.add_option("--vol", vol, "region volume (phase-space)");
  auto* o_c = app.add_option("--c", c, "curvature bound for the curved diagnostic (compare-thin)");
  for (const auto& name : kCommands) app.add_subcommand(name)->fallthrough();
  app.require_subcommand(1);

  std::vector<std::string> argv_store{"cusp-spectra"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  if (o_alpha->count()) opt.alpha = alpha;
  if (o_n->count()) opt.n = n;
  if (o_lambda->count()) opt.lambda = lambda;
  if (o_sigma->count()) opt.sigma = sigma;
  if (o_vol->count()) opt.vol = vol;
  if (o_c->count()) opt.c = c;

  Context ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.opt = opt;

  Json report = {{"command", ctx.command}, {"version", kVersion}};
  int code = kExitOk;
  try {
    if (!opt.config.empty()) ctx.config = load_config(opt.config);
    const std::string declared = text(ctx.config, "command", ctx.command);
    if (declared != ctx.command) {
      invalid("config declares command '" + declared + "' but '" + ctx.command + "' was run");
    }
    report["result"] = dispatch(ctx);
    report["status"] = "ok";
    report["error"] = nullptr;
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    report["status"] = "error";
    report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  } catch (const Json::exception& e) {
    code = kExitValidation;
    report["status"] = "error";
    report["error"] = {{"code", to_string(ErrorCode::Validation)}, {"message", e.what()}};
  }

  std::filesystem::path dir = opt.out;
  if (dir.empty()) dir = text(block(ctx.config, "output"), "dir", ".");
  try {
    if (code == kExitOk) {
      for (const auto& [name, content] : ctx.files) write_atomic(dir / name, content);
    }
    write_atomic(dir / (file_stem(ctx.command) + ".json"), report.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  if (code == kExitOk) {
    out << ctx.summary << "\n";
  } else {
    const Json& e = report["error"];
    out << ctx.command << " error=" << e["code"].get<std::string>() << "\n";
    err << "error: " << e["code"].get<std::string>() << ": " << e["message"].get<std::string>()
        << "\n";
  }
  return code;
}

}  // namespace cusp::cli
