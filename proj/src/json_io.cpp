#include "warpmin/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace warpmin {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

double number(const json& j, const std::string& path) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "number is not finite");
    return v;
  }
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      bad(path, "'" + s + "' is not a decimal number");
    return v;
  }
  bad(path, "expected a number or decimal string");
}

long long integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      bad(path, "'" + s + "' is not an integer");
    return v;
  }
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (d == std::floor(d) && std::fabs(d) < 9e15) return static_cast<long long>(d);
  }
  bad(path, "expected an integer");
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) bad(path, "expected an object");
  for (auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) bad(path, "unknown field '" + k + "'");
  }
}

const json& field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(path, std::string("missing field '") + key + "'");
  return *it;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Expr parse_node(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) bad(path, "a node is an object with exactly one key");
  const auto& [kind, body] = *j.items().begin();
  const std::string p = path + "." + kind;
  try {
    if (kind == "const") return constant(number(body, p));
    if (kind == "cos") {
      only_keys(body, p, {"amp", "freq", "phase"});
      const double phase = body.contains("phase") ? number(body["phase"], p + ".phase") : 0.0;
      const long long k = integer(field(body, p, "freq"), p + ".freq");
      if (k < -1000000 || k > 1000000) bad(p + ".freq", "frequency out of range");
      return cosine(number(field(body, p, "amp"), p + ".amp"), static_cast<int>(k), phase);
    }
    if (kind == "bump") {
      only_keys(body, p, {"center", "halfwidth", "amp"});
      return bump_node(number(field(body, p, "center"), p + ".center"),
                       number(field(body, p, "halfwidth"), p + ".halfwidth"),
                       number(field(body, p, "amp"), p + ".amp"));
    }
    if (kind == "sum") {
      if (!body.is_array() || body.empty()) bad(p, "expected a nonempty array of nodes");
      std::vector<Expr> kids;
      for (std::size_t i = 0; i < body.size(); ++i)
        kids.push_back(parse_node(body[i], p + "[" + std::to_string(i) + "]"));
      return sum(std::move(kids));
    }
    if (kind == "one_minus") return one_minus(parse_node(body, p));
    if (kind == "cantor") {
      only_keys(body, p, {"depth", "schedule"});
      const long long d = integer(field(body, p, "depth"), p + ".depth");
      if (d < 0 || d > kMaxCantorDepth)
        bad(p + ".depth", "depth " + std::to_string(d) + " outside [0, " +
                              std::to_string(kMaxCantorDepth) + "]");
      std::string sched = "pow6";
      if (body.contains("schedule")) {
        if (!body["schedule"].is_string()) bad(p + ".schedule", "expected a schedule name");
        sched = body["schedule"].get<std::string>();
      }
      return cantor_sum(static_cast<int>(d), Schedule::parse(sched));
    }
    if (kind == "trig") {
      only_keys(body, p, {"cos", "sin"});
      std::vector<double> a = body.contains("cos") ? number_list(body["cos"], p + ".cos")
                                                   : std::vector<double>{};
      std::vector<double> b = body.contains("sin") ? number_list(body["sin"], p + ".sin")
                                                   : std::vector<double>{};
      return trig(std::move(a), std::move(b));
    }
    if (kind == "staircase") {
      only_keys(body, p, {"point", "reach", "steps", "rise", "plateau", "fall"});
      StaircaseParams sp;
      if (body.contains("point")) sp.point = number(body["point"], p + ".point");
      if (body.contains("reach")) sp.reach = number(body["reach"], p + ".reach");
      if (body.contains("steps")) {
        const long long s = integer(body["steps"], p + ".steps");
        if (s < 1 || s > 40) bad(p + ".steps", "steps must lie in [1, 40]");
        sp.steps = static_cast<int>(s);
      }
      if (body.contains("rise")) sp.rise = number(body["rise"], p + ".rise");
      if (body.contains("plateau")) sp.plateau = number(body["plateau"], p + ".plateau");
      if (body.contains("fall")) sp.fall = number(body["fall"], p + ".fall");
      return staircase(sp);
    }
  } catch (const DomainError& e) {
    bad(p, e.what());
  }
  bad(path, "unknown node kind '" + kind + "'");
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw InputError("JSON syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + msg);
  }
}

}  // namespace

std::string number_string(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Profile parse_profile(std::string_view text) {
  const json j = parse_text(text);
  only_keys(j, "$", {"period", "analytic", "expr"});
  if (j.contains("period") && number(j["period"], "$.period") != 1.0)
    bad("$.period", "only period 1 is supported");
  const json& a = field(j, "$", "analytic");
  if (!a.is_boolean()) bad("$.analytic", "expected true or false");
  Expr e = parse_node(field(j, "$", "expr"), "$.expr");
  return Profile(std::move(e), a.get<bool>());
}

Profile load_profile(const std::string& path) { return parse_profile(read_file(path)); }

json expr_to_json(const Expr& e) {
  const Node* n = e.get();
  auto num = [](double v) { return number_string(v); };
  if (auto* c = dynamic_cast<const ConstantNode*>(n)) return {{"const", num(c->value())}};
  if (auto* c = dynamic_cast<const CosineNode*>(n))
    return {{"cos", {{"amp", num(c->amp())}, {"freq", c->freq()}, {"phase", num(c->phase())}}}};
  if (auto* b = dynamic_cast<const BumpNode*>(n))
    return {{"bump",
             {{"center", num(b->center())},
              {"halfwidth", num(b->halfwidth())},
              {"amp", num(b->amp())}}}};
  if (auto* s = dynamic_cast<const SumNode*>(n)) {
    json arr = json::array();
    for (auto& k : s->children()) arr.push_back(expr_to_json(k));
    return {{"sum", arr}};
  }
  if (auto* o = dynamic_cast<const OneMinusNode*>(n)) return {{"one_minus", expr_to_json(o->child())}};
  if (auto* c = dynamic_cast<const CantorNode*>(n))
    return {{"cantor", {{"depth", c->depth()}, {"schedule", c->schedule().name()}}}};
  if (auto* t = dynamic_cast<const TrigNode*>(n)) {
    json a = json::array(), b = json::array();
    for (double v : t->cos_coeffs()) a.push_back(num(v));
    for (double v : t->sin_coeffs()) b.push_back(num(v));
    return {{"trig", {{"cos", a}, {"sin", b}}}};
  }
  if (auto* s = dynamic_cast<const StaircaseNode*>(n)) {
    const auto& p = s->params();
    return {{"staircase",
             {{"point", num(p.point)},
              {"reach", num(p.reach)},
              {"steps", p.steps},
              {"rise", num(p.rise)},
              {"plateau", num(p.plateau)},
              {"fall", num(p.fall)}}}};
  }
  throw InputError("expression node has no JSON form");
}

json profile_to_json(const Profile& p) {
  return {{"period", 1}, {"analytic", p.analytic()}, {"expr", expr_to_json(p.expr())}};
}

std::string dump_profile(const Profile& p) { return profile_to_json(p).dump(2) + "\n"; }

FiberSpectrum parse_fiber(const std::string& selector) {
  const auto colon = selector.find(':');
  if (colon == std::string::npos)
    throw InputError("fiber selector '" + selector + "' must be sphere:<n>, torus:<n> or file:<path>");
  const std::string kind = selector.substr(0, colon), arg = selector.substr(colon + 1);
  if (kind == "file") {
    const std::string text = read_file(arg);
    const json j = parse_text(text);
    long long dim = 2;
    const json* lvp = &j;
    std::string base = "$";
    if (!j.is_array()) {
      only_keys(j, "$", {"dim", "levels"});
      dim = integer(field(j, "$", "dim"), "$.dim");
      if (dim < 2) bad("$.dim", "fiber dimension must be >= 2");
      lvp = &field(j, "$", "levels");
      base = "$.levels";
      if (!lvp->is_array()) bad(base, "expected an array");
    }
    const json& lv = *lvp;
    std::vector<SpectrumLevel> levels;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const std::string p = base + "[" + std::to_string(i) + "]";
      only_keys(lv[i], p, {"eigenvalue", "multiplicity"});
      SpectrumLevel l;
      l.eigenvalue = number(field(lv[i], p, "eigenvalue"), p + ".eigenvalue");
      l.multiplicity =
          lv[i].contains("multiplicity") ? integer(lv[i]["multiplicity"], p + ".multiplicity") : 1;
      levels.push_back(l);
    }
    return FiberSpectrum::listed(std::move(levels), static_cast<int>(dim));
  }
  int n = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
  if (arg.empty() || ec != std::errc() || ptr != arg.data() + arg.size())
    throw InputError("fiber dimension '" + arg + "' is not an integer");
  try {
    if (kind == "sphere") return FiberSpectrum::sphere(n);
    if (kind == "torus") return FiberSpectrum::torus(n);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown fiber kind '" + kind + "'");
}

json to_json(const SideClass& s) {
  json j = {{"kind", to_string(s.kind)}, {"provenance", to_string(s.provenance)}};
  if (s.finite_depth) j["finite_depth"] = to_string(*s.finite_depth);
  return j;
}

json to_json(const SliceReport& r) {
  return {{"t", r.t},
          {"kind", to_string(r.kind)},
          {"area", r.area},
          {"jacobi_potential", r.jacobi_potential},
          {"lambda_min", r.lambda_min},
          {"index", r.index},
          {"stability", to_string(r.stability)},
          {"degenerate", r.degenerate},
          {"declared_limit", r.declared_limit},
          {"left", to_json(r.left)},
          {"right", to_json(r.right)}};
}

json to_json(const CriticalSet& cs) {
  json iso = json::array(), pl = json::array(), lim = json::array();
  for (auto& c : cs.isolated)
    iso.push_back({{"lo", c.enclosure.lo},
                   {"hi", c.enclosure.hi},
                   {"degenerate", c.degenerate},
                   {"left", to_string(c.left)},
                   {"right", to_string(c.right)}});
  for (auto& p : cs.plateaus)
    pl.push_back({{"lo", p.arc.lo},
                  {"hi", p.arc.hi},
                  {"full", p.full},
                  {"left", to_string(p.left)},
                  {"right", to_string(p.right)}});
  for (auto& l : cs.limits) {
    if (auto* c = std::get_if<CantorLimit>(&l)) {
      json counts = json::array();
      for (auto& lv : c->levels) counts.push_back(lv.size());
      lim.push_back({{"type", "cantor"}, {"depth", c->depth}, {"components_per_level", counts}});
    } else if (auto* s = std::get_if<StairLimit>(&l)) {
      lim.push_back({{"type", "stair"},
                     {"point", s->point},
                     {"side", to_string(s->side)},
                     {"depth", s->depth},
                     {"approximant", {s->approximant.lo, s->approximant.hi}}});
    }
  }
  return {{"isolated", iso},
          {"plateaus", pl},
          {"limits", lim},
          {"resolution",
           {{"tol", cs.resolution.tol},
            {"grid_cells", cs.resolution.grid_cells},
            {"declared_depth", cs.resolution.declared_depth},
            {"symbolic", cs.resolution.symbolic}}}};
}

json to_json(const FoliationClasses& fc) {
  json arr = json::array();
  for (auto& c : fc.classes)
    arr.push_back({{"kind", to_string(c.kind)},
                   {"lo", c.arc.lo},
                   {"hi", c.arc.hi},
                   {"area", c.area},
                   {"stability", to_string(c.stability)}});
  return {{"classes", arr}, {"truncated", fc.truncated}, {"depth", fc.depth}};
}

json to_json(const SongRegion& r) {
  auto b = [](const BoundarySlice& s) {
    return json{{"t", s.t}, {"area", s.area}, {"inward", to_json(s.inward)}};
  };
  return {{"lo", r.arc.lo},
          {"hi", r.arc.hi},
          {"a", b(r.a)},
          {"b", b(r.b)},
          {"contracting_boundary", r.contracting_boundary}};
}

json to_json(const Spindle& s) {
  json sides = json::array();
  for (auto side : s.accumulating_sides) sides.push_back(to_string(side));
  json j = {{"lo", s.arc.lo},
            {"hi", s.arc.hi},
            {"left_probe", s.left_probe},
            {"right_probe", s.right_probe},
            {"accumulating", s.accumulating},
            {"accumulating_sides", sides}};
  if (s.limit_point) j["limit_point"] = *s.limit_point;
  if (s.limit_arc) j["limit_arc"] = {s.limit_arc->lo, s.limit_arc->hi};
  return j;
}

json to_json(const NonMonotonicSet& s, bool with_witnesses) {
  json j = {{"form", s.form == NonMonotonicSet::Form::Finite ? "finite" : "declared-limit"},
            {"depth", s.depth},
            {"points", s.points.size()},
            {"witnesses", s.witnesses.size()}};
  if (s.limit) {
    json counts = json::array();
    for (auto& lv : s.limit->levels) counts.push_back(lv.size());
    j["components_per_level"] = counts;
  }
  if (with_witnesses) {
    json w = json::array();
    for (auto& x : s.witnesses) w.push_back({x.point, x.scale, x.midpoint});
    j["witness_list"] = w;
  }
  return j;
}

json to_json(const Certificate& c) {
  json checks = json::array();
  for (auto& k : c.checks) checks.push_back({{"name", k.name}, {"pass", k.pass}, {"detail", k.detail}});
  return {{"name", c.name}, {"pass", c.pass}, {"checks", checks}};
}

json to_json(const DichotomyOutcome& o) {
  json ev = json::object();
  if (o.core) ev["weak_core"] = to_json(*o.core);
  if (o.spindle) ev["spindle"] = to_json(*o.spindle);
  if (o.non_monotonic) ev["non_monotonic"] = to_json(*o.non_monotonic);
  if (o.cantor_likeness) ev["cantor_likeness"] = to_json(*o.cantor_likeness);
  if (!o.non_accumulating_spindles.empty()) {
    json arr = json::array();
    for (auto& s : o.non_accumulating_spindles) arr.push_back(to_json(s));
    ev["non_accumulating_spindles"] = arr;
  }
  if (o.branch == Branch::Unresolved) ev["uncertainty"] = o.uncertainty;
  return {{"branch", to_string(o.branch)}, {"evidence", ev}};
}

json to_json(const Verdict& v) {
  return {{"pass", v.pass}, {"detail", v.detail}, {"witnesses", v.witnesses}};
}

json to_json(const CycleSpaceModel& m) {
  json full = json::array(), partial = json::array();
  for (auto& f : m.full) full.push_back({{"leaf_area", f.leaf_area}, {"rp_dimension", f.m}});
  for (auto& p : m.partial)
    partial.push_back({{"lo", p.arc.lo},
                       {"hi", p.arc.hi},
                       {"area", p.area},
                       {"even_retracts_to_zero", p.even_retracts_to_zero},
                       {"odd_contractible", p.odd_contractible}});
  return {{"omega", m.omega},
          {"c_prime", m.c_prime},
          {"full", full},
          {"partial", partial},
          {"isolated", m.isolated}};
}

json to_json(const TpHomology& h) {
  return {{"m", h.m},
          {"resolution", h.resolution},
          {"betti", h.betti},
          {"cells", h.cells},
          {"matches_rp", h.matches_rp}};
}

json to_json(const WidthVerdict& v) {
  json j = {{"pass", v.pass}, {"detail", v.detail}, {"checked", v.checked}, {"skipped", v.skipped}};
  if (v.first_p) {
    j["first_violation"] = *v.first_p;
    j["rule"] = v.rule;
  }
  return j;
}

json to_json(const WeylEstimate& w) {
  return {{"a_hat", w.a_hat},
          {"intercept", w.intercept},
          {"drift", w.drift},
          {"converged", w.converged},
          {"detail", w.detail}};
}

json to_json(const CountingResult& c) {
  return {{"p", c.p},
          {"c_double_prime", c.c_double_prime},
          {"c_prime", c.c_prime},
          {"threshold", c.threshold}};
}

}  // namespace warpmin
