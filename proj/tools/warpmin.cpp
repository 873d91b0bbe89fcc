#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "warpmin/cantor.hpp"
#include "warpmin/cyclespace.hpp"
#include "warpmin/json_io.hpp"
#include "warpmin/structure.hpp"

using namespace warpmin;

namespace {

enum class Level { Error, Warn, Info, Debug };

Level log_level() {
  static const Level lvl = [] {
    const char* e = std::getenv("WARPMIN_LOG");
    const std::string s = e ? e : "warn";
    if (s == "error") return Level::Error;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return lvl;
}

void log(Level lvl, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (lvl <= log_level()) std::cerr << "warpmin[" << names[int(lvl)] << "] " << msg << '\n';
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ResolutionError*>(&e)) return 2;
  return 1;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  log(Level::Info, "wrote " + path);
}

std::string stamp_now() {
  char buf[32];
  const std::time_t t = std::time(nullptr);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct AnalyzeOptions {
  std::vector<std::string> profiles;
  std::string fiber = "sphere:2";
  double fiber_area = 1.0;
  double omega = 2.0;
  double tol = 1e-10;
  std::string format = "json";
  std::string out;
  int jobs = 0;
  bool stamp = false;
};

const CantorNode* standard_cantor(const Profile& p) {
  auto* om = dynamic_cast<const OneMinusNode*>(p.expr().get());
  return om ? dynamic_cast<const CantorNode*>(om->child().get()) : nullptr;
}

struct Analysis {
  json report;
  std::vector<SliceReport> slices;
  Profile* profile = nullptr;
  int code = 0;
};

Analysis analyze_one(const std::string& path, const AnalyzeOptions& o) {
  Analysis a;
  a.report["profile"] = path;
  try {
    Profile prof = load_profile(path);
    FiberSpectrum spec = parse_fiber(o.fiber);
    a.report["fiber"] = {{"spectrum", spec.describe()}, {"dim", spec.dim()}, {"area", o.fiber_area}};
    a.report["analytic"] = prof.analytic();
    a.report["lower_bound"] = prof.lower_bound();
    log(Level::Debug, path + ": positivity bound " + number_string(prof.lower_bound()));
    WarpedProduct w(prof, spec.dim(), o.fiber_area, spec, o.tol);
    a.slices = slice_reports(w);
    const auto outcome = dichotomy(w);
    const json dj = to_json(outcome);
    a.report["branch"] = dj["branch"];
    a.report["evidence"] = dj["evidence"];
    json slices = json::array();
    for (auto& r : a.slices) slices.push_back(to_json(r));
    a.report["slices"] = slices;
    a.report["resolution"] = {{"tol", o.tol}, {"critical_set", to_json(w.critical())}};
    a.report["omega"] = o.omega;
    a.report["foliation_classes"] = to_json(foliation_classes(w, o.omega));
    a.report["stable_area_spectrum"] = stable_area_spectrum(w, o.omega);
    json sp = json::array();
    for (auto& s : detect_spindles(w)) sp.push_back(to_json(s));
    a.report["spindles"] = sp;
    if (outcome.core) a.report["weak_core_bound"] = to_json(weak_core_boundary_bound(w, *outcome.core));
    if (prof.analytic()) a.report["analytic_no_accumulating"] = to_json(analytic_no_accumulating(w));
    if (auto* c = standard_cantor(prof)) {
      json certs = json::array();
      certs.push_back(to_json(verify_critical_structure(prof, c->depth())));
      certs.push_back(to_json(verify_non_monotone_witnesses(prof, c->depth())));
      a.report["certificates"] = certs;
    }
    if (outcome.branch == Branch::Unresolved) a.code = 2;
  } catch (const IsolationError& e) {
    a.report["error"] = {{"kind", "resolution"}, {"message", e.what()},
                         {"partial_critical_set", to_json(e.partial())}};
    a.code = 2;
  } catch (const std::exception& e) {
    a.report["error"] = {{"kind", exit_code(e) == 2 ? "resolution" : "input"},
                         {"message", e.what()}};
    a.code = exit_code(e);
  }
  if (a.code) log(Level::Error, path + ": " + a.report["error"].value("message", "unresolved"));
  return a;
}

std::string slices_csv(const std::vector<SliceReport>& slices) {
  std::ostringstream ss;
  ss << "t,kind,area,jacobi_potential,lambda_min,index,stability,left,right\n";
  for (auto& r : slices)
    ss << number_string(r.t) << ',' << to_string(r.kind) << ',' << number_string(r.area) << ','
       << number_string(r.jacobi_potential) << ',' << number_string(r.lambda_min) << ','
       << r.index << ',' << to_string(r.stability) << ',' << to_string(r.left.kind) << ','
       << to_string(r.right.kind) << '\n';
  return ss.str();
}

std::string profile_samples(const std::string& path) {
  Profile prof = load_profile(path);
  std::ostringstream ss;
  ss << "# t f\n";
  constexpr int kSamples = 2000;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = double(i) / kSamples;
    ss << number_string(t) << ' ' << number_string(prof.eval(t, 0)) << '\n';
  }
  return ss.str();
}

int cmd_analyze(const AnalyzeOptions& o) {
  if (o.profiles.empty()) throw InputError("analyze needs at least one --profile");
  if (!(o.omega > 0.0) || !(o.tol > 0.0) || !(o.fiber_area > 0.0))
    throw InputError("--omega, --tol and --fiber-area must be positive");
  const unsigned jobs =
      o.jobs > 0 ? unsigned(o.jobs) : std::max(1u, std::thread::hardware_concurrency());
  std::vector<Analysis> results(o.profiles.size());
  for (std::size_t start = 0; start < o.profiles.size(); start += jobs) {
    std::vector<std::future<Analysis>> batch;
    for (std::size_t i = start; i < std::min(o.profiles.size(), start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, analyze_one, o.profiles[i], std::cref(o)));
    for (std::size_t i = 0; i < batch.size(); ++i) results[start + i] = batch[i].get();
  }
  int code = 0;
  for (auto& r : results) code = std::max(code, r.code);

  if (o.format == "csv") {
    std::string text;
    for (auto& r : results) {
      if (results.size() > 1) text += "# " + r.report["profile"].get<std::string>() + "\n";
      text += slices_csv(r.slices);
    }
    write_output(o.out, text);
    return code;
  }

  json doc;
  if (results.size() == 1) {
    doc = std::move(results[0].report);
  } else {
    doc = json::array();
    for (auto& r : results) doc.push_back(std::move(r.report));
  }
  if (o.stamp) {
    json wrapped = {{"generated_at", stamp_now()}, {"report", doc}};
    doc = std::move(wrapped);
  }
  if (o.format == "gnuplot") {
    if (results.size() != 1) throw InputError("gnuplot output takes a single profile");
    std::string data = code == 0 ? profile_samples(o.profiles[0]) : "";
    write_output(o.out, data);
    if (!o.out.empty() && o.out != "-") write_output(o.out + ".json", doc.dump(2) + "\n");
    return code;
  }
  write_output(o.out, doc.dump(2) + "\n");
  return code;
}

int cmd_generate_cantor(int depth, const std::string& schedule, const std::string& out,
                        std::string cert_path, bool stamp) {
  CantorSpec spec{depth, Schedule::parse(schedule)};
  Profile prof = build_cantor_profile(spec);
  const std::string text = dump_profile(prof);
  json certs = json::array();
  const auto c1 = verify_critical_structure(prof, depth);
  const auto c2 = verify_non_monotone_witnesses(prof, depth);
  certs.push_back(to_json(c1));
  certs.push_back(to_json(c2));
  bool pass = c1.pass && c2.pass;
  if (auto* lim = [&]() -> const CantorLimit* {
        for (auto& l : prof.limits())
          if (auto* c = std::get_if<CantorLimit>(&l)) return c;
        return nullptr;
      }()) {
    const auto c3 = cantor_likeness(lim->levels, depth);
    certs.push_back(to_json(c3));
    pass = pass && c3.pass;
  }
  json doc = {{"depth", depth}, {"schedule", spec.schedule.name()},
              {"sup_h_bound", cantor_sup_bound(spec)}, {"certificates", certs}};
  if (stamp) doc["generated_at"] = stamp_now();
  write_output(out, text);
  if (cert_path.empty() && !out.empty() && out != "-") cert_path = out + ".cert.json";
  if (!cert_path.empty()) write_output(cert_path, doc.dump(2) + "\n");
  if (!pass) {
    log(Level::Error, "cantor certificate failed");
    return 1;
  }
  return 0;
}

struct WidthOptions {
  std::string csv;
  bool synthetic = false;
  double A = 0.0, B = 0.0;
  bool have_A = false;
  int n = 2;
  long long pmax = 1000;
  bool weyl = false;
  double vol = 1.0, weyl_tol = 0.05;
  bool jump = false;
  double C = 0.0;
  double unstable_sup = 0.0;
  std::vector<double> areas;
  bool counting = false;
  std::optional<double> c_prime;
  long long p0 = 1;
  std::string emit_table;
  std::string out;
  bool stamp = false;
};

std::vector<double> parse_areas(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw InputError("'" + item + "' in --areas is not a number");
    out.push_back(v);
  }
  return out;
}

int cmd_widths(const WidthOptions& o) {
  json doc = json::object();
  std::optional<WidthTable> table;
  if (!o.csv.empty()) {
    std::ifstream in(o.csv);
    if (!in) throw InputError("cannot open '" + o.csv + "'");
    table = read_width_csv(in, o.n);
  } else if (o.synthetic) {
    if (!o.have_A) throw InputError("--synthetic needs --A");
    table = synthesize_widths(o.A, o.B, o.n, o.pmax);
  }
  if (table) {
    doc["table"] = {{"n", table->n},
                    {"entries", table->entries.size()},
                    {"p_min", table->entries.front().p},
                    {"p_max", table->entries.back().p},
                    {"provenance", table->provenance == WidthTable::Provenance::Synthetic
                                       ? "synthetic"
                                       : "user-supplied"}};
    if (!o.emit_table.empty()) {
      std::ostringstream ss;
      write_width_csv(ss, *table);
      write_output(o.emit_table, ss.str());
    }
    if (o.have_A) doc["growth"] = to_json(width_growth_check(*table, o.A, o.B));
    if (o.weyl) doc["weyl"] = to_json(weyl_check(*table, o.vol, o.weyl_tol));
    if (o.jump) {
      if (o.areas.empty()) throw InputError("--jump needs --areas");
      doc["jump"] = to_json(ls_jump_check(*table, o.areas, o.C, o.unstable_sup));
    }
  } else if (o.weyl || o.jump || o.have_A) {
    throw InputError("width checks need --csv or --synthetic");
  }
  if (o.counting) {
    if (o.areas.empty()) throw InputError("--counting needs --areas");
    doc["counting"] = to_json(counting_contradiction(o.areas, o.C, o.n, o.p0, o.c_prime));
  }
  if (doc.empty()) throw InputError("nothing to do: give --csv/--synthetic or --counting");
  if (o.stamp) doc["generated_at"] = stamp_now();
  write_output(o.out, doc.dump(2) + "\n");
  return 0;
}

int cmd_report(const AnalyzeOptions& o, int tp_resolution, const std::string& data_out) {
  if (o.profiles.size() != 1) throw InputError("report takes exactly one --profile");
  Profile prof = load_profile(o.profiles[0]);
  FiberSpectrum spec = parse_fiber(o.fiber);
  WarpedProduct w(prof, spec.dim(), o.fiber_area, spec, o.tol);
  json doc = {{"profile", o.profiles[0]}, {"omega", o.omega}};
  const auto wf = is_weakly_frankel(w);
  doc["weakly_frankel"] = wf.weakly_frankel;
  if (wf.weakly_frankel) {
    const auto model = decompose(w, o.omega);
    doc["cycle_space"] = to_json(model);
    int top = 1;
    for (auto& f : model.full) top = std::max(top, f.m + 1);
    json dims = json::object();
    for (int m = 1; m <= top + 1; ++m) dims[std::to_string(m)] = cohomology_dims(model, m);
    doc["cohomology_dims"] = dims;
  } else {
    doc["cycle_space"] = nullptr;
    doc["contracting_witnesses"] = json::array();
    for (auto& c : wf.contracting)
      doc["contracting_witnesses"].push_back({{"t", c.t}, {"side", to_string(c.side)}});
  }
  json tp = json::array();
  for (int m = 1; m <= 3; ++m) tp.push_back(to_json(tp_homology(m, tp_resolution)));
  doc["truncated_symmetric_products"] = tp;
  if (o.stamp) doc["generated_at"] = stamp_now();
  if (!data_out.empty())
    write_output(data_out, profile_samples(o.profiles[0]));
  write_output(o.out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warped-product minimal slice analysis"};
  app.require_subcommand(1);

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand("analyze", "classify minimal slices of one or more profiles");
  analyze->add_option("--profile", ao.profiles, "profile JSON")->required();
  analyze->add_option("--fiber", ao.fiber, "sphere:<n>, torus:<n> or file:<path>");
  analyze->add_option("--fiber-area", ao.fiber_area, "fiber area A0");
  analyze->add_option("--omega", ao.omega, "area bound for foliation classes");
  analyze->add_option("--tol", ao.tol, "isolation tolerance");
  analyze->add_option("--format", ao.format)->check(CLI::IsMember({"json", "csv", "gnuplot"}));
  analyze->add_option("-o,--output", ao.out, "output path (default stdout)");
  analyze->add_option("--jobs", ao.jobs, "parallel analyses (default: cores)");
  analyze->add_flag("--stamp", ao.stamp, "add a timestamp");

  int depth = 2;
  std::string schedule = "pow6", gen_out, cert_out;
  bool gen_stamp = false;
  auto* gen = app.add_subcommand("generate-cantor", "emit the truncated Cantor profile");
  gen->add_option("--depth", depth, "truncation depth")->required();
  gen->add_option("--schedule", schedule, "coefficient schedule pow<K>");
  gen->add_option("-o,--output", gen_out, "profile path (default stdout)");
  gen->add_option("--cert", cert_out, "certificate path (default <output>.cert.json)");
  gen->add_flag("--stamp", gen_stamp);

  WidthOptions wo;
  std::string areas;
  double c_prime = 0.0;
  auto* widths = app.add_subcommand("widths", "width growth, Weyl, jump and counting checks");
  widths->add_option("--csv", wo.csv, "width table p,omega");
  widths->add_flag("--synthetic", wo.synthetic, "use omega_p = Ap + Bp^(1/(n+1))");
  auto* optA = widths->add_option("--A", wo.A);
  widths->add_option("--B", wo.B);
  widths->add_option("--n", wo.n);
  widths->add_option("--pmax", wo.pmax);
  widths->add_flag("--weyl", wo.weyl);
  widths->add_option("--vol", wo.vol);
  widths->add_option("--weyl-tol", wo.weyl_tol);
  widths->add_flag("--jump", wo.jump);
  widths->add_option("--C", wo.C);
  widths->add_option("--unstable-sup", wo.unstable_sup);
  widths->add_option("--areas", areas, "comma separated stable areas");
  widths->add_flag("--counting", wo.counting);
  auto* optCp = widths->add_option("--c-prime", c_prime);
  widths->add_option("--p0", wo.p0);
  widths->add_option("--emit-table", wo.emit_table, "write the table as CSV");
  widths->add_option("-o,--output", wo.out);
  widths->add_flag("--stamp", wo.stamp);

  AnalyzeOptions ro;
  int tp_res = 8;
  std::string data_out;
  auto* report = app.add_subcommand("report", "cycle-space topology and plot data");
  report->add_option("--profile", ro.profiles)->required();
  report->add_option("--fiber", ro.fiber);
  report->add_option("--fiber-area", ro.fiber_area);
  report->add_option("--omega", ro.omega);
  report->add_option("--tol", ro.tol);
  report->add_option("--tp-resolution", tp_res);
  report->add_option("--data", data_out, "gnuplot data: t f");
  report->add_option("-o,--output", ro.out);
  report->add_flag("--stamp", ro.stamp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*analyze) return cmd_analyze(ao);
    if (*gen) return cmd_generate_cantor(depth, schedule, gen_out, cert_out, gen_stamp);
    if (*widths) {
      wo.have_A = optA->count() > 0;
      if (optCp->count()) wo.c_prime = c_prime;
      if (!areas.empty()) wo.areas = parse_areas(areas);
      return cmd_widths(wo);
    }
    if (*report) return cmd_report(ro, tp_res, data_out);
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return exit_code(e);
  }
  return 1;
}
