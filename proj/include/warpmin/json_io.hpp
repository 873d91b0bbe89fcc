#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "warpmin/cantor.hpp"
#include "warpmin/cyclespace.hpp"
#include "warpmin/geometry.hpp"
#include "warpmin/structure.hpp"

namespace warpmin {

using json = nlohmann::ordered_json;

/// Parses {"period": 1, "analytic": bool, "expr": node}. Syntax errors carry
/// line and column; semantic errors carry the JSON path.
Profile parse_profile(std::string_view text);
Profile load_profile(const std::string& path);

json expr_to_json(const Expr& e);
json profile_to_json(const Profile& p);
/// Two-space indented, newline terminated, numbers as shortest round-trip strings.
std::string dump_profile(const Profile& p);

/// sphere:<n>, torus:<n> or file:<path>. File spectra are JSON
/// {"dim": n, "levels": [{"eigenvalue": x, "multiplicity": k}, ...]} or a bare
/// level list, which means dim 2.
FiberSpectrum parse_fiber(const std::string& selector);

std::string number_string(double v);

json to_json(const SideClass& s);
json to_json(const SliceReport& r);
json to_json(const CriticalSet& cs);
json to_json(const FoliationClasses& fc);
json to_json(const SongRegion& r);
json to_json(const Spindle& s);
json to_json(const NonMonotonicSet& s, bool with_witnesses = false);
json to_json(const Certificate& c);
json to_json(const DichotomyOutcome& o);
json to_json(const Verdict& v);
json to_json(const CycleSpaceModel& m);
json to_json(const TpHomology& h);
json to_json(const WidthVerdict& v);
json to_json(const WeylEstimate& w);
json to_json(const CountingResult& c);

}  // namespace warpmin
