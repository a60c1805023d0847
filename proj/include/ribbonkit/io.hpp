#pragma once

// Distribution files and result serialization.
//
// Distribution file:
//   {"type": "pair" | "tensor", "shape": [n1, n2, ...],
//    "p": [row-major probabilities], "labels": [[...], ...] (optional)}
// Numbers are written with 12 significant digits; non-finite values become
// null. CSV output uses '.' decimals and LF line endings.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ribbonkit/dist.hpp"
#include "ribbonkit/feasibility.hpp"
#include "ribbonkit/maxcorr.hpp"
#include "ribbonkit/multiagent.hpp"
#include "ribbonkit/ribbon.hpp"
#include "ribbonkit/sdpi.hpp"

namespace ribbonkit {

using Json = nlohmann::ordered_json;

struct DistFile {
    std::string type;  // "pair" or "tensor"
    std::vector<std::size_t> shape;
    std::vector<double> p;
    std::optional<std::vector<std::vector<std::string>>> labels;
};

/// Throws ParseError on malformed JSON or schema violations.
DistFile parse_dist_file(std::string_view text);
DistFile load_dist_file(const std::string& path);

Json to_json(const DistFile& f);
DistFile dist_file_of(const JointDist& d);
DistFile dist_file_of(const KJointDist& kd);

/// Throws ParseError ("expected pair" / "expected tensor") on a type
/// mismatch; validation errors propagate unchanged.
JointDist as_pair(const DistFile& f);
KJointDist as_tensor(const DistFile& f);

/// Round to 12 significant digits; non-finite values are returned as is.
double round12(double v);
/// "%.12g"; inf and nan are spelled out.
std::string format12(double v);

Json to_json(const Bracket& b);
Json to_json(const MaxCorrResult& r);
Json to_json(const RibbonBoundary& b, std::string_view units);
Json to_json(const SStarResult& r);
Json to_json(const LimitReport& r);
Json to_json(const Certificate& c);
Json to_json(const DiagVerdict& v);
Json to_json(const DiagThreshold& t);
Json summary_json(const RegionGrid& g);
Json summary_json(const RatioContour& c);

std::string_view to_string(BracketKind k) noexcept;
std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(MaxCorrMethod m) noexcept;

/// Header "c,d,label"; c varies slowest.
std::string region_csv(const RegionGrid& g);
/// Header "f,g,ratio"; g varies slowest.
std::string contour_csv(const RatioContour& c);

/// Two-space indented JSON followed by a newline.
std::string dump(const Json& j);

}  // namespace ribbonkit
