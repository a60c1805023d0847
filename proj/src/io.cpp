#include "ribbonkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ribbonkit/error.hpp"

namespace ribbonkit {

namespace {

Json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round12(v);
}

Json numbers(std::span<const double> v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

}  // namespace

double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string format12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

DistFile parse_dist_file(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "distribution file must be a JSON object");
    DistFile f;
    try {
        f.type = j.at("type").get<std::string>();
        if (f.type != "pair" && f.type != "tensor") throw Error(ErrorCode::ParseError, "type must be pair or tensor");
        for (const auto& s : j.at("shape")) {
            if (!s.is_number_integer() || s.get<long long>() <= 0)
                throw Error(ErrorCode::ParseError, "shape entries must be positive integers");
            f.shape.push_back(s.get<std::size_t>());
        }
        for (const auto& v : j.at("p")) {
            if (!v.is_number()) throw Error(ErrorCode::ParseError, "p entries must be numbers");
            f.p.push_back(v.get<double>());
        }
        if (j.contains("labels")) f.labels = j.at("labels").get<std::vector<std::vector<std::string>>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("schema: ") + e.what());
    }
    if (f.type == "pair" && f.shape.size() != 2) throw Error(ErrorCode::ParseError, "a pair needs a 2-entry shape");
    if (f.type == "tensor" && f.shape.size() < 2) throw Error(ErrorCode::ParseError, "a tensor needs at least 2 axes");
    std::size_t n = 1;
    for (std::size_t s : f.shape) n *= s;
    if (n != f.p.size()) throw Error(ErrorCode::ParseError, "shape product differs from the length of p");
    if (f.labels) {
        if (f.labels->size() != f.shape.size()) throw Error(ErrorCode::ParseError, "one label list per axis");
        for (std::size_t a = 0; a < f.shape.size(); ++a)
            if ((*f.labels)[a].size() != f.shape[a]) throw Error(ErrorCode::ParseError, "label count differs from axis size");
    }
    return f;
}

DistFile load_dist_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dist_file(ss.str());
}

Json to_json(const DistFile& f) {
    Json j;
    j["type"] = f.type;
    j["shape"] = f.shape;
    j["p"] = numbers(f.p);
    if (f.labels) j["labels"] = *f.labels;
    return j;
}

DistFile dist_file_of(const JointDist& d) {
    DistFile f;
    f.type = "pair";
    f.shape = {d.nx(), d.ny()};
    f.p.assign(d.table().begin(), d.table().end());
    return f;
}

DistFile dist_file_of(const KJointDist& kd) {
    DistFile f;
    f.type = "tensor";
    f.shape.assign(kd.shape().begin(), kd.shape().end());
    f.p.assign(kd.table().begin(), kd.table().end());
    return f;
}

JointDist as_pair(const DistFile& f) {
    if (f.type != "pair") throw Error(ErrorCode::ParseError, "expected pair, got " + f.type);
    return JointDist::validate(f.shape[0], f.shape[1], f.p);
}

KJointDist as_tensor(const DistFile& f) {
    if (f.type != "tensor") throw Error(ErrorCode::ParseError, "expected tensor, got " + f.type);
    return KJointDist::validate(f.shape, f.p);
}

std::string_view to_string(BracketKind k) noexcept {
    switch (k) {
        case BracketKind::WitnessLoSearchHi: return "WITNESS_LO_SEARCH_HI";
        case BracketKind::WitnessHiSearchLo: return "WITNESS_HI_SEARCH_LO";
        case BracketKind::SearchBoth: return "SEARCH_BOTH";
        case BracketKind::Exact: return "EXACT";
    }
    return "?";
}

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::FailWitnessed ? "FAIL_WITNESSED" : "PASS_NUMERICAL";
}

std::string_view to_string(MaxCorrMethod m) noexcept {
    switch (m) {
        case MaxCorrMethod::Svd: return "SVD";
        case MaxCorrMethod::BinaryFormula: return "BINARY_FORMULA";
        case MaxCorrMethod::BruteForce: return "BRUTE_FORCE";
    }
    return "?";
}

Json to_json(const Bracket& b) {
    Json j;
    j["lo"] = number(b.lo);
    j["hi"] = number(b.hi);
    j["kind"] = to_string(b.kind);
    return j;
}

Json to_json(const MaxCorrResult& r) {
    Json j;
    j["value"] = number(r.value);
    j["raw_value"] = number(r.raw_value);
    j["method"] = to_string(r.method);
    if (r.witness) {
        j["witness"] = {{"f", numbers(r.witness->f)}, {"g", numbers(r.witness->g)}};
    } else {
        j["witness"] = nullptr;
    }
    j["overshoot"] = r.overshoot;
    return j;
}

Json to_json(const RibbonBoundary& b, std::string_view units) {
    Json j;
    j["units"] = units;
    j["bracket"] = to_json(b.bracket);
    j["search_edge"] = number(b.search_edge);
    j["witness_q"] = optional_number(b.witness_q);
    j["witness_g"] = numbers(b.witness_g);
    return j;
}

Json to_json(const SStarResult& r) {
    Json j;
    j["value_lo"] = number(r.value_lo);
    j["value_hi"] = number(r.value_hi);
    j["local_limit"] = number(r.local_limit);
    j["witness_rx"] = numbers(r.witness_rx);
    return j;
}

Json to_json(const LimitReport& r) {
    Json j;
    j["reference"] = number(r.reference);
    Json entries = Json::array();
    for (const auto& e : r.entries) entries.push_back({{"p", number(e.p)}, {"s", to_json(e.s)}, {"deviation", number(e.deviation)}});
    j["entries"] = entries;
    j["max_deviation"] = number(r.max_deviation);
    j["pass"] = r.pass;
    return j;
}

Json to_json(const Certificate& c) {
    Json j;
    j["verdict"] = to_string(c.verdict);
    j["mechanism"] = to_string(c.mechanism);
    j["p_used"] = optional_number(c.p_used);
    j["margin"] = number(c.margin);
    Json d;
    d["source_value"] = number(c.details.source_value);
    d["target_value"] = number(c.details.target_value);
    d["source_exact"] = c.details.source_exact;
    Json rows = Json::array();
    for (const auto& r : c.details.per_p) {
        Json row;
        row["p"] = number(r.p);
        row["source_upper"] = number(r.source_upper);
        row["source_exact"] = r.source_exact;
        row["target_lower"] = number(r.target_lower);
        row["margin"] = number(r.margin);
        row["witness_q"] = optional_number(r.witness_q);
        row["witness_g"] = numbers(r.witness_g);
        if (!r.witness_r.empty()) row["witness_r"] = numbers(r.witness_r);
        rows.push_back(row);
    }
    d["per_p"] = rows;
    d["note"] = c.details.note;
    j["details"] = d;
    return j;
}

Json to_json(const DiagVerdict& v) {
    Json j;
    j["p"] = number(v.p);
    j["status"] = to_string(v.status);
    if (v.witness) {
        Json w = Json::array();
        for (const auto& f : *v.witness) w.push_back(numbers(f));
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    j["slack"] = number(v.slack);
    return j;
}

Json to_json(const DiagThreshold& t) {
    Json j;
    j["bracket"] = to_json(t.bracket);
    j["saturated"] = t.saturated;
    Json w = Json::array();
    for (const auto& f : t.witness) w.push_back(numbers(f));
    j["witness"] = w;
    return j;
}

Json summary_json(const RegionGrid& g) {
    Json j;
    j["eps"] = number(g.eps);
    j["s"] = number(g.s);
    j["p"] = number(g.p);
    j["resolution"] = g.resolution;
    j["counts"] = {{"RED", g.count(RegionLabel::Red)},
                   {"GREEN", g.count(RegionLabel::Green)},
                   {"BLUE", g.count(RegionLabel::Blue)}};
    return j;
}

Json summary_json(const RatioContour& c) {
    Json j;
    j["p"] = number(c.p);
    j["resolution"] = c.resolution;
    j["max_value"] = number(c.max_value);
    j["argmax_f"] = number(c.argmax_f);
    j["argmax_g"] = number(c.argmax_g);
    return j;
}

std::string region_csv(const RegionGrid& g) {
    std::string out = "c,d,label\n";
    const auto n = static_cast<std::size_t>(g.resolution);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out += format12(g.axis[i]);
            out += ',';
            out += format12(g.axis[j]);
            out += ',';
            out += to_string(g.labels[i * n + j]);
            out += '\n';
        }
    }
    return out;
}

std::string contour_csv(const RatioContour& c) {
    std::string out = "f,g,ratio\n";
    const auto n = static_cast<std::size_t>(c.resolution);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out += format12(c.axis[j]);
            out += ',';
            out += format12(c.axis[i]);
            out += ',';
            out += format12(c.ratio[i * n + j]);
            out += '\n';
        }
    }
    return out;
}

namespace {

// nlohmann's float printer may need 17 digits to round-trip a value that
// was rounded to 12; floats are therefore printed here with "%.12g".
void dump_into(const Json& j, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            dump_into(it.value(), depth + 1, out);
        }
        out += "\n" + close + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ",\n";
            first = false;
            out += pad;
            dump_into(v, depth + 1, out);
        }
        out += "\n" + close + "]";
    } else if (j.is_number_float()) {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format12(v) : "null";
    } else {
        out += j.dump();
    }
}

}  // namespace

std::string dump(const Json& j) {
    std::string out;
    dump_into(j, 0, out);
    out += '\n';
    return out;
}

}  // namespace ribbonkit
