#include "singode/report.hpp"

#include "singode/error.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace singode {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void dump(const Json& v, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                dump(it.value(), indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            // arrays of scalars stay on one line
            bool flat = true;
            for (const auto& e : v) flat = flat && !e.is_structured();
            out += '[';
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += flat ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                dump(e, indent, depth + 1, out);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            out += std::isfinite(d) ? format_double(d) : "null";
            return;
        }
        default: out += v.dump(); return;
    }
}

double number_or_inf(const Json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

TailBehavior behavior_from_string(const std::string& s) {
    for (auto b : {TailBehavior::Settled, TailBehavior::Converging, TailBehavior::Oscillating, TailBehavior::Diverging})
        if (to_string(b) == s) return b;
    throw FormatError(0, "unknown tail behavior '" + s + "'");
}

Verdict verdict_from_string(const std::string& s) {
    for (auto v : {Verdict::UniqueNearZero, Verdict::ConditionalOnFlatness, Verdict::Inconclusive})
        if (to_string(v) == s) return v;
    throw FormatError(0, "unknown verdict '" + s + "'");
}

SingularityWeight weight_from_json(const Json& j) {
    SingularityWeight w;
    w.k = j.at("k").get<int>();
    w.exponent = j.at("exponent").get<int>();
    w.estimate = number_or_inf(j.at("estimate"));
    w.tail_max = number_or_inf(j.at("tail_max"));
    w.converged = j.at("converged").get<bool>();
    w.behavior = behavior_from_string(j.at("behavior").get<std::string>());
    for (const auto& s : j.at("samples")) w.samples.emplace_back(s.at(0).get<double>(), number_or_inf(s.at(1)));
    for (const auto& s : j.at("skipped"))
        w.skipped.push_back({s.at("x").get<double>(), s.at("reason").get<std::string>()});
    return w;
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
    std::string out;
    dump(value, indent, 0, out);
    if (indent >= 0) out += '\n';
    return out;
}

Json to_json(const SingularityWeight& weight) {
    Json j;
    j["k"] = weight.k;
    j["exponent"] = weight.exponent;
    j["estimate"] = weight.estimate;
    j["tail_max"] = weight.tail_max;
    j["converged"] = weight.converged;
    j["behavior"] = to_string(weight.behavior);
    Json samples = Json::array();
    for (const auto& [x, w] : weight.samples) samples.push_back(Json::array({x, w}));
    j["samples"] = std::move(samples);
    Json skipped = Json::array();
    for (const auto& s : weight.skipped) skipped.push_back(Json{{"x", s.x}, {"reason", s.reason}});
    j["skipped"] = std::move(skipped);
    return j;
}

Json to_json(const CriteriaReport& report) {
    Json j;
    j["label"] = report.label;
    j["n"] = report.n;
    j["B_n"] = report.B_n;
    j["C_n"] = report.C_n;
    j["theorem1_satisfied"] = report.theorem1_satisfied;
    j["relaxed_satisfied"] = report.relaxed_satisfied;
    j["corollary2_satisfied"] = report.corollary2_satisfied;
    j["corollary3_satisfied"] = report.corollary3_satisfied;
    j["flatness_bound_M"] = report.flatness_bound_M ? Json(*report.flatness_bound_M) : Json(nullptr);
    j["verdict"] = to_string(report.verdict);
    Json weights = Json::array();
    for (const auto& w : report.weights) weights.push_back(to_json(w));
    j["weights"] = std::move(weights);
    Json magnitudes = Json::array();
    for (const auto& w : report.magnitudes) magnitudes.push_back(to_json(w));
    j["magnitudes"] = std::move(magnitudes);
    j["notes"] = report.notes;
    return j;
}

CriteriaReport criteria_report_from_json(const Json& j) {
    try {
        CriteriaReport r;
        r.label = j.at("label").get<std::string>();
        r.n = j.at("n").get<int>();
        r.B_n = j.at("B_n").get<double>();
        r.C_n = number_or_inf(j.at("C_n"));
        r.theorem1_satisfied = j.at("theorem1_satisfied").get<bool>();
        r.relaxed_satisfied = j.at("relaxed_satisfied").get<bool>();
        r.corollary2_satisfied = j.at("corollary2_satisfied").get<bool>();
        r.corollary3_satisfied = j.at("corollary3_satisfied").get<bool>();
        if (!j.at("flatness_bound_M").is_null()) r.flatness_bound_M = j.at("flatness_bound_M").get<long>();
        r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
        for (const auto& w : j.at("weights")) r.weights.push_back(weight_from_json(w));
        for (const auto& w : j.at("magnitudes")) r.magnitudes.push_back(weight_from_json(w));
        r.notes = j.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(0, std::string("malformed criteria report: ") + e.what());
    }
}

Json series_to_json(const RationalSeries& s) {
    Json out = Json::array();
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
        const Rational& c = s.coeffs()[i];
        if (c == 0) continue;
        const Rational exponent = s.nu() + Rational(static_cast<long>(i));
        Json e = boost::multiprecision::denominator(exponent) == 1
                     ? Json(boost::multiprecision::numerator(exponent).convert_to<long>())
                     : Json(to_string(exponent));
        out.push_back(Json::array({e, boost::multiprecision::numerator(c).str(),
                                   boost::multiprecision::denominator(c).str()}));
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const std::size_t n = trajectory.nodes.empty() ? 0 : trajectory.nodes.front().y.size();
    std::vector<std::string> header{"x"};
    for (std::size_t i = 0; i < n; ++i) header.push_back("y" + std::to_string(i));
    header.push_back("error");
    std::vector<std::vector<double>> rows;
    for (const auto& node : trajectory.nodes) {
        std::vector<double> row{node.x};
        row.insert(row.end(), node.y.begin(), node.y.end());
        row.push_back(node.error);
        rows.push_back(std::move(row));
    }
    write_csv(out, header, rows);
}

void write_scan_csv(std::ostream& out, const MinimalCScan& scan) {
    std::vector<std::vector<double>> rows;
    for (const auto& [x, r] : scan.ratios) rows.push_back({x, r});
    write_csv(out, {"x", "ratio"}, rows);
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    if (!std::getline(in, line)) throw FormatError(1, "empty CSV");
    table.header = split(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split(line)) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') throw FormatError(line_no, "bad number '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != table.header.size()) throw FormatError(line_no, "column count mismatch");
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace singode
