#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "curveframe/aw.hpp"
#include "curveframe/curve.hpp"
#include "curveframe/errors.hpp"
#include "curveframe/expression.hpp"
#include "curveframe/frames.hpp"
#include "curveframe/profile.hpp"
#include "curveframe/vec3.hpp"

namespace curveframe {

enum class PointFormat { csv, json };

namespace io_detail {

inline std::string trimmed(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_field(const std::string& file, std::size_t line, std::string_view field) {
    const std::string t = trimmed(field);
    double v = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw InputError(file + ": line " + std::to_string(line) + ": malformed number '" + t +
                         "'");
    return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// %.17g round-trips doubles exactly.
inline std::string num(double v) { return expr_detail::format_double(v); }

inline void require_two_distinct(const std::string& file, const std::vector<Vec3>& points) {
    bool distinct = false;
    for (std::size_t i = 1; i < points.size() && !distinct; ++i)
        distinct = !(points[i] == points[0]);
    if (!distinct) throw InputError(file + ": fewer than 2 distinct points");
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError(path + ": cannot open file for writing");
    return out;
}

}  // namespace io_detail

// Points from a CSV file with mandatory header x,y,z.
inline std::vector<Vec3> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");

    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty file");
    // Strip a UTF-8 byte order mark if present.
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF')
        line.erase(0, 3);
    {
        auto fields = io_detail::split(line, ',');
        if (fields.size() != 3 || io_detail::trimmed(fields[0]) != "x" ||
            io_detail::trimmed(fields[1]) != "y" || io_detail::trimmed(fields[2]) != "z")
            throw InputError(path + ": expected header x,y,z");
    }

    std::vector<Vec3> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (io_detail::trimmed(line).empty()) continue;
        auto fields = io_detail::split(line, ',');
        if (fields.size() != 3)
            throw InputError(path + ": line " + std::to_string(lineno) +
                             ": expected 3 fields, got " + std::to_string(fields.size()));
        points.push_back({io_detail::parse_field(path, lineno, fields[0]),
                          io_detail::parse_field(path, lineno, fields[1]),
                          io_detail::parse_field(path, lineno, fields[2])});
    }
    io_detail::require_two_distinct(path, points);
    return points;
}

// Points from a JSON file holding an array of [x, y, z] triples.
inline std::vector<Vec3> read_points_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (!doc.is_array()) throw InputError(path + ": expected a top-level array of [x,y,z]");
    std::vector<Vec3> points;
    points.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& row = doc[i];
        if (!row.is_array() || row.size() != 3 || !row[0].is_number() || !row[1].is_number() ||
            !row[2].is_number())
            throw InputError(path + ": element " + std::to_string(i) + " is not an [x,y,z] triple");
        points.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    io_detail::require_two_distinct(path, points);
    return points;
}

inline PointFormat format_for(const std::string& path, std::optional<PointFormat> requested) {
    if (requested) return *requested;
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".json") return PointFormat::json;
    return PointFormat::csv;
}

inline std::vector<Vec3> read_points(const std::string& path,
                                     std::optional<PointFormat> format = std::nullopt) {
    return format_for(path, format) == PointFormat::json ? read_points_json(path)
                                                         : read_points_csv(path);
}

inline void write_points_csv(const std::string& path, std::span<const Vec3> points) {
    auto out = io_detail::open_out(path);
    out << "x,y,z\n";
    for (const auto& p : points)
        out << io_detail::num(p.x) << ',' << io_detail::num(p.y) << ',' << io_detail::num(p.z)
            << '\n';
}

inline void write_points_json(const std::string& path, std::span<const Vec3> points) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& p : points) doc.push_back({p.x, p.y, p.z});
    auto out = io_detail::open_out(path);
    out << doc.dump(2) << '\n';
}

// Synthesized curve with its parallel-transport frame.
inline void write_synthesis_csv(const std::string& path, const CurveSamples& curve,
                                const BishopField& frame) {
    auto out = io_detail::open_out(path);
    out << "s,x,y,z,Tx,Ty,Tz,M1x,M1y,M1z,M2x,M2y,M2z,k1,k2\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Vec3& p = curve.points[i];
        const Vec3& t = frame.T[i];
        const Vec3& m1 = frame.M1[i];
        const Vec3& m2 = frame.M2[i];
        out << io_detail::num(curve.s(i)) << ',' << io_detail::num(p.x) << ','
            << io_detail::num(p.y) << ',' << io_detail::num(p.z) << ',' << io_detail::num(t.x)
            << ',' << io_detail::num(t.y) << ',' << io_detail::num(t.z) << ','
            << io_detail::num(m1.x) << ',' << io_detail::num(m1.y) << ',' << io_detail::num(m1.z)
            << ',' << io_detail::num(m2.x) << ',' << io_detail::num(m2.y) << ','
            << io_detail::num(m2.z) << ',' << io_detail::num(frame.k1[i]) << ','
            << io_detail::num(frame.k2[i]) << '\n';
    }
}

// Both frame systems along a curve; Frenet columns are empty where the frame
// is undefined.
inline void write_frame_csv(const std::string& path, const CurveSamples& curve,
                            const FrenetField& frenet, const BishopField& bishop) {
    auto out = io_detail::open_out(path);
    out << "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau,"
           "M1x,M1y,M1z,M2x,M2y,M2z,k1,k2,theta\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Vec3& p = curve.points[i];
        const Vec3& t = bishop.T[i];
        out << io_detail::num(curve.s(i)) << ',' << io_detail::num(p.x) << ','
            << io_detail::num(p.y) << ',' << io_detail::num(p.z) << ',' << io_detail::num(t.x)
            << ',' << io_detail::num(t.y) << ',' << io_detail::num(t.z) << ',';
        if (frenet.defined[i]) {
            const Vec3& nn = frenet.N[i];
            const Vec3& bb = frenet.B[i];
            out << io_detail::num(nn.x) << ',' << io_detail::num(nn.y) << ','
                << io_detail::num(nn.z) << ',' << io_detail::num(bb.x) << ','
                << io_detail::num(bb.y) << ',' << io_detail::num(bb.z) << ','
                << io_detail::num(frenet.kappa[i]) << ',' << io_detail::num(frenet.tau[i]);
        } else {
            out << ",,,,,," << io_detail::num(frenet.kappa[i]) << ',';
        }
        const Vec3& m1 = bishop.M1[i];
        const Vec3& m2 = bishop.M2[i];
        out << ',' << io_detail::num(m1.x) << ',' << io_detail::num(m1.y) << ','
            << io_detail::num(m1.z) << ',' << io_detail::num(m2.x) << ',' << io_detail::num(m2.y)
            << ',' << io_detail::num(m2.z) << ',' << io_detail::num(bishop.k1[i]) << ','
            << io_detail::num(bishop.k2[i]) << ',' << io_detail::num(bishop.theta[i]) << '\n';
    }
}

// Curvature channels of a profile; NaN channels print as empty fields.
inline void write_profile_csv(const std::string& path, const CurvatureProfile& p) {
    auto out = io_detail::open_out(path);
    out << "s,k1,k2,kappa,theta,tau\n";
    auto cell = [&](const std::vector<double>& v, std::size_t i) -> std::string {
        if (v.size() != p.grid.n || !std::isfinite(v[i])) return "";
        return io_detail::num(v[i]);
    };
    for (std::size_t i = 0; i < p.grid.n; ++i) {
        out << io_detail::num(p.grid.s(i)) << ',' << cell(p.k1, i) << ',' << cell(p.k2, i) << ','
            << cell(p.kappa, i) << ',' << cell(p.theta, i) << ',' << cell(p.tau, i) << '\n';
    }
}

// Per-sample normalized residuals, one column per condition, empty where a
// condition was not evaluated. Pass null frenet when the battery threw
// NoValidSamples.
inline void write_residuals_csv(const std::string& path, const Grid& grid,
                                const ResidualBattery* frenet, const ResidualBattery& bishop) {
    auto out = io_detail::open_out(path);
    out << "s";
    for (const auto& name : kConditionNames) out << ',' << name;
    out << '\n';
    auto cell = [&](const ConditionField* f, std::size_t i) -> std::string {
        if (f == nullptr || !f->evaluated[i]) return "";
        return io_detail::num(f->normalized[i]);
    };
    for (std::size_t i = 0; i < grid.n; ++i) {
        out << io_detail::num(grid.s(i));
        const ConditionField* fields[10] = {
            frenet ? &frenet->weak_aw2 : nullptr, frenet ? &frenet->weak_aw3 : nullptr,
            frenet ? &frenet->aw1 : nullptr,      frenet ? &frenet->aw2 : nullptr,
            frenet ? &frenet->aw3 : nullptr,      &bishop.weak_aw2,
            &bishop.weak_aw3,                     &bishop.aw1,
            &bishop.aw2,                          &bishop.aw3};
        for (const auto* f : fields) out << ',' << cell(f, i);
        out << '\n';
    }
}

inline nlohmann::ordered_json report_to_json(const AwReport& report) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = "1";
    doc["provenance"] = provenance_name(report.provenance);
    doc["tol"] = report.tol;
    doc["kappa_min"] = report.kappa_min;
    doc["trim"] = {{"first_index", report.trim_first},
                   {"last_index", report.trim_last},
                   {"s_first", report.s_first},
                   {"s_last", report.s_last}};
    doc["conditions"] = nlohmann::ordered_json::array();
    for (const auto& c : report.conditions) {
        nlohmann::ordered_json item;
        item["condition"] = c.name;
        if (std::isfinite(c.residual))
            item["residual"] = c.residual;
        else
            item["residual"] = nullptr;
        item["verdict"] = c.verdict;
        item["degenerate"] = c.degenerate;
        item["evaluated_samples"] = c.evaluated_samples;
        doc["conditions"].push_back(std::move(item));
    }
    return doc;
}

inline void write_report_json(const std::string& path, const AwReport& report) {
    auto out = io_detail::open_out(path);
    out << report_to_json(report).dump(2) << '\n';
}

// Several reports in one document, in input order.
inline void write_reports_json(const std::string& path,
                               const std::vector<std::pair<std::string, AwReport>>& reports) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = "1";
    doc["reports"] = nlohmann::ordered_json::array();
    for (const auto& [input, report] : reports) {
        nlohmann::ordered_json item = report_to_json(report);
        item.erase("schema_version");
        nlohmann::ordered_json entry;
        entry["input"] = input;
        entry.update(item);
        doc["reports"].push_back(std::move(entry));
    }
    auto out = io_detail::open_out(path);
    out << doc.dump(2) << '\n';
}

}  // namespace curveframe
