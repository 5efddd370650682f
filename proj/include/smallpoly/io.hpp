#ifndef SMALLPOLY_IO_HPP
#define SMALLPOLY_IO_HPP

#include "constructions.hpp"
#include "errors.hpp"
#include "geometry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace smallpoly {

/// Vertex list with optional metadata, as stored on disk.
struct PolygonFile {
    std::vector<Point2> vertices;
    std::string label;
    std::string source;

    std::size_t n() const noexcept { return vertices.size(); }
};

/// Shortest decimal that parses back to v; digits > 0 gives %.{digits}g instead.
inline std::string format_real(double v, int digits = 0) {
    if (digits > 0) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        return buf;
    }
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double parse_real(std::string_view tok, int line, int field) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && tok.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
        throw ParseError("'" + std::string(tok) + "' is not a decimal number", line, field);
    if (!std::isfinite(v)) throw ParseError("coordinate is not finite", line, field);
    return v;
}

/// One vertex per line. Fields split on whitespace; a LaTeX '&' separator and
/// trailing '\\' are tolerated so tabular rows paste in unchanged.
inline PolygonFile parse_columns(std::string_view text) {
    PolygonFile out;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (line.empty() || line.front() == '#') continue;
        if (line.ends_with("\\\\")) line = trim(line.substr(0, line.size() - 2));

        std::vector<std::string_view> fields;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '&')) ++i;
            const std::size_t b = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '&') ++i;
            if (i > b) fields.push_back(line.substr(b, i - b));
        }
        if (fields.size() != 2)
            throw ParseError("expected 2 fields, found " + std::to_string(fields.size()), line_no,
                             static_cast<int>(std::min<std::size_t>(fields.size(), 2) + 1));
        out.vertices.push_back({parse_real(fields[0], line_no, 1), parse_real(fields[1], line_no, 2)});
    }
    return out;
}

inline PolygonFile parse_document(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into line and column.
        const std::size_t at = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
        int line = 1, col = 1;
        for (std::size_t i = 0; i < at; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("malformed polygon document", line, col);
    }
    if (!doc.is_object()) throw SchemaError("polygon document must be an object");
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw SchemaError("polygon document needs a 'vertices' array");

    PolygonFile out;
    const auto& vs = doc["vertices"];
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& v = vs[i];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw SchemaError("vertices[" + std::to_string(i) + "] must be a pair of numbers");
        out.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
        if (!is_finite(out.vertices.back()))
            throw SchemaError("vertices[" + std::to_string(i) + "] is not finite");
    }
    if (doc.contains("n")) {
        if (!doc["n"].is_number_integer()) throw SchemaError("'n' must be an integer");
        const auto n = doc["n"].get<long long>();
        if (n != static_cast<long long>(out.vertices.size()))
            throw SchemaError("'n' is " + std::to_string(n) + " but " + std::to_string(out.vertices.size()) +
                              " vertices are listed");
    }
    if (doc.contains("label") && doc["label"].is_string()) out.label = doc["label"].get<std::string>();
    if (doc.contains("source") && doc["source"].is_string()) out.source = doc["source"].get<std::string>();
    return out;
}

} // namespace detail

/// Parses either format; a leading '{' or '[' selects the JSON document form.
inline PolygonFile parse_polygon(std::string_view text) {
    const auto start = text.find_first_not_of(" \t\r\n");
    const bool document = start != std::string_view::npos && (text[start] == '{' || text[start] == '[');
    PolygonFile out = document ? detail::parse_document(text) : detail::parse_columns(text);
    if (out.vertices.size() < 3)
        throw SchemaError("polygon needs at least 3 vertices, got " + std::to_string(out.vertices.size()));
    return out;
}

inline PolygonFile read_polygon_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    PolygonFile out = parse_polygon(buf.str());
    if (out.source.empty()) out.source = path.filename().string();
    return out;
}

/// Validated polygon in file order.
inline ConvexPolygon to_polygon(const PolygonFile& f) { return ConvexPolygon(f.vertices); }

inline PolygonFile to_file(const ConvexPolygon& p, std::string label = {}, std::string source = {}) {
    return {{p.vertices().begin(), p.vertices().end()}, std::move(label), std::move(source)};
}

/// JSON document, one vertex per line. With digits == 0 the output round-trips exactly.
inline std::string serialize(const PolygonFile& f, int digits = 0) {
    std::string s = "{\n  \"n\": " + std::to_string(f.n()) + ",\n";
    if (!f.label.empty()) s += "  \"label\": " + nlohmann::json(f.label).dump() + ",\n";
    if (!f.source.empty()) s += "  \"source\": " + nlohmann::json(f.source).dump() + ",\n";
    s += "  \"vertices\": [\n";
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
        s += "    [" + format_real(f.vertices[i].x, digits) + ", " + format_real(f.vertices[i].y, digits) + "]";
        s += i + 1 < f.vertices.size() ? ",\n" : "\n";
    }
    return s + "  ]\n}\n";
}

// ---------------------------------------------------------------------------
// Embedded fixtures

/// The record 32-gon coordinates exactly as published, digit strings untouched.
inline constexpr std::array<std::array<std::string_view, 2>, 32> triacontadigon_rows{{
    {"0.098134910054388", "0."},
    {"0.1943840604354086", "0.01914514251146182"},
    {"0.28504868084122", "0.056699649798818"},
    {"0.3609076612541907", "0.1189555734331473"},
    {"0.4302992695838125", "0.1883471408623677"},
    {"0.4848199067577719", "0.2699429769467566"},
    {"0.5310802950708347", "0.3564898244762278"},
    {"0.5595673636200257", "0.4503986731664625"},
    {"0.5787126617485553", "0.5466475302839486"},
    {"0.569093927380149", "0.6443096742296724"},
    {"0.5406070476551426", "0.7382188490444155"},
    {"0.4943467071289093", "0.824766185605239"},
    {"0.418487098558063", "0.887022659054982"},
    {"0.3368905726741924", "0.941543807819504"},
    {"0.2429806029380585", "0.970031147229744"},
    {"0.1467305815533126", "0.989176494078293"},
    {"0.04906745502719413", "0.998795466978675"},
    {"-0.04859580696564962", "0.989176473983678"},
    {"-0.142506038633965", "0.960689119789753"},
    {"-0.2290542902439535", "0.914428123805245"},
    {"-0.3106513808547955", "0.859906619698457"},
    {"-0.3729082997819818", "0.7840463942725833"},
    {"-0.4104634795827763", "0.6933804898426428"},
    {"-0.4200827044600564", "0.595717036499123"},
    {"-0.4200828511732027", "0.4975810104628068"},
    {"-0.4009376289104606", "0.4013307043569394"},
    {"-0.3633828226693777", "0.310664976005411"},
    {"-0.3088616948467671", "0.2290680548412778"},
    {"-0.2466051794150348", "0.1532080706018036"},
    {"-0.1772128446516963", "0.0838156012797867"},
    {"-0.0906652207709911", "0.03755484577878503"},
    {"0.", "0."},
}};

/// Fixture rows as two-column text.
inline std::string triacontadigon_text() {
    std::string s = "# small triacontadigon, perimeter 3.140331156954614\n";
    for (const auto& r : triacontadigon_rows) s += std::string(r[0]) + " " + std::string(r[1]) + "\n";
    return s;
}

inline const std::array<std::string_view, 3>& fixture_names() {
    static constexpr std::array<std::string_view, 3> names{"triacontadigon", "regular_pentagon", "regular_triangle"};
    return names;
}

/// Named fixture; throws Error for an unknown name.
inline PolygonFile fixture(std::string_view name) {
    if (name == "triacontadigon") {
        PolygonFile f = parse_polygon(triacontadigon_text());
        f.label = "small triacontadigon";
        f.source = "record coordinates";
        return f;
    }
    if (name == "regular_pentagon") return to_file(regular_small(5), "regular small pentagon", "regular_small(5)");
    if (name == "regular_triangle") return to_file(regular_small(3), "regular small triangle", "regular_small(3)");
    throw Error("unknown fixture '" + std::string(name) + "'");
}

} // namespace smallpoly

#endif // SMALLPOLY_IO_HPP
