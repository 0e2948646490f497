#include "conelab/io.hpp"

#include "conelab/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <system_error>

namespace conelab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                          s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view tok, const std::string& what) {
    tok = trim(tok);
    double v = 0.0;
    const char* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw config_error(what + ": cannot parse number '" +
                           std::string(tok) + "'");
    }
    return v;
}

long long parse_int(std::string_view tok, const std::string& what) {
    tok = trim(tok);
    long long v = 0;
    const char* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw config_error(what + ": cannot parse integer '" +
                           std::string(tok) + "'");
    }
    return v;
}

/// Splits a CSV row on commas; no quoting, none of our formats needs it.
std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

/// Finite doubles keep their shortest form; infinities and NaN become
/// strings so the JSON stays parseable (the dumper would emit null).
ordered_json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return v > 0 ? "inf" : "-inf";
}

ordered_json header_to_json(const HeaderBlock& header) {
    ordered_json out = ordered_json::object();
    for (const auto& [key, value] : header.entries()) {
        out[key] = value;
    }
    return out;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
    atomic_write(path, doc.dump(2) + "\n");
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c; break;
        }
    }
    return out;
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw config_error("format_double: value does not fit the buffer");
    }
    return std::string(buf, p);
}

void HeaderBlock::set(const std::string& key, const std::string& value) {
    for (auto& entry : entries_) {
        if (entry.first == key) {
            entry.second = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void HeaderBlock::set(const std::string& key, const char* value) {
    set(key, std::string(value));
}

void HeaderBlock::set(const std::string& key, double value) {
    set(key, format_double(value));
}

void HeaderBlock::set(const std::string& key, long long value) {
    set(key, std::to_string(value));
}

const std::string* HeaderBlock::find(const std::string& key) const {
    for (const auto& entry : entries_) {
        if (entry.first == key) {
            return &entry.second;
        }
    }
    return nullptr;
}

std::string HeaderBlock::render() const {
    std::string out;
    for (const auto& [key, value] : entries_) {
        out += "# ";
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_ini(
    const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string prefix;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) {
            eol = text.size();
        }
        std::string_view line = trim(
            std::string_view(text).substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw config_error("ini line " + std::to_string(line_no) +
                                   ": unterminated section header");
            }
            prefix = std::string(trim(line.substr(1, line.size() - 2)));
            if (!prefix.empty()) {
                prefix += '.';
            }
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw config_error("ini line " + std::to_string(line_no) +
                               ": expected key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw config_error("ini line " + std::to_string(line_no) +
                               ": empty key");
        }
        out.emplace_back(prefix + key, std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_ini_file(
    const std::filesystem::path& path) {
    return parse_ini(read_text_file(path));
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw config_error("cannot open '" + tmp.string() +
                               "' for writing");
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw config_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw config_error("cannot rename '" + tmp.string() + "' to '" +
                           path.string() + "': " + ec.message());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot open '" + path.string() + "'");
    }
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw config_error("read from '" + path.string() + "' failed");
    }
    return content;
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& u,
                     HeaderBlock header) {
    const PolarGrid& g = u.grid;
    if (g.n_r < 1 || g.n_theta < 1) {
        throw config_error("write_field_csv: field has no grid");
    }
    header.set("cone_length", g.cone.length);
    header.set("n_r", static_cast<long long>(g.n_r));
    header.set("n_theta", static_cast<long long>(g.n_theta));
    header.set("radius", g.R);
    std::string out = header.render();
    out += "i,j,r,theta,value\n";
    out += "0,0,0,0," + format_double(u.vertex()) + '\n';
    for (int i = 1; i <= g.n_r; ++i) {
        const std::string r = format_double(g.r_of(i));
        for (int j = 0; j < g.n_theta; ++j) {
            out += std::to_string(i);
            out += ',';
            out += std::to_string(j);
            out += ',';
            out += r;
            out += ',';
            out += format_double(g.theta_of(j));
            out += ',';
            out += format_double(u.at(i, j));
            out += '\n';
        }
    }
    atomic_write(path, out);
}

ScalarField read_field_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const std::string what = "field csv '" + path.string() + "'";

    HeaderBlock header;
    std::size_t pos = 0;
    bool saw_columns = false;
    ScalarField u;
    std::vector<char> seen;
    std::size_t filled = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) {
            eol = text.size();
        }
        std::string_view line = trim(
            std::string_view(text).substr(pos, eol - pos));
        pos = eol + 1;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            line.remove_prefix(1);
            std::size_t eq = line.find('=');
            if (eq != std::string_view::npos) {
                header.set(std::string(trim(line.substr(0, eq))),
                           std::string(trim(line.substr(eq + 1))));
            }
            continue;
        }
        if (!saw_columns) {
            if (line != "i,j,r,theta,value") {
                throw config_error(what + ": unexpected column header '" +
                                   std::string(line) + "'");
            }
            const std::string* l = header.find("cone_length");
            const std::string* nr = header.find("n_r");
            const std::string* nt = header.find("n_theta");
            const std::string* radius = header.find("radius");
            if (!l || !nr || !nt || !radius) {
                throw config_error(what + ": header must carry cone_length, "
                                          "n_r, n_theta and radius");
            }
            PolarGrid g(ConeParams(parse_double(*l, what)),
                        static_cast<int>(parse_int(*nr, what)),
                        static_cast<int>(parse_int(*nt, what)),
                        parse_double(*radius, what));
            u = ScalarField(g);
            seen.assign(g.n_nodes(), 0);
            saw_columns = true;
            continue;
        }
        const auto row = split_row(line);
        if (row.size() != 5) {
            throw config_error(what + ": expected 5 columns, got " +
                               std::to_string(row.size()));
        }
        const long long i = parse_int(row[0], what);
        const long long j = parse_int(row[1], what);
        if (i < 0 || i > u.grid.n_r || j < 0 || j >= u.grid.n_theta ||
            (i == 0 && j != 0)) {
            throw config_error(what + ": node (" + std::to_string(i) + "," +
                               std::to_string(j) + ") is outside the grid");
        }
        const std::size_t id = u.grid.id(static_cast<int>(i),
                                         static_cast<int>(j));
        if (seen[id]) {
            throw config_error(what + ": duplicate node (" +
                               std::to_string(i) + "," + std::to_string(j) +
                               ")");
        }
        seen[id] = 1;
        ++filled;
        u.values[id] = parse_double(row[4], what);
    }
    if (!saw_columns) {
        throw config_error(what + ": no column header found");
    }
    if (filled != u.grid.n_nodes()) {
        throw config_error(what + ": " + std::to_string(filled) + " rows for " +
                           std::to_string(u.grid.n_nodes()) + " nodes");
    }
    return u;
}

void write_scan_csv(const std::filesystem::path& path, const MonotoneScan& scan,
                    HeaderBlock header) {
    if (scan.radii.size() != scan.values.size()) {
        throw config_error("write_scan_csv: radii/values size mismatch");
    }
    header.set("tolerance", scan.tolerance);
    header.set("relative", scan.relative ? "true" : "false");
    header.set("monotone", scan.monotone() ? "true" : "false");
    std::vector<char> flag(scan.radii.size(), 0);
    for (const auto& v : scan.violations) {
        auto it = std::lower_bound(scan.radii.begin(), scan.radii.end(),
                                   v.r_lo);
        if (it != scan.radii.end() && *it == v.r_lo) {
            flag[static_cast<std::size_t>(it - scan.radii.begin())] = 1;
        }
    }
    std::string out = header.render();
    out += "r,value,violation_flag\n";
    for (std::size_t i = 0; i < scan.radii.size(); ++i) {
        out += format_double(scan.radii[i]);
        out += ',';
        out += format_double(scan.values[i]);
        out += ',';
        out += flag[i] ? '1' : '0';
        out += '\n';
    }
    atomic_write(path, out);
}

void write_coefficients_csv(const std::filesystem::path& path,
                            const FourierHarmonic& h, HeaderBlock header) {
    header.set("cone_length", h.cone.length);
    std::string out = header.render();
    out += "k,a_k,b_k\n";
    for (std::size_t k = 0; k < h.coefficients.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_double(h.coefficients[k][0]);
        out += ',';
        out += format_double(h.coefficients[k][1]);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<std::array<double, 2>> read_coefficients_csv(
    const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const std::string what = "coefficients csv '" + path.string() + "'";
    std::vector<std::array<double, 2>> out;
    std::size_t pos = 0;
    bool saw_columns = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) {
            eol = text.size();
        }
        std::string_view line = trim(
            std::string_view(text).substr(pos, eol - pos));
        pos = eol + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!saw_columns) {
            if (line != "k,a_k,b_k") {
                throw config_error(what + ": unexpected column header '" +
                                   std::string(line) + "'");
            }
            saw_columns = true;
            continue;
        }
        const auto row = split_row(line);
        if (row.size() != 3) {
            throw config_error(what + ": expected 3 columns, got " +
                               std::to_string(row.size()));
        }
        const long long k = parse_int(row[0], what);
        if (k < 0 || k > 4096) {
            throw config_error(what + ": mode index " + std::to_string(k) +
                               " out of range");
        }
        if (out.size() <= static_cast<std::size_t>(k)) {
            out.resize(static_cast<std::size_t>(k) + 1, {0.0, 0.0});
        }
        out[static_cast<std::size_t>(k)] = {parse_double(row[1], what),
                                            parse_double(row[2], what)};
    }
    if (!saw_columns) {
        throw config_error(what + ": no column header found");
    }
    return out;
}

void write_polygon_csv(const std::filesystem::path& path, const PolygonSet& set,
                       HeaderBlock header) {
    header.set("loops", static_cast<long long>(set.loops().size()));
    header.set("area", set.area());
    std::string out = header.render();
    out += "loop,x,y\n";
    for (std::size_t n = 0; n < set.loops().size(); ++n) {
        for (const Vec2& p : set.loops()[n]) {
            out += std::to_string(n);
            out += ',';
            out += format_double(p.x);
            out += ',';
            out += format_double(p.y);
            out += '\n';
        }
    }
    atomic_write(path, out);
}

void write_trace_json(const std::filesystem::path& path,
                      const CompetitorTrace& trace, HeaderBlock header) {
    ordered_json doc = ordered_json::object();
    doc["config"] = header_to_json(header);
    doc["h"] = json_number(trace.h);
    doc["recurrence_slack"] = json_number(trace.recurrence_slack);
    doc["all_recurrence_ok"] = trace.all_recurrence_ok;
    ordered_json steps = ordered_json::array();
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const CompetitorStep& s = trace.steps[k];
        ordered_json rec = ordered_json::object();
        rec["k"] = k;
        rec["F"] = json_number(s.F);
        rec["t"] = json_number(s.t);
        rec["a"] = json_number(s.a);
        rec["b"] = json_number(s.b);
        rec["bound"] = json_number(s.bound);
        rec["envelope"] = json_number(s.envelope);
        rec["recurrence_ok"] = s.recurrence_ok;
        rec["extent"] = json_number(s.set.horizontal_extent());
        rec["area"] = json_number(s.set.area());
        steps.push_back(std::move(rec));
    }
    doc["steps"] = std::move(steps);
    write_json(path, doc);
}

void write_trace_csv(const std::filesystem::path& path,
                     const CompetitorTrace& trace, HeaderBlock header) {
    header.set("h", trace.h);
    header.set("recurrence_slack", trace.recurrence_slack);
    header.set("all_recurrence_ok", trace.all_recurrence_ok ? "true" : "false");
    std::string out = header.render();
    out += "k,F,bound,envelope\n";
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const CompetitorStep& s = trace.steps[k];
        const double bound = k == 0 ? 2.0 : trace.steps[k - 1].bound;
        out += std::to_string(k);
        out += ',';
        out += format_double(s.F);
        out += ',';
        out += format_double(bound);
        out += ',';
        out += format_double(s.envelope);
        out += '\n';
    }
    atomic_write(path, out);
}

void write_minimizer_result(const std::filesystem::path& dir,
                            const MinimizerResult& result,
                            const ProblemSpec& spec, HeaderBlock header) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw config_error("cannot create directory '" + dir.string() +
                           "': " + ec.message());
    }
    header.set("lambda_plus", spec.lambda_plus);
    header.set("lambda_minus", spec.lambda_minus);
    write_field_csv(dir / "field.csv", result.field, header);

    HeaderBlock fb = header;
    fb.set("cone_length", result.field.grid.cone.length);
    fb.set("polylines", static_cast<long long>(result.free_boundary.size()));
    std::string out = fb.render();
    out += "r,theta\n";
    for (std::size_t n = 0; n < result.free_boundary.size(); ++n) {
        if (n > 0) {
            out += '\n';
        }
        for (const ConePoint& p : result.free_boundary[n]) {
            out += format_double(p.r);
            out += ',';
            out += format_double(p.theta);
            out += '\n';
        }
    }
    atomic_write(dir / "free_boundary.csv", out);

    const PolarGrid& g = result.field.grid;
    ordered_json doc = ordered_json::object();
    doc["config"] = header_to_json(header);
    ordered_json problem = ordered_json::object();
    problem["cone_length"] = json_number(g.cone.length);
    problem["lambda_plus"] = json_number(spec.lambda_plus);
    problem["lambda_minus"] = json_number(spec.lambda_minus);
    problem["n_r"] = g.n_r;
    problem["n_theta"] = g.n_theta;
    problem["radius"] = json_number(g.R);
    doc["problem"] = std::move(problem);
    ordered_json res = ordered_json::object();
    res["energy"] = json_number(result.energy);
    res["vertex_distance"] = json_number(result.vertex_distance);
    res["certified"] = result.certified;
    res["sweeps"] = result.sweeps;
    res["winner"] = result.winner < static_cast<int>(result.starts.size())
                        ? result.starts[result.winner].name
                        : std::string("unknown");
    res["free_boundary_polylines"] = result.free_boundary.size();
    ordered_json starts = ordered_json::array();
    for (const StartRecord& s : result.starts) {
        ordered_json rec = ordered_json::object();
        rec["name"] = s.name;
        rec["energy"] = json_number(s.energy);
        rec["converged"] = s.converged;
        rec["certified"] = s.certified;
        rec["sweeps"] = s.sweeps;
        starts.push_back(std::move(rec));
    }
    res["starts"] = std::move(starts);
    doc["result"] = std::move(res);
    write_json(dir / "summary.json", doc);
}

void write_scan_svg(const std::filesystem::path& path, const MonotoneScan& scan,
                    const std::string& title) {
    if (scan.radii.empty() || scan.radii.size() != scan.values.size()) {
        throw config_error("write_scan_svg: empty or inconsistent scan");
    }
    const double width = 720.0;
    const double height = 480.0;
    const double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;

    double x_lo = scan.radii.front();
    double x_hi = scan.radii.back();
    if (x_hi - x_lo < 1e-300) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    double y_lo = *std::min_element(scan.values.begin(), scan.values.end());
    double y_hi = *std::max_element(scan.values.begin(), scan.values.end());
    if (y_hi - y_lo < 1e-300) {
        const double pad = std::max(1.0, std::abs(y_hi)) * 0.1;
        y_lo -= pad;
        y_hi += pad;
    } else {
        const double pad = 0.05 * (y_hi - y_lo);
        y_lo -= pad;
        y_hi += pad;
    }
    const auto map_x = [&](double r) {
        return ml + (r - x_lo) / (x_hi - x_lo) * (width - ml - mr);
    };
    const auto map_y = [&](double v) {
        return height - mb - (v - y_lo) / (y_hi - y_lo) * (height - mt - mb);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" "
           "height=\"480\" viewBox=\"0 0 720 480\">\n";
    out += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
    out += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" +
           escape_xml(title) + "</text>\n";
    const std::string x0s = format_double(ml);
    const std::string x1s = format_double(width - mr);
    const std::string y0s = format_double(height - mb);
    const std::string y1s = format_double(mt);
    out += "<line x1=\"" + x0s + "\" y1=\"" + y0s + "\" x2=\"" + x1s +
           "\" y2=\"" + y0s + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + x0s + "\" y1=\"" + y0s + "\" x2=\"" + x0s +
           "\" y2=\"" + y1s + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + x0s + "\" y=\"" + format_double(height - mb + 18) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           format_double(scan.radii.front()) + "</text>\n";
    out += "<text x=\"" + x1s + "\" y=\"" + format_double(height - mb + 18) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + format_double(scan.radii.back()) +
           "</text>\n";
    out += "<text x=\"" + format_double(ml - 6) + "\" y=\"" + y0s +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + format_double(y_lo) + "</text>\n";
    out += "<text x=\"" + format_double(ml - 6) + "\" y=\"" +
           format_double(mt + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + format_double(y_hi) + "</text>\n";

    out += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
           "points=\"";
    for (std::size_t i = 0; i < scan.radii.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += format_double(map_x(scan.radii[i]));
        out += ',';
        out += format_double(map_y(scan.values[i]));
    }
    out += "\"/>\n";
    for (const auto& v : scan.violations) {
        auto it = std::lower_bound(scan.radii.begin(), scan.radii.end(),
                                   v.r_lo);
        if (it == scan.radii.end() || *it != v.r_lo) {
            continue;
        }
        const double value =
            scan.values[static_cast<std::size_t>(it - scan.radii.begin())];
        out += "<circle cx=\"" + format_double(map_x(v.r_lo)) + "\" cy=\"" +
               format_double(map_y(value)) +
               "\" r=\"3\" fill=\"#d62728\"/>\n";
    }
    out += "</svg>\n";
    atomic_write(path, out);
}

} // namespace conelab
