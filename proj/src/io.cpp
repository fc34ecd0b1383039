#include "inlslab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "inlslab/errors.hpp"

namespace inls {

namespace fs = std::filesystem;

namespace {

std::pair<int, int> line_col(const std::string& text, std::size_t pos) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string where(const std::string& source, const std::string& text, std::size_t pos) {
    const auto [l, c] = line_col(text, pos);
    return source + ":" + std::to_string(l) + ":" + std::to_string(c);
}

// Offset of the k-th (1-based) `"name"` that is followed by a colon.
std::size_t nth_key(const std::string& text, const std::string& name, int k) {
    const std::string q = "\"" + name + "\"";
    std::size_t pos = 0;
    for (int seen = 0;; ++pos) {
        pos = text.find(q, pos);
        if (pos == std::string::npos) return 0;
        std::size_t e = pos + q.size();
        while (e < text.size() && std::isspace(static_cast<unsigned char>(text[e]))) ++e;
        if (e < text.size() && text[e] == ':' && ++seen == k) return pos;
    }
}

struct DuplicateKey {
    std::string name;
    int occurrence;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("not a number: '" + s + "'");
    return x;
}

json parse_json_strict(const std::string& text, const std::string& source) {
    std::vector<std::set<std::string>> open;
    std::map<std::string, int> count;
    auto cb = [&](int, json::parse_event_t ev, json& parsed) {
        switch (ev) {
            case json::parse_event_t::object_start: open.emplace_back(); break;
            case json::parse_event_t::object_end: open.pop_back(); break;
            case json::parse_event_t::key: {
                const auto name = parsed.get<std::string>();
                const int k = ++count[name];
                if (!open.back().insert(name).second) throw DuplicateKey{name, k};
                break;
            }
            default: break;
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const DuplicateKey& d) {
        throw ParseError(where(source, text, nth_key(text, d.name, d.occurrence)) + ": duplicate key '" + d.name +
                         "'");
    } catch (const json::parse_error& e) {
        const std::size_t pos = e.byte > 0 ? e.byte - 1 : 0;
        std::string msg = e.what();
        const auto cut = msg.find(": ");
        if (cut != std::string::npos) msg = msg.substr(cut + 2);
        throw ParseError(where(source, text, pos) + ": " + msg);
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    auto f = open_out(path);
    f << text;
}

json read_json_file(const fs::path& path) { return parse_json_strict(read_text(path), path.string()); }

void write_json_file(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_series_csv(const fs::path& path, const std::vector<ObservableRecord>& s) {
    std::string out;
    const auto& cols = observable_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
    for (const auto& r : s) {
        const auto row = observable_row(r);
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += "\n";
    }
    write_text(path, out);
}

std::vector<ObservableRecord> read_series_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty series file");
    if (split_csv_line(line) != observable_columns()) throw ParseError(path.string() + ":1: unexpected header");
    std::vector<ObservableRecord> s;
    int ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        std::vector<double> row;
        try {
            for (const auto& c : split_csv_line(line)) row.push_back(parse_double(c));
            s.push_back(observable_from_row(row));
        } catch (const Error& e) {
            throw ParseError(path.string() + ":" + std::to_string(ln) + ": " + e.what());
        }
    }
    return s;
}

void write_field_csv(const fs::path& path, const RadialField& u) {
    std::string out = "r,re,im\n";
    for (std::size_t j = 0; j < u.size(); ++j)
        out += format_double(u.g().r[j]) + "," + format_double(u.v[j].real()) + "," + format_double(u.v[j].imag()) +
               "\n";
    write_text(path, out);
}

RadialField read_field_csv(const fs::path& path, int N) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"r", "re", "im"})
        throw ParseError(path.string() + ":1: expected header r,re,im");
    std::vector<double> r;
    std::vector<cplx> v;
    int ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != 3) throw ParseError(path.string() + ":" + std::to_string(ln) + ": expected 3 columns");
        try {
            r.push_back(parse_double(c[0]));
            v.emplace_back(parse_double(c[1]), parse_double(c[2]));
        } catch (const Error& e) {
            throw ParseError(path.string() + ":" + std::to_string(ln) + ": " + e.what());
        }
    }
    if (r.size() < 2) throw ParseError(path.string() + ": need at least two rows");
    const double h = 2 * r[0];
    const int n = static_cast<int>(r.size());
    for (int j = 0; j < n; ++j)
        if (std::abs(r[j] - (j + 0.5) * h) > 1e-9 * (1 + r[j]))
            throw ParseError(path.string() + ":" + std::to_string(j + 2) + ": r is not a cell-centred mesh");
    return RadialField(make_grid(n * h, n, N), std::move(v));
}

void write_xy_csv(const fs::path& path, const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& xname, const std::string& yname) {
    std::string out = xname + "," + yname + "\n";
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) out += format_double(x[i]) + "," + format_double(y[i]) + "\n";
    write_text(path, out);
}

}  // namespace inls
