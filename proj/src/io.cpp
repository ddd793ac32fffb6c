#include "apc/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace apc {

namespace {

struct Token {
    std::string text;
    int col = 0;  // 1-based
};

struct Line {
    int number = 0;
    std::vector<Token> tokens;
    std::string raw;
};

[[noreturn]] void parse_error(const std::string& name, int line, int col, const std::string& msg) {
    fail_usage(name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

// Non-empty lines with comments stripped; tokens split on spaces and tabs.
std::vector<Line> lex(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string body = raw.substr(0, raw.find('#'));
        Line ln{n, {}, raw};
        size_t i = 0;
        while (i < body.size()) {
            while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
            if (i >= body.size()) break;
            size_t j = i;
            while (j < body.size() && body[j] != ' ' && body[j] != '\t') ++j;
            ln.tokens.push_back(Token{body.substr(i, j - i), static_cast<int>(i) + 1});
            i = j;
        }
        if (!ln.tokens.empty()) out.push_back(std::move(ln));
    }
    return out;
}

long long parse_int(const std::string& name, int line, const Token& t) {
    size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t.text, &used);
    } catch (const std::exception&) {
        parse_error(name, line, t.col, "expected an integer, got '" + t.text + "'");
    }
    if (used != t.text.size()) parse_error(name, line, t.col + static_cast<int>(used), "trailing characters in '" + t.text + "'");
    return v;
}

std::vector<long long> parse_dims(const std::string& name, const Line& ln) {
    if (ln.tokens.size() < 2) parse_error(name, ln.number, 1, "header needs at least one dimension");
    std::vector<long long> dims;
    for (size_t i = 1; i < ln.tokens.size(); ++i) {
        long long v = parse_int(name, ln.number, ln.tokens[i]);
        if (v < 1) parse_error(name, ln.number, ln.tokens[i].col, "dimensions must be positive");
        dims.push_back(v);
    }
    return dims;
}

std::string join(const Point& p, char sep) {
    std::string s;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(p[i]);
    }
    return s;
}

}  // namespace

Rational parse_rational(const std::string& tok) {
    if (tok.empty()) fail_usage("empty number");
    auto slash = tok.find('/');
    if (slash != std::string::npos) {
        mpz_class p, q;
        if (p.set_str(tok.substr(0, slash), 10) != 0 || q.set_str(tok.substr(slash + 1), 10) != 0 || q == 0)
            fail_usage("bad fraction '" + tok + "'");
        Rational r(p, q);
        r.canonicalize();
        return r;
    }
    size_t i = 0;
    bool neg = false;
    if (tok[i] == '+' || tok[i] == '-') neg = tok[i++] == '-';
    std::string digits;
    long long scale = 0;
    bool dot = false, any = false;
    for (; i < tok.size() && tok[i] != 'e' && tok[i] != 'E'; ++i) {
        if (tok[i] == '.' && !dot) {
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(tok[i]))) {
            digits += tok[i];
            any = true;
            if (dot) --scale;
        } else {
            fail_usage("bad number '" + tok + "'");
        }
    }
    if (!any) fail_usage("bad number '" + tok + "'");
    if (i < tok.size()) {
        size_t used = 0;
        long long e = 0;
        try {
            e = std::stoll(tok.substr(i + 1), &used);
        } catch (const std::exception&) {
            fail_usage("bad exponent in '" + tok + "'");
        }
        if (used != tok.size() - i - 1) fail_usage("bad exponent in '" + tok + "'");
        scale += e;
    }
    mpz_class num(digits, 10), pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational r = scale < 0 ? Rational(num, pow10) : Rational(num * pow10);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

SetFile parse_set(const std::string& text, const std::string& name) {
    auto lines = lex(text);
    if (lines.empty()) parse_error(name, 1, 1, "missing header 'group ...' or 'box ...'");
    const Line& h = lines[0];
    SetFile s;
    s.kind = h.tokens[0].text;
    if (s.kind != "group" && s.kind != "box")
        parse_error(name, h.number, h.tokens[0].col, "header must start with 'group' or 'box'");
    s.dims = parse_dims(name, h);
    const long long lo = s.kind == "box" ? 1 : 0;
    std::set<Point> seen;
    for (size_t li = 1; li < lines.size(); ++li) {
        const Line& ln = lines[li];
        if (ln.tokens.size() != s.dims.size())
            parse_error(name, ln.number, ln.tokens.front().col,
                        "expected " + std::to_string(s.dims.size()) + " coordinates, got " +
                            std::to_string(ln.tokens.size()));
        Point p;
        for (size_t i = 0; i < ln.tokens.size(); ++i) {
            long long v = parse_int(name, ln.number, ln.tokens[i]);
            long long hi = s.kind == "box" ? s.dims[i] : s.dims[i] - 1;
            if (v < lo || v > hi)
                parse_error(name, ln.number, ln.tokens[i].col,
                            "coordinate " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
            p.push_back(v);
        }
        if (!seen.insert(p).second) parse_error(name, ln.number, ln.tokens.front().col, "duplicate element");
        s.points.push_back(std::move(p));
    }
    return s;
}

std::string format_set(const SetFile& s) {
    std::string out = s.kind;
    for (long long d : s.dims) out += " " + std::to_string(d);
    out += "\n";
    for (const Point& p : s.points) out += join(p, ' ') + "\n";
    return out;
}

DensityFile parse_density(const std::string& text, const std::string& name) {
    auto lines = lex(text);
    if (lines.empty()) parse_error(name, 1, 1, "missing header 'density ...'");
    const Line& h = lines[0];
    if (h.tokens[0].text != "density") parse_error(name, h.number, h.tokens[0].col, "header must start with 'density'");
    DensityFile d;
    d.dims = parse_dims(name, h);
    std::set<Point> seen;
    for (size_t li = 1; li < lines.size(); ++li) {
        const Line& ln = lines[li];
        if (ln.tokens.size() != d.dims.size() + 1)
            parse_error(name, ln.number, ln.tokens.front().col,
                        "expected " + std::to_string(d.dims.size()) + " coordinates and a value");
        Point p;
        for (size_t i = 0; i < d.dims.size(); ++i) {
            long long v = parse_int(name, ln.number, ln.tokens[i]);
            if (v < 0 || v >= d.dims[i]) parse_error(name, ln.number, ln.tokens[i].col, "coordinate out of range");
            p.push_back(v);
        }
        const Token& vt = ln.tokens.back();
        Rational val;
        try {
            val = parse_rational(vt.text);
        } catch (const ApcError& e) {
            parse_error(name, ln.number, vt.col, e.what());
        }
        if (val < 0) parse_error(name, ln.number, vt.col, "density values must be nonnegative");
        if (!seen.insert(p).second) parse_error(name, ln.number, ln.tokens.front().col, "duplicate entry");
        d.coords.push_back(std::move(p));
        d.values.push_back(val);
    }
    return d;
}

std::string format_density(const DensityFile& d) {
    std::string out = "density";
    for (long long n : d.dims) out += " " + std::to_string(n);
    out += "\n";
    for (size_t i = 0; i < d.coords.size(); ++i) out += join(d.coords[i], ' ') + " " + d.values[i].get_str() + "\n";
    return out;
}

MapFile parse_map(const std::string& text, const std::string& name) {
    auto lines = lex(text);
    MapFile m;
    size_t xdim = 0, ydim = 0;
    for (const Line& ln : lines) {
        size_t arrow = ln.tokens.size();
        for (size_t i = 0; i < ln.tokens.size(); ++i)
            if (ln.tokens[i].text == "->") {
                arrow = i;
                break;
            }
        if (arrow == ln.tokens.size()) parse_error(name, ln.number, ln.tokens.front().col, "missing '->'");
        if (arrow == 0) parse_error(name, ln.number, ln.tokens[0].col, "empty source point");
        if (arrow + 1 == ln.tokens.size()) parse_error(name, ln.number, ln.tokens[arrow].col, "empty target point");
        Point x, y;
        for (size_t i = 0; i < arrow; ++i) x.push_back(parse_int(name, ln.number, ln.tokens[i]));
        for (size_t i = arrow + 1; i < ln.tokens.size(); ++i) {
            if (ln.tokens[i].text == "->") parse_error(name, ln.number, ln.tokens[i].col, "second '->'");
            y.push_back(parse_int(name, ln.number, ln.tokens[i]));
        }
        if (m.x.empty()) {
            xdim = x.size();
            ydim = y.size();
        } else if (x.size() != xdim || y.size() != ydim) {
            parse_error(name, ln.number, ln.tokens.front().col, "dimension differs from the first line");
        }
        m.x.push_back(std::move(x));
        m.y.push_back(std::move(y));
    }
    std::set<Point> seen;
    for (size_t i = 0; i < m.x.size(); ++i)
        if (!seen.insert(m.x[i]).second) fail_usage(name + ": source point listed twice: " + join(m.x[i], ' '));
    return m;
}

std::string format_map(const MapFile& m) {
    std::string out;
    for (size_t i = 0; i < m.x.size(); ++i) out += join(m.x[i], '\t') + "\t->\t" + join(m.y[i], '\t') + "\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_usage("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_usage("cannot write '" + path + "'");
    out << text;
}

SetFile load_set(const std::string& path) { return parse_set(read_file(path), path); }
void save_set(const SetFile& s, const std::string& path) { write_file(path, format_set(s)); }
DensityFile load_density(const std::string& path) { return parse_density(read_file(path), path); }
MapFile load_map(const std::string& path) { return parse_map(read_file(path), path); }

GroupSpec set_group(const SetFile& s) {
    if (s.kind != "group") fail_usage("expected a 'group' set file, got '" + s.kind + "'");
    long long order = 1;
    std::vector<int> mods;
    for (long long d : s.dims) {
        order *= d;
        if (order > size_budget()) fail_budget("load_set", "group order exceeds APC_BUDGET");
        mods.push_back(static_cast<int>(d));
    }
    return make_group(mods);
}

Subset set_subset(const GroupSpec& G, const SetFile& s) {
    Subset A;
    for (const Point& p : s.points) {
        Elem e(p.begin(), p.end());
        A.push_back(G.index(e));
    }
    std::sort(A.begin(), A.end());
    return A;
}

SetFile group_set(const GroupSpec& G, const Subset& A) {
    SetFile s;
    s.kind = "group";
    for (int m : G.moduli()) s.dims.push_back(m);
    for (int a : A) {
        Elem e = G.coords(a);
        s.points.push_back(Point(e.begin(), e.end()));
    }
    return s;
}

SetFile box_set(long long N, const std::vector<long long>& A) {
    SetFile s;
    s.kind = "box";
    s.dims = {N};
    for (long long a : A) s.points.push_back(Point{a});
    return s;
}

}  // namespace apc
