#include <qvertex/io.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace qvertex::io {

using Eigen::Index;

namespace {

std::size_t json_index(Index i) { return static_cast<std::size_t>(i); }

std::string format_g(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Strips the library prefix "[json.exception...] parse error at ...: ".
std::string parser_reason(const std::string& what)
{
    const auto at = what.find("parse error");
    if (at == std::string::npos)
        return what;
    const auto colon = what.find(": ", at);
    return colon == std::string::npos ? what : what.substr(colon + 2);
}

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view what)
{
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError(std::string(what) + ": unknown key '" + key + "'");
    }
}

double real_from_json(const Json& j, std::string_view what)
{
    const Complex z = complex_from_json(j, what);
    if (z.imag() != 0.0)
        throw ValidationError(std::string(what) + " must be real");
    return z.real();
}

class ParamReader {
  public:
    ParamReader(const Json& obj, std::string_view name) : obj_(obj), name_(name)
    {
        if (!obj_.is_object())
            throw ValidationError(name_ + ": params must be an object");
    }

    void real(const char* key, double& out)
    {
        if (auto it = find(key))
            out = real_from_json(**it, name_ + "." + key);
    }
    void cplx(const char* key, Complex& out)
    {
        if (auto it = find(key))
            out = complex_from_json(**it, name_ + "." + key);
    }
    void flag(const char* key, bool& out)
    {
        if (auto it = find(key)) {
            if (!(*it)->is_boolean())
                throw ValidationError(name_ + "." + key + " must be a boolean");
            out = (*it)->get<bool>();
        }
    }
    void optional_cplx(const char* key, std::optional<Complex>& out)
    {
        if (auto it = find(key); it && !(*it)->is_null())
            out = complex_from_json(**it, name_ + "." + key);
    }
    void finish() const
    {
        for (const auto& [key, value] : obj_.items()) {
            (void)value;
            if (!seen_.count(key))
                throw ValidationError(name_ + ": unknown parameter '" + key + "'");
        }
    }

  private:
    std::optional<const Json*> find(const char* key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end())
            return std::nullopt;
        return &*it;
    }

    const Json& obj_;
    std::string name_;
    std::set<std::string> seen_;
};

LineOrder perm_from_json(const Json& j, Index n)
{
    if (!j.is_array())
        throw ValidationError("perm must be an array of line labels");
    LineOrder order;
    for (const auto& v : j) {
        if (!v.is_number_integer())
            throw ValidationError("perm entries must be integers");
        order.push_back(v.get<int>());
    }
    check_line_order(order, n);
    return order;
}

LineOrder identity_order(Index n)
{
    LineOrder order(json_index(n));
    for (Index i = 0; i < n; ++i)
        order[json_index(i)] = static_cast<int>(i + 1);
    return order;
}

template <class Form>
Form form_from_json(const Json& j, std::optional<Index> n_hint)
{
    if (!j.contains("S"))
        throw ValidationError("normal form needs S");
    const Json& js = j.at("S");
    if (!js.is_array())
        throw ValidationError("S must be an array of rows");
    const auto r = static_cast<Index>(js.size());
    const Index n = n_hint.value_or(r);
    if (r > n)
        throw DimensionError("S has more rows than lines");
    Form f;
    f.n = n;
    f.S = matrix_from_json(js, r, r, "S");
    if (j.contains("T"))
        f.T = matrix_from_json(j.at("T"), r, n - r, "T");
    else if (n == r)
        f.T = ComplexMatrix(r, 0);
    else
        throw ValidationError("normal form needs T when rank < n");
    f.perm = j.contains("perm") ? perm_from_json(j.at("perm"), n) : identity_order(n);
    return f;
}

template <class Form>
Json form_to_json(const Form& f, const char* form)
{
    Json j;
    j["n"] = f.n;
    j["form"] = form;
    j["S"] = matrix_to_json(f.S);
    j["T"] = matrix_to_json(f.T);
    j["perm"] = f.perm;
    return j;
}

// Index of the pair named by "12", "21", "23", ... in (1,2), (2,3), (3,1).
std::size_t pair_slot(const std::string& key)
{
    if (key.size() == 2) {
        const int a = key[0] - '0';
        const int b = key[1] - '0';
        auto has = [&](int x, int y) { return (a == x && b == y) || (a == y && b == x); };
        if (has(1, 2))
            return 0;
        if (has(2, 3))
            return 1;
        if (has(3, 1))
            return 2;
    }
    throw SpecError("filter spec: '" + key + "' is not a line pair of a 3-line vertex");
}

PassBand band_from_string(const Json& v, const std::string& key)
{
    if (!v.is_string())
        throw SpecError("filter spec: band for pair " + key + " must be a string");
    std::string s = v.get<std::string>();
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "low" || s == "lp")
        return PassBand::Low;
    if (s == "high" || s == "hp")
        return PassBand::High;
    throw SpecError("filter spec: band for pair " + key + " must be \"low\" or \"high\"");
}

} // namespace

Json parse_json_text(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        offset = std::min(offset, text.size());
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + parser_reason(e.what()),
                         line, column);
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content, bool force)
{
    std::error_code ec;
    if (!force && std::filesystem::exists(path, ec))
        throw FileError("'" + path + "' exists; pass --force to overwrite");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FileError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw FileError("write to '" + path + "' failed");
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, std::string_view what)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ValidationError(std::string(what) + " must be a number or an [re, im] pair");
}

Json matrix_to_json(const ComplexMatrix& m)
{
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back(complex_to_json(m(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j, Index rows, Index cols, std::string_view what)
{
    const std::string name(what);
    if (!j.is_array() || static_cast<Index>(j.size()) != rows)
        throw ValidationError(name + " must have " + std::to_string(rows) + " rows");
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j[json_index(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw ValidationError(name + " row " + std::to_string(i + 1) + " must have " +
                                  std::to_string(cols) + " entries");
        for (Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(row[json_index(c)],
                                        name + "(" + std::to_string(i + 1) + "," +
                                            std::to_string(c + 1) + ")");
    }
    require_finite(m, name.c_str());
    return m;
}

Json case_to_json(const CaseParameters& params)
{
    Json p = Json::object();
    std::visit(
        [&p](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, cases::DeltaLine>) {
                p["s"] = c.s;
                p["t"] = complex_to_json(c.t);
            } else if constexpr (std::is_same_v<T, cases::DeltaPrimeLine>) {
                p["s"] = c.s;
                p["c"] = complex_to_json(c.c);
            } else if constexpr (std::is_same_v<T, cases::GenericLine>) {
                p["s11"] = c.s11;
                p["s12"] = complex_to_json(c.s12);
                p["s22"] = c.s22;
            } else if constexpr (std::is_same_v<T, cases::DeltaY>) {
                p["s"] = c.s;
                p["t2"] = complex_to_json(c.t2);
                p["t3"] = complex_to_json(c.t3);
            } else if constexpr (std::is_same_v<T, cases::MixedY>) {
                p["s11"] = c.s11;
                p["s12"] = complex_to_json(c.s12);
                p["s22"] = c.s22;
                p["t1"] = complex_to_json(c.t1);
                p["t2"] = complex_to_json(c.t2);
                p["rank_one"] = c.rank_one;
            } else if constexpr (std::is_same_v<T, cases::DeltaPrimeY>) {
                p["s"] = c.s;
                p["c"] = complex_to_json(c.c);
                p["d"] = complex_to_json(c.d);
            } else if constexpr (std::is_same_v<T, cases::HalfGenericY>) {
                p["s"] = c.s;
                p["q"] = complex_to_json(c.q);
                p["r"] = c.r;
                p["c"] = complex_to_json(c.c);
                p["d"] = complex_to_json(c.d);
                if (c.f)
                    p["f"] = complex_to_json(*c.f);
            } else {
                p["s11"] = c.s11;
                p["s12"] = complex_to_json(c.s12);
                p["s13"] = complex_to_json(c.s13);
                p["s22"] = c.s22;
                p["s23"] = complex_to_json(c.s23);
                p["s33"] = c.s33;
            }
        },
        params);
    return Json{{"name", std::string(case_name(params))}, {"params", std::move(p)}};
}

CaseParameters case_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
        throw ValidationError("case must be an object with a string \"name\"");
    reject_unknown_keys(j, {"name", "params"}, "case");
    const std::string name = j.at("name").get<std::string>();
    static const Json empty = Json::object();
    ParamReader r(j.contains("params") ? j.at("params") : empty, name);

    CaseParameters out;
    if (name == "delta_line") {
        cases::DeltaLine c;
        r.real("s", c.s);
        r.cplx("t", c.t);
        out = c;
    } else if (name == "delta_prime_line") {
        cases::DeltaPrimeLine c;
        r.real("s", c.s);
        r.cplx("c", c.c);
        out = c;
    } else if (name == "generic_line") {
        cases::GenericLine c;
        r.real("s11", c.s11);
        r.cplx("s12", c.s12);
        r.real("s22", c.s22);
        out = c;
    } else if (name == "delta_y") {
        cases::DeltaY c;
        r.real("s", c.s);
        r.cplx("t2", c.t2);
        r.cplx("t3", c.t3);
        out = c;
    } else if (name == "mixed_y") {
        cases::MixedY c;
        r.real("s11", c.s11);
        r.cplx("s12", c.s12);
        r.real("s22", c.s22);
        r.cplx("t1", c.t1);
        r.cplx("t2", c.t2);
        r.flag("rank_one", c.rank_one);
        out = c;
    } else if (name == "delta_prime_y") {
        cases::DeltaPrimeY c;
        r.real("s", c.s);
        r.cplx("c", c.c);
        r.cplx("d", c.d);
        out = c;
    } else if (name == "half_generic_y") {
        cases::HalfGenericY c;
        r.real("s", c.s);
        r.cplx("q", c.q);
        r.real("r", c.r);
        r.cplx("c", c.c);
        r.cplx("d", c.d);
        r.optional_cplx("f", c.f);
        out = c;
    } else if (name == "generic_y") {
        cases::GenericY c;
        r.real("s11", c.s11);
        r.cplx("s12", c.s12);
        r.cplx("s13", c.s13);
        r.real("s22", c.s22);
        r.cplx("s23", c.s23);
        r.real("s33", c.s33);
        out = c;
    } else {
        throw ValidationError("unknown case '" + name + "'");
    }
    r.finish();
    return out;
}

BoundaryPair vertex_from_json(const Json& j)
{
    if (!j.is_object())
        throw ValidationError("vertex document must be a JSON object");
    reject_unknown_keys(j, {"n", "form", "A", "B", "S", "T", "perm", "case", "design"}, "vertex");

    std::optional<Index> n;
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1)
            throw ValidationError("n must be a positive integer");
        n = static_cast<Index>(j.at("n").get<long long>());
    }
    const std::string form = j.value("form", std::string("raw"));

    if (form == "raw") {
        if (!j.contains("A") || !j.contains("B"))
            throw ValidationError("raw form needs A and B");
        const Index rows = n.value_or(static_cast<Index>(j.at("A").size()));
        return BoundaryPair(matrix_from_json(j.at("A"), rows, rows, "A"),
                            matrix_from_json(j.at("B"), rows, rows, "B"));
    }
    if (form == "st")
        return assemble_boundary(form_from_json<STForm>(j, n));
    if (form == "reverse_st")
        return assemble_boundary(form_from_json<ReverseSTForm>(j, n));
    if (form == "case") {
        if (!j.contains("case"))
            throw ValidationError("case form needs \"case\"");
        const auto params = case_from_json(j.at("case"));
        const Index lines = case_lines(params);
        if (n && *n != lines)
            throw DimensionError("case '" + std::string(case_name(params)) + "' has " +
                                 std::to_string(lines) + " lines, n says " + std::to_string(*n));
        BoundaryPair p = make_case(params);
        if (j.contains("perm"))
            p = permute_lines(p, perm_from_json(j.at("perm"), lines));
        return p;
    }
    throw ValidationError("unknown form '" + form + "'");
}

Json vertex_to_json(const BoundaryPair& p)
{
    Json j;
    j["n"] = p.n();
    j["form"] = "raw";
    j["A"] = matrix_to_json(p.A());
    j["B"] = matrix_to_json(p.B());
    return j;
}

Json vertex_to_json(const STForm& f) { return form_to_json(f, "st"); }

Json vertex_to_json(const ReverseSTForm& f) { return form_to_json(f, "reverse_st"); }

Json vertex_to_json(const CaseParameters& params, const LineOrder& perm)
{
    Json j;
    j["n"] = case_lines(params);
    j["form"] = "case";
    j["case"] = case_to_json(params);
    if (!perm.empty()) {
        check_line_order(perm, case_lines(params));
        j["perm"] = perm;
    }
    return j;
}

FilterSpec filter_spec_from_text(std::string_view text)
{
    std::vector<std::set<std::string>> open;
    std::string duplicate;
    Json::parser_callback_t track = [&](int, Json::parse_event_t ev, Json& parsed) {
        switch (ev) {
        case Json::parse_event_t::object_start:
            open.emplace_back();
            break;
        case Json::parse_event_t::object_end:
            if (!open.empty())
                open.pop_back();
            break;
        case Json::parse_event_t::key:
            if (!open.empty() && !open.back().insert(parsed.get<std::string>()).second &&
                duplicate.empty())
                duplicate = parsed.get<std::string>();
            break;
        default:
            break;
        }
        return true;
    };

    Json j;
    try {
        j = Json::parse(text.begin(), text.end(), track);
    } catch (const Json::parse_error&) {
        parse_json_text(text); // rethrows with a position
        throw;
    }
    if (!duplicate.empty())
        throw SpecError("filter spec: duplicate key '" + duplicate + "'");
    if (!j.is_object() || !j.contains("pairs") || !j.at("pairs").is_object())
        throw SpecError("filter spec must be an object with a \"pairs\" object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "pairs" && key != "targets")
            throw SpecError("filter spec: unknown key '" + key + "'");
    }

    FilterSpec spec;
    std::array<bool, 3> given{};
    for (const auto& [key, value] : j.at("pairs").items()) {
        const auto slot = pair_slot(key);
        if (given[slot])
            throw SpecError("filter spec: duplicate pair " + key);
        given[slot] = true;
        spec.bands[slot] = band_from_string(value, key);
    }
    static const char* names[3] = {"12", "23", "31"};
    for (std::size_t a = 0; a < 3; ++a)
        if (!given[a])
            throw SpecError(std::string("filter spec: missing pair ") + names[a]);

    if (j.contains("targets")) {
        if (!j.at("targets").is_object())
            throw SpecError("filter spec: \"targets\" must be an object");
        std::array<bool, 3> seen{};
        for (const auto& [key, value] : j.at("targets").items()) {
            const auto slot = pair_slot(key);
            if (seen[slot])
                throw SpecError("filter spec: duplicate target for pair " + key);
            seen[slot] = true;
            if (!value.is_number() || value.get<double>() < 0.0 || value.get<double>() > 1.0)
                throw SpecError("filter spec: target for pair " + key + " must be in [0, 1]");
            spec.targets[slot] = value.get<double>();
        }
    }
    return spec;
}

Json coupling_report_to_json(const CouplingReport& r)
{
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"pair", std::to_string(p.i) + std::to_string(p.j)},
                         {"kind", std::string(to_string(p.kind))},
                         {"symbol", std::string(symbol(p.kind))},
                         {"t0", p.t0},
                         {"tinf", p.tinf},
                         {"peak", p.peak},
                         {"variation", p.variation},
                         {"epsilon", p.epsilon}});
    }
    return Json{{"pattern", r.pattern()}, {"pairs", std::move(pairs)}, {"warnings", r.warnings}};
}

Json vertex_class_to_json(const VertexClass& c)
{
    return Json{{"n", c.n},
                {"r_A", c.r_A},
                {"r_B", c.r_B},
                {"r_S", c.r_S},
                {"label", std::string(to_string(c.label))},
                {"rank_identity", c.rank_identity_holds()},
                {"warnings", c.warnings}};
}

std::vector<double> log_grid(double kmin, double kmax, int points)
{
    if (!(kmin > 0.0) || !(kmax > kmin) || !std::isfinite(kmax))
        throw ValidationError("k range must satisfy 0 < kmin < kmax");
    if (points < 2)
        throw ValidationError("a sweep needs at least 2 points");
    const double a = std::log(kmin);
    const double b = std::log(kmax);
    std::vector<double> k(static_cast<std::size_t>(points));
    for (int g = 0; g < points; ++g)
        k[static_cast<std::size_t>(g)] = std::exp(a + (b - a) * g / (points - 1));
    k.front() = kmin;
    k.back() = kmax;
    return k;
}

SweepResult sweep(const BoundaryPair& p, const std::vector<double>& k)
{
    SweepResult r;
    r.n = p.n();
    r.k = k;
    r.S.reserve(k.size());
    for (double kk : k) {
        auto m = s_matrix(p, kk).M;
        for (Index c = 0; c < m.cols(); ++c)
            r.max_flux_defect = std::max(r.max_flux_defect, std::abs(m.col(c).squaredNorm() - 1.0));
        r.S.push_back(std::move(m));
    }
    return r;
}

std::string sweep_csv(const SweepResult& r, bool amplitudes)
{
    const Index n = r.n;
    const std::string sep = n >= 10 ? "_" : "";
    std::vector<std::string> labels;
    std::vector<std::pair<Index, Index>> cells;
    for (Index i = 0; i < n; ++i) {
        labels.push_back("R" + std::to_string(i + 1));
        cells.emplace_back(i, i);
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j) {
                labels.push_back("T" + std::to_string(i + 1) + sep + std::to_string(j + 1));
                cells.emplace_back(i, j);
            }

    std::string out = "k";
    for (const auto& l : labels)
        out += amplitudes ? "," + l + "_re," + l + "_im" : "," + l;
    out += '\n';
    for (std::size_t row = 0; row < r.k.size(); ++row) {
        out += format_g(r.k[row]);
        const auto& m = r.S[row];
        for (const auto& [i, j] : cells) {
            const Complex z = m(i, j);
            if (amplitudes) {
                out += ',' + format_g(z.real()) + ',' + format_g(z.imag());
            } else {
                out += ',' + format_g(std::norm(z));
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace qvertex::io
