#include "qbp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qbp {

namespace {

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        else if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

class ValueParser {
public:
    ValueParser(const std::string& text, const std::string& source, int line)
        : t_(text), source_(source), line_(line) {}

    TomlValue parse() {
        TomlValue v = parse_value();
        skip_ws();
        if (pos_ != t_.size()) fail("trailing characters after value");
        return v;
    }

private:
    const std::string& t_;
    const std::string& source_;
    int line_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { fail_at(source_, line_, msg); }

    void skip_ws() {
        while (pos_ < t_.size() && (t_[pos_] == ' ' || t_[pos_] == '\t')) ++pos_;
    }

    TomlValue parse_value() {
        skip_ws();
        if (pos_ >= t_.size()) fail("missing value");
        TomlValue v;
        v.line = line_;
        char c = t_[pos_];
        if (c == '"') {
            ++pos_;
            std::string out;
            while (pos_ < t_.size() && t_[pos_] != '"') out.push_back(t_[pos_++]);
            if (pos_ >= t_.size()) fail("unterminated string");
            ++pos_;
            v.kind = TomlValue::Kind::str;
            v.s = std::move(out);
            return v;
        }
        if (c == '[') {
            ++pos_;
            v.kind = TomlValue::Kind::array;
            skip_ws();
            if (pos_ < t_.size() && t_[pos_] == ']') { ++pos_; return v; }
            while (true) {
                v.arr.push_back(parse_value());
                skip_ws();
                if (pos_ < t_.size() && t_[pos_] == ',') { ++pos_; continue; }
                if (pos_ < t_.size() && t_[pos_] == ']') { ++pos_; return v; }
                fail("expected ',' or ']' in array");
            }
        }
        if (t_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            v.kind = TomlValue::Kind::boolean;
            v.b = true;
            return v;
        }
        if (t_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            v.kind = TomlValue::Kind::boolean;
            v.b = false;
            return v;
        }
        // number
        std::size_t end = pos_;
        while (end < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[end])) ||
                                   t_[end] == '+' || t_[end] == '-' || t_[end] == '.'))
            ++end;
        std::string tok = t_.substr(pos_, end - pos_);
        if (tok.empty()) fail("cannot parse value");
        if (tok.find('.') != std::string::npos || tok.find('e') != std::string::npos ||
            tok.find('E') != std::string::npos) {
            try {
                std::size_t used = 0;
                v.f = std::stod(tok, &used);
                if (used != tok.size()) fail("bad float '" + tok + "'");
            } catch (const std::exception&) {
                fail("bad float '" + tok + "'");
            }
            v.kind = TomlValue::Kind::real;
        } else {
            long long out = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
            if (ec != std::errc() || p != tok.data() + tok.size())
                fail("bad integer '" + tok + "'");
            v.kind = TomlValue::Kind::integer;
            v.i = out;
        }
        pos_ = end;
        return v;
    }
};

} // namespace

std::string TomlValue::as_string() const {
    if (kind != Kind::str) throw ConfigError("line " + std::to_string(line) + ": expected a string");
    return s;
}
long long TomlValue::as_int() const {
    if (kind != Kind::integer) throw ConfigError("line " + std::to_string(line) + ": expected an integer");
    return i;
}
double TomlValue::as_double() const {
    if (kind == Kind::real) return f;
    if (kind == Kind::integer) return static_cast<double>(i);
    throw ConfigError("line " + std::to_string(line) + ": expected a number");
}
bool TomlValue::as_bool() const {
    if (kind != Kind::boolean) throw ConfigError("line " + std::to_string(line) + ": expected a bool");
    return b;
}
const std::vector<TomlValue>& TomlValue::as_array() const {
    if (kind != Kind::array) throw ConfigError("line " + std::to_string(line) + ": expected an array");
    return arr;
}

TomlDoc parse_toml_string(const std::string& text, const std::string& source) {
    TomlDoc doc;
    doc.source = source;
    TomlTable* current = &doc.root;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            bool is_array = line.size() >= 2 && line[1] == '[';
            std::string close = is_array ? "]]" : "]";
            if (line.substr(line.size() - close.size()) != close)
                fail_at(source, lineno, "unterminated table header");
            std::string name =
                trim(line.substr(is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1)));
            if (name.empty()) fail_at(source, lineno, "empty table name");
            if (is_array) {
                doc.table_arrays[name].emplace_back();
                current = &doc.table_arrays[name].back();
            } else {
                if (doc.tables.count(name)) fail_at(source, lineno, "duplicate table " + name);
                current = &doc.tables[name];
            }
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail_at(source, lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_at(source, lineno, "empty key");
        if (current->count(key)) fail_at(source, lineno, "duplicate key " + key);
        (*current)[key] = ValueParser(value, source, lineno).parse();
    }
    return doc;
}

TomlDoc parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml_string(buf.str(), path);
}

std::optional<FixedPointFormat> quant_from_string(const std::string& s) {
    if (s == "fp") return std::nullopt;
    if (s.rfind("int", 0) == 0) {
        std::size_t dot = s.find('.', 3);
        if (dot != std::string::npos) {
            try {
                FixedPointFormat fmt{std::stoi(s.substr(3, dot - 3)), std::stoi(s.substr(dot + 1))};
                fmt.validate();
                return fmt;
            } catch (const std::exception&) {
            }
        }
    }
    throw ConfigError("bad quant '" + s + "' (want fp or intX.Y)");
}

std::string quant_to_string(const std::optional<FixedPointFormat>& q) {
    return q ? q->label() : "fp";
}

namespace {

const TomlValue* find(const TomlTable& t, const std::string& key) {
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

long long get_int(const TomlTable& t, const std::string& key, long long dflt) {
    auto* v = find(t, key);
    return v ? v->as_int() : dflt;
}

std::string get_str(const TomlTable& t, const std::string& key, const std::string& dflt) {
    auto* v = find(t, key);
    return v ? v->as_string() : dflt;
}

bool get_bool(const TomlTable& t, const std::string& key, bool dflt) {
    auto* v = find(t, key);
    return v ? v->as_bool() : dflt;
}

std::vector<std::pair<std::size_t, std::size_t>> exponent_pairs(const TomlValue& v) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& pair : v.as_array()) {
        const auto& a = pair.as_array();
        if (a.size() != 2)
            throw ConfigError("line " + std::to_string(pair.line) + ": exponent pair needs two entries");
        out.emplace_back(static_cast<std::size_t>(a[0].as_int()),
                         static_cast<std::size_t>(a[1].as_int()));
    }
    return out;
}

} // namespace

CodeSpec parse_bb_preset(const std::string& path) {
    TomlDoc doc = parse_toml_file(path);
    auto it = doc.tables.find("code");
    if (it == doc.tables.end()) throw ConfigError(path + ": missing [code] table");
    const TomlTable& t = it->second;
    CodeSpec c;
    c.family = "bb";
    c.l = static_cast<std::size_t>(get_int(t, "l", 0));
    c.m = static_cast<std::size_t>(get_int(t, "m", 0));
    auto* a = find(t, "a");
    auto* b = find(t, "b");
    if (!a || !b || c.l == 0 || c.m == 0)
        throw ConfigError(path + ": [code] needs l, m, a, b");
    c.a_terms = exponent_pairs(*a);
    c.b_terms = exponent_pairs(*b);
    c.distances = {static_cast<std::size_t>(get_int(t, "d", 0))};
    c.name = get_str(t, "name", "bb");
    return c;
}

ExperimentSpec parse_experiment(const TomlDoc& doc) {
    ExperimentSpec spec;

    auto run_it = doc.tables.find("run");
    if (run_it != doc.tables.end()) {
        const TomlTable& t = run_it->second;
        std::string sector = get_str(t, "sector", "X");
        if (sector != "X" && sector != "Z")
            throw ConfigError(doc.source + ": [run] sector must be X or Z");
        spec.sector = sector[0];
        spec.seed = static_cast<std::uint64_t>(get_int(t, "seed", 1));
        spec.stop.min_failures = static_cast<std::size_t>(get_int(t, "min_failures", 100));
        spec.stop.max_trials = static_cast<std::size_t>(get_int(t, "max_trials", 100000));
        spec.batch_size = static_cast<std::size_t>(get_int(t, "batch_size", 4096));
        spec.out_dir = get_str(t, "out", "out");
        spec.workers = static_cast<int>(get_int(t, "workers", 1));
    }

    auto sweep_it = doc.tables.find("sweep");
    if (sweep_it == doc.tables.end()) throw ConfigError(doc.source + ": missing [sweep] table");
    {
        const TomlTable& t = sweep_it->second;
        auto* pv = find(t, "p");
        if (!pv) throw ConfigError(doc.source + ": [sweep] needs p");
        if (pv->kind == TomlValue::Kind::array)
            for (const auto& x : pv->as_array()) spec.ps.push_back(x.as_double());
        else
            spec.ps.push_back(pv->as_double());
        if (auto* pm = find(t, "p_meas")) spec.p_meas = pm->as_double();
        if (auto* r = find(t, "rounds")) {
            if (r->kind == TomlValue::Kind::str) {
                if (r->as_string() != "d")
                    fail_at(doc.source, r->line, "rounds must be an integer or \"d\"");
                spec.rounds = "d";
            } else {
                spec.rounds = std::to_string(r->as_int());
            }
        }
        std::string mode = get_str(t, "mode", "static");
        if (mode == "static") spec.mode = DataErrorMode::static_data;
        else if (mode == "per-round") spec.mode = DataErrorMode::per_round_data;
        else throw ConfigError(doc.source + ": [sweep] mode must be static or per-round");
    }

    auto codes_it = doc.table_arrays.find("codes");
    if (codes_it == doc.table_arrays.end() || codes_it->second.empty())
        throw ConfigError(doc.source + ": no [[codes]] entries");
    for (const TomlTable& t : codes_it->second) {
        CodeSpec c;
        c.family = get_str(t, "family", "");
        if (c.family == "surface" || c.family == "toric") {
            auto* dv = find(t, "d");
            if (!dv) throw ConfigError(doc.source + ": [[codes]] " + c.family + " needs d");
            if (dv->kind == TomlValue::Kind::array)
                for (const auto& x : dv->as_array())
                    c.distances.push_back(static_cast<std::size_t>(x.as_int()));
            else
                c.distances.push_back(static_cast<std::size_t>(dv->as_int()));
        } else if (c.family == "bb") {
            if (auto* preset = find(t, "preset")) {
                c.path = preset->as_string();  // resolved at grid enumeration
            } else {
                c.l = static_cast<std::size_t>(get_int(t, "l", 0));
                c.m = static_cast<std::size_t>(get_int(t, "m", 0));
                auto* a = find(t, "a");
                auto* b = find(t, "b");
                if (!a || !b || c.l == 0 || c.m == 0)
                    throw ConfigError(doc.source + ": [[codes]] bb needs l, m, a, b (or preset)");
                c.a_terms = exponent_pairs(*a);
                c.b_terms = exponent_pairs(*b);
                c.distances = {static_cast<std::size_t>(get_int(t, "d", 0))};
                c.name = get_str(t, "name", "bb");
            }
        } else if (c.family == "file") {
            c.path = get_str(t, "path", "");
            if (c.path.empty()) throw ConfigError(doc.source + ": [[codes]] file needs path");
            std::string fmt = get_str(t, "format", "alist");
            if (fmt == "alist") c.format = CodeFileFormat::alist;
            else if (fmt == "dense-text") c.format = CodeFileFormat::dense_text;
            else throw ConfigError(doc.source + ": format must be alist or dense-text");
            c.distances = {static_cast<std::size_t>(get_int(t, "d", 0))};
        } else {
            throw ConfigError(doc.source + ": unknown code family '" + c.family + "'");
        }
        spec.codes.push_back(std::move(c));
    }

    auto dec_it = doc.table_arrays.find("decoders");
    if (dec_it == doc.table_arrays.end() || dec_it->second.empty())
        throw ConfigError(doc.source + ": no [[decoders]] entries");
    for (const TomlTable& t : dec_it->second) {
        DecoderSpec d;
        d.name = get_str(t, "name", "decoder");
        d.policy = policy_from_string(get_str(t, "policy", "none"));
        d.placement = placement_from_string(get_str(t, "placement", "single-round"));
        d.skip_iters = static_cast<std::size_t>(get_int(t, "skip_iters", 4));
        d.max_iter = static_cast<std::size_t>(get_int(t, "max_iter", 0));
        d.use_osd = get_bool(t, "use_osd", true);
        d.quant = quant_from_string(get_str(t, "quant", "fp"));
        spec.decoders.push_back(std::move(d));
    }
    return spec;
}

RunConfig GridPoint::to_run_config(char sector, std::uint64_t seed, const StopRule& stop,
                                   std::size_t batch_size) const {
    RunConfig cfg;
    cfg.code = code.get();
    cfg.family = family;
    cfg.sector = sector;
    cfg.noise.p_data = p;
    cfg.noise.p_meas = p_meas;
    cfg.noise.rounds = rounds;
    cfg.noise.mode = mode;
    cfg.bp.policy = decoder.policy;
    cfg.bp.skip_iters = decoder.skip_iters;
    cfg.bp.max_iter = decoder.max_iter ? decoder.max_iter : default_max_iter(code->d);
    cfg.bp.use_osd = decoder.use_osd;
    cfg.bp.quant = decoder.quant;
    cfg.placement = decoder.placement;
    cfg.stop = stop;
    cfg.master_seed = seed;
    cfg.batch_size = batch_size;
    return cfg;
}

std::string GridPoint::label() const {
    std::ostringstream os;
    os << family << "_d" << code->d << "_p" << p << "_" << decoder.name;
    std::string s = os.str();
    for (auto& c : s)
        if (c == '.' || c == '/' || c == ' ') c = '-';
    return s;
}

namespace {

std::string join_path(const std::string& base, const std::string& rel) {
    if (rel.empty() || rel.front() == '/' || base.empty()) return rel;
    return base + "/" + rel;
}

} // namespace

std::vector<GridPoint> enumerate_grid(const ExperimentSpec& spec, const std::string& base_dir) {
    std::vector<GridPoint> grid;
    for (const CodeSpec& cs : spec.codes) {
        CodeSpec resolved = cs;
        if (cs.family == "bb" && !cs.path.empty()) {
            resolved = parse_bb_preset(join_path(base_dir, cs.path));
        }
        for (std::size_t d : resolved.distances) {
            std::shared_ptr<const CssCode> code;
            if (resolved.family == "surface")
                code = std::make_shared<CssCode>(build_surface_code(d));
            else if (resolved.family == "toric")
                code = std::make_shared<CssCode>(build_toric_code(d));
            else if (resolved.family == "bb")
                code = std::make_shared<CssCode>(build_bb_code(
                    resolved.l, resolved.m, resolved.a_terms, resolved.b_terms,
                    resolved.name, d));
            else
                code = std::make_shared<CssCode>(
                    load_code(join_path(base_dir, resolved.path), resolved.format, d));
            for (double p : spec.ps) {
                for (const DecoderSpec& dec : spec.decoders) {
                    GridPoint g;
                    g.code = code;
                    g.family = resolved.family;
                    g.p = p;
                    g.p_meas = spec.p_meas.value_or(p);
                    g.rounds = spec.rounds == "d" ? code->d
                                                  : static_cast<std::size_t>(std::stoull(spec.rounds));
                    if (g.rounds < 1) g.rounds = 1;
                    g.mode = spec.mode;
                    g.decoder = dec;
                    grid.push_back(std::move(g));
                }
            }
        }
    }
    return grid;
}

std::shared_ptr<const CssCode> code_from_descriptor(const std::string& descriptor,
                                                    std::size_t declared_d,
                                                    std::optional<CodeFamily>* family_out) {
    if (family_out) *family_out = std::nullopt;
    std::size_t colon = descriptor.find(':');
    std::string kind = descriptor.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
    if (kind == "surface" || kind == "toric") {
        std::size_t d = rest.empty() ? 3 : std::stoull(rest);
        if (family_out)
            *family_out = kind == "surface" ? CodeFamily::surface : CodeFamily::toric;
        return std::make_shared<CssCode>(kind == "surface" ? build_surface_code(d)
                                                           : build_toric_code(d));
    }
    if (kind == "bb") {
        CodeSpec c = parse_bb_preset(rest);
        return std::make_shared<CssCode>(
            build_bb_code(c.l, c.m, c.a_terms, c.b_terms, c.name, c.distances[0]));
    }
    if (kind == "file") {
        std::string path = rest;
        CodeFileFormat fmt = CodeFileFormat::alist;
        if (auto second = rest.rfind(':'); second != std::string::npos) {
            std::string f = rest.substr(second + 1);
            if (f == "alist" || f == "dense-text") {
                path = rest.substr(0, second);
                fmt = f == "alist" ? CodeFileFormat::alist : CodeFileFormat::dense_text;
            }
        }
        return std::make_shared<CssCode>(load_code(path, fmt, declared_d));
    }
    throw ConfigError("unknown code descriptor '" + descriptor +
                      "' (want surface:D, toric:D, bb:<preset>, file:<stem>[:format])");
}

} // namespace qbp
