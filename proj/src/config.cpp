#include "cliffspec/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace cliffspec {

bool TomlValue::as_bool() const {
    if (const bool* b = std::get_if<bool>(&v_)) return *b;
    throw ConfigError("config: expected a boolean");
}

std::int64_t TomlValue::as_int() const {
    if (const auto* i = std::get_if<std::int64_t>(&v_)) return *i;
    throw ConfigError("config: expected an integer");
}

double TomlValue::as_double() const {
    if (const auto* i = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v_)) return *d;
    throw ConfigError("config: expected a number");
}

const std::string& TomlValue::as_string() const {
    if (const auto* s = std::get_if<std::string>(&v_)) return *s;
    throw ConfigError("config: expected a string");
}

const TomlValue::Array& TomlValue::as_array() const {
    if (const auto* a = std::get_if<Array>(&v_)) return *a;
    throw ConfigError("config: expected an array");
}

const TomlValue::Table& TomlValue::as_table() const {
    if (const auto* t = std::get_if<Table>(&v_)) return *t;
    throw ConfigError("config: expected a table");
}

TomlValue::Table& TomlValue::table() {
    if (auto* t = std::get_if<Table>(&v_)) return *t;
    throw ConfigError("config: expected a table");
}

namespace {

class TomlParser {
public:
    explicit TomlParser(const std::string& text) : text_(text) {}

    TomlValue parse() {
        TomlValue root;
        TomlValue* current = &root;
        skip_space_and_comments(true);
        while (pos_ < text_.size()) {
            if (peek() == '[') {
                current = enter_table(root);
            } else {
                parse_key_value(*current);
            }
            skip_space_and_comments(true);
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config line " + std::to_string(line_) + ": " + what);
    }

    char peek() const { return text_[pos_]; }
    bool eof() const { return pos_ >= text_.size(); }

    void advance() {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
    }

    void skip_space_and_comments(bool include_newlines) {
        while (!eof()) {
            const char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || (include_newlines && c == '\n')) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string parse_bare_key() {
        std::string key;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-')) {
            key += peek();
            advance();
        }
        if (key.empty()) fail("expected a key");
        return key;
    }

    TomlValue* enter_table(TomlValue& root) {
        advance();  // '['
        TomlValue* current = &root;
        for (;;) {
            skip_space_and_comments(false);
            const std::string part = parse_bare_key();
            auto [it, inserted] = current->table().try_emplace(part, TomlValue{});
            if (!inserted && !it->second.is_table()) fail("table name collides with a value");
            current = &it->second;
            skip_space_and_comments(false);
            if (eof()) fail("unterminated table header");
            if (peek() == '.') {
                advance();
                continue;
            }
            if (peek() == ']') {
                advance();
                break;
            }
            fail("bad table header");
        }
        return current;
    }

    void parse_key_value(TomlValue& table) {
        const std::string key = parse_bare_key();
        skip_space_and_comments(false);
        if (eof() || peek() != '=') fail("expected '=' after key '" + key + "'");
        advance();
        skip_space_and_comments(false);
        TomlValue value = parse_value();
        if (!table.table().emplace(key, std::move(value)).second)
            fail("duplicate key '" + key + "'");
        skip_space_and_comments(false);
        if (!eof() && peek() != '\n') fail("trailing characters after value of '" + key + "'");
    }

    TomlValue parse_value() {
        if (eof()) fail("expected a value");
        const char c = peek();
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        return parse_scalar();
    }

    TomlValue parse_string() {
        advance();  // opening quote
        std::string s;
        while (!eof() && peek() != '"') {
            if (peek() == '\n') fail("unterminated string");
            if (peek() == '\\') {
                advance();
                if (eof()) fail("unterminated escape");
                switch (peek()) {
                    case 'n': s += '\n'; break;
                    case 't': s += '\t'; break;
                    case '"': s += '"'; break;
                    case '\\': s += '\\'; break;
                    default: fail("unknown escape");
                }
                advance();
            } else {
                s += peek();
                advance();
            }
        }
        if (eof()) fail("unterminated string");
        advance();  // closing quote
        return TomlValue{TomlValue::Storage{std::move(s)}};
    }

    TomlValue parse_array() {
        advance();  // '['
        TomlValue::Array items;
        for (;;) {
            skip_space_and_comments(true);
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                advance();
                break;
            }
            items.push_back(parse_value());
            skip_space_and_comments(true);
            if (eof()) fail("unterminated array");
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == ']') {
                advance();
                break;
            }
            fail("expected ',' or ']' in array");
        }
        return TomlValue{TomlValue::Storage{std::move(items)}};
    }

    TomlValue parse_scalar() {
        std::string token;
        while (!eof()) {
            const char c = peek();
            if (c == '\n' || c == ',' || c == ']' || c == '#' || c == ' ' || c == '\t' || c == '\r')
                break;
            token += c;
            advance();
        }
        if (token == "true") return TomlValue{TomlValue::Storage{true}};
        if (token == "false") return TomlValue{TomlValue::Storage{false}};
        if (token.empty()) fail("expected a value");

        const bool int_like = token.find_first_not_of("+-0123456789") == std::string::npos;
        try {
            std::size_t used = 0;
            if (int_like) {
                const std::int64_t i = std::stoll(token, &used);
                if (used == token.size()) return TomlValue{TomlValue::Storage{i}};
            }
            const double d = std::stod(token, &used);
            if (used != token.size()) fail("bad number '" + token + "'");
            return TomlValue{TomlValue::Storage{d}};
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail("bad value '" + token + "'");
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

const TomlValue* find(const TomlValue::Table& t, const std::string& key) {
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

double get_double(const TomlValue::Table& t, const std::string& key, double fallback) {
    const TomlValue* v = find(t, key);
    return v ? v->as_double() : fallback;
}

int get_int(const TomlValue::Table& t, const std::string& key, int fallback) {
    const TomlValue* v = find(t, key);
    return v ? static_cast<int>(v->as_int()) : fallback;
}

std::string get_string(const TomlValue::Table& t, const std::string& key, std::string fallback) {
    const TomlValue* v = find(t, key);
    return v ? v->as_string() : fallback;
}

std::vector<double> get_double_list(const TomlValue& v) {
    std::vector<double> out;
    for (const auto& item : v.as_array()) out.push_back(item.as_double());
    return out;
}

std::vector<std::vector<double>> get_point_list(const TomlValue& v) {
    std::vector<std::vector<double>> out;
    for (const auto& item : v.as_array()) out.push_back(get_double_list(item));
    return out;
}

} // namespace

TomlValue parse_toml(const std::string& text) { return TomlParser(text).parse(); }

JobConfig job_config_from_toml(const TomlValue& root) {
    JobConfig cfg;
    const auto& top = root.as_table();

    cfg.task = get_string(top, "task", cfg.task);
    if (const TomlValue* v = find(top, "seed")) cfg.seed = static_cast<std::uint64_t>(v->as_int());
    cfg.threads = get_int(top, "threads", cfg.threads);

    if (const TomlValue* out = find(top, "output")) {
        const auto& t = out->as_table();
        cfg.out_dir = get_string(t, "dir", cfg.out_dir);
        cfg.prefix = get_string(t, "prefix", cfg.prefix);
    }
    if (const TomlValue* op = find(top, "operator")) {
        const auto& t = op->as_table();
        cfg.op.preset = get_string(t, "preset", cfg.op.preset);
        cfg.op.n = get_int(t, "n", cfg.op.n);
        cfg.op.m = get_int(t, "m", cfg.op.m);
        cfg.op.nx = get_int(t, "nx", cfg.op.nx);
        cfg.op.ny = get_int(t, "ny", cfg.op.ny);
        cfg.op.h = get_double(t, "h", cfg.op.h);
        cfg.op.coefficient = get_string(t, "coefficient", cfg.op.coefficient);
        cfg.op.coeff_c = get_double(t, "coeff_c", cfg.op.coeff_c);
        cfg.op.coeff_a = get_double(t, "coeff_a", cfg.op.coeff_a);
        cfg.op.coeff_b = get_double(t, "coeff_b", cfg.op.coeff_b);
        cfg.op.bump_center = get_double(t, "bump_center", cfg.op.bump_center);
        cfg.op.bump_width = get_double(t, "bump_width", cfg.op.bump_width);
        if (const TomlValue* p = find(t, "p")) cfg.op.p = get_double_list(*p);
        if (const TomlValue* p2 = find(t, "p2")) cfg.op.p2 = get_double_list(*p2);
        if (const TomlValue* s = find(t, "entries_seed"))
            cfg.op.entries_seed = static_cast<std::uint64_t>(s->as_int());
    }
    if (const TomlValue* bc = find(top, "boundary")) {
        const auto& t = bc->as_table();
        cfg.boundary.kind = get_string(t, "kind", cfg.boundary.kind);
        cfg.boundary.alpha = get_double(t, "alpha", cfg.boundary.alpha);
    }
    if (const TomlValue* grid = find(top, "grid")) {
        const auto& t = grid->as_table();
        if (const TomlValue* x = find(t, "x")) {
            const auto range = get_double_list(*x);
            if (range.size() != 2) throw ConfigError("grid.x must be [lo, hi]");
            cfg.grid.x_lo = range[0];
            cfg.grid.x_hi = range[1];
        }
        if (const TomlValue* y = find(t, "y")) {
            const auto range = get_double_list(*y);
            if (range.size() != 2 || range[0] != 0.0)
                throw ConfigError("grid.y must be [0, hi]; the scan covers the half-plane");
            cfg.grid.y_hi = range[1];
        }
        cfg.grid.nx = get_int(t, "nx", cfg.grid.nx);
        cfg.grid.ny = get_int(t, "ny", cfg.grid.ny);
        cfg.grid.threshold = get_double(t, "threshold", cfg.grid.threshold);
        if (const TomlValue* j = find(t, "j")) cfg.grid.j = get_double_list(*j);
    }
    if (const TomlValue* verify = find(top, "verify")) {
        const auto& t = verify->as_table();
        if (const TomlValue* pts = find(t, "points")) cfg.verify.points = get_point_list(*pts);
        cfg.verify.vectors = get_int(t, "vectors", cfg.verify.vectors);
        cfg.verify.tol_algebraic = get_double(t, "tol_algebraic", cfg.verify.tol_algebraic);
        cfg.verify.tol_boundary = get_double(t, "tol_boundary", cfg.verify.tol_boundary);
        cfg.verify.kernel_angle_tol = get_double(t, "kernel_angle_tol", cfg.verify.kernel_angle_tol);
    }
    if (const TomlValue* series = find(top, "series")) {
        const auto& t = series->as_table();
        if (const TomlValue* c = find(t, "center")) cfg.series.center = get_double_list(*c);
        if (const TomlValue* ts = find(t, "targets")) cfg.series.targets = get_point_list(*ts);
        if (const TomlValue* fr = find(t, "ds_fractions"))
            cfg.series.ds_fractions = get_double_list(*fr);
        cfg.series.terms = get_int(t, "terms", cfg.series.terms);
    }
    if (const TomlValue* kernel = find(top, "kernel")) {
        const auto& t = kernel->as_table();
        if (const TomlValue* pts = find(t, "points")) cfg.kernel.points = get_point_list(*pts);
        cfg.kernel.angle_tol = get_double(t, "angle_tol", cfg.kernel.angle_tol);
    }
    return cfg;
}

JobConfig load_job_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return job_config_from_toml(parse_toml(ss.str()));
}

Json resolved_config_json(const JobConfig& cfg) {
    Json j;
    j["task"] = cfg.task;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["output"] = {{"dir", cfg.out_dir}, {"prefix", cfg.prefix}};
    j["operator"] = {{"preset", cfg.op.preset},
                     {"n", cfg.op.n},
                     {"m", cfg.op.m},
                     {"nx", cfg.op.nx},
                     {"ny", cfg.op.ny},
                     {"h", cfg.op.h},
                     {"coefficient", cfg.op.coefficient},
                     {"coeff_c", cfg.op.coeff_c},
                     {"coeff_a", cfg.op.coeff_a},
                     {"coeff_b", cfg.op.coeff_b},
                     {"bump_center", cfg.op.bump_center},
                     {"bump_width", cfg.op.bump_width},
                     {"p", cfg.op.p},
                     {"p2", cfg.op.p2},
                     {"entries_seed", cfg.op.entries_seed}};
    j["boundary"] = {{"kind", cfg.boundary.kind}, {"alpha", cfg.boundary.alpha}};
    j["grid"] = {{"x", {cfg.grid.x_lo, cfg.grid.x_hi}},
                 {"y", {0.0, cfg.grid.y_hi}},
                 {"nx", cfg.grid.nx},
                 {"ny", cfg.grid.ny},
                 {"j", cfg.grid.j},
                 {"threshold", cfg.grid.threshold}};
    j["verify"] = {{"points", cfg.verify.points},
                   {"vectors", cfg.verify.vectors},
                   {"tol_algebraic", cfg.verify.tol_algebraic},
                   {"tol_boundary", cfg.verify.tol_boundary},
                   {"kernel_angle_tol", cfg.verify.kernel_angle_tol}};
    j["series"] = {{"center", cfg.series.center},
                   {"targets", cfg.series.targets},
                   {"ds_fractions", cfg.series.ds_fractions},
                   {"terms", cfg.series.terms}};
    j["kernel"] = {{"points", cfg.kernel.points}, {"angle_tol", cfg.kernel.angle_tol}};
    return j;
}

Paravector paravector_from_components(int n, const std::vector<double>& comp) {
    if (static_cast<int>(comp.size()) != n + 1)
        throw ConfigError("paravector needs n+1 components, got " + std::to_string(comp.size()));
    return Paravector(n, comp);
}

namespace {

Coefficient coefficient_from(const OperatorConfig& op) {
    if (op.coefficient == "constant") return preset_constant(op.coeff_c);
    if (op.coefficient == "linear") return preset_linear(op.coeff_a, op.coeff_b);
    if (op.coefficient == "bump") return preset_bump(op.bump_center, op.bump_width);
    throw ConfigError("unknown coefficient preset '" + op.coefficient + "'");
}

BcKind bc_kind_from(const BoundaryConfig& bc) {
    if (bc.kind == "dirichlet") return BcKind::dirichlet;
    if (bc.kind == "robin") return BcKind::robin;
    throw ConfigError("unknown boundary kind '" + bc.kind + "'");
}

CliffordOperator dense_random_operator(int n, int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<Multivector> ents;
    ents.reserve(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m * m; ++k) {
        Multivector mv(n);
        for (Mask a = 0; a < static_cast<Mask>(mv.dim()); ++a) mv[a] = unif(rng);
        ents.push_back(std::move(mv));
    }
    return CliffordOperator(n, m, std::move(ents));
}

} // namespace

BuiltModel build_model(const JobConfig& cfg) {
    const auto& op = cfg.op;
    const std::string& kind = cfg.boundary.kind;

    if (op.preset == "gradient_1d" || op.preset == "gradient_2d") {
        const Coefficient a = coefficient_from(op);
        if (op.preset == "gradient_1d") {
            const double h = op.h > 0 ? op.h : 1.0 / (op.m - 1);
            if (kind == "none") {
                GradientModel g = gradient_1d(op.m, h, a, BcKind::dirichlet, cfg.boundary.alpha, op.n);
                return {g.T, BoundarySpec::none(op.n, op.m), "gradient_1d (no boundary conditions)"};
            }
            GradientModel g = gradient_1d(op.m, h, a, bc_kind_from(cfg.boundary), cfg.boundary.alpha, op.n);
            return {g.T, g.spec, g.name};
        }
        const double h = op.h > 0 ? op.h : 1.0 / (op.nx - 1);
        if (kind == "none") {
            GradientModel g = gradient_2d(op.nx, op.ny, h, a, a, BcKind::dirichlet, cfg.boundary.alpha, op.n);
            return {g.T, BoundarySpec::none(op.n, op.nx * op.ny), "gradient_2d (no boundary conditions)"};
        }
        GradientModel g = gradient_2d(op.nx, op.ny, h, a, a, bc_kind_from(cfg.boundary), cfg.boundary.alpha, op.n);
        return {g.T, g.spec, g.name};
    }

    if (kind != "none")
        throw ConfigError("boundary conditions are realized by the gradient presets only; use kind = \"none\" with preset '" +
                          op.preset + "'");

    if (op.preset == "zero")
        return {CliffordOperator::zero(op.n, op.m), BoundarySpec::none(op.n, op.m), "zero operator"};
    if (op.preset == "mult") {
        const Paravector p = paravector_from_components(op.n, op.p);
        return {mult_operator(p, op.m), BoundarySpec::none(op.n, op.m), "left multiplication"};
    }
    if (op.preset == "block_mult") {
        const Paravector p = paravector_from_components(op.n, op.p);
        const Paravector r = paravector_from_components(op.n, op.p2);
        return {block_diag(mult_operator(p, op.m), mult_operator(r, op.m)),
                BoundarySpec::none(op.n, 2 * op.m), "block left multiplication"};
    }
    if (op.preset == "dense_random")
        return {dense_random_operator(op.n, op.m, op.entries_seed), BoundarySpec::none(op.n, op.m),
                "dense random operator"};

    throw ConfigError("unknown operator preset '" + op.preset + "'");
}

} // namespace cliffspec
