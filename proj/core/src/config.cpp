#include "fracobs/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fracobs {

double example1_u0(double x) { return 0.7 - 0.7 * x * x; }
double example1_psi(double x) { return 0.5 - 2.0 * x * x; }
double example2_u0(double x) { return 1.0 - x * x; }
double example2_psi(double x) {
    const double q = 2.0 * x * x - 0.5;
    return 0.5 - q * q;
}

const char* example_name(ExampleKind k) {
    switch (k) {
        case ExampleKind::Example1: return "example1";
        case ExampleKind::Example2: return "example2";
        case ExampleKind::Custom: return "custom";
    }
    return "?";
}

namespace {

const std::set<std::string> known_keys = {
    "example", "u0", "psi", "u0_values", "psi_values", "psi_boundary",
    "a", "b", "alpha", "N", "gamma", "T", "horizon", "tol", "scheme",
    "truncate_memory", "output_dir"};

[[noreturn]] void fail(const std::string& where, const std::string& why) {
    throw std::invalid_argument("parse_config: " + why +
                                (where.empty() ? "" : " (" + where + ")"));
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    double v = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        fail(where, "expected a number, got '" + t + "'");
    }
    return v;
}

int to_int(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    int v = 0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        fail(where, "expected an integer, got '" + t + "'");
    }
    return v;
}

bool to_bool(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    fail(where, "expected a boolean, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

SchemeKind to_scheme(const std::string& s, const std::string& where) {
    if (s == "S1") return SchemeKind::S1;
    if (s == "S2") return SchemeKind::S2;
    if (s == "S3") return SchemeKind::S3;
    fail(where, "unknown scheme '" + s + "'");
}

// Both document forms funnel through the same string-typed entry point so the
// key set and validation cannot drift apart.
void apply_entry(RunConfig& cfg, const std::string& key, const std::string& value,
                 const std::string& where) {
    if (key == "example") {
        if (value == "example1") cfg.example = ExampleKind::Example1;
        else if (value == "example2") cfg.example = ExampleKind::Example2;
        else if (value == "custom") cfg.example = ExampleKind::Custom;
        else fail(where, "unknown example '" + value + "'");
    } else if (key == "u0") {
        cfg.u0_expr = Expr::parse(value);
    } else if (key == "psi") {
        cfg.psi_expr = Expr::parse(value);
    } else if (key == "u0_values") {
        for (const auto& item : split_list(value)) {
            cfg.u0_values.push_back(to_double(item, where));
        }
    } else if (key == "psi_values") {
        for (const auto& item : split_list(value)) {
            cfg.psi_values.push_back(to_double(item, where));
        }
    } else if (key == "psi_boundary") {
        const auto items = split_list(value);
        if (items.size() != 2) fail(where, "psi_boundary needs exactly two values");
        cfg.psi_boundary = {to_double(items[0], where), to_double(items[1], where)};
    } else if (key == "a") {
        cfg.domain_a = to_double(value, where);
    } else if (key == "b") {
        cfg.domain_b = to_double(value, where);
    } else if (key == "alpha") {
        for (const auto& item : split_list(value)) {
            cfg.alphas.push_back(to_double(item, where));
        }
    } else if (key == "N") {
        for (const auto& item : split_list(value)) {
            cfg.n_intervals.push_back(to_int(item, where));
        }
    } else if (key == "gamma") {
        for (const auto& item : split_list(value)) {
            cfg.gammas.push_back(to_double(item, where));
        }
    } else if (key == "T" || key == "horizon") {
        cfg.horizon = to_double(value, where);
    } else if (key == "tol") {
        cfg.tol = to_double(value, where);
    } else if (key == "scheme") {
        if (value == "all") {
            cfg.schemes = {SchemeKind::S1, SchemeKind::S2, SchemeKind::S3};
        } else {
            for (const auto& item : split_list(value)) {
                cfg.schemes.push_back(to_scheme(item, where));
            }
        }
    } else if (key == "truncate_memory") {
        cfg.truncate_memory = to_bool(value, where);
    } else if (key == "output_dir") {
        cfg.output_dir = value;
    } else {
        fail(where, "unknown key '" + key + "'");
    }
}

void validate(RunConfig& cfg) {
    if (cfg.alphas.empty()) fail("", "missing required key 'alpha'");
    if (cfg.n_intervals.empty()) fail("", "missing required key 'N'");
    if (cfg.gammas.empty()) fail("", "missing required key 'gamma'");
    if (cfg.schemes.empty()) fail("", "missing required key 'scheme'");
    for (double a : cfg.alphas) {
        if (!(a >= 0.0 && a <= 1.0)) fail("key alpha", "alpha outside [0,1]");
    }
    for (int n : cfg.n_intervals) {
        if (n < 2) fail("key N", "N must be >= 2");
    }
    for (double g : cfg.gammas) {
        if (!(g > 0.0)) fail("key gamma", "gamma must be positive");
    }
    if (!(cfg.tol > 0.0)) fail("key tol", "tol must be positive");
    if (cfg.horizon && !(*cfg.horizon > 0.0)) fail("key T", "T must be positive");
    if (!(cfg.domain_b > cfg.domain_a)) fail("key a/b", "domain requires b > a");

    const bool has_custom = cfg.u0_expr || cfg.psi_expr || !cfg.u0_values.empty() ||
                            !cfg.psi_values.empty();
    if (cfg.example == ExampleKind::Custom) {
        if (!cfg.u0_expr && cfg.u0_values.empty()) {
            fail("", "custom example needs 'u0' or 'u0_values'");
        }
        if (!cfg.psi_expr && cfg.psi_values.empty()) {
            fail("", "custom example needs 'psi' or 'psi_values'");
        }
        if (cfg.u0_expr && !cfg.u0_values.empty()) {
            fail("", "'u0' and 'u0_values' are mutually exclusive");
        }
        if (cfg.psi_expr && !cfg.psi_values.empty()) {
            fail("", "'psi' and 'psi_values' are mutually exclusive");
        }
        if (!cfg.u0_values.empty() || !cfg.psi_values.empty()) {
            if (cfg.n_intervals.size() != 1) {
                fail("key N", "tabulated values pin N to a single value");
            }
            const std::size_t n = static_cast<std::size_t>(cfg.n_intervals[0]) - 1;
            if (!cfg.u0_values.empty() && cfg.u0_values.size() != n) {
                fail("key u0_values", "need one value per interior node (N-1)");
            }
            if (!cfg.psi_values.empty() && cfg.psi_values.size() != n) {
                fail("key psi_values", "need one value per interior node (N-1)");
            }
        }
    } else if (has_custom) {
        fail("", "custom u0/psi keys require example=custom");
    }
}

RunConfig parse_flat(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        const std::string where = "line " + std::to_string(line_no);
        if (eq == std::string::npos) fail(where, "expected 'key = value'");
        apply_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), where);
    }
    validate(cfg);
    return cfg;
}

std::string json_scalar_to_string(const nlohmann::json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v.get<double>(),
                                       std::chars_format::general, 17);
        if (ec != std::errc{}) fail(where, "unrepresentable number");
        return std::string(buf, ptr);
    }
    fail(where, "unsupported JSON value type");
}

RunConfig parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail("", std::string("JSON parse failure: ") + e.what());
    }
    if (!doc.is_object()) fail("", "JSON config must be an object");
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        const std::string where = "key " + key;
        if (!known_keys.count(key)) fail(where, "unknown key '" + key + "'");
        if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty()) joined += ",";
                joined += json_scalar_to_string(item, where);
            }
            apply_entry(cfg, key, joined, where);
        } else {
            apply_entry(cfg, key, json_scalar_to_string(value, where), where);
        }
    }
    validate(cfg);
    return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) fail("", "empty document: missing required keys");
    if (t[0] == '{') {
        return parse_json(text);
    }
    return parse_flat(text);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("load_config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace fracobs
