#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ciw {

namespace {

struct Entry {
    std::string value;
    int line;
    int col;
};

using Section = std::map<std::string, Entry>;

[[noreturn]] void fail(const std::string& origin, int line, int col, const std::string& msg) {
    throw ConfigError(strformat("%s:%d:%d: %s", origin.c_str(), line, col, msg.c_str()));
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double to_number(const std::string& origin, const Entry& e) {
    try {
        size_t used = 0;
        double v = std::stod(e.value, &used);
        if (used != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        fail(origin, e.line, e.col, strformat("expected a number, got '%s'", e.value.c_str()));
    }
}

long to_integer(const std::string& origin, const Entry& e) {
    double v = to_number(origin, e);
    long l = static_cast<long>(v);
    if (double(l) != v) fail(origin, e.line, e.col, "expected an integer");
    return l;
}

bool to_bool(const std::string& origin, const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(origin, e.line, e.col, "expected true or false");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                fail(origin, lineno, (int)raw.find('[') + 1, "unterminated section header");
            current = trim(t.substr(1, t.size() - 2));
            if (current.empty()) fail(origin, lineno, 1, "empty section name");
            sections[current];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, 1, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, lineno, 1, "empty key");
        if (val.empty()) fail(origin, lineno, (int)eq + 2, "empty value");
        if (current.empty()) fail(origin, lineno, 1, "key outside any section");
        if (sections[current].count(key))
            fail(origin, lineno, 1, strformat("duplicate key '%s'", key.c_str()));
        sections[current][key] = Entry{val, lineno, (int)eq + 2};
    }

    static const std::map<std::string, std::set<std::string>> allowed = {
        {"grid", {"d", "n", "n_t", "T"}},
        {"ledger",
         {"mode", "a", "b", "beta", "eps", "lambda", "delta_next", "ell", "ell_t", "tau", "sigma",
          "alpha", "mu", "nu", "p", "s"}},
        {"scenario", {"name", "steps", "mode"}},
        {"pressure", {"law", "A", "gamma"}},
        {"output", {"dir", "seed", "dump_fields"}},
    };
    for (const auto& [name, sec] : sections) {
        auto it = allowed.find(name);
        if (it == allowed.end()) throw ConfigError(origin + ": unknown section [" + name + "]");
        for (const auto& [key, e] : sec)
            if (!it->second.count(key))
                fail(origin, e.line, e.col,
                     strformat("unknown key '%s' in section [%s]", key.c_str(), name.c_str()));
    }

    RunConfig cfg;
    auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };

    if (auto* e = get("grid", "d")) cfg.d = (int)to_integer(origin, *e);
    if (auto* e = get("grid", "n")) cfg.n = (int)to_integer(origin, *e);
    if (auto* e = get("grid", "n_t")) cfg.nt = (int)to_integer(origin, *e);
    if (auto* e = get("grid", "T")) cfg.T = to_number(origin, *e);

    if (auto* e = get("ledger", "mode")) {
        if (e->value == "paper")
            cfg.ledger.mode = LedgerMode::paper;
        else if (e->value == "desk")
            cfg.ledger.mode = LedgerMode::desk;
        else
            fail(origin, e->line, e->col, "mode must be paper or desk");
    }
    if (auto* e = get("ledger", "a")) cfg.ledger.a = to_number(origin, *e);
    if (auto* e = get("ledger", "b")) cfg.ledger.b = to_number(origin, *e);
    if (auto* e = get("ledger", "beta")) cfg.ledger.beta = to_number(origin, *e);
    if (auto* e = get("ledger", "eps")) cfg.ledger.eps = to_number(origin, *e);
    if (auto* e = get("ledger", "lambda")) cfg.ledger.lambda = to_integer(origin, *e);
    if (auto* e = get("ledger", "delta_next")) cfg.ledger.delta_next = to_number(origin, *e);
    if (auto* e = get("ledger", "ell")) cfg.ledger.ell_x = to_number(origin, *e);
    if (auto* e = get("ledger", "ell_t")) cfg.ledger.ell_t = to_number(origin, *e);
    if (auto* e = get("ledger", "tau")) cfg.ledger.tau = to_number(origin, *e);
    if (auto* e = get("ledger", "sigma")) cfg.ledger.sigma = (int)to_integer(origin, *e);
    if (auto* e = get("ledger", "alpha")) cfg.ledger.alpha = to_number(origin, *e);
    if (auto* e = get("ledger", "mu")) cfg.ledger.mu = to_number(origin, *e);
    if (auto* e = get("ledger", "nu")) cfg.ledger.nu = to_number(origin, *e);
    if (auto* e = get("ledger", "p")) cfg.ledger.p_exp = to_number(origin, *e);
    if (auto* e = get("ledger", "s")) cfg.ledger.s_exp = to_number(origin, *e);

    if (auto* e = get("scenario", "name")) {
        static const std::set<std::string> names = {"verify-identities", "iterate",
                                                    "scaling-laws", "geometry",
                                                    "euler-viscosity-limit"};
        if (!names.count(e->value))
            fail(origin, e->line, e->col,
                 strformat("unknown scenario '%s'", e->value.c_str()));
        cfg.scenario = e->value;
    }
    if (auto* e = get("scenario", "steps")) cfg.steps = (int)to_integer(origin, *e);
    if (auto* e = get("scenario", "mode")) {
        if (e->value == "compressible")
            cfg.mode = FlowMode::compressible;
        else if (e->value == "incompressible")
            cfg.mode = FlowMode::incompressible;
        else
            fail(origin, e->line, e->col, "mode must be compressible or incompressible");
    }

    if (auto* e = get("pressure", "law")) {
        if (e->value != "polytropic")
            fail(origin, e->line, e->col, "only the polytropic law is built in");
        cfg.pressure_law = e->value;
    }
    if (auto* e = get("pressure", "A")) cfg.ledger.pressure.A = to_number(origin, *e);
    if (auto* e = get("pressure", "gamma")) cfg.ledger.pressure.gamma = to_number(origin, *e);

    if (auto* e = get("output", "dir")) cfg.out_dir = e->value;
    if (auto* e = get("output", "seed")) cfg.seed = (std::uint64_t)to_integer(origin, *e);
    if (auto* e = get("output", "dump_fields")) cfg.dump_fields = to_bool(origin, *e);

    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace ciw
