#include "stoplab/config.hpp"

#include "stoplab/error.hpp"
#include "stoplab/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stoplab {

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {
        "g_monotone",          "mu_time_monotone",    "mu_time_monotone_region",
        "condition_iii",       "h_monotone",          "value_time_monotone",
        "boundary_monotone",   "residual_complementarity", "comparison",
        "continuity_scan",     "lsmc_cross",
    };
    return names;
}

namespace {

struct Entry {
    std::string key;
    std::string value;
    bool quoted = false;
    std::size_t line = 0;
};

struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<Entry> entries;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError(line, line ? "line " + std::to_string(line) + ": " + msg : msg);
}

std::vector<Section> tokenize(const std::string& text) {
    std::vector<Section> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        // Strip comments outside quotes.
        bool in_quote = false;
        std::size_t cut = raw.size();
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"') in_quote = !in_quote;
            if (!in_quote && (raw[i] == '#' || raw[i] == ';')) {
                cut = i;
                break;
            }
        }
        if (in_quote) fail(line, "unterminated quoted string");
        const std::string body = trim(std::string_view(raw).substr(0, cut));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') fail(line, "malformed section header");
            out.push_back({trim(std::string_view(body).substr(1, body.size() - 2)), line, {}});
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        if (out.empty()) fail(line, "key outside of any section");
        Entry e;
        e.key = trim(std::string_view(body).substr(0, eq));
        e.value = trim(std::string_view(body).substr(eq + 1));
        e.line = line;
        if (e.key.empty()) fail(line, "missing key");
        if (!e.value.empty() && e.value.front() == '"') {
            if (e.value.size() < 2 || e.value.back() != '"') fail(line, "malformed quoted value");
            e.value = e.value.substr(1, e.value.size() - 2);
            e.quoted = true;
        }
        out.back().entries.push_back(std::move(e));
    }
    return out;
}

double to_double(const Entry& e) {
    double v = 0.0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    if (b != end && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) fail(e.line, "key '" + e.key + "' needs a number, got '" + e.value + "'");
    return v;
}

std::uint64_t to_uint(const Entry& e) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || p != e.value.data() + e.value.size())
        fail(e.line, "key '" + e.key + "' needs a non-negative integer, got '" + e.value + "'");
    return v;
}

bool to_bool(const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(e.line, "key '" + e.key + "' needs true or false");
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

Expr parse_expr(const Entry& e) {
    try {
        return parse(e.value);
    } catch (const ParseError& err) {
        fail(e.line, "in '" + e.key + "': " + err.what());
    }
}

void require_time_only(const Entry& e) {
    if (parse_expr(e).depends_on(Var::x)) fail(e.line, "'" + e.key + "' must be a function of t only");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

const std::set<std::string>& family_keys(const std::string& family) {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"bm_time_drift", {"family", "mu"}},
        {"gbm", {"family", "gamma"}},
        {"brownian_bridge", {"family", "pin"}},
        {"ou_time_mean", {"family", "theta", "mean"}},
        {"filtering", {"family", "prior", "p", "l", "r", "mean", "var", "atoms", "link"}},
    };
    auto it = keys.find(family);
    if (it == keys.end()) throw std::out_of_range(family);
    return it->second;
}

void parse_drift(const Section& sec, RunConfig& cfg) {
    DriftConfig d;
    const Entry* family = nullptr;
    for (const Entry& e : sec.entries)
        if (e.key == "family") family = &e;
    if (!family) fail(sec.line, "[drift] needs a family");
    d.family = family->value;
    const std::set<std::string>* allowed = nullptr;
    try {
        allowed = &family_keys(d.family);
    } catch (const std::out_of_range&) {
        fail(family->line, "unknown drift family '" + d.family + "'");
    }
    std::set<std::string> seen;
    for (const Entry& e : sec.entries) {
        if (!allowed->count(e.key)) fail(e.line, "unknown key '" + e.key + "' for drift family " + d.family);
        if (!seen.insert(e.key).second) fail(e.line, "duplicate key '" + e.key + "'");
        if (e.key == "family") continue;
        if (e.key == "mu") { require_time_only(e); d.mu = e.value; }
        else if (e.key == "gamma") { require_time_only(e); d.gamma = e.value; }
        else if (e.key == "pin") d.pin = to_double(e);
        else if (e.key == "theta") d.theta = to_double(e);
        else if (e.key == "mean" && d.family == "ou_time_mean") { require_time_only(e); d.mean = e.value; }
        else if (e.key == "mean") d.prior_mean = to_double(e);
        else if (e.key == "var") d.prior_var = to_double(e);
        else if (e.key == "prior") d.prior = e.value;
        else if (e.key == "p") d.p = to_double(e);
        else if (e.key == "l") d.l = to_double(e);
        else if (e.key == "r") d.r = to_double(e);
        else if (e.key == "link") {
            if (parse_expr(e).depends_on(Var::t)) fail(e.line, "link must be a function of x only");
            d.link = e.value;
        } else if (e.key == "atoms") {
            for (const std::string& item : split_list(e.value, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) fail(e.line, "atoms are written weight:location");
                Entry w{e.key, trim(item.substr(0, colon)), false, e.line};
                Entry loc{e.key, trim(item.substr(colon + 1)), false, e.line};
                d.atoms.push_back({to_double(w), to_double(loc)});
            }
        }
    }
    auto need = [&](const char* key) {
        if (!seen.count(key)) fail(sec.line, std::string("drift family ") + d.family + " needs '" + key + "'");
    };
    if (d.family == "bm_time_drift") need("mu");
    if (d.family == "gbm") need("gamma");
    if (d.family == "ou_time_mean") need("mean");
    if (d.family == "filtering") {
        need("prior");
        static const std::map<std::string, std::set<std::string>> prior_keys = {
            {"two_point", {"p", "l", "r"}}, {"gaussian", {"mean", "var"}}, {"discrete", {"atoms"}}};
        auto it = prior_keys.find(d.prior);
        if (it == prior_keys.end()) fail(sec.line, "unknown prior '" + d.prior + "'");
        for (const Entry& e : sec.entries) {
            if (e.key == "family" || e.key == "prior" || e.key == "link") continue;
            if (!it->second.count(e.key)) fail(e.line, "key '" + e.key + "' does not apply to prior " + d.prior);
        }
    }
    cfg.problem.drift_family = d;
}

void parse_problem(const Section& sec, RunConfig& cfg) {
    ProblemConfig& p = cfg.problem;
    std::set<std::string> seen;
    for (const Entry& e : sec.entries) {
        if (!seen.insert(e.key).second) fail(e.line, "duplicate key '" + e.key + "'");
        if (e.key == "horizon") p.horizon = to_double(e);
        else if (e.key == "state_space") {
            if (e.value == "real_line") p.state_space = StateSpace::real_line;
            else if (e.value == "positive_half_line") p.state_space = StateSpace::positive_half_line;
            else fail(e.line, "state_space is real_line or positive_half_line");
        } else if (e.key == "orientation") {
            if (e.value == "lower") p.orientation = Orientation::lower;
            else if (e.value == "upper") p.orientation = Orientation::upper;
            else fail(e.line, "orientation is lower or upper");
        } else if (e.key == "drift") { parse_expr(e); p.drift = e.value; }
        else if (e.key == "sigma") {
            if (parse_expr(e).depends_on(Var::t)) fail(e.line, "sigma must not depend on t");
            p.sigma = e.value;
        } else if (e.key == "g") { parse_expr(e); p.g = e.value; }
        else if (e.key == "f") { parse_expr(e); p.f = e.value; }
        else if (e.key == "g_dt") { parse_expr(e); p.g_dt = e.value; }
        else if (e.key == "g_dx") { parse_expr(e); p.g_dx = e.value; }
        else if (e.key == "g_dxx") { parse_expr(e); p.g_dxx = e.value; }
        else if (e.key == "reduce") p.reduce = to_bool(e);
        else if (e.key == "drift_pole") {
            if (e.value == "auto") p.drift_pole = PoleSetting::automatic;
            else if (e.value == "true") p.drift_pole = PoleSetting::yes;
            else if (e.value == "false") p.drift_pole = PoleSetting::no;
            else fail(e.line, "drift_pole is auto, true or false");
        } else fail(e.line, "unknown key '" + e.key + "' in [problem]");
    }
}

void parse_grid(const Section& sec, RunConfig& cfg) {
    std::set<std::string> seen;
    for (const Entry& e : sec.entries) {
        if (!seen.insert(e.key).second) fail(e.line, "duplicate key '" + e.key + "'");
        if (e.key == "nt") cfg.grid.nt = to_uint(e);
        else if (e.key == "nx") cfg.grid.nx = to_uint(e);
        else if (e.key == "x_pad") cfg.grid.x_pad = to_double(e);
        else if (e.key == "x_ref") cfg.grid.x_ref = to_double(e);
        else if (e.key == "theta") cfg.grid.theta = to_double(e);
        else if (e.key == "edge") {
            if (e.value == "obstacle") cfg.grid.edge = EdgeRule::obstacle;
            else if (e.value == "outflow") cfg.grid.edge = EdgeRule::outflow;
            else fail(e.line, "edge is obstacle or outflow");
        } else fail(e.line, "unknown key '" + e.key + "' in [grid]");
    }
}

void parse_simulation(const Section& sec, RunConfig& cfg) {
    SimulationConfig& s = cfg.simulation;
    std::set<std::string> seen;
    for (const Entry& e : sec.entries) {
        if (e.key != "coupling" && !seen.insert(e.key).second) fail(e.line, "duplicate key '" + e.key + "'");
        if (e.key == "n_paths") s.n_paths = to_uint(e);
        else if (e.key == "n_steps") s.n_steps = to_uint(e);
        else if (e.key == "seed") s.seed = to_uint(e);
        else if (e.key == "coupling") {
            const auto parts = split_list(e.value, ' ');
            if (parts.size() != 3) fail(e.line, "coupling is written 'u t x'");
            double v[3];
            for (int i = 0; i < 3; ++i) v[i] = to_double(Entry{e.key, parts[i], false, e.line});
            s.couplings.push_back({v[0], v[1], v[2]});
        } else if (e.key == "region") {
            if (e.value == "everywhere") s.region = RegionChoice::everywhere;
            else if (e.value == "M") s.region = RegionChoice::M;
            else fail(e.line, "region is everywhere or M");
        } else if (e.key == "c_ord") s.c_ord = to_double(e);
        else if (e.key == "lsmc_paths") s.lsmc_paths = to_uint(e);
        else if (e.key == "lsmc_steps") s.lsmc_steps = to_uint(e);
        else if (e.key == "lsmc_degree") s.lsmc_degree = to_uint(e);
        else if (e.key == "dump_paths") s.dump_paths = to_bool(e);
        else if (e.key == "threads") s.threads = to_uint(e);
        else fail(e.line, "unknown key '" + e.key + "' in [simulation]");
    }
}

void parse_checks(const Section& sec, RunConfig& cfg) {
    bool seen = false;
    for (const Entry& e : sec.entries) {
        if (e.key != "run") fail(e.line, "unknown key '" + e.key + "' in [checks]");
        if (seen) fail(e.line, "duplicate key 'run'");
        seen = true;
        cfg.checks = split_list(e.value, ',');
        for (const std::string& c : cfg.checks) {
            const auto& known = known_checks();
            if (std::find(known.begin(), known.end(), c) == known.end())
                fail(e.line, "unknown check '" + c + "'");
        }
    }
}

void parse_output(const Section& sec, RunConfig& cfg) {
    std::set<std::string> seen;
    for (const Entry& e : sec.entries) {
        if (!seen.insert(e.key).second) fail(e.line, "duplicate key '" + e.key + "'");
        if (e.key == "dir") cfg.output.dir = e.value;
        else if (e.key == "formats") {
            cfg.output.formats = split_list(e.value, ',');
            for (const std::string& f : cfg.output.formats)
                if (f != "csv" && f != "json" && f != "txt") fail(e.line, "unknown format '" + f + "'");
        } else fail(e.line, "unknown key '" + e.key + "' in [output]");
    }
}

void parse_run(const Section& sec, RunConfig& cfg) {
    for (const Entry& e : sec.entries) {
        if (e.key != "name") fail(e.line, "unknown key '" + e.key + "' in [run]");
        cfg.name = e.value;
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    const std::vector<Section> sections = tokenize(text);
    std::set<std::string> seen;
    bool have_problem = false;
    for (const Section& sec : sections) {
        if (!seen.insert(sec.name).second) fail(sec.line, "duplicate section [" + sec.name + "]");
        if (sec.name == "run") parse_run(sec, cfg);
        else if (sec.name == "problem") { parse_problem(sec, cfg); have_problem = true; }
        else if (sec.name == "drift") parse_drift(sec, cfg);
        else if (sec.name == "grid") parse_grid(sec, cfg);
        else if (sec.name == "simulation") parse_simulation(sec, cfg);
        else if (sec.name == "checks") parse_checks(sec, cfg);
        else if (sec.name == "output") parse_output(sec, cfg);
        else fail(sec.line, "unknown section [" + sec.name + "]");
    }
    if (!have_problem) fail(0, "missing [problem] section");
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void validate_config(const RunConfig& cfg) {
    const ProblemConfig& p = cfg.problem;
    auto expr_ok = [](const std::string& what, const std::string& text) {
        try {
            return parse(text);
        } catch (const ParseError& e) {
            fail(0, "in '" + what + "': " + e.what());
        }
    };
    if (!(p.horizon > 0.0) || !std::isfinite(p.horizon)) fail(0, "horizon must be finite and positive");
    if (p.drift_family && !p.drift.empty()) fail(0, "give either a drift expression or a [drift] section");
    if (!p.drift_family && p.drift.empty()) fail(0, "problem needs a drift");
    if (!p.drift.empty()) expr_ok("drift", p.drift);
    if (expr_ok("sigma", p.sigma).depends_on(Var::t)) fail(0, "sigma must not depend on t");
    expr_ok("g", p.g);
    if (!p.f.empty()) expr_ok("f", p.f);
    for (const std::string* s : {&p.g_dt, &p.g_dx, &p.g_dxx})
        if (!s->empty()) expr_ok("g partial", *s);
    if (p.drift_family) {
        const DriftConfig& d = *p.drift_family;
        try {
            family_keys(d.family);
        } catch (const std::out_of_range&) {
            fail(0, "unknown drift family '" + d.family + "'");
        }
        if (d.family == "filtering" && d.prior != "two_point" && d.prior != "gaussian" && d.prior != "discrete")
            fail(0, "unknown prior '" + d.prior + "'");
    }
    if (cfg.grid.nt < 2 || cfg.grid.nx < 2) fail(0, "grid needs nt, nx >= 2");
    if (!(cfg.grid.theta >= 0.5 && cfg.grid.theta <= 1.0)) fail(0, "theta must lie in [0.5, 1]");
    if (!(cfg.grid.x_pad > 0.0)) fail(0, "x_pad must be positive");
    if (!cfg.simulation.seed) fail(0, "simulation seed is required");
    if (cfg.simulation.n_steps < 1) fail(0, "n_steps must be at least 1");
    for (const std::string& c : cfg.checks) {
        const auto& known = known_checks();
        if (std::find(known.begin(), known.end(), c) == known.end()) fail(0, "unknown check '" + c + "'");
    }
}

std::string save_config(const RunConfig& cfg) {
    std::ostringstream o;
    const ProblemConfig& p = cfg.problem;
    o << "[run]\nname = " << quote(cfg.name) << "\n\n";
    o << "[problem]\n";
    o << "horizon = " << fmt(p.horizon) << "\n";
    o << "state_space = " << to_string(p.state_space) << "\n";
    o << "orientation = " << to_string(p.orientation) << "\n";
    if (!p.drift.empty()) o << "drift = " << quote(p.drift) << "\n";
    o << "sigma = " << quote(p.sigma) << "\n";
    o << "g = " << quote(p.g) << "\n";
    if (!p.f.empty()) o << "f = " << quote(p.f) << "\n";
    if (!p.g_dt.empty()) o << "g_dt = " << quote(p.g_dt) << "\n";
    if (!p.g_dx.empty()) o << "g_dx = " << quote(p.g_dx) << "\n";
    if (!p.g_dxx.empty()) o << "g_dxx = " << quote(p.g_dxx) << "\n";
    o << "reduce = " << (p.reduce ? "true" : "false") << "\n";
    o << "drift_pole = "
      << (p.drift_pole == PoleSetting::automatic ? "auto" : p.drift_pole == PoleSetting::yes ? "true" : "false")
      << "\n";
    if (p.drift_family) {
        const DriftConfig& d = *p.drift_family;
        o << "\n[drift]\nfamily = " << d.family << "\n";
        if (d.family == "bm_time_drift") o << "mu = " << quote(d.mu) << "\n";
        if (d.family == "gbm") o << "gamma = " << quote(d.gamma) << "\n";
        if (d.family == "brownian_bridge") o << "pin = " << fmt(d.pin) << "\n";
        if (d.family == "ou_time_mean") o << "theta = " << fmt(d.theta) << "\nmean = " << quote(d.mean) << "\n";
        if (d.family == "filtering") {
            o << "prior = " << d.prior << "\n";
            if (d.prior == "two_point") o << "p = " << fmt(d.p) << "\nl = " << fmt(d.l) << "\nr = " << fmt(d.r) << "\n";
            if (d.prior == "gaussian") o << "mean = " << fmt(d.prior_mean) << "\nvar = " << fmt(d.prior_var) << "\n";
            if (d.prior == "discrete") {
                o << "atoms = \"";
                for (std::size_t i = 0; i < d.atoms.size(); ++i)
                    o << (i ? ", " : "") << fmt(d.atoms[i].weight) << ":" << fmt(d.atoms[i].location);
                o << "\"\n";
            }
            if (!d.link.empty()) o << "link = " << quote(d.link) << "\n";
        }
    }
    o << "\n[grid]\nnt = " << cfg.grid.nt << "\nnx = " << cfg.grid.nx << "\nx_pad = " << fmt(cfg.grid.x_pad)
      << "\nx_ref = " << fmt(cfg.grid.x_ref) << "\ntheta = " << fmt(cfg.grid.theta)
      << "\nedge = " << to_string(cfg.grid.edge) << "\n";
    const SimulationConfig& s = cfg.simulation;
    o << "\n[simulation]\nn_paths = " << s.n_paths << "\nn_steps = " << s.n_steps << "\n";
    if (s.seed) o << "seed = " << *s.seed << "\n";
    for (const CouplingConfig& c : s.couplings)
        o << "coupling = " << fmt(c.u) << " " << fmt(c.t) << " " << fmt(c.x) << "\n";
    o << "region = " << (s.region == RegionChoice::M ? "M" : "everywhere") << "\n";
    o << "c_ord = " << fmt(s.c_ord) << "\n";
    o << "lsmc_paths = " << s.lsmc_paths << "\nlsmc_steps = " << s.lsmc_steps << "\nlsmc_degree = " << s.lsmc_degree
      << "\n";
    o << "dump_paths = " << (s.dump_paths ? "true" : "false") << "\nthreads = " << s.threads << "\n";
    o << "\n[checks]\nrun = ";
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) o << (i ? ", " : "") << cfg.checks[i];
    o << "\n\n[output]\ndir = " << quote(cfg.output.dir) << "\nformats = ";
    for (std::size_t i = 0; i < cfg.output.formats.size(); ++i) o << (i ? ", " : "") << cfg.output.formats[i];
    o << "\n";
    return o.str();
}

namespace {

std::shared_ptr<const Expr> shared_expr(const std::string& text) {
    return std::make_shared<const Expr>(parse(text));
}

Prior make_prior(const DriftConfig& d, double horizon) {
    Prior prior;
    if (d.prior == "two_point") prior.kind = TwoPointPrior{d.p, d.l, d.r};
    else if (d.prior == "gaussian") prior.kind = GaussianPrior{d.prior_mean, d.prior_var};
    else prior.kind = DiscretePrior{d.atoms};
    if (!d.link.empty()) {
        auto e = shared_expr(d.link);
        prior.link = [e, horizon](double y) { return e->eval(0.0, y, horizon); };
    }
    return prior;
}

}  // namespace

ProblemSpec build_problem(const RunConfig& cfg) {
    validate_config(cfg);
    const ProblemConfig& p = cfg.problem;
    const double T = p.horizon;
    ProblemSpec spec;
    spec.horizon = T;
    spec.state_space = p.state_space;
    spec.orientation = p.orientation;

    if (p.drift_family) {
        const DriftConfig& d = *p.drift_family;
        DriftFamily fam;
        if (d.family == "bm_time_drift") fam = BmTimeDrift{shared_expr(d.mu)};
        else if (d.family == "gbm") fam = GbmDrift{shared_expr(d.gamma)};
        else if (d.family == "brownian_bridge") fam = BridgeDrift{d.pin};
        else if (d.family == "ou_time_mean") fam = OuTimeMeanDrift{d.theta, shared_expr(d.mean)};
        else fam = FilteringDrift{make_prior(d, T)};
        try {
            spec.drift = make_drift(fam, T);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(0, std::string("drift family ") + d.family + ": " + e.what());
        }
    } else {
        spec.drift = ScalarField::from_expr(shared_expr(p.drift), T);
    }
    if (p.drift_pole == PoleSetting::yes) spec.drift.pole_at_horizon = true;
    if (p.drift_pole == PoleSetting::no) spec.drift.pole_at_horizon = false;

    spec.diffusion = ScalarField::from_expr(shared_expr(p.sigma), T);
    spec.terminal_reward = ScalarField::from_expr(shared_expr(p.g), T);
    auto declared = [T](const std::string& text) -> ScalarField::Fn {
        if (text.empty()) return {};
        auto e = shared_expr(text);
        return [e, T](double t, double x) { return e->eval(t, x, T); };
    };
    spec.terminal_reward.dt = declared(p.g_dt);
    spec.terminal_reward.dx = declared(p.g_dx);
    spec.terminal_reward.dxx = declared(p.g_dxx);
    if (!p.f.empty()) spec.running_reward = ScalarField::from_expr(shared_expr(p.f), T);
    return spec;
}

std::string config_digest(const RunConfig& cfg) {
    RunConfig copy = cfg;
    copy.output.dir.clear();
    copy.simulation.threads = 1;
    const std::string text = save_config(copy);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace stoplab
