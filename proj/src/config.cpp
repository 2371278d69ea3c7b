#include "degcalc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (std::size_t start = 0;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

struct Entry {
    std::string value;
    int line;
};

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> e) : entries_(std::move(e)) {}

    bool has(const std::string& key) const { return entries_.contains(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError("key '" + key + "' (line " + std::to_string(entries_.at(key).line) + "): " + what);
    }

    const std::string& raw(const std::string& key) {
        used_.insert(key);
        return entries_.at(key).value;
    }

    double real(const std::string& key, double lo, double hi) {
        const std::string& v = raw(key);
        double x = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) fail(key, "expected a number");
        if (x < lo || x > hi) fail(key, "out of range [" + fmt(lo) + ", " + fmt(hi) + "]");
        return x;
    }

    int integer(const std::string& key, int lo, int hi) {
        return parse_int(key, raw(key), lo, hi);
    }

    std::vector<int> integers(const std::string& key, int lo, int hi) {
        std::vector<int> out;
        for (auto part : split(raw(key), ',')) out.push_back(parse_int(key, part, lo, hi));
        return out;
    }

    std::vector<double> reals(const std::string& key, double lo, double hi) {
        std::vector<double> out;
        for (auto part : split(raw(key), ',')) {
            double x = 0;
            const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
            if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(x))
                fail(key, "expected a list of numbers");
            if (x < lo || x > hi) fail(key, "value " + fmt(x) + " out of range [" + fmt(lo) + ", " + fmt(hi) + "]");
            out.push_back(x);
        }
        return out;
    }

    Exponent exponent(const std::string& key, double lo, double hi) {
        Exponent e = 0;
        try {
            e = Exponent::parse(raw(key));
        } catch (const ConfigError& err) {
            fail(key, err.what());
        }
        if (e.value() < lo || e.value() > hi) fail(key, "out of range [" + fmt(lo) + ", " + fmt(hi) + "]");
        return e;
    }

    RadialFunction terms(const std::string& key, Domain d) {
        try {
            return parse_terms(raw(key), d);
        } catch (const ConfigError& err) {
            fail(key, err.what());
        }
    }

    void reject_unused() const {
        for (const auto& [k, e] : entries_)
            if (!used_.contains(k))
                throw ConfigError("unknown key '" + k + "' (line " + std::to_string(e.line) + ")");
    }

private:
    static std::string fmt(double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }

    int parse_int(const std::string& key, std::string_view v, int lo, int hi) const {
        long long x = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) fail(key, "expected an integer");
        if (x < lo || x > hi) fail(key, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return static_cast<int>(x);
    }

    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

constexpr double kMaxS = 700.0;

// Decimal or n/d.
std::optional<double> parse_coefficient(std::string_view t) {
    if (t.empty()) return std::nullopt;
    double c = 0;
    if (t.find('/') != std::string_view::npos) {
        try {
            c = Exponent::parse(t).value();
        } catch (const std::exception&) {
            return std::nullopt;
        }
    } else {
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), c);
        if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    }
    if (!std::isfinite(c)) return std::nullopt;
    return c;
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
        case Command::classify: return "classify";
        case Command::membership: return "membership";
        case Command::flow: return "flow";
        case Command::spectrum: return "spectrum";
        case Command::parametrix: return "parametrix";
        case Command::resolvent: return "resolvent";
        case Command::selftest: return "selftest";
    }
    return "?";
}

Command parse_command(std::string_view name) {
    for (Command c : {Command::classify, Command::membership, Command::flow, Command::spectrum, Command::parametrix,
                      Command::resolvent, Command::selftest})
        if (name == to_string(c)) return c;
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

RadialFunction parse_terms(std::string_view text, Domain domain) {
    text = trim(text);
    if (text.empty()) throw ConfigError("empty term list");
    if (text.front() != '(') {
        const auto c = parse_coefficient(text);
        if (!c) throw ConfigError("expected a constant or (coeff, p, q) triples");
        return RadialFunction::constant(*c, domain);
    }
    std::vector<Term> terms;
    for (auto item : split(text, ';')) {
        if (item.size() < 2 || item.front() != '(' || item.back() != ')')
            throw ConfigError("malformed term '" + std::string(item) + "'");
        const auto parts = split(item.substr(1, item.size() - 2), ',');
        if (parts.size() != 3) throw ConfigError("term '" + std::string(item) + "' needs (coeff, p, q)");
        const auto c = parse_coefficient(parts[0]);
        if (!c) throw ConfigError("malformed coefficient '" + std::string(parts[0]) + "'");
        terms.push_back({Exponent::parse(parts[1]), Exponent::parse(parts[2]), *c});
    }
    return RadialFunction::from_terms(std::move(terms), domain);
}

RunConfig parse_config(std::string_view text) {
    static const std::map<std::string, std::vector<std::string>> schema{
        {"run", {"command"}},
        {"problem", {"preset", "n", "gamma", "gamma_prime", "potential", "l"}},
        {"grid", {"s_min", "s_max", "points"}},
        {"solve", {"num_eigs", "tolerance", "max_iterations"}},
        {"flow", {"weight", "domain", "s", "x_min", "x_max", "samples"}},
        {"membership", {"prefactor_scale"}},
        {"parametrix", {"orders", "cutoffs", "centers", "points", "length", "prefactor_scale", "band"}},
        {"resolvent", {"z_re", "z_im", "s_min", "s_max", "points", "prefactor_scale"}},
        {"output", {"path"}},
    };
    std::map<std::string, Entry> entries;
    std::string section = "run";
    int lineno = 0;
    for (auto line : split(text, '\n')) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != line.npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema.contains(section))
                throw ConfigError("unknown section [" + section + "] (line " + std::to_string(lineno) + ")");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == line.npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = std::string(trim(line.substr(0, eq)));
        const std::string full = section + "." + key;
        const auto& keys = schema.at(section);
        if (key.empty() || std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown key '" + full + "' (line " + std::to_string(lineno) + ")");
        if (entries.contains(full)) throw ConfigError("duplicate key '" + full + "' (line " + std::to_string(lineno) + ")");
        entries.emplace(full, Entry{std::string(trim(line.substr(eq + 1))), lineno});
    }

    Reader r(std::move(entries));
    RunConfig cfg;
    if (r.has("run.command")) {
        try {
            cfg.command = parse_command(r.raw("run.command"));
        } catch (const ConfigError& e) {
            r.fail("run.command", e.what());
        }
    }

    auto& p = cfg.problem;
    if (r.has("problem.preset")) {
        const std::string& v = r.raw("problem.preset");
        if (v == "hydrogen")
            p = SchrodingerProblem::hydrogen();
        else if (v == "oscillator")
            p = SchrodingerProblem::oscillator();
        else
            r.fail("problem.preset", "expected hydrogen or oscillator");
    }
    if (r.has("problem.n")) p.n = r.integer("problem.n", 2, 64);
    if (r.has("problem.gamma")) p.gamma = r.exponent("problem.gamma", -10, 10);
    if (r.has("problem.gamma_prime")) p.gamma_prime = r.exponent("problem.gamma_prime", -10, 10);
    if (r.has("problem.potential")) p.V0 = r.terms("problem.potential", Domain::half_line);
    if (r.has("problem.l")) cfg.l_values = r.integers("problem.l", 0, 1000);
    p.l = cfg.l_values.front();
    try {
        p.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("problem block: ") + e.what());
    }

    if (r.has("grid.s_min")) cfg.grid.s_min = r.real("grid.s_min", -kMaxS, kMaxS);
    if (r.has("grid.s_max")) cfg.grid.s_max = r.real("grid.s_max", -kMaxS, kMaxS);
    if (r.has("grid.points")) cfg.grid.points = r.integer("grid.points", 5, 10'000'000);
    if (!(cfg.grid.s_min < cfg.grid.s_max)) throw ConfigError("grid block: s_min must be below s_max");

    if (r.has("solve.num_eigs")) cfg.solve.num_eigs = r.integer("solve.num_eigs", 1, 1000);
    if (r.has("solve.tolerance")) cfg.solve.tolerance = r.real("solve.tolerance", 1e-15, 1e-1);
    if (r.has("solve.max_iterations")) cfg.solve.max_iterations = r.integer("solve.max_iterations", 1, 100000);
    if (cfg.solve.num_eigs > cfg.grid.points - 2) throw ConfigError("solve.num_eigs exceeds the interior grid size");

    Domain flow_domain = Domain::half_line;
    if (r.has("flow.domain")) {
        const std::string& v = r.raw("flow.domain");
        if (v == "unit_interval")
            flow_domain = Domain::unit_interval;
        else if (v != "half_line")
            r.fail("flow.domain", "expected half_line or unit_interval");
    }
    cfg.flow.weight = RadialFunction::power(1, flow_domain);
    if (r.has("flow.weight")) cfg.flow.weight = r.terms("flow.weight", flow_domain);
    if (r.has("flow.s")) cfg.flow.s_values = r.reals("flow.s", -kMaxS, kMaxS);
    if (flow_domain == Domain::unit_interval) {
        cfg.flow.x_min = 1e-3;
        cfg.flow.x_max = 1 - 1e-3;
    }
    const double x_hi = flow_domain == Domain::unit_interval ? 1.0 : 1e300;
    if (r.has("flow.x_min")) cfg.flow.x_min = r.real("flow.x_min", 1e-300, x_hi);
    if (r.has("flow.x_max")) cfg.flow.x_max = r.real("flow.x_max", 1e-300, x_hi);
    if (r.has("flow.samples")) cfg.flow.samples = r.integer("flow.samples", 1, 1'000'000);
    if (!(cfg.flow.x_min < cfg.flow.x_max)) throw ConfigError("flow block: x_min must be below x_max");

    if (r.has("membership.prefactor_scale"))
        cfg.membership_scale = r.exponent("membership.prefactor_scale", 0, 8);

    auto& pp = cfg.parametrix;
    if (r.has("parametrix.orders")) pp.orders = r.integers("parametrix.orders", 0, 6);
    if (r.has("parametrix.cutoffs")) pp.cutoffs = r.reals("parametrix.cutoffs", 1e-3, 1e4);
    if (r.has("parametrix.centers")) pp.centers = r.reals("parametrix.centers", -1e3, 1e3);
    if (r.has("parametrix.points")) pp.points = r.integer("parametrix.points", 16, 2048);
    if (r.has("parametrix.length")) pp.length = r.real("parametrix.length", 1e-3, 1e3);
    if (r.has("parametrix.prefactor_scale")) pp.prefactor_scale = r.exponent("parametrix.prefactor_scale", 0, 8);
    if (r.has("parametrix.band")) pp.conjugation_band = r.real("parametrix.band", 1e-3, 1e3);
    if (pp.points % 2 != 0) throw ConfigError("parametrix.points must be even");

    auto& rp = cfg.resolvent;
    double z_re = rp.z.real(), z_im = rp.z.imag();
    if (r.has("resolvent.z_re")) z_re = r.real("resolvent.z_re", -1e12, 1e12);
    if (r.has("resolvent.z_im")) z_im = r.real("resolvent.z_im", -1e12, 1e12);
    rp.z = {z_re, z_im};
    if (r.has("resolvent.s_min")) rp.grid.s_min = r.real("resolvent.s_min", -kMaxS, kMaxS);
    if (r.has("resolvent.s_max")) rp.grid.s_max = r.real("resolvent.s_max", -kMaxS, kMaxS);
    if (r.has("resolvent.points")) rp.grid.points = r.integer("resolvent.points", 5, 200'000);
    if (r.has("resolvent.prefactor_scale")) rp.prefactor_scale = r.exponent("resolvent.prefactor_scale", 0, 8);
    if (!(rp.grid.s_min < rp.grid.s_max)) throw ConfigError("resolvent block: s_min must be below s_max");

    if (r.has("output.path")) {
        cfg.output_path = r.raw("output.path");
        if (cfg.output_path->empty()) r.fail("output.path", "empty path");
    }
    r.reject_unused();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

}  // namespace degcalc
