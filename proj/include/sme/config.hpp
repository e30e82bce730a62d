#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sme/diagnostics.hpp"

namespace sme {

/// Every experiment setting. Empty model-dependent fields mean "model
/// default"; normalize() replaces them with explicit values.
struct ExperimentConfig {
    // [model]
    std::string model = "threshold";
    std::vector<double> state_lower, state_upper, s0, theta;
    std::uint64_t N = 1000; ///< simulate length
    // [shocks]
    std::string shocks; ///< e.g. "gaussian(0, 0.5)" or "gaussian(0, theta_2)", one call per coordinate
    // [theta_box]
    std::vector<double> theta_lower, theta_upper;
    // [moments]
    std::string moments = "means"; ///< means | mean-variance | custom
    double moment_scale = 1.0;     ///< for means
    std::vector<std::size_t> observable; ///< 1-based; empty means all coordinates
    std::string primitives;        ///< custom: "coordinate(i, scale[, name]); power(i, shift, p[, scale[, name]])"
    std::string derived;           ///< custom: "variance(name, i, j); stddev(name, i, j)" with 1-based primitives
    // [estimation]
    std::string mode = "consistency"; ///< estimate | consistency | volatility-preset
    std::uint64_t estimation_N = 100'000;
    std::vector<std::uint64_t> N_list{4096, 8192, 16384, 32768, 65536, 131072};
    std::string data;                  ///< CSV path; empty means synthetic data at model.theta
    std::vector<std::string> statistics;
    std::string weights = "bootstrap"; ///< bootstrap | uniform | comma list
    std::size_t bootstrap_reps = 200;
    std::vector<double> model_sigma;   ///< volatility-preset input triple
    double horizon_c = 1.0;
    std::uint64_t horizon_cap = 0;     ///< 0 means no cap
    std::size_t levels = 3, points = 11;
    double shrink = 0.2;
    bool polish = false;
    std::string tie_break = "lexicographic";
    std::vector<std::pair<std::size_t, double>> fixed; ///< 1-based index : value
    double floor_tolerance = 1e-3;
    // [diagnostics]
    std::string study = "dominance";
    std::size_t samples = 10'000;
    std::vector<double> kappas{0.4, 0.2, 0.1, 0.05, 0.025};
    double kappa = 0.2;
    double radius = 0.2;
    std::uint64_t sandwich_N = 10'000;
    std::size_t n_seeds = 10, n_theta = 20;
    std::size_t theta_points = 21;
    std::vector<std::uint64_t> ladder{1024, 4096, 16384, 65536, 262144};
    double ulln_tolerance = 0.01, max_slope = -0.3, continuity_tolerance = 0.02;
    std::uint64_t n_oracle = 1'000'000, oracle_burn = 10'000;
    std::size_t replications = 8;
    std::size_t batches = 50;
    double n_se = 4.0;
    std::size_t feller_directions = 4, mc_draws = 10'000;
    double feller_tolerance = 1e-2;
    std::vector<std::size_t> resolutions{9, 17, 33, 65, 129};
    std::size_t state_points = 1024;
    double improvement = 0.75, final_error = 0.05;
    bool approx_estimate = false;
    // [seeds]
    std::uint64_t master_seed = 1;
    std::optional<std::uint64_t> data_seed, sim_seed, oracle_seed, diag_seed;
    // [output]
    std::string directory = "out";
    std::string formats = "csv";

    bool operator==(const ExperimentConfig&) const = default;
};

namespace config_detail {

inline std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> list(const std::string& v, char sep = ',') {
    std::vector<std::string> out;
    if (trim(v).empty()) return out;
    for (auto& c : csv::split(v, sep)) out.push_back(trim(c));
    return out;
}

inline double to_double(const std::string& s, const std::string& key) { return csv::parse_double(trim(s), key); }

inline std::uint64_t to_uint(const std::string& s, const std::string& key) {
    const std::string t = trim(s);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        require(!t.empty() && t[0] != '-', "");
        v = std::stoull(t, &used);
    } catch (...) {
        used = 0;
    }
    require(used == t.size() && used > 0, key + ": expected a nonnegative integer, got '" + t + "'");
    return v;
}

inline bool to_bool(const std::string& s, const std::string& key) {
    const std::string t = trim(s);
    if (t == "true") return true;
    if (t == "false") return false;
    throw Error(key + ": expected true or false, got '" + t + "'");
}

template <class T, class F>
std::vector<T> map_list(const std::string& v, F&& f) {
    std::vector<T> out;
    for (const auto& c : list(v)) out.push_back(f(c));
    return out;
}

template <class T, class F>
std::string join_list(const std::vector<T>& v, F&& f) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
    return s;
}

inline std::string u(std::uint64_t v) { return std::to_string(v); }

/// Shortest text that parses back to the same double.
inline std::string num(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

struct Call {
    std::string name;
    std::vector<std::string> args;
};

/// Parses "f(a, b); g(c)" into calls.
inline std::vector<Call> calls(const std::string& text, const std::string& key) {
    std::vector<Call> out;
    static const std::regex re(R"(^([a-z_]+)\((.*)\)$)");
    for (const auto& item : list(text, ';')) {
        std::smatch m;
        require(std::regex_match(item, m, re), key + ": cannot parse '" + item + "'");
        out.push_back({m[1], list(m[2])});
    }
    return out;
}

struct Field {
    std::string section, key;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

inline std::vector<Field> fields(ExperimentConfig& c) {
    std::vector<Field> f;
    auto str = [&](const char* s, const char* k, std::string& x) {
        f.push_back({s, k, [&x](const std::string& v) { x = trim(v); }, [&x] { return x; }});
    };
    auto dbl = [&](const char* s, const char* k, double& x) {
        const std::string key = std::string(s) + "." + k;
        f.push_back({s, k, [&x, key](const std::string& v) { x = to_double(v, key); }, [&x] { return num(x); }});
    };
    auto uns = [&](const char* s, const char* k, auto& x) {
        const std::string key = std::string(s) + "." + k;
        f.push_back({s, k,
                     [&x, key](const std::string& v) { x = static_cast<std::remove_reference_t<decltype(x)>>(to_uint(v, key)); },
                     [&x] { return u(x); }});
    };
    auto dlist = [&](const char* s, const char* k, std::vector<double>& x) {
        const std::string key = std::string(s) + "." + k;
        f.push_back({s, k,
                     [&x, key](const std::string& v) {
                         x = map_list<double>(v, [&](const std::string& e) { return to_double(e, key); });
                     },
                     [&x] { return join_list(x, [](double d) { return num(d); }); }});
    };
    auto ulist = [&](const char* s, const char* k, auto& x) {
        using T = typename std::remove_reference_t<decltype(x)>::value_type;
        const std::string key = std::string(s) + "." + k;
        f.push_back({s, k,
                     [&x, key](const std::string& v) {
                         x = map_list<T>(v, [&](const std::string& e) { return static_cast<T>(to_uint(e, key)); });
                     },
                     [&x] { return join_list(x, [](T d) { return u(d); }); }});
    };
    auto boolean = [&](const char* s, const char* k, bool& x) {
        const std::string key = std::string(s) + "." + k;
        f.push_back({s, k, [&x, key](const std::string& v) { x = to_bool(v, key); },
                     [&x] { return std::string(x ? "true" : "false"); }});
    };
    auto optseed = [&](const char* k, std::optional<std::uint64_t>& x) {
        const std::string key = std::string("seeds.") + k;
        f.push_back({"seeds", k,
                     [&x, key](const std::string& v) {
                         if (trim(v).empty()) x.reset();
                         else x = to_uint(v, key);
                     },
                     [&x] { return x ? u(*x) : std::string(); }});
    };

    str("model", "id", c.model);
    dlist("model", "state_lower", c.state_lower);
    dlist("model", "state_upper", c.state_upper);
    dlist("model", "s0", c.s0);
    dlist("model", "theta", c.theta);
    uns("model", "N", c.N);
    str("shocks", "coordinates", c.shocks);
    dlist("theta_box", "lower", c.theta_lower);
    dlist("theta_box", "upper", c.theta_upper);
    str("moments", "preset", c.moments);
    dbl("moments", "scale", c.moment_scale);
    ulist("moments", "observable", c.observable);
    str("moments", "primitives", c.primitives);
    str("moments", "derived", c.derived);
    str("estimation", "mode", c.mode);
    uns("estimation", "N", c.estimation_N);
    ulist("estimation", "N_list", c.N_list);
    str("estimation", "data", c.data);
    f.push_back({"estimation", "statistics",
                 [&c](const std::string& v) { c.statistics = list(v); },
                 [&c] { return join_list(c.statistics, [](const std::string& s) { return s; }); }});
    str("estimation", "weights", c.weights);
    uns("estimation", "bootstrap_reps", c.bootstrap_reps);
    dlist("estimation", "model_sigma", c.model_sigma);
    dbl("estimation", "horizon_c", c.horizon_c);
    uns("estimation", "horizon_cap", c.horizon_cap);
    uns("estimation", "levels", c.levels);
    uns("estimation", "points", c.points);
    dbl("estimation", "shrink", c.shrink);
    boolean("estimation", "polish", c.polish);
    str("estimation", "tie_break", c.tie_break);
    f.push_back({"estimation", "fixed",
                 [&c](const std::string& v) {
                     c.fixed.clear();
                     for (const auto& item : list(v)) {
                         const auto parts = list(item, ':');
                         require(parts.size() == 2, "estimation.fixed: expected index:value, got '" + item + "'");
                         const auto i = to_uint(parts[0], "estimation.fixed");
                         require(i >= 1, "estimation.fixed: indices are 1-based");
                         c.fixed.emplace_back(static_cast<std::size_t>(i), to_double(parts[1], "estimation.fixed"));
                     }
                 },
                 [&c] {
                     return join_list(c.fixed, [](const std::pair<std::size_t, double>& p) {
                         return u(p.first) + ":" + num(p.second);
                     });
                 }});
    dbl("estimation", "floor_tolerance", c.floor_tolerance);
    str("diagnostics", "study", c.study);
    uns("diagnostics", "samples", c.samples);
    dlist("diagnostics", "kappas", c.kappas);
    dbl("diagnostics", "kappa", c.kappa);
    dbl("diagnostics", "radius", c.radius);
    uns("diagnostics", "sandwich_N", c.sandwich_N);
    uns("diagnostics", "n_seeds", c.n_seeds);
    uns("diagnostics", "n_theta", c.n_theta);
    uns("diagnostics", "theta_points", c.theta_points);
    ulist("diagnostics", "ladder", c.ladder);
    dbl("diagnostics", "ulln_tolerance", c.ulln_tolerance);
    dbl("diagnostics", "max_slope", c.max_slope);
    dbl("diagnostics", "continuity_tolerance", c.continuity_tolerance);
    uns("diagnostics", "n_oracle", c.n_oracle);
    uns("diagnostics", "oracle_burn", c.oracle_burn);
    uns("diagnostics", "replications", c.replications);
    uns("diagnostics", "batches", c.batches);
    dbl("diagnostics", "n_se", c.n_se);
    uns("diagnostics", "feller_directions", c.feller_directions);
    uns("diagnostics", "mc_draws", c.mc_draws);
    dbl("diagnostics", "feller_tolerance", c.feller_tolerance);
    ulist("diagnostics", "resolutions", c.resolutions);
    uns("diagnostics", "state_points", c.state_points);
    dbl("diagnostics", "improvement", c.improvement);
    dbl("diagnostics", "final_error", c.final_error);
    boolean("diagnostics", "approx_estimate", c.approx_estimate);
    uns("seeds", "master", c.master_seed);
    optseed("data_seed", c.data_seed);
    optseed("sim_seed", c.sim_seed);
    optseed("oracle_seed", c.oracle_seed);
    optseed("diag_seed", c.diag_seed);
    str("output", "directory", c.directory);
    str("output", "formats", c.formats);
    return f;
}

inline std::string coord_str(double v, const std::optional<std::size_t>& link) {
    return link ? "theta_" + std::to_string(*link + 1) : num(v);
}

inline std::string shocks_str(const ShockSpec& s) {
    std::string out;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const auto& c = s.coords()[i];
        if (i) out += "; ";
        switch (c.family) {
        case ShockFamily::uniform:
            out += "uniform(" + num(c.lo) + ", " + num(c.hi) + ")";
            break;
        case ShockFamily::gaussian:
            out += "gaussian(" + coord_str(c.mean, c.mean_theta) + ", " + coord_str(c.sd, c.sd_theta) + ")";
            break;
        case ShockFamily::truncated_gaussian:
            out += "truncated_gaussian(" + coord_str(c.mean, c.mean_theta) + ", " + coord_str(c.sd, c.sd_theta) +
                   ", " + num(c.lo) + ", " + num(c.hi) + ")";
            break;
        }
    }
    return out;
}

inline ShockSpec parse_shocks(const std::string& text) {
    std::vector<ShockCoordinate> out;
    auto value = [](const std::string& a, std::optional<std::size_t>& link) {
        if (a.rfind("theta_", 0) == 0) {
            const auto i = to_uint(a.substr(6), "shocks.coordinates");
            require(i >= 1, "shocks.coordinates: theta links are 1-based");
            link = static_cast<std::size_t>(i - 1);
            return 1.0;
        }
        return to_double(a, "shocks.coordinates");
    };
    for (const auto& c : calls(text, "shocks.coordinates")) {
        std::optional<std::size_t> ml, sl;
        if (c.name == "uniform") {
            require(c.args.size() == 2, "shocks.coordinates: uniform(lo, hi)");
            out.push_back(ShockCoordinate::uniform(to_double(c.args[0], "shocks"), to_double(c.args[1], "shocks")));
            continue;
        }
        if (c.name == "gaussian") {
            require(c.args.size() == 2, "shocks.coordinates: gaussian(mean, sd)");
            const double m = value(c.args[0], ml), s = value(c.args[1], sl);
            out.push_back(ShockCoordinate::gaussian(m, s));
        } else if (c.name == "truncated_gaussian") {
            require(c.args.size() == 4, "shocks.coordinates: truncated_gaussian(mean, sd, lo, hi)");
            const double m = value(c.args[0], ml), s = value(c.args[1], sl);
            out.push_back(ShockCoordinate::truncated_gaussian(m, s, to_double(c.args[2], "shocks"),
                                                              to_double(c.args[3], "shocks")));
        } else {
            throw Error("shocks.coordinates: unknown family '" + c.name + "' (uniform, gaussian, truncated_gaussian)");
        }
        if (ml) out.back().mean_from(*ml);
        if (sl) out.back().sd_from(*sl);
    }
    return ShockSpec(std::move(out));
}

inline std::string primitives_str(const MomentSpec& m) {
    std::string out;
    for (std::size_t j = 0; j < m.size(); ++j) {
        const auto& p = m.primitives()[j];
        if (j) out += "; ";
        if (p.kind == Primitive::Kind::coordinate)
            out += "coordinate(" + u(p.coord + 1) + ", " + num(p.scale) + ", " + p.name + ")";
        else if (p.kind == Primitive::Kind::shifted_power)
            out += "power(" + u(p.coord + 1) + ", " + num(p.shift) + ", " + std::to_string(p.power) + ", " +
                   num(p.scale) + ", " + p.name + ")";
        else
            throw Error("moment primitive '" + p.name + "' cannot be written to a config");
    }
    return out;
}

inline std::string derived_str(const MomentSpec& m) {
    std::string out;
    for (std::size_t j = 0; j < m.derived().size(); ++j) {
        const auto& d = m.derived()[j];
        if (j) out += "; ";
        const char* kind = d.kind == DerivedStat::Kind::mean ? "mean"
                           : d.kind == DerivedStat::Kind::variance ? "variance"
                                                                   : "stddev";
        out += std::string(kind) + "(" + d.name + ", " + u(d.first + 1) + ", " + u(d.second + 1) + ")";
    }
    return out;
}

inline std::size_t coord_index(const std::string& a, std::size_t k, const std::string& key) {
    const auto i = to_uint(a, key);
    require(i >= 1 && i <= k, key + ": coordinate " + a + " out of range 1.." + std::to_string(k));
    return static_cast<std::size_t>(i - 1);
}

} // namespace config_detail

/// Parses INI text. Unknown sections or keys are errors.
inline ExperimentConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    ExperimentConfig cfg;
    auto fields = config_detail::fields(cfg);
    for (const auto& [section, body] : tree) {
        require(body.data().empty(), "config: key '" + section + "' outside any section");
        bool known = false;
        for (const auto& f : fields) known = known || f.section == section;
        require(known, "config: unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            auto it = std::find_if(fields.begin(), fields.end(),
                                   [&](const config_detail::Field& f) { return f.section == section && f.key == key; });
            require(it != fields.end(), "config: unknown key '" + key + "' in [" + section + "]");
            it->set(value.data());
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

/// Canonical INI text with every key written.
inline std::string serialize_config(const ExperimentConfig& c) {
    ExperimentConfig copy = c;
    std::string out, section;
    for (const auto& f : config_detail::fields(copy)) {
        if (f.section != section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += f.key + " = " + f.get() + "\n";
    }
    return out;
}

/// Builds the model with every override applied.
inline MarkovMap build_model(const ExperimentConfig& c) {
    const MarkovMap base = make_zoo_model(c.model);
    const Box box = c.state_lower.empty() && c.state_upper.empty()
                        ? base.state_box()
                        : Box(c.state_lower.empty() ? base.state_box().lower() : c.state_lower,
                              c.state_upper.empty() ? base.state_box().upper() : c.state_upper);
    require_same_dim(base.state_dim(), box.dim(), "model.state_lower/state_upper");
    const ShockSpec shocks = c.shocks.empty() ? base.shocks() : config_detail::parse_shocks(c.shocks);
    require_same_dim(base.shock_dim(), shocks.dim(), "shocks.coordinates");
    const ParameterBox params = c.theta_lower.empty() && c.theta_upper.empty()
                                    ? base.params()
                                    : ParameterBox(c.theta_lower.empty() ? base.params().lower() : c.theta_lower,
                                                   c.theta_upper.empty() ? base.params().upper() : c.theta_upper,
                                                   base.params().names());
    auto info = base.info();
    box.clamp_in_place(info.default_s0);
    for (std::size_t i = 0; i < params.dim(); ++i)
        info.default_theta[i] = std::clamp(info.default_theta[i], params.lower()[i], params.upper()[i]);
    return MarkovMap(box, shocks, params, base.rule(), std::move(info));
}

inline MomentSpec build_moments(const ExperimentConfig& c, const MarkovMap& map) {
    const std::size_t k = map.state_dim();
    std::vector<std::size_t> mask;
    for (std::size_t i : c.observable) mask.push_back(config_detail::coord_index(std::to_string(i), k, "moments.observable"));
    if (mask.empty())
        for (std::size_t i = 0; i < k; ++i) mask.push_back(i);
    if (c.moments == "means") {
        require(c.moment_scale > 0.0, "moments.scale must be > 0");
        std::vector<Primitive> p;
        for (std::size_t i : mask) p.push_back(Primitive::coordinate(i, c.moment_scale));
        MomentSpec m(std::move(p), mask);
        m.validate(map.state_box());
        return m;
    }
    if (c.moments == "mean-variance") {
        auto m = MomentSpec::mean_and_variance(map.state_box(), mask);
        m.validate(map.state_box());
        return m;
    }
    require(c.moments == "custom", "moments.preset: expected means, mean-variance or custom, got '" + c.moments + "'");
    std::vector<Primitive> prims;
    for (const auto& call : config_detail::calls(c.primitives, "moments.primitives")) {
        const auto& a = call.args;
        if (call.name == "coordinate") {
            require(a.size() >= 1 && a.size() <= 3, "moments.primitives: coordinate(i[, scale[, name]])");
            prims.push_back(Primitive::coordinate(config_detail::coord_index(a[0], k, "moments.primitives"),
                                                  a.size() > 1 ? config_detail::to_double(a[1], "moments.primitives") : 1.0,
                                                  a.size() > 2 ? a[2] : std::string()));
        } else if (call.name == "power") {
            require(a.size() >= 3 && a.size() <= 5, "moments.primitives: power(i, shift, p[, scale[, name]])");
            prims.push_back(Primitive::shifted_power(
                config_detail::coord_index(a[0], k, "moments.primitives"),
                config_detail::to_double(a[1], "moments.primitives"),
                static_cast<int>(config_detail::to_uint(a[2], "moments.primitives")),
                a.size() > 3 ? config_detail::to_double(a[3], "moments.primitives") : 1.0,
                a.size() > 4 ? a[4] : std::string()));
        } else {
            throw Error("moments.primitives: unknown primitive '" + call.name + "' (coordinate, power)");
        }
    }
    std::vector<DerivedStat> derived;
    for (const auto& call : config_detail::calls(c.derived, "moments.derived")) {
        require(call.args.size() == 3, "moments.derived: " + call.name + "(name, i, j)");
        DerivedStat::Kind kind;
        if (call.name == "mean") kind = DerivedStat::Kind::mean;
        else if (call.name == "variance") kind = DerivedStat::Kind::variance;
        else if (call.name == "stddev") kind = DerivedStat::Kind::stddev;
        else throw Error("moments.derived: unknown statistic '" + call.name + "' (mean, variance, stddev)");
        const auto i = config_detail::to_uint(call.args[1], "moments.derived");
        const auto j = config_detail::to_uint(call.args[2], "moments.derived");
        require(i >= 1 && j >= 1, "moments.derived: primitive indices are 1-based");
        derived.push_back({call.args[0], kind, static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)});
    }
    MomentSpec m(std::move(prims), mask, std::move(derived));
    m.validate(map.state_box());
    return m;
}

/// Fills every model-dependent default and derived seed explicitly.
/// normalize(normalize(c)) == normalize(c).
inline ExperimentConfig normalize(ExperimentConfig c) {
    const MarkovMap map = build_model(c);
    c.state_lower = map.state_box().lower();
    c.state_upper = map.state_box().upper();
    c.shocks = config_detail::shocks_str(map.shocks());
    c.theta_lower = map.params().lower();
    c.theta_upper = map.params().upper();
    if (c.s0.empty()) c.s0 = map.info().default_s0;
    if (c.theta.empty()) c.theta = map.info().default_theta;
    require_same_dim(map.state_dim(), c.s0.size(), "model.s0");
    require(map.state_box().contains(c.s0), "model.s0 lies outside the state box");
    require_same_dim(map.param_dim(), c.theta.size(), "model.theta");
    for (std::size_t i = 0; i < c.theta.size(); ++i)
        require(c.theta[i] >= map.params().lower()[i] && c.theta[i] <= map.params().upper()[i],
                "model.theta: '" + map.params().names()[i] + "' = " + csv::num(c.theta[i]) +
                    " lies outside the parameter box");
    const MomentSpec m = build_moments(c, map);
    c.moments = "custom";
    c.moment_scale = 1.0;
    c.observable.clear();
    for (std::size_t i : m.observable()) c.observable.push_back(i + 1);
    c.primitives = config_detail::primitives_str(m);
    c.derived = config_detail::derived_str(m);
    if (c.mode == "volatility-preset" && c.weights == "bootstrap") c.weights = "uniform";
    if (!c.data_seed) c.data_seed = derive_seed(c.master_seed, 0x64617461u);
    if (!c.sim_seed) c.sim_seed = derive_seed(c.master_seed, 0x73696du);
    if (!c.oracle_seed) c.oracle_seed = derive_seed(c.master_seed, 0x6f7261u);
    if (!c.diag_seed) c.diag_seed = derive_seed(c.master_seed, 0x64696167u);
    return c;
}

/// Replaces the master seed and re-derives every seed from it.
inline void override_seed(ExperimentConfig& c, std::uint64_t seed) {
    c.master_seed = seed;
    c.data_seed.reset();
    c.sim_seed.reset();
    c.oracle_seed.reset();
    c.diag_seed.reset();
}

} // namespace sme
