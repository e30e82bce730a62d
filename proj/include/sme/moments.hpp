#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sme/csv.hpp"
#include "sme/parallel.hpp"
#include "sme/simulate.hpp"

namespace sme {

/// An increasing, continuous scalar function of the observable state.
struct Primitive {
    enum class Kind { coordinate, shifted_power, minimum, sum };

    Kind kind = Kind::coordinate;
    std::string name;
    std::size_t coord = 0;
    double scale = 1.0; ///< > 0
    double shift = 0.0; ///< shifted_power: must not exceed the box lower bound
    int power = 1;
    std::vector<Primitive> children;

    /// scale * s_i
    static Primitive coordinate(std::size_t i, double scale = 1.0, std::string name = {}) {
        Primitive p;
        p.kind = Kind::coordinate;
        p.coord = i;
        p.scale = scale;
        p.name = name.empty() ? "s_" + std::to_string(i + 1) : std::move(name);
        return p;
    }
    /// scale * (s_i - shift)^power, increasing on the box when shift <= a_i.
    static Primitive shifted_power(std::size_t i, double shift, int power, double scale = 1.0, std::string name = {}) {
        Primitive p;
        p.kind = Kind::shifted_power;
        p.coord = i;
        p.shift = shift;
        p.power = power;
        p.scale = scale;
        p.name = name.empty() ? "pow" + std::to_string(power) + "_s_" + std::to_string(i + 1) : std::move(name);
        return p;
    }
    static Primitive minimum(std::vector<Primitive> parts, std::string name) {
        Primitive p;
        p.kind = Kind::minimum;
        p.children = std::move(parts);
        p.name = std::move(name);
        return p;
    }
    /// scale * sum of children
    static Primitive sum(std::vector<Primitive> parts, std::string name, double scale = 1.0) {
        Primitive p;
        p.kind = Kind::sum;
        p.children = std::move(parts);
        p.scale = scale;
        p.name = std::move(name);
        return p;
    }

    double operator()(std::span<const double> s) const {
        switch (kind) {
        case Kind::coordinate:
            return scale * s[coord];
        case Kind::shifted_power:
            return scale * std::pow(s[coord] - shift, power);
        case Kind::minimum: {
            double v = std::numeric_limits<double>::infinity();
            for (const auto& c : children) v = std::min(v, c(s));
            return v;
        }
        case Kind::sum: {
            double v = 0.0;
            for (const auto& c : children) v += c(s);
            return scale * v;
        }
        }
        return 0.0;
    }

    void collect_coords(std::set<std::size_t>& out) const {
        if (kind == Kind::coordinate || kind == Kind::shifted_power) out.insert(coord);
        for (const auto& c : children) c.collect_coords(out);
    }

    void validate(const Box& box) const {
        switch (kind) {
        case Kind::coordinate:
        case Kind::shifted_power:
            require(coord < box.dim(), "primitive '" + name + "' references coordinate out of range");
            require(scale > 0.0, "primitive '" + name + "' needs a positive scale to be increasing");
            if (kind == Kind::shifted_power) {
                require(power >= 1, "primitive '" + name + "' needs power >= 1");
                require(shift <= box.lower()[coord], "primitive '" + name + "' needs shift <= box lower bound");
            }
            break;
        case Kind::minimum:
        case Kind::sum:
            require(!children.empty(), "primitive '" + name + "' has no parts");
            require(scale > 0.0, "primitive '" + name + "' needs a positive scale");
            for (const auto& c : children) c.validate(box);
            break;
        }
    }
};

/// A statistic computed from the primitive moment vector m.
struct DerivedStat {
    enum class Kind { mean, variance, stddev };
    std::string name;
    Kind kind = Kind::mean;
    std::size_t first = 0;  ///< m[first] (mean, or first moment for variance)
    std::size_t second = 0; ///< m[second] holds the matching second moment

    double eval(std::span<const double> m) const {
        switch (kind) {
        case Kind::mean:
            return m[first];
        case Kind::variance:
            return m[second] - m[first] * m[first];
        case Kind::stddev:
            return std::sqrt(std::max(0.0, m[second] - m[first] * m[first]));
        }
        return 0.0;
    }
};

/// Function of interest f = (f_1..f_p) plus the statistician's view of the state.
class MomentSpec {
public:
    MomentSpec(std::vector<Primitive> primitives, std::vector<std::size_t> observable, std::vector<DerivedStat> derived = {})
        : primitives_(std::move(primitives)), observable_(std::move(observable)), derived_(std::move(derived)) {
        require(!primitives_.empty(), "moment spec needs at least one primitive");
        std::sort(observable_.begin(), observable_.end());
        observable_.erase(std::unique(observable_.begin(), observable_.end()), observable_.end());
        for (const auto& d : derived_)
            require(d.first < primitives_.size() && d.second < primitives_.size(),
                    "derived statistic '" + d.name + "' references a missing primitive");
        std::set<std::string> names;
        for (const auto& n : stat_names()) require(names.insert(n).second, "duplicate statistic name '" + n + "'");
    }

    /// All coordinates observable, one primitive per coordinate.
    static MomentSpec means(const Box& box, double scale = 1.0) {
        std::vector<Primitive> p;
        std::vector<std::size_t> mask;
        for (std::size_t i = 0; i < box.dim(); ++i) {
            p.push_back(Primitive::coordinate(i, scale));
            mask.push_back(i);
        }
        return MomentSpec(std::move(p), std::move(mask));
    }

    /// For each observable coordinate: (s_i - a_i) and (s_i - a_i)^2 plus derived mean/variance/sd.
    static MomentSpec mean_and_variance(const Box& box, std::vector<std::size_t> observable) {
        std::vector<Primitive> p;
        std::vector<DerivedStat> d;
        for (std::size_t i : observable) {
            const std::string c = "s_" + std::to_string(i + 1);
            const double a = box.lower()[i];
            p.push_back(Primitive::shifted_power(i, a, 1, 1.0, "m1_" + c));
            p.push_back(Primitive::shifted_power(i, a, 2, 1.0, "m2_" + c));
            const std::size_t f = p.size() - 2, s = p.size() - 1;
            d.push_back({"var_" + c, DerivedStat::Kind::variance, f, s});
            d.push_back({"sd_" + c, DerivedStat::Kind::stddev, f, s});
        }
        return MomentSpec(std::move(p), std::move(observable), std::move(d));
    }

    const std::vector<Primitive>& primitives() const { return primitives_; }
    const std::vector<std::size_t>& observable() const { return observable_; }
    const std::vector<DerivedStat>& derived() const { return derived_; }
    std::size_t size() const { return primitives_.size(); }

    /// Checks coordinates exist and every primitive reads only observable coordinates.
    void validate(const Box& box) const {
        for (std::size_t i : observable_) require(i < box.dim(), "observable coordinate out of range");
        for (const auto& p : primitives_) {
            p.validate(box);
            std::set<std::size_t> used;
            p.collect_coords(used);
            for (std::size_t c : used)
                require(std::binary_search(observable_.begin(), observable_.end(), c),
                        "primitive '" + p.name + "' reads latent coordinate s_" + std::to_string(c + 1));
        }
    }

    void eval(std::span<const double> s, std::span<double> out) const {
        for (std::size_t j = 0; j < primitives_.size(); ++j) out[j] = primitives_[j](s);
    }

    std::vector<std::string> stat_names() const {
        std::vector<std::string> n;
        for (const auto& p : primitives_) n.push_back(p.name);
        for (const auto& d : derived_) n.push_back(d.name);
        return n;
    }

    /// Primitive values followed by derived statistics.
    std::vector<double> statistics(std::span<const double> m) const {
        std::vector<double> out(m.begin(), m.end());
        for (const auto& d : derived_) out.push_back(d.eval(m));
        return out;
    }

    std::size_t stat_index(const std::string& name) const {
        const auto names = stat_names();
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw Error("unknown statistic '" + name + "'");
        return static_cast<std::size_t>(it - names.begin());
    }

private:
    std::vector<Primitive> primitives_;
    std::vector<std::size_t> observable_;
    std::vector<DerivedStat> derived_;
};

struct MomentVector {
    std::vector<double> values;
    std::size_t n_used = 0;
    std::optional<std::vector<double>> std_errors;
};

/// Running sums of f over a stream of states.
class MomentAccumulator {
public:
    explicit MomentAccumulator(const MomentSpec& spec) : spec_(&spec), sums_(spec.size(), 0.0), buf_(spec.size()) {}

    void add(std::span<const double> s) {
        spec_->eval(s, buf_);
        for (std::size_t j = 0; j < sums_.size(); ++j) sums_[j] += buf_[j];
        ++count_;
    }
    std::size_t count() const { return count_; }
    std::vector<double> mean() const {
        std::vector<double> m(sums_);
        for (double& v : m) v /= static_cast<double>(count_);
        return m;
    }
    MomentVector result() const {
        require(count_ >= 1, "empty moment window");
        return {mean(), count_, std::nullopt};
    }

private:
    const MomentSpec* spec_;
    std::vector<double> sums_;
    std::vector<double> buf_;
    std::size_t count_ = 0;
};

/// Time average of each primitive over n = burn+1..N.
inline MomentVector sample_moments(const Path& path, const MomentSpec& spec, std::size_t burn = 0) {
    require(burn < path.length(), "empty effective window: burn " + std::to_string(burn) + " >= path length " +
                                      std::to_string(path.length()));
    MomentAccumulator acc(spec);
    for (std::size_t n = burn + 1; n <= path.length(); ++n) acc.add(path.state(n));
    return acc.result();
}

/// Simulates and averages without storing the path.
inline MomentVector chain_moments(const MarkovMap& map, const MomentSpec& spec, std::span<const double> s0,
                                  const ShockStream& stream, std::span<const double> theta, std::uint64_t steps,
                                  std::uint64_t burn = 0) {
    require(burn < steps, "empty effective window");
    MomentAccumulator acc(spec);
    run_chain(map, s0, stream, theta, steps, [&](std::uint64_t n, std::span<const double> s, bool) {
        if (n > burn) acc.add(s);
    });
    return acc.result();
}

struct OracleConfig {
    std::uint64_t n_oracle = 1'000'000; ///< total steps per replication, burn included
    std::uint64_t burn = 10'000;
    std::size_t replications = 8;
    std::uint64_t seed = 20240607;
};

struct OracleResult {
    MomentVector moments;                    ///< across-replication mean with standard errors
    std::vector<std::vector<double>> per_rep; ///< replication r -> primitive values
    double spread = 0.0;                     ///< max over primitives of (max - min) across replications
};

/// Initial condition for oracle replication r: lower corner, upper corner, then seeded random points.
inline Point oracle_start(const Box& box, std::uint64_t seed, std::size_t r) {
    if (r == 0) return box.lower_corner();
    if (r == 1) return box.upper_corner();
    UniformSource rng(derive_seed(seed, 0x73746172u), r);
    std::vector<double> s(box.dim());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = rng.uniform(box.lower()[i], box.upper()[i]);
    return Point(std::move(s));
}

/// Approximates E_theta(f) by averaging R independent long runs from R distinct starts.
inline OracleResult oracle_expectation(const MarkovMap& map, const Point& theta, const MomentSpec& spec,
                                       const OracleConfig& cfg) {
    require(cfg.replications >= 2, "oracle needs at least 2 replications");
    require(cfg.burn < cfg.n_oracle, "oracle burn must be smaller than n_oracle");
    map.params().require_contains(theta.view());
    spec.validate(map.state_box());
    const std::size_t R = cfg.replications, p = spec.size();
    OracleResult res;
    res.per_rep.assign(R, std::vector<double>(p));
    parallel_for(R, [&](std::size_t r) {
        const Point s0 = oracle_start(map.state_box(), cfg.seed, r);
        const ShockStream stream(cfg.seed, 1000 + r, map.shock_dim());
        res.per_rep[r] = chain_moments(map, spec, s0.view(), stream, theta.view(), cfg.n_oracle, cfg.burn).values;
    });
    MomentVector mv;
    mv.values.assign(p, 0.0);
    std::vector<double> se(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double lo = res.per_rep[0][j], hi = lo;
        for (std::size_t r = 0; r < R; ++r) {
            mv.values[j] += res.per_rep[r][j];
            lo = std::min(lo, res.per_rep[r][j]);
            hi = std::max(hi, res.per_rep[r][j]);
        }
        mv.values[j] /= static_cast<double>(R);
        double ss = 0.0;
        for (std::size_t r = 0; r < R; ++r) ss += (res.per_rep[r][j] - mv.values[j]) * (res.per_rep[r][j] - mv.values[j]);
        se[j] = std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R));
        res.spread = std::max(res.spread, hi - lo);
    }
    mv.n_used = static_cast<std::size_t>((cfg.n_oracle - cfg.burn) * R);
    mv.std_errors = std::move(se);
    res.moments = std::move(mv);
    return res;
}

/// Latin hypercube sample of n points in the box.
inline std::vector<Point> latin_hypercube(const Box& box, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "latin hypercube needs n >= 1");
    const std::size_t k = box.dim();
    UniformSource rng(seed, 0x6c6873u);
    std::vector<std::vector<double>> cols(k, std::vector<double>(n));
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> perm(n);
        for (std::size_t j = 0; j < n; ++j) perm[j] = j;
        for (std::size_t j = n; j-- > 1;) std::swap(perm[j], perm[rng.below(j + 1)]);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = (static_cast<double>(perm[j]) + rng.next()) / static_cast<double>(n);
            cols[i][j] = box.lower()[i] + (box.upper()[i] - box.lower()[i]) * u;
        }
    }
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> c(k);
        for (std::size_t i = 0; i < k; ++i) c[i] = cols[i][j];
        pts.emplace_back(std::move(c));
    }
    return pts;
}

/// Default support for the max over s: 33-point lattice for k <= 2, else a 1024-point Latin hypercube.
inline std::vector<Point> distance_points(const Box& box, std::uint64_t seed = 1) {
    return box.dim() <= 2 ? lattice_grid(box, 33) : latin_hypercube(box, 1024, seed);
}

struct MapDistance {
    double value = 0.0;
    double std_error = 0.0; ///< Monte-Carlo standard error at the argmax
    Point argmax;
    std::size_t n_points = 0;
    std::size_t mc_draws = 0;
};

/// max_s mean_eps || phi1(s,eps,theta) - phi2(s,eps,theta) ||_max with one
/// shared eps sample for every s.
inline MapDistance map_distance(const MarkovMap& a, const MarkovMap& b, const Point& theta,
                                const std::vector<Point>& s_points, std::size_t mc_draws, std::uint64_t seed) {
    require(!s_points.empty(), "map distance needs at least one state point");
    require(mc_draws >= 1, "map distance needs mc_draws >= 1");
    require_same_dim(a.state_dim(), b.state_dim(), "map distance state");
    require_same_dim(a.shock_dim(), b.shock_dim(), "map distance shock");
    a.params().require_contains(theta.view());
    const std::size_t k = a.state_dim(), e = a.shock_dim();
    const ShockStream stream(seed, 7, e);
    std::vector<double> eps(mc_draws * e);
    {
        Scratch u{};
        for (std::size_t m = 0; m < mc_draws; ++m) {
            stream.fill(m + 1, std::span<double>(u.data(), e));
            a.shocks().transform(std::span<const double>(u.data(), e), theta.view(),
                                 std::span<double>(eps.data() + m * e, e));
        }
    }
    std::vector<double> mean(s_points.size()), se(s_points.size());
    parallel_for(s_points.size(), [&](std::size_t j) {
        Scratch va{}, vb{};
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t m = 0; m < mc_draws; ++m) {
            const std::span<const double> ev(eps.data() + m * e, e);
            a.apply(s_points[j].view(), ev, theta.view(), std::span<double>(va.data(), k));
            b.apply(s_points[j].view(), ev, theta.view(), std::span<double>(vb.data(), k));
            double d = 0.0;
            for (std::size_t i = 0; i < k; ++i) d = std::max(d, std::abs(va[i] - vb[i]));
            sum += d;
            sum2 += d * d;
        }
        const double M = static_cast<double>(mc_draws);
        mean[j] = sum / M;
        se[j] = mc_draws > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / M) / (M - 1.0)) / M) : 0.0;
    });
    MapDistance out;
    std::size_t best = 0;
    for (std::size_t j = 1; j < mean.size(); ++j)
        if (mean[j] > mean[best]) best = j;
    out.value = mean[best];
    out.std_error = se[best];
    out.argmax = s_points[best];
    out.n_points = s_points.size();
    out.mc_draws = mc_draws;
    return out;
}

// ---------------------------------------------------------------------------
// Data series

/// Observed series: one row per period holding every state coordinate
/// (latent coordinates stored as 0 and never read by validated primitives).
struct DataSeries {
    std::size_t dim = 0;
    std::vector<std::size_t> observable;
    std::vector<double> rows;

    std::size_t length() const { return dim == 0 ? 0 : rows.size() / dim; }
    std::span<const double> row(std::size_t n) const { return {rows.data() + (n - 1) * dim, dim}; }
};

inline DataSeries data_from_path(const Path& p, std::vector<std::size_t> observable) {
    DataSeries d{p.dim, std::move(observable), {}};
    d.rows.assign(p.states.size(), 0.0);
    for (std::size_t n = 0; n < p.length(); ++n)
        for (std::size_t i : d.observable) d.rows[n * p.dim + i] = p.states[n * p.dim + i];
    return d;
}

/// Reads a CSV whose header names exactly the observable coordinates, either
/// by model coordinate name or as s_i. A leading `n` column is ignored.
inline DataSeries read_data_csv(std::istream& in, const MarkovMap& map, const std::vector<std::size_t>& observable) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "data file is empty");
    auto header = csv::split(line);
    std::size_t first = 0;
    if (!header.empty() && header[0] == "n") first = 1;
    std::vector<std::size_t> cols;
    for (std::size_t c = first; c < header.size(); ++c) {
        const auto& names = map.info().coord_names;
        std::optional<std::size_t> idx;
        for (std::size_t i = 0; i < map.state_dim(); ++i)
            if (header[c] == names[i] || header[c] == "s_" + std::to_string(i + 1)) idx = i;
        require(idx.has_value(), "data column '" + header[c] + "' is not a coordinate of model '" + map.name() + "'");
        cols.push_back(*idx);
    }
    std::vector<std::size_t> sorted = cols, mask = observable;
    std::sort(sorted.begin(), sorted.end());
    std::sort(mask.begin(), mask.end());
    require(sorted == mask, "data columns do not match the observable mask");
    DataSeries d{map.state_dim(), mask, {}};
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = csv::split(line);
        require(cells.size() == header.size(), "data row " + std::to_string(lineno) + " has the wrong width");
        std::vector<double> row(d.dim, 0.0);
        for (std::size_t c = first; c < cells.size(); ++c) {
            const double v = csv::parse_double(cells[c], "data row " + std::to_string(lineno));
            require(std::isfinite(v), "non-finite value in data row " + std::to_string(lineno));
            row[cols[c - first]] = v;
        }
        d.rows.insert(d.rows.end(), row.begin(), row.end());
    }
    require(d.length() >= 1, "data file has no rows");
    return d;
}

inline DataSeries read_data_csv(const std::string& path, const MarkovMap& map,
                                const std::vector<std::size_t>& observable) {
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open data file '" + path + "'");
    return read_data_csv(f, map, observable);
}

/// (1/N) sum_{n=1..N} f(data_n) over the first N rows.
inline MomentVector data_moments(const DataSeries& d, const MomentSpec& spec, std::size_t N) {
    require(N >= 1 && N <= d.length(), "data window of " + std::to_string(N) + " exceeds " +
                                            std::to_string(d.length()) + " rows");
    MomentAccumulator acc(spec);
    for (std::size_t n = 1; n <= N; ++n) acc.add(d.row(n));
    return acc.result();
}

/// `name,value,std_error` rows for primitives and derived statistics.
inline csv::Table moment_table(const MomentSpec& spec, const MomentVector& m) {
    csv::Table t{{"name", "value", "std_error"}, {}};
    const auto names = spec.stat_names();
    const auto stats = spec.statistics(m.values);
    for (std::size_t j = 0; j < stats.size(); ++j) {
        const bool has_se = m.std_errors && j < m.std_errors->size();
        t.add({names[j], csv::num(stats[j]), has_se ? csv::num((*m.std_errors)[j]) : ""});
    }
    return t;
}

} // namespace sme
