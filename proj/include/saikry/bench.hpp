#ifndef SAIKRY_BENCH_HPP
#define SAIKRY_BENCH_HPP

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "saikry/problems.hpp"
#include "saikry/shift_opt.hpp"

namespace saikry {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string problem = "conv_diff";  // conv_diff | aniso
    int n = 200;
    double peclet = 1000.0;
    double lambda = 5000.0;
    double theta = M_PI / 4.0;
    double t = 1e-4;
    double tol = 1e-6;
    int max_iters = 600;
    std::string strategy = "fixed";  // fixed | optimize_and_run | incremental
    std::optional<double> fixed_delta;
    double interval_lo = 0.01;
    std::optional<double> interval_hi;
    int K = 25;
    int N = 1;
    int num_vectors = 20;
    std::uint64_t seed = 0;
    double brent_tol = 1e-5;
    double covariance_scale = 0.05;
    std::string output;

    double fixed_delta_value() const {
        return fixed_delta ? *fixed_delta : (problem == "aniso" ? 0.07 : 0.1);
    }
    double interval_hi_value() const {
        return interval_hi ? *interval_hi : (problem == "aniso" ? 0.07 : 0.1);
    }

    void validate() const {
        if (problem != "conv_diff" && problem != "aniso")
            throw ConfigError("unknown problem: " + problem);
        if (strategy != "fixed" && strategy != "optimize_and_run" && strategy != "incremental")
            throw ConfigError("unknown strategy: " + strategy);
        if (n < 3) throw ConfigError("n must be >= 3");
        if (!(t > 0.0)) throw ConfigError("t must be positive");
        if (!(tol > 0.0)) throw ConfigError("tol must be positive");
        if (max_iters < 1) throw ConfigError("max_iters must be positive");
        if (K < 1 || N < 1) throw ConfigError("K and N must be positive");
        if (num_vectors < 0) throw ConfigError("num_vectors must be non-negative");
        if (!(interval_lo > 0.0) || !(interval_lo < interval_hi_value()))
            throw ConfigError("search interval must satisfy 0 < lo < hi");
    }

    SparseMatrix build_matrix() const {
        if (problem == "aniso") return build_aniso(AnisoSpec{n, lambda, theta});
        return build_convdiff(ConvDiffSpec{n, peclet});
    }
    Grid2D grid() const {
        return problem == "aniso" ? AnisoSpec{n, lambda, theta}.grid()
                                  : ConvDiffSpec{n, peclet}.grid();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": " + v);
    }
}

inline long parse_long(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": " + v);
    }
}

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, static_cast<size_t>(ptr - buf));
}

}  // namespace detail

inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "problem") cfg.problem = value;
    else if (key == "n") cfg.n = static_cast<int>(detail::parse_long(key, value));
    else if (key == "peclet") cfg.peclet = detail::parse_double(key, value);
    else if (key == "lambda") cfg.lambda = detail::parse_double(key, value);
    else if (key == "theta") cfg.theta = detail::parse_double(key, value);
    else if (key == "t") cfg.t = detail::parse_double(key, value);
    else if (key == "tol") cfg.tol = detail::parse_double(key, value);
    else if (key == "max_iters") cfg.max_iters = static_cast<int>(detail::parse_long(key, value));
    else if (key == "strategy") cfg.strategy = value;
    else if (key == "fixed_delta") cfg.fixed_delta = detail::parse_double(key, value);
    else if (key == "interval_lo") cfg.interval_lo = detail::parse_double(key, value);
    else if (key == "interval_hi") cfg.interval_hi = detail::parse_double(key, value);
    else if (key == "K") cfg.K = static_cast<int>(detail::parse_long(key, value));
    else if (key == "N") cfg.N = static_cast<int>(detail::parse_long(key, value));
    else if (key == "num_vectors") cfg.num_vectors = static_cast<int>(detail::parse_long(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_long(key, value));
    else if (key == "brent_tol") cfg.brent_tol = detail::parse_double(key, value);
    else if (key == "covariance_scale") cfg.covariance_scale = detail::parse_double(key, value);
    else if (key == "output") cfg.output = value;
    else throw ConfigError("unknown config key: " + key);
}

/// Flat `key = value` config text, `#` comments.
inline RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value, got: " + line);
        apply_config_entry(cfg, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    return parse_config(is);
}

struct BenchRecord {
    int vector_index = 0;
    double delta_used = 0.0;
    int arnoldi_iters = 0;
    int lu_count = 0;  // cumulative sparse LU factorizations so far
    double wall_time_s = 0.0;
    double residual_norm = 0.0;
    double cumulative_time_s = 0.0;

    bool operator==(const BenchRecord&) const = default;
};

struct BenchSummary {
    std::string problem;
    int n = 0;
    double t = 0.0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::string strategy;
    int num_vectors = 0;
    double mean_arnoldi_iters = 0.0;
    long total_arnoldi_iters = 0;
    int total_lu = 0;
    double total_time_s = 0.0;
    std::optional<double> delta_star;
    std::optional<int> brent_evals;
    std::optional<int> phase1_length;
    std::vector<int> unconverged;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    BenchSummary summary;
};

inline constexpr const char* kCsvHeader =
    "vector_index,delta_used,arnoldi_iters,lu_count,wall_time_s,residual_norm,cumulative_time_s";

namespace detail {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Runs one strategy over num_vectors seeded initial states. Timing covers
/// the solve pipeline only (factorizations, optimization, Krylov runs);
/// matrix and vector construction are excluded.
inline BenchResult run_benchmark(const RunConfig& cfg) {
    cfg.validate();
    const SparseMatrix A = cfg.build_matrix();
    const Grid2D grid = cfg.grid();
    const int M = cfg.num_vectors;

    // The stream plus, for optimize_and_run, N trailing trial vectors.
    const int extra = cfg.strategy == "optimize_and_run" ? cfg.N : 0;
    InitialStateSpec states_spec{cfg.seed, cfg.covariance_scale, M + extra};
    std::vector<std::vector<double>> vectors = gaussian_states(states_spec, grid);

    BenchResult out;
    BenchSummary& sum = out.summary;
    sum.problem = cfg.problem;
    sum.n = cfg.n;
    sum.t = cfg.t;
    sum.tol = cfg.tol;
    sum.seed = cfg.seed;
    sum.strategy = cfg.strategy;
    sum.num_vectors = M;

    double cumulative = 0.0;
    int lu_count = 0;
    auto push_vector_record = [&](int index, double delta, const KrylovOutcome& o, double dt) {
        cumulative += dt;
        out.records.push_back(BenchRecord{index, delta, o.iterations, lu_count, dt,
                                          o.residual_norm, cumulative});
        sum.total_arnoldi_iters += o.iterations;
        if (!o.converged) sum.unconverged.push_back(index);
    };

    if (cfg.strategy == "fixed") {
        const double delta = cfg.fixed_delta_value();
        detail::Stopwatch lu_timer;
        LuFactorization lu(A, delta * cfg.t);
        cumulative += lu_timer.seconds();
        lu_count = 1;
        SaiParams p{delta * cfg.t, cfg.t, cfg.tol, cfg.max_iters};
        for (int i = 0; i < M; ++i) {
            detail::Stopwatch timer;
            KrylovOutcome o = sai_expmv(A, lu, vectors[static_cast<size_t>(i)], p);
            push_vector_record(i + 1, delta, o, timer.seconds());
        }
    } else if (cfg.strategy == "optimize_and_run") {
        OptimizeConfig ocfg;
        ocfg.trial_vectors.assign(vectors.end() - cfg.N, vectors.end());
        ocfg.fixed_iters = cfg.K;
        ocfg.tol = cfg.tol;
        ocfg.t = cfg.t;
        ocfg.brent_tol = cfg.brent_tol;

        long opt_iters = 0;
        SaiParams op{0.0, cfg.t, cfg.tol, cfg.K};
        auto objective = [&](double d) {
            op.gamma = d * cfg.t;
            LuFactorization lu(A, op.gamma);
            ++lu_count;
            double s = 0.0;
            for (const auto& x : ocfg.trial_vectors) {
                KrylovOutcome o = sai_expmv(A, lu, x, op);
                s += o.residual_norm;
                opt_iters += o.iterations;
            }
            return s / static_cast<double>(cfg.N);
        };
        detail::Stopwatch opt_timer;
        const BrentResult br = brent_minimize(objective, cfg.interval_lo, cfg.interval_hi_value(),
                                              cfg.brent_tol, ocfg.max_brent_iters);
        const double opt_time = opt_timer.seconds();
        cumulative = opt_time;
        sum.delta_star = br.x_min;
        sum.brent_evals = br.evals;
        // Optimization-stage iterations live in record 0 only, not the mean.
        out.records.push_back(BenchRecord{0, br.x_min, static_cast<int>(opt_iters), lu_count,
                                          opt_time, br.f_min, cumulative});

        detail::Stopwatch lu_timer;
        LuFactorization lu(A, br.x_min * cfg.t);
        cumulative += lu_timer.seconds();
        ++lu_count;
        SaiParams p{br.x_min * cfg.t, cfg.t, cfg.tol, cfg.max_iters};
        for (int i = 0; i < M; ++i) {
            detail::Stopwatch timer;
            KrylovOutcome o = sai_expmv(A, lu, vectors[static_cast<size_t>(i)], p);
            push_vector_record(i + 1, br.x_min, o, timer.seconds());
        }
    } else {  // incremental
        IncrementalDriver driver(A, ShiftInterval{cfg.interval_lo, cfg.interval_hi_value()},
                                 cfg.t, cfg.tol, cfg.max_iters);
        int phase1 = 0;
        for (int i = 0; i < M; ++i) {
            const bool was_phase1 = !driver.in_phase_two();
            detail::Stopwatch timer;
            KrylovOutcome o = driver.process(vectors[static_cast<size_t>(i)]);
            const double dt = timer.seconds();
            lu_count = driver.lu_count();
            if (was_phase1) ++phase1;
            push_vector_record(i + 1, driver.last_delta(), o, dt);
        }
        sum.phase1_length = phase1;
        if (driver.state().converged_delta) sum.delta_star = *driver.state().converged_delta;
    }

    const long vector_iters = sum.total_arnoldi_iters;
    sum.mean_arnoldi_iters = M > 0 ? static_cast<double>(vector_iters) / M : 0.0;
    sum.total_lu = lu_count;
    sum.total_time_s = cumulative;
    return out;
}

inline void emit_csv(const std::vector<BenchRecord>& records, const BenchSummary& summary,
                     std::ostream& os) {
    using detail::format_double;
    os << kCsvHeader << '\n';
    for (const BenchRecord& r : records) {
        os << r.vector_index << ',' << format_double(r.delta_used) << ',' << r.arnoldi_iters << ','
           << r.lu_count << ',' << format_double(r.wall_time_s) << ','
           << format_double(r.residual_norm) << ',' << format_double(r.cumulative_time_s) << '\n';
    }
    os << "# problem = " << summary.problem << '\n';
    os << "# n = " << summary.n << '\n';
    os << "# t = " << format_double(summary.t) << '\n';
    os << "# tol = " << format_double(summary.tol) << '\n';
    os << "# seed = " << summary.seed << '\n';
    os << "# strategy = " << summary.strategy << '\n';
    os << "# num_vectors = " << summary.num_vectors << '\n';
    os << "# mean_arnoldi_iters = " << format_double(summary.mean_arnoldi_iters) << '\n';
    os << "# total_arnoldi_iters = " << summary.total_arnoldi_iters << '\n';
    os << "# total_lu = " << summary.total_lu << '\n';
    os << "# total_time_s = " << format_double(summary.total_time_s) << '\n';
    if (summary.delta_star) os << "# delta_star = " << format_double(*summary.delta_star) << '\n';
    if (summary.brent_evals) os << "# brent_evals = " << *summary.brent_evals << '\n';
    if (summary.phase1_length) os << "# phase1_length = " << *summary.phase1_length << '\n';
    if (!summary.unconverged.empty()) {
        os << "# unconverged =";
        for (int i : summary.unconverged) os << ' ' << i;
        os << '\n';
    }
}

inline void emit_csv(const std::vector<BenchRecord>& records, const BenchSummary& summary,
                     const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit_csv: cannot open for writing: " + path);
    emit_csv(records, summary, os);
    os.flush();
    if (!os) throw std::runtime_error("emit_csv: write failed: " + path);
}

inline BenchResult parse_csv(std::istream& is) {
    BenchResult out;
    std::string line;
    if (!std::getline(is, line) || detail::trim(line) != kCsvHeader)
        throw std::runtime_error("parse_csv: missing or malformed header");
    while (std::getline(is, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = detail::trim(line.substr(1, eq - 1));
            const std::string value = detail::trim(line.substr(eq + 1));
            BenchSummary& s = out.summary;
            if (key == "problem") s.problem = value;
            else if (key == "n") s.n = static_cast<int>(detail::parse_long(key, value));
            else if (key == "t") s.t = detail::parse_double(key, value);
            else if (key == "tol") s.tol = detail::parse_double(key, value);
            else if (key == "seed") s.seed = static_cast<std::uint64_t>(detail::parse_long(key, value));
            else if (key == "strategy") s.strategy = value;
            else if (key == "num_vectors") s.num_vectors = static_cast<int>(detail::parse_long(key, value));
            else if (key == "mean_arnoldi_iters") s.mean_arnoldi_iters = detail::parse_double(key, value);
            else if (key == "total_arnoldi_iters") s.total_arnoldi_iters = detail::parse_long(key, value);
            else if (key == "total_lu") s.total_lu = static_cast<int>(detail::parse_long(key, value));
            else if (key == "total_time_s") s.total_time_s = detail::parse_double(key, value);
            else if (key == "delta_star") s.delta_star = detail::parse_double(key, value);
            else if (key == "brent_evals") s.brent_evals = static_cast<int>(detail::parse_long(key, value));
            else if (key == "phase1_length") s.phase1_length = static_cast<int>(detail::parse_long(key, value));
            else if (key == "unconverged") {
                std::istringstream vs(value);
                int idx;
                while (vs >> idx) s.unconverged.push_back(idx);
            }
            continue;
        }
        std::istringstream row(line);
        std::string field;
        BenchRecord r;
        auto next = [&]() -> std::string {
            if (!std::getline(row, field, ',')) throw std::runtime_error("parse_csv: short row");
            return field;
        };
        r.vector_index = static_cast<int>(detail::parse_long("vector_index", next()));
        r.delta_used = detail::parse_double("delta_used", next());
        r.arnoldi_iters = static_cast<int>(detail::parse_long("arnoldi_iters", next()));
        r.lu_count = static_cast<int>(detail::parse_long("lu_count", next()));
        r.wall_time_s = detail::parse_double("wall_time_s", next());
        r.residual_norm = detail::parse_double("residual_norm", next());
        r.cumulative_time_s = detail::parse_double("cumulative_time_s", next());
        out.records.push_back(r);
    }
    return out;
}

inline BenchResult parse_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("parse_csv: cannot open: " + path);
    return parse_csv(is);
}

struct CrossoverReport {
    std::optional<int> m_min_time;   // wall-clock crossover
    std::optional<int> m_min_iters;  // hardware-independent iteration crossover
    std::string table;
};

/// Compares cumulative cost curves of a fixed-shift run against an adaptive
/// run from the same problem and seed. The iteration proxy charges the
/// adaptive run its optimization-stage Arnoldi iterations as an offset.
inline CrossoverReport crossover_report(const BenchResult& fixed, const BenchResult& adaptive) {
    const BenchSummary& f = fixed.summary;
    const BenchSummary& a = adaptive.summary;
    if (f.problem != a.problem || f.n != a.n || f.t != a.t || f.tol != a.tol || f.seed != a.seed)
        throw ConfigError("crossover_report: runs come from different configurations");
    if (f.strategy != "fixed")
        throw ConfigError("crossover_report: first run must use the fixed strategy");

    auto curve = [](const BenchResult& r, bool iters) {
        std::vector<std::pair<int, double>> c;  // (vector_index, cumulative cost)
        double offset = 0.0;
        double acc = 0.0;
        for (const BenchRecord& rec : r.records) {
            if (rec.vector_index == 0) {
                offset = iters ? static_cast<double>(rec.arnoldi_iters) : rec.cumulative_time_s;
                continue;
            }
            if (iters) {
                acc += rec.arnoldi_iters;
                c.emplace_back(rec.vector_index, offset + acc);
            } else {
                c.emplace_back(rec.vector_index, rec.cumulative_time_s);
            }
        }
        return c;
    };

    CrossoverReport rep;
    std::ostringstream table;
    table << "index fixed_time adaptive_time fixed_iters adaptive_iters\n";
    for (bool iters : {false, true}) {
        const auto fc = curve(fixed, iters);
        const auto ac = curve(adaptive, iters);
        const size_t m = std::min(fc.size(), ac.size());
        std::optional<int> cross;
        for (size_t i = 0; i < m; ++i) {
            if (ac[i].second < fc[i].second) {
                cross = ac[i].first;
                break;
            }
        }
        (iters ? rep.m_min_iters : rep.m_min_time) = cross;
    }
    {
        const auto ft = curve(fixed, false), at = curve(adaptive, false);
        const auto fi = curve(fixed, true), ai = curve(adaptive, true);
        const size_t m = std::min(ft.size(), at.size());
        for (size_t i = 0; i < m; ++i)
            table << ft[i].first << ' ' << detail::format_double(ft[i].second) << ' '
                  << detail::format_double(at[i].second) << ' ' << fi[i].second << ' '
                  << ai[i].second << '\n';
    }
    table << "m_min_time = " << (rep.m_min_time ? std::to_string(*rep.m_min_time) : "none") << '\n';
    table << "m_min_iters = " << (rep.m_min_iters ? std::to_string(*rep.m_min_iters) : "none")
          << '\n';
    rep.table = table.str();
    return rep;
}

}  // namespace saikry

#endif  // SAIKRY_BENCH_HPP
