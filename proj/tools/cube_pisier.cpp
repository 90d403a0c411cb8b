// cube-pisier: verification suites, inequality-constant estimation, growth
// scans, and the n log n bound minimization, with CSV/JSON output.
// Exit codes: 0 pass, 1 usage/config error, 2 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cubep/estimators.hpp"
#include "cubep/operators.hpp"
#include "cubep/parallel.hpp"
#include "cubep/semigroup.hpp"

namespace {

using namespace cubep;

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    int lo, hi;
    if (dots == std::string::npos) {
        lo = hi = std::stoi(s);
    } else {
        lo = std::stoi(s.substr(0, dots));
        hi = std::stoi(s.substr(dots + 2));
    }
    if (lo < 1 || hi < lo) throw cubep::ConfigError("range must satisfy 1 <= lo <= hi: " + s);
    return {lo, hi};
}

CubeFunction random_cube_function(int n, int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> spec((std::size_t{1} << n) * d);
    for (auto& x : spec) x = gauss(rng);
    return CubeFunction::from_spectrum(n, d, std::move(spec));
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << text;
}

// ---------------------------------------------------------------------------

struct VerifyReport {
    double identity = 0.0;
    double semigroup = 0.0;
    double quadrature_residual = 0.0;
    double operator_algebra = 0.0;
    int sign = 1;
    bool pass = true;
};

double sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// enumeration path for E_xi f(eps xi(t))
std::vector<double> biased_average(const CubeFunction& f, double t) {
    const int n = f.n(), d = f.d();
    const std::size_t size = f.points();
    const BiasedBitLaw law(t, n);
    const auto& v = f.values();
    std::vector<double> out(size * d, 0.0);
    for (std::size_t xi = 0; xi < size; ++xi) {
        const double w = xi_weight(static_cast<std::uint32_t>(xi), law);
        for (std::size_t e = 0; e < size; ++e) {
            const double* src = v.data() + (e ^ xi) * d;
            double* dst = out.data() + e * d;
            for (int c = 0; c < d; ++c) dst[c] += w * src[c];
        }
    }
    return out;
}

double operator_algebra_check(const CubeFunction& f, std::mt19937_64& rng) {
    const int n = f.n();
    double worst = 0.0;
    // D_j^2 = D_j and sum_j D_j = Laplacian
    CubeFunction sum_dj(f.n(), f.d());
    for (int j = 0; j < n; ++j) {
        CubeFunction dj = d_j(f, j);
        worst = std::max(worst, sup_gap(d_j(dj, j).values(), dj.values()));
        auto& acc = sum_dj.mutable_values();
        const auto& v = dj.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    }
    worst = std::max(worst, sup_gap(sum_dj.values(), laplacian(f).values()));

    // sum_j Delta^{-1} D_j = Id - E
    CubeFunction sum_riesz(f.n(), f.d());
    for (int j = 0; j < n; ++j) {
        const CubeFunction rj = riesz(f, j);
        const auto& v = rj.values();
        auto& acc = sum_riesz.mutable_values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    }
    std::vector<double> centered = f.values();
    const auto mean = f.expectation();
    for (std::size_t e = 0; e < f.points(); ++e)
        for (int c = 0; c < f.d(); ++c) centered[e * f.d() + c] -= mean[c];
    worst = std::max(worst, sup_gap(sum_riesz.values(), centered));

    // semigroup law
    worst = std::max(worst,
                     sup_gap(heat(heat(f, 0.3), 0.9).values(), heat(f, 1.2).values()));

    // Rademacher projection idempotence on a random two-cube function
    if (n <= kMaxTwoCubeDim) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> vals((std::size_t{1} << (2 * n)) * f.d());
        for (auto& x : vals) x = gauss(rng);
        TwoCubeFunction F = TwoCubeFunction::from_values(n, f.d(), std::move(vals));
        TwoCubeFunction P1 = rademacher_projection(F);
        TwoCubeFunction P2 = rademacher_projection(P1);
        worst = std::max(worst, sup_gap(P1.values(), P2.values()));
    }
    return worst;
}

int cmd_verify(int n, int d, std::uint64_t seed, int funcs,
               const std::vector<double>& t_grid, const std::string& out_path) {
    std::mt19937_64 rng(seed);
    VerifyReport rep;
    bool sign_seen = false;

    for (int k = 0; k < funcs; ++k) {
        CubeFunction f = random_cube_function(n, d, rng);
        rep.identity = std::max(rep.identity, verify_main_identity(f, t_grid));
        for (double t : t_grid)
            rep.semigroup =
                std::max(rep.semigroup, sup_gap(biased_average(f, t), heat(f, t).values()));
        rep.operator_algebra = std::max(rep.operator_algebra, operator_algebra_check(f, rng));
    }

    if (n <= 6) {
        const QuadratureScheme quad = QuadratureScheme::gauss_legendre(64);
        for (int k = 0; k < std::max(1, funcs / 2); ++k) {
            std::vector<CubeFunction> f_list;
            for (int j = 0; j < n; ++j) f_list.push_back(random_cube_function(n, d, rng));
            const IntegralRepresentation ir = integral_representation(f_list, quad);
            rep.quadrature_residual = std::max(rep.quadrature_residual, ir.residual);
            if (sign_seen && ir.sign != rep.sign)
                throw QuadratureUnderresolved("integrated-identity sign not constant");
            rep.sign = ir.sign;
            sign_seen = true;
        }
    }

    rep.pass = rep.identity <= 1e-10 && rep.semigroup <= 1e-11 &&
               rep.quadrature_residual <= 1e-6 && rep.operator_algebra <= 1e-12;

    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    j["t_grid"] = t_grid;
    j["max_discrepancy"] =
        std::max({rep.identity, rep.semigroup, rep.operator_algebra});
    j["sign"] = rep.sign;
    j["pass"] = rep.pass;
    j["components"] = {{"identity", rep.identity},
                       {"semigroup", rep.semigroup},
                       {"quadrature_residual", rep.quadrature_residual},
                       {"operator_algebra", rep.operator_algebra}};
    write_output(j.dump(2) + "\n", out_path);
    return rep.pass ? 0 : 2;
}

// ---------------------------------------------------------------------------

std::string estimate_csv(const ConstantEstimate& ce) {
    std::string s = "n,kind,norm,p,estimate,converged,seed\n";
    s += std::to_string(ce.n) + "," + kind_name(ce.kind) + "," + ce.norm + "," +
         fmt_double(ce.p) + "," + fmt_double(ce.value) + "," +
         (ce.converged ? "true" : "false") + "," + std::to_string(ce.seed) + "\n";
    return s;
}

nlohmann::json estimate_json(const ConstantEstimate& ce) {
    nlohmann::json j;
    j["kind"] = kind_name(ce.kind);
    j["n"] = ce.n;
    j["p"] = ce.p;
    j["norm"] = ce.norm;
    j["value"] = ce.value;
    j["restarts"] = ce.restarts;
    j["seed"] = ce.seed;
    j["iterations"] = ce.iterations;
    j["converged"] = ce.converged;
    j["witness"] = nlohmann::json::parse(ce.witness_json);
    return j;
}

int cmd_estimate(const std::string& ineq, const std::string& norm, int n, double p,
                 const OptimizerConfig& cfg, const std::string& format,
                 const std::string& out_path) {
    const InequalityKind kind = parse_kind(ineq);
    const NormSpace X = NormSpace::parse(norm);
    const ConstantEstimate ce = maximize(kind, X, n, p, cfg);
    if (format == "csv")
        write_output(estimate_csv(ce), out_path);
    else
        write_output(estimate_json(ce).dump() + "\n", out_path);
    std::cerr << "estimate " << kind_name(kind) << " n=" << n << " value=" << ce.value
              << (out_path.empty() ? "" : " -> " + out_path) << "\n";
    return 0;
}

int cmd_scan(const std::string& ineq, const std::string& norm_family, const std::string& range,
             double p, const OptimizerConfig& cfg, const std::string& format,
             const std::string& out_path) {
    const InequalityKind kind = parse_kind(ineq);
    const auto [lo, hi] = parse_range(range);
    const auto rows = scan(kind, norm_family, lo, hi, p, cfg);

    std::string text;
    if (format == "csv") {
        text = "n,kind,norm,p,estimate,converged,seed\n";
        for (const auto& r : rows) {
            if (!r.error.empty()) {
                text += std::to_string(r.n) + "," + kind_name(kind) + "," + norm_family +
                        "," + fmt_double(p) + ",error,false," + std::to_string(cfg.seed) + "\n";
                continue;
            }
            text += std::to_string(r.n) + "," + kind_name(kind) + "," + norm_family + "," +
                    fmt_double(p) + "," + fmt_double(r.estimate) + "," +
                    (r.converged ? "true" : "false") + "," + std::to_string(cfg.seed) + "\n";
        }
    } else {
        for (const auto& r : rows) {
            nlohmann::json j;
            j["n"] = r.n;
            j["kind"] = kind_name(kind);
            j["norm"] = norm_family;
            j["p"] = p;
            j["estimate"] = r.estimate;
            j["converged"] = r.converged;
            j["seed"] = cfg.seed;
            if (!r.error.empty()) j["error"] = r.error;
            text += j.dump() + "\n";
        }
    }
    write_output(text, out_path);
    return 0;
}

int cmd_bound(const std::string& range, double p, const std::string& format,
              const std::string& out_path) {
    const auto [lo, hi] = parse_range(range);
    if (lo < 1) throw ConfigError("bound: n must be >= 1");
    std::string text;
    if (format == "csv") text = "n,p,r_star,bound,bound_over_nlogn\n";
    for (int n = lo; n <= hi; ++n) {
        const BoundResult b = f1log_bound_detail(n, p);
        const double nlogn = n > 1 ? n * std::log(static_cast<double>(n)) : 1.0;
        if (format == "csv") {
            text += std::to_string(n) + "," + fmt_double(p) + "," + fmt_double(b.r_star) +
                    "," + fmt_double(b.bound) + "," + fmt_double(b.bound / nlogn) + "\n";
        } else {
            nlohmann::json j;
            j["n"] = n;
            j["p"] = p;
            j["r_star"] = b.r_star;
            j["bound"] = b.bound;
            j["bound_over_nlogn"] = b.bound / nlogn;
            text += j.dump() + "\n";
        }
    }
    write_output(text, out_path);
    return 0;
}

int cmd_moduli(const std::string& kind, const std::string& norm, double q, double s, int m,
               int n, const OptimizerConfig& cfg, const std::string& out_path) {
    const NormSpace X = NormSpace::parse(norm);
    ModulusEstimate est;
    nlohmann::json j;
    j["kind"] = kind;
    j["norm"] = X.descriptor();
    if (kind == "cotype") {
        est = cotype_estimate(X, q, m, cfg);
        j["q"] = q;
        j["m"] = m;
    } else if (kind == "type") {
        est = type_estimate(X, s, m, cfg);
        j["s"] = s;
        j["m"] = m;
    } else if (kind == "kconvexity") {
        est = k_convexity_estimate(X, n, s, cfg);
        j["s"] = s;
        j["n"] = n;
    } else {
        throw ConfigError("moduli kind must be type, cotype, or kconvexity");
    }
    j["value"] = est.value;
    j["lower_bound_only"] = true;
    j["converged"] = est.converged;
    j["seed"] = cfg.seed;
    write_output(j.dump() + "\n", out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Fourier analysis on the Hamming cube: operator identity "
                 "verification and Pisier-type inequality constants"};
    app.require_subcommand(1);

    int threads = 0;
    if (const char* env = std::getenv("CUBE_PISIER_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "cap OpenMP worker count");

    // verify
    auto* verify = app.add_subcommand("verify", "run the operator-identity suites");
    int v_n = 4, v_d = 1, v_funcs = 5;
    std::uint64_t v_seed = 0;
    std::vector<double> v_grid{0.05, 0.3, 1.0, 3.0};
    std::string v_out;
    verify->add_option("--n", v_n, "cube dimension");
    verify->add_option("--d", v_d, "codomain dimension");
    verify->add_option("--seed", v_seed, "rng seed");
    verify->add_option("--funcs", v_funcs, "random functions per check");
    verify->add_option("--t-grid", v_grid, "time grid");
    verify->add_option("--out", v_out, "output file (default stdout)");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "estimate one inequality constant");
    std::string e_ineq, e_norm = "scalar", e_format = "json", e_out;
    int e_n = 4;
    double e_p = 2.0;
    OptimizerConfig e_cfg;
    estimate->add_option("--ineq", e_ineq, "pisier|deltafi|f1|df")->required();
    estimate->add_option("--norm", e_norm, "norm descriptor");
    estimate->add_option("--n", e_n, "cube dimension");
    estimate->add_option("--p", e_p, "moment exponent");
    estimate->add_option("--restarts", e_cfg.restarts, "optimizer restarts");
    estimate->add_option("--iters", e_cfg.max_iters, "max iterations per restart");
    estimate->add_option("--seed", e_cfg.seed, "rng seed");
    estimate->add_option("--format", e_format, "csv|json");
    estimate->add_option("--out", e_out, "output file (default stdout)");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "estimate constants over a range of n");
    std::string s_ineq, s_norm = "scalar", s_range = "1..4", s_format = "csv", s_out;
    double s_p = 2.0;
    OptimizerConfig s_cfg;
    s_cfg.restarts = 8;
    s_cfg.max_iters = 200;
    scan_cmd->add_option("--ineq", s_ineq, "pisier|deltafi|f1|df")->required();
    scan_cmd->add_option("--norm", s_norm, "norm family (values may be \"n\")");
    scan_cmd->add_option("--n", s_range, "range a..b");
    scan_cmd->add_option("--p", s_p, "moment exponent");
    scan_cmd->add_option("--restarts", s_cfg.restarts, "optimizer restarts");
    scan_cmd->add_option("--iters", s_cfg.max_iters, "max iterations per restart");
    scan_cmd->add_option("--seed", s_cfg.seed, "rng seed");
    scan_cmd->add_option("--format", s_format, "csv|json");
    scan_cmd->add_option("--out", s_out, "output file (default stdout)");

    // bound
    auto* bound = app.add_subcommand("bound", "n log n bound via exact 1-D minimization");
    std::string b_range = "4..4096", b_format = "csv", b_out;
    double b_p = 2.0;
    bound->add_option("--n", b_range, "range a..b");
    bound->add_option("--p", b_p, "moment exponent");
    bound->add_option("--format", b_format, "csv|json");
    bound->add_option("--out", b_out, "output file (default stdout)");

    // moduli
    auto* moduli = app.add_subcommand("moduli", "type/cotype/K-convexity estimates");
    std::string m_kind, m_norm = "scalar", m_out;
    double m_q = 2.0, m_s = 2.0;
    int m_m = 4, m_n = 3;
    OptimizerConfig m_cfg;
    moduli->add_option("--kind", m_kind, "type|cotype|kconvexity")->required();
    moduli->add_option("--norm", m_norm, "norm descriptor");
    moduli->add_option("--q", m_q, "cotype exponent");
    moduli->add_option("--s", m_s, "type / K-convexity exponent");
    moduli->add_option("--m", m_m, "tuple size");
    moduli->add_option("--n", m_n, "cube dimension (kconvexity)");
    moduli->add_option("--restarts", m_cfg.restarts, "optimizer restarts");
    moduli->add_option("--seed", m_cfg.seed, "rng seed");
    moduli->add_option("--out", m_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (threads > 0) cubep::set_threads(threads);

    try {
        if (verify->parsed()) {
            if (v_n < 1 || v_n > cubep::kMaxCubeDim) {
                std::cerr << "verify: n must be in [1, " << cubep::kMaxCubeDim << "]\n";
                return 1;
            }
            return cmd_verify(v_n, v_d, v_seed, v_funcs, v_grid, v_out);
        }
        if (estimate->parsed()) {
            e_cfg.threads = threads;
            return cmd_estimate(e_ineq, e_norm, e_n, e_p, e_cfg, e_format, e_out);
        }
        if (scan_cmd->parsed()) {
            s_cfg.threads = threads;
            return cmd_scan(s_ineq, s_norm, s_range, s_p, s_cfg, s_format, s_out);
        }
        if (bound->parsed()) return cmd_bound(b_range, b_p, b_format, b_out);
        if (moduli->parsed()) {
            m_cfg.threads = threads;
            return cmd_moduli(m_kind, m_norm, m_q, m_s, m_m, m_n, m_cfg, m_out);
        }
    } catch (const cubep::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cubep::CapExceeded& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cubep::InvalidExponent& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cubep::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
