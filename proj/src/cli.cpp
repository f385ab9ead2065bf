#include "triml/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "triml/csv.hpp"
#include "triml/fde.hpp"
#include "triml/verify.hpp"

namespace triml {

namespace {

using csv::format;

// Every option is held as text so that flags, JSON values and sweep
// ranges share one path; commands convert what they use.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const std::string& text(const std::string& key) const { return values.at(key); }

    Real real(const std::string& key, Real fallback) const {
        if (!has(key)) return fallback;
        const Real x = csv::parse(text(key));
        if (!std::isfinite(x)) throw DomainError("--" + key + " must be finite");
        return x;
    }

    int integer(const std::string& key, int fallback) const {
        const Real x = real(key, fallback);
        if (x != std::nearbyint(x) || std::fabs(x) > 1e9L) throw DomainError("--" + key + " must be an integer");
        return static_cast<int>(x);
    }

    // "re" or "re,im"
    Complex complex(const std::string& key) const {
        if (!has(key)) return 0;
        const std::string& s = text(key);
        const auto comma = s.find(',');
        if (comma == std::string::npos) return csv::parse(s);
        return {csv::parse(std::string_view(s).substr(0, comma)), csv::parse(std::string_view(s).substr(comma + 1))};
    }

    SeriesControl control() const {
        SeriesControl c;
        c.rel_tol = real("tol", c.rel_tol);
        c.max_shell = integer("max-shell", c.max_shell);
        c.validate();
        return c;
    }
};

const std::vector<std::string> kParams = {"alpha", "beta", "gamma", "delta", "eta"};
const std::vector<std::string> kLambdas = {"lambda1", "lambda2", "lambda3"};

std::vector<std::string> options_of(const std::string& command) {
    std::vector<std::string> o;
    auto add = [&](const std::vector<std::string>& names) { o.insert(o.end(), names.begin(), names.end()); };
    if (command == "eval") {
        add(kParams);
        add({"u", "v", "w", "tol", "max-shell"});
    } else if (command == "eval-univariate") {
        add(kParams);
        add(kLambdas);
        add({"r", "tol", "max-shell"});
    } else if (command == "solve") {
        add({"alpha", "beta", "gamma"});
        add(kLambdas);
        add({"y0", "t-max", "n-points", "forcing", "oracle", "tol", "max-shell"});
    } else if (command == "verify") {
        add({"only", "tol"});
    } else if (command == "table") {
        add(kParams);
        add(kLambdas);
        add({"t-max", "n-points", "family", "preset", "tol", "max-shell"});
    }
    add({"out"});
    return o;
}

std::string json_text(const nlohmann::json& v) {
    if (v.is_number()) return format(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + json_text(e);
        return s;
    }
    throw DomainError("config: unsupported value " + v.dump());
}

// Keys of the JSON object fill options the command line left unset.
void merge_config(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw DomainError("config: top level must be an object");
    const auto allowed = options_of(cfg.command);
    for (const auto& [raw, value] : j.items()) {
        std::string key = raw;
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "command") continue;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw DomainError("config: '" + raw + "' does not apply to " + cfg.command);
        if (!cfg.has(key)) cfg.values[key] = json_text(value);
    }
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (cfg.has("out"))
        csv::write_atomic(cfg.text("out"), content);
    else
        out << content;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
    const MLParams p{cfg.real("alpha", 1), cfg.real("beta", 1), cfg.real("gamma", 1), cfg.real("delta", 1),
                     cfg.real("eta", 1)};
    p.validate();
    const Complex u = cfg.complex("u"), v = cfg.complex("v"), w = cfg.complex("w");
    const EvalResult r = require_converged(eval_trivariate(p, u, v, w, cfg.control()), "eval");
    std::string s = "alpha,beta,gamma,delta,eta,u_re,u_im,v_re,v_im,w_re,w_im,value_re,value_im,abs_err,shells\n";
    for (Real x : {p.alpha, p.beta, p.gamma, p.delta, p.eta, u.real(), u.imag(), v.real(), v.imag(), w.real(),
                   w.imag(), r.value.real(), r.value.imag(), r.abs_error_estimate})
        s += format(x) + ",";
    s += std::to_string(r.shells_used) + "\n";
    emit(cfg, s, out);
    return kExitOk;
}

int cmd_eval_univariate(const RunConfig& cfg, std::ostream& out) {
    const MLParams p{cfg.real("alpha", 1), cfg.real("beta", 1), cfg.real("gamma", 1), cfg.real("delta", 1),
                     cfg.real("eta", 1)};
    const LambdaTriple lam{cfg.real("lambda1", 0), cfg.real("lambda2", 0), cfg.real("lambda3", 0)};
    const Real r = cfg.real("r", 1);
    const EvalResult e = require_converged(eval_univariate(p, lam, r, cfg.control()), "eval-univariate");
    std::string s = "alpha,beta,gamma,delta,eta,lambda1,lambda2,lambda3,r,value,abs_err,shells\n";
    for (Real x : {p.alpha, p.beta, p.gamma, p.delta, p.eta, lam.lambda1, lam.lambda2, lam.lambda3, r, e.value.real(),
                   e.abs_error_estimate})
        s += format(x) + ",";
    s += std::to_string(e.shells_used) + "\n";
    emit(cfg, s, out);
    return kExitOk;
}

Forcing read_forcing(const std::string& path) {
    const csv::Table t = csv::read(path);
    std::vector<Real> r, g;
    try {
        const std::size_t ir = t.column("r"), ig = t.column("g");
        for (const auto& row : t.rows) {
            r.push_back(csv::parse(row[ir]));
            g.push_back(csv::parse(row[ig]));
        }
    } catch (const DomainError& e) {
        throw IoError("forcing file " + path + ": " + e.what());
    }
    if (r.empty() || r.front() != 0) throw DomainError("forcing file " + path + ": r must start at 0");
    return Forcing::table(std::move(r), std::move(g));
}

// "h=<step>" or a bare step
Real oracle_step(const std::string& spec) {
    std::string_view s = spec;
    if (s.rfind("h=", 0) == 0) s.remove_prefix(2);
    const Real h = csv::parse(s);
    if (!(h > 0) || !std::isfinite(h)) throw DomainError("--oracle: step must be positive");
    return h;
}

// Piecewise-linear resampling of an oracle trace onto the output grid.
SolutionTrace resample(const SolutionTrace& t, const std::vector<Real>& grid) {
    SolutionTrace out;
    out.backend = t.backend;
    out.r = grid;
    std::size_t j = 0;
    for (Real x : grid) {
        while (j + 2 < t.r.size() && t.r[j + 1] < x) ++j;
        const Real a = t.r[j], b = t.r[j + 1];
        const Real f = std::clamp((x - a) / (b - a), Real(0), Real(1));
        if (f == 0 || f == 1) {
            const std::size_t k = f == 0 ? j : j + 1;
            out.y.push_back(t.y[k]);
            out.abs_error.push_back(t.abs_error[k]);
        } else {
            out.y.push_back((1 - f) * t.y[j] + f * t.y[j + 1]);
            out.abs_error.push_back(std::max(t.abs_error[j], t.abs_error[j + 1]));
        }
    }
    return out;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    IVPSpec spec;
    spec.alpha = cfg.real("alpha", spec.alpha);
    spec.beta = cfg.real("beta", spec.beta);
    spec.gamma = cfg.real("gamma", spec.gamma);
    spec.lambda1 = cfg.real("lambda1", 0);
    spec.lambda2 = cfg.real("lambda2", 0);
    spec.lambda3 = cfg.real("lambda3", 0);
    spec.y0 = cfg.real("y0", 0);
    spec.validate();
    const Real t_max = cfg.real("t-max", 1);
    const int n = cfg.integer("n-points", 100);
    if (!(t_max > 0)) throw DomainError("--t-max must be positive");
    if (n < 1) throw DomainError("--n-points must be at least 1");
    const SeriesControl ctrl = cfg.control();

    std::vector<Real> grid;
    for (int i = 0; i <= n; ++i) grid.push_back(t_max * i / n);
    grid.back() = t_max;
    const Forcing g = cfg.has("forcing") ? read_forcing(cfg.text("forcing")) : Forcing();
    if (!g.is_zero() && g.domain_end() < t_max) throw DomainError("forcing table ends before --t-max");

    const SolutionTrace trace = cfg.has("oracle")
                                    ? resample(numeric_oracle_solve(spec, g, oracle_step(cfg.text("oracle")), t_max), grid)
                                    : solve(spec, g, grid, ctrl);
    std::string s = "r,y,backend,abs_err\n";
    const std::string backend = backend_name(trace.backend);
    for (std::size_t i = 0; i < grid.size(); ++i)
        s += format(trace.r[i]) + "," + format(trace.y[i]) + "," + backend + "," + format(trace.abs_error[i]) + "\n";
    emit(cfg, s, out);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names = verify_check_names();
    if (cfg.has("only")) {
        names.clear();
        std::stringstream ss(cfg.text("only"));
        for (std::string name; std::getline(ss, name, ',');) {
            const auto& all = verify_check_names();
            if (std::find(all.begin(), all.end(), name) == all.end())
                throw DomainError("verify: unknown check '" + name + "'");
            names.push_back(name);
        }
    }
    std::optional<Real> tol;
    if (cfg.has("tol")) tol = cfg.real("tol", 0);
    std::string report;
    bool all_pass = true;
    for (const std::string& name : names) {
        const CheckOutcome c = run_verify_check(name, tol);
        const std::string line =
            std::string(c.pass ? "PASS " : "FAIL ") + c.name + " " + format(c.max_err) + " " + format(c.tol) + "\n";
        if (!c.message.empty()) err << c.name << ": " << c.message << "\n";
        all_pass = all_pass && c.pass;
        report += line;
        if (!cfg.has("out")) out << line << std::flush;
    }
    if (cfg.has("out")) csv::write_atomic(cfg.text("out"), report);
    return all_pass ? kExitOk : kExitCheckFailed;
}

// "lo:hi:n", "a,b,c" or a single value
std::vector<Real> sweep(const RunConfig& cfg, const std::string& key, Real fallback) {
    if (!cfg.has(key)) return {fallback};
    const std::string& s = cfg.text(key);
    std::vector<Real> v;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw DomainError("--" + key + ": range must be lo:hi:n");
        const Real lo = csv::parse(parts[0]), hi = csv::parse(parts[1]), n = csv::parse(parts[2]);
        if (!(n >= 1) || n != std::nearbyint(n) || n > 1e6L) throw DomainError("--" + key + ": bad point count");
        if (!(lo <= hi)) throw DomainError("--" + key + ": range must have lo <= hi");
        for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    } else {
        std::stringstream ss(s);
        for (std::string part; std::getline(ss, part, ',');) v.push_back(csv::parse(part));
    }
    for (Real x : v)
        if (!std::isfinite(x)) throw DomainError("--" + key + ": values must be finite");
    return v;
}

struct FamilyRow {
    std::string family;
    // NaN marks a parameter the family does not have; printed empty
    Real alpha, beta, gamma, delta, eta;
};

constexpr Real kNone = std::numeric_limits<Real>::quiet_NaN();

Real family_value(const FamilyRow& f, const LambdaTriple& lam, Real r, const SeriesControl& ctrl) {
    const Real u = lam.lambda1 * std::pow(r, f.alpha);
    if (f.family == "trivariate")
        return require_converged(eval_trivariate({f.alpha, f.beta, f.gamma, f.delta, f.eta}, u,
                                                 lam.lambda2 * std::pow(r, f.beta), lam.lambda3 * std::pow(r, f.gamma),
                                                 ctrl),
                                 "table")
            .real();
    if (f.family == "bivariate")
        return require_converged(eval_trivariate({f.alpha, f.beta, 1, f.delta, f.eta}, u,
                                                 lam.lambda2 * std::pow(r, f.beta), 0, ctrl),
                                 "table")
            .real();
    const Real eta = f.family == "prabhakar" ? f.eta : 1;
    return require_converged(eval_prabhakar(f.alpha, f.delta, eta, u, ctrl), "table").real();
}

int cmd_table(const RunConfig& cfg, std::ostream& out) {
    const LambdaTriple lam{cfg.real("lambda1", 1), cfg.real("lambda2", 1), cfg.real("lambda3", 1)};
    const Real t_max = cfg.real("t-max", 1);
    const int n = cfg.integer("n-points", 100);
    if (!(t_max >= 0)) throw DomainError("--t-max must be non-negative");
    if (n < 0) throw DomainError("--n-points must be non-negative");
    const SeriesControl ctrl = cfg.control();

    std::vector<std::string> families;
    if (cfg.has("family")) {
        std::stringstream ss(cfg.text("family"));
        for (std::string f; std::getline(ss, f, ',');) {
            if (f != "trivariate" && f != "bivariate" && f != "prabhakar" && f != "two-param")
                throw DomainError("--family: unknown family '" + f + "'");
            families.push_back(f);
        }
    }

    std::vector<FamilyRow> sets;
    if (cfg.has("preset")) {
        if (cfg.text("preset") != "table1") throw DomainError("--preset: only 'table1' is known");
        sets = {{"trivariate", 0.25L, 0.75L, 1.5L, 1.5L, 1},
                {"bivariate", 0.25L, 0.75L, kNone, 1.5L, 1},
                {"prabhakar", 0.25L, kNone, kNone, 0.75L, 1.5L},
                {"two-param", 0.25L, kNone, kNone, 0.75L, kNone}};
        if (!families.empty())
            std::erase_if(sets, [&](const FamilyRow& f) {
                return std::find(families.begin(), families.end(), f.family) == families.end();
            });
    } else {
        if (families.empty()) families = {"trivariate"};
        const auto A = sweep(cfg, "alpha", 1), B = sweep(cfg, "beta", 1), G = sweep(cfg, "gamma", 1),
                   D = sweep(cfg, "delta", 1), E = sweep(cfg, "eta", 1);
        for (const std::string& fam : families) {
            const bool has_b = fam == "trivariate" || fam == "bivariate";
            const bool has_g = fam == "trivariate";
            const bool has_e = fam != "two-param";
            for (Real a : A)
                for (Real b : has_b ? B : std::vector<Real>{kNone})
                    for (Real g : has_g ? G : std::vector<Real>{kNone})
                        for (Real d : D)
                            for (Real e : has_e ? E : std::vector<Real>{kNone}) sets.push_back({fam, a, b, g, d, e});
        }
    }
    for (const FamilyRow& f : sets) {
        MLParams check{f.alpha, std::isnan(f.beta) ? 1 : f.beta, std::isnan(f.gamma) ? 1 : f.gamma, f.delta,
                       std::isnan(f.eta) ? 1 : f.eta};
        check.validate();
    }

    auto cell = [](Real x) { return std::isnan(x) ? std::string() : format(x); };
    std::string s = "family,alpha,beta,gamma,delta,eta,r,value\n";
    for (const FamilyRow& f : sets)
        for (int i = 0; i <= n; ++i) {
            const Real r = n == 0 ? t_max : t_max * i / n;
            s += f.family + "," + cell(f.alpha) + "," + cell(f.beta) + "," + cell(f.gamma) + "," + cell(f.delta) + "," +
                 cell(f.eta) + "," + format(r) + "," + format(family_value(f, lam, r, ctrl)) + "\n";
        }
    emit(cfg, s, out);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trivariate Mittag-Leffler functions and three-order Caputo problems", "triml"};
    app.require_subcommand(1, 1);
    RunConfig cfg;
    std::map<std::string, std::string> config_path;
    const std::map<std::string, std::string> about = {
        {"eval", "E^eta_{alpha,beta,gamma,delta}(u, v, w); arguments as re or re,im"},
        {"eval-univariate", "r^{delta-1} E(lambda1 r^alpha, lambda2 r^beta, lambda3 r^gamma)"},
        {"solve", "y on n-points+1 uniform points of [0, t-max]"},
        {"verify", "cross-checks between modules"},
        {"table", "family curves over r; parameters take lo:hi:n or a,b,c"},
    };
    for (const auto& [name, text] : about) {
        CLI::App* sub = app.add_subcommand(name, text);
        for (const std::string& opt : options_of(name)) sub->add_option("--" + opt, cfg.values[opt]);
        sub->add_option("--config", config_path[name], "JSON object of option values; flags win");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    // drop options that were never given
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    std::map<std::string, std::string> given;
    for (const std::string& opt : options_of(cfg.command))
        if (sub->count("--" + opt) > 0) given[opt] = cfg.values[opt];
    cfg.values = std::move(given);

    try {
        if (!config_path[cfg.command].empty()) merge_config(cfg, config_path[cfg.command]);
        if (cfg.command == "eval") return cmd_eval(cfg, out);
        if (cfg.command == "eval-univariate") return cmd_eval_univariate(cfg, out);
        if (cfg.command == "solve") return cmd_solve(cfg, out);
        if (cfg.command == "verify") return cmd_verify(cfg, out, err);
        return cmd_table(cfg, out);
    } catch (const DomainError& e) {
        err << "triml " << cfg.command << ": " << e.what() << "\n";
        return kExitInvalid;
    } catch (const IoError& e) {
        err << "triml " << cfg.command << ": " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "triml " << cfg.command << ": " << e.what() << "\n";
        return kExitNotConverged;
    }
}

}  // namespace triml
