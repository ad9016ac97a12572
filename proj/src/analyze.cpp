#include "bifprob/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bifprob/errors.hpp"
#include "bifprob/mellin.hpp"
#include "bifprob/models.hpp"
#include "bifprob/moments.hpp"
#include "bifprob/montecarlo.hpp"
#include "bifprob/pce.hpp"
#include "bifprob/reconstruct.hpp"
#include "bifprob/unscented.hpp"

namespace bifprob {

Command command_from_name(const std::string& name) {
    static const std::map<std::string, Command> m{
        {"analyze", Command::Analyze},   {"mellin-product", Command::MellinProduct},
        {"pce", Command::Pce},           {"moments", Command::Moments},
        {"fit-gmm", Command::FitGmm},    {"reconstruct", Command::Reconstruct},
        {"ut", Command::Ut},             {"mc", Command::Mc}};
    auto it = m.find(name);
    if (it == m.end()) throw ConfigError("unknown command \"" + name + "\"");
    return it->second;
}

std::string command_name(Command c) {
    switch (c) {
        case Command::Analyze: return "analyze";
        case Command::MellinProduct: return "mellin-product";
        case Command::Pce: return "pce";
        case Command::Moments: return "moments";
        case Command::FitGmm: return "fit-gmm";
        case Command::Reconstruct: return "reconstruct";
        case Command::Ut: return "ut";
        case Command::Mc: return "mc";
    }
    return "analyze";
}

void Report::write(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream(fs::path(dir) / "report.txt") << text;
    std::ofstream(fs::path(dir) / "report.json") << data.dump(2) << '\n';
    for (const auto& [name, content] : files) std::ofstream(fs::path(dir) / name) << content;
}

namespace {

std::string num(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

struct Ctx {
    const ExperimentConfig& cfg;
    Report& rep;
    std::ostringstream out;

    const models::BifurcationModel& model() const {
        if (cfg.model.empty()) throw ConfigError("command needs a model");
        return models::model_by_name(cfg.model);
    }
    std::vector<Distribution> inputs() const { return cfg.input_distributions(); }
    void stage(const std::string& s) {
        if (std::find(rep.stages.begin(), rep.stages.end(), s) == rep.stages.end()) rep.stages.push_back(s);
    }
    bool sub_when_negative() const {
        return cfg.model.empty() || model().subcritical_when == models::Subcritical::WhenNegative;
    }
    double sub_from_cdf0(double cdf0) const { return sub_when_negative() ? cdf0 : 1.0 - cdf0; }
};

void header(Ctx& c, const std::string& cmd) {
    c.out << "experiment: " << c.cfg.name << "\n";
    c.out << "command:    " << cmd << "\n";
    if (!c.cfg.model.empty()) {
        c.out << "model:      " << c.cfg.model << " (subcritical when coefficient "
              << (c.sub_when_negative() ? "< 0" : "> 0") << ")\n";
        for (const auto& [name, d] : c.cfg.inputs) {
            nlohmann::json j = d;
            c.out << "  input " << name << " = " << j.dump() << "\n";
        }
    }
    c.out << "\n";
    c.rep.data["experiment"] = c.cfg.name;
    c.rep.data["command"] = cmd;
    c.rep.data["config"] = config_to_json(c.cfg);
}

mellin::ProductExpression decomposition(Ctx& c) {
    const auto& m = c.model();
    if (!m.decompose) throw ConfigError("model \"" + m.name + "\" has no Mellin decomposition");
    models::DecompositionOptions opt;
    opt.N = c.cfg.params.N;
    opt.quad_nodes = c.cfg.params.quad_nodes;
    auto e = m.decompose(c.inputs(), opt);
    if (e.has_pce()) c.stage("pce");
    return e;
}

MomentSequence mellin_moments(Ctx& c) {
    if (c.cfg.model.empty() && !c.cfg.params.moments.empty()) {
        MomentSequence m;
        m.mu = c.cfg.params.moments;
        m.provenance = Provenance::User;
        c.rep.data["moments"] = m;
        return m;
    }
    const auto e = decomposition(c);
    c.stage("mellin");
    MomentSequence m = moments::coefficient_moments(e, c.cfg.params.n_moms);
    c.rep.data["moments"] = m;
    if (!m.hankel_ok()) c.out << "warning: moment sequence violates Hankel positivity (mu2 < mu1^2)\n";
    return m;
}

montecarlo::McResult run_mc(Ctx& c, int n_moms) {
    c.stage("monte_carlo");
    montecarlo::McOptions opt;
    opt.n_samples = c.cfg.params.n_samples;
    opt.seed = c.cfg.params.seed;
    opt.n_moms = n_moms;
    opt.workers = c.cfg.params.workers;
    auto r = montecarlo::mc_run(c.model(), c.inputs(), opt);
    nlohmann::json j{{"n_samples", r.n_samples},
                     {"seed", r.seed},
                     {"subcritical_count", r.subcritical_count},
                     {"sign_probability", r.sign_probability},
                     {"moments", r.moments},
                     {"moment_stderr", r.moment_stderr}};
    c.rep.data["monte_carlo"] = j;
    std::ostringstream h, e;
    r.write_histogram_csv(h);
    r.write_ecdf_csv(e);
    c.rep.files["mc_histogram.csv"] = h.str();
    c.rep.files["mc_ecdf.csv"] = e.str();
    return r;
}

Support support_for(Ctx& c) {
    if (c.cfg.params.support) return *c.cfg.params.support;
    if (c.cfg.model.empty()) throw ConfigError("params.support is required without a model");
    c.stage("monte_carlo_pilot");
    return montecarlo::pilot_support(c.model(), c.inputs(), c.cfg.params.seed + 0x9E3779B9ULL);
}

void moments_table(Ctx& c, const MomentSequence& m, const montecarlo::McResult* mc,
                   const reconstruct::GaussianMixture* gm) {
    c.out << "moments\n";
    c.out << "  j   " << (m.provenance == Provenance::User ? "input       " : "mellin      ");
    if (gm) c.out << "gmm         ";
    if (mc) c.out << "mc          mc_stderr   rel_diff";
    c.out << "\n";
    for (int j = 1; j <= m.n_moms(); ++j) {
        char line[256];
        std::snprintf(line, sizeof line, "  %-3d %-11s ", j, sci(m.mu[j - 1]).c_str());
        c.out << line;
        if (gm) {
            std::snprintf(line, sizeof line, "%-11s ", sci(reconstruct::gmm_moment(*gm, j)).c_str());
            c.out << line;
        }
        if (mc && j <= mc->moments.n_moms()) {
            const double v = mc->moments.mu[j - 1];
            std::snprintf(line, sizeof line, "%-11s %-11s %+.3f%%", sci(v).c_str(),
                          sci(mc->moment_stderr[j - 1]).c_str(), 100.0 * (m.mu[j - 1] - v) / std::abs(v));
            c.out << line;
        }
        c.out << "\n";
    }
    c.out << "\n";
}

void cdf_table(Ctx& c, const std::string& label, const std::function<double(double)>& cdf,
               nlohmann::json& dst) {
    if (c.cfg.eval_cdf.empty()) return;
    c.out << "CDF evaluations (" << label << ")\n";
    for (double y : c.cfg.eval_cdf) {
        const double v = cdf(y);
        c.out << "  F(" << num(y) << ") = " << num(v, 6) << "\n";
        dst.push_back({{"y", y}, {"cdf", v}});
    }
    c.out << "\n";
}

void mc_summary(Ctx& c, const montecarlo::McResult& mc) {
    c.out << "Monte Carlo: " << mc.n_samples << " samples, seed " << mc.seed << "\n";
    c.out << "  P(subcritical) = " << num(mc.sign_probability) << "  (" << mc.subcritical_count << " / "
          << mc.n_samples << ", s.e. "
          << num(std::sqrt(mc.sign_probability * (1 - mc.sign_probability) / mc.n_samples), 3) << ")\n\n";
    nlohmann::json evals = nlohmann::json::array();
    cdf_table(c, "empirical", [&](double y) { return mc.ecdf(y); }, evals);
    c.rep.data["monte_carlo"]["cdf"] = evals;
}

// ---- methods ---------------------------------------------------------------

void do_monte_carlo(Ctx& c) {
    const auto mc = run_mc(c, c.cfg.params.n_moms);
    moments_table(c, mc.moments, nullptr, nullptr);
    mc_summary(c, mc);
    c.rep.data["subcritical_probability"] = mc.sign_probability;
}

double sign_calculus(const mellin::ProductExpression& e) {
    // P(product < 0) for independent continuous factors
    double prod = 1.0;
    for (const auto& f : e.factors) {
        const auto* d = std::get_if<Distribution>(&f.base);
        if (!d) throw ConfigError("analytic method needs distribution factors only");
        const double q = (f.exponent % 2 == 0) ? 0.0 : std::clamp(d->cdf(0.0), 0.0, 1.0);
        prod *= 1.0 - 2.0 * q;
    }
    const double p = 0.5 * (1.0 - prod);
    return e.global_sign < 0 ? 1.0 - p : p;
}

void do_analytic(Ctx& c) {
    auto e = decomposition(c);
    c.stage("mellin");
    const double pneg = sign_calculus(e);
    const double psub = c.sub_from_cdf0(pneg);
    c.out << "sign calculus: P(coefficient < 0) = " << num(pneg, 12) << "\n";
    c.out << "P(subcritical) = " << num(psub, 12) << "\n\n";
    c.rep.data["subcritical_probability"] = psub;
    c.rep.data["p_negative"] = pneg;

    const bool convolvable = e.factors.size() == 2 && std::all_of(e.factors.begin(), e.factors.end(), [](auto& f) {
                                 return !f.is_pce() && f.exponent == 1 && f.scale == 1.0;
                             });
    if (!convolvable) return;
    Distribution f = std::get<Distribution>(e.factors[0].base);
    Distribution g = std::get<Distribution>(e.factors[1].base);
    if (!g.nonnegative()) std::swap(f, g);
    if (!g.nonnegative()) return;
    c.stage("convolution");
    const auto grid = c.cfg.params.support
                          ? mellin::linspace(c.cfg.params.support->lo, c.cfg.params.support->hi, c.cfg.params.grid_points)
                          : mellin::default_product_grid(f, g, c.cfg.params.seed, c.cfg.params.grid_points);
    const auto conv = mellin::product_pdf_convolution(f, g, grid);
    c.out << "Mellin convolution on " << grid.size() << " points over [" << num(grid.front()) << ", "
          << num(grid.back()) << "]\n";
    c.out << "  mass h1 (positive part) = " << num(conv.mass_h1, 10) << "\n";
    c.out << "  mass h2 (negative part) = " << num(conv.mass_h2, 10) << "\n";
    c.out << "  grid trapezoid mass     = " << num(conv.pdf.mass(), 10) << "\n\n";
    c.rep.data["convolution"] = {{"mass_h1", conv.mass_h1}, {"mass_h2", conv.mass_h2}, {"grid_mass", conv.pdf.mass()}};
    std::ostringstream p, q;
    conv.pdf.write_csv(p);
    conv.pdf.write_cdf_csv(q);
    c.rep.files["pdf.csv"] = p.str();
    c.rep.files["cdf.csv"] = q.str();
    const auto cdf = conv.pdf.cdf();
    nlohmann::json evals = nlohmann::json::array();
    cdf_table(c, "convolution",
              [&](double y) {
                  if (y <= grid.front()) return 0.0;
                  if (y >= grid.back()) return 1.0;
                  mellin::PiecewisePdf tmp{grid, cdf, grid.front(), grid.back()};
                  return tmp.eval(y);
              },
              evals);
    c.rep.data["cdf"] = evals;
}

reconstruct::GmmFit gmm_stage(Ctx& c, const MomentSequence& m) {
    const Support s = support_for(c);
    c.stage("gmm");
    const auto init = reconstruct::gmm_default_init(c.cfg.params.k, s.lo, s.hi);
    reconstruct::GmmOptions opt;
    opt.max_evals = c.cfg.params.max_evals;
    opt.restarts = c.cfg.params.restarts;
    opt.seed = c.cfg.params.seed;
    opt.width = s.hi - s.lo;
    const auto W = reconstruct::default_weight_matrix(m);
    auto fit = reconstruct::fit_gmm(m, c.cfg.params.k, W, init, opt);
    const auto& gm = fit.mixture;
    c.out << "Gaussian mixture (k = " << gm.k() << ", support estimate [" << num(s.lo) << ", " << num(s.hi)
          << "], best of " << fit.restarts.size() << " restarts: #" << fit.best_restart << ")\n";
    for (int i = 0; i < gm.k(); ++i)
        c.out << "  pi = " << num(gm.pi[i]) << "  mu = " << num(gm.mu[i]) << "  sigma = " << num(gm.sigma[i]) << "\n";
    c.out << "  objective = " << sci(fit.objective) << (fit.converged ? "" : "  (evaluation budget exhausted)") << "\n";
    const double psub = c.sub_from_cdf0(reconstruct::gmm_cdf(gm, 0.0));
    c.out << "  P(subcritical) = " << num(psub) << "\n\n";
    nlohmann::json restarts = nlohmann::json::array();
    for (const auto& r : fit.restarts)
        restarts.push_back({{"mixture", r.mixture}, {"objective", r.objective}, {"evaluations", r.evaluations}});
    c.rep.data["gmm"] = {{"mixture", gm},
                         {"objective", fit.objective},
                         {"converged", fit.converged},
                         {"best_restart", fit.best_restart},
                         {"restarts", restarts},
                         {"support", {s.lo, s.hi}},
                         {"subcritical_probability", psub}};
    nlohmann::json evals = nlohmann::json::array();
    cdf_table(c, "Gaussian mixture", [&](double y) { return reconstruct::gmm_cdf(gm, y); }, evals);
    c.rep.data["gmm"]["cdf"] = evals;
    return fit;
}

void do_mellin_pce_gmm(Ctx& c) {
    const auto m = mellin_moments(c);
    const auto fit = gmm_stage(c, m);
    std::optional<montecarlo::McResult> mc;
    if (c.cfg.params.n_samples > 0 && !c.cfg.model.empty()) mc = run_mc(c, m.n_moms());
    moments_table(c, m, mc ? &*mc : nullptr, &fit.mixture);
    if (mc) mc_summary(c, *mc);
    c.rep.data["subcritical_probability"] = c.rep.data["gmm"]["subcritical_probability"];
}

void do_reconstruct(Ctx& c) {
    const auto m = mellin_moments(c);
    const Support s = support_for(c);
    c.stage("polynomial");
    const int deg = c.cfg.params.degree.value_or(m.n_moms());
    reconstruct::ApproxOptions opt;
    opt.grid_points = c.cfg.params.grid_points;
    opt.clip = c.cfg.params.clip;
    reconstruct::Approximant a;
    const auto& kind = c.cfg.params.approximant;
    if (kind == "legendre")
        a = reconstruct::legendre_pdf_approx(m, s.lo, s.hi, deg, opt);
    else if (kind == "monic")
        a = reconstruct::monic_pdf_approx(m, s.lo, s.hi, deg, opt);
    else
        a = reconstruct::transformed_moments_pdf_approx(m, s.hi, deg, opt);
    c.out << kind << " approximant, degree " << deg << " on [" << num(a.pdf.lo) << ", " << num(a.pdf.hi) << "]"
          << (a.clipped ? " (clipped and renormalized)" : "") << "\n";
    c.out << "  raw mass = " << num(a.mass) << "  min value = " << num(a.min_value)
          << "  negative mass = " << num(a.negative_mass) << "\n";
    const auto cdf = a.pdf.cdf();
    mellin::PiecewisePdf cdfp{a.pdf.grid, cdf, a.pdf.lo, a.pdf.hi};
    auto F = [&](double y) {
        if (y <= a.pdf.lo) return 0.0;
        if (y >= a.pdf.hi) return 1.0;
        return cdfp.eval(y);
    };
    const double psub = c.sub_from_cdf0(F(0.0));
    c.out << "  P(subcritical) = " << num(psub) << "\n\n";
    c.rep.data["reconstruction"] = {{"approximant", kind},  {"degree", deg},
                                    {"support", {a.pdf.lo, a.pdf.hi}}, {"mass", a.mass},
                                    {"min_value", a.min_value}, {"negative_mass", a.negative_mass},
                                    {"clipped", a.clipped},  {"subcritical_probability", psub}};
    std::ostringstream p, q;
    a.pdf.write_csv(p);
    a.pdf.write_cdf_csv(q);
    c.rep.files["pdf.csv"] = p.str();
    c.rep.files["cdf.csv"] = q.str();
    nlohmann::json evals = nlohmann::json::array();
    cdf_table(c, kind, F, evals);
    c.rep.data["reconstruction"]["cdf"] = evals;
    moments_table(c, m, nullptr, nullptr);
    c.rep.data["subcritical_probability"] = psub;
}

void do_unscented(Ctx& c) {
    c.stage("unscented");
    const auto in = c.inputs();
    const auto sp = c.cfg.params.precision == 5 ? unscented::sigma_points_p5(in)
                                                : unscented::sigma_points_p3(in, c.cfg.params.kappa);
    const auto r = unscented::ut_sign_probability(c.model(), sp);
    c.out << "unscented transform, precision " << sp.precision;
    if (sp.precision == 3) c.out << ", kappa = " << num(sp.kappa);
    c.out << "\n  P(subcritical) = " << r.count << "/" << r.total << " = " << num(r.probability) << "\n\n";
    c.rep.data["unscented"] = {{"precision", sp.precision}, {"kappa", sp.kappa}, {"count", r.count},
                               {"total", r.total},          {"probability", r.probability}, {"values", r.values}};
    std::ostringstream os;
    r.write_csv(os, sp, c.model());
    c.rep.files["sigma_points.csv"] = os.str();
    c.rep.data["subcritical_probability"] = r.probability;
    if (c.cfg.params.n_samples > 0) mc_summary(c, run_mc(c, 1));
}

void do_mellin_product(Ctx& c) {
    const auto e = decomposition(c);
    c.stage("mellin");
    c.out << "Mellin transform of the coefficient\n";
    nlohmann::json vals = nlohmann::json::array();
    for (int s = 1; s <= c.cfg.params.n_moms + 1; ++s) {
        const double v = mellin::mellin_eval(e, s);
        c.out << "  M(" << s << ") = " << sci(v) << "\n";
        vals.push_back({{"s", s}, {"value", v}});
    }
    c.out << "\n";
    c.rep.data["mellin"] = vals;
    if (!e.has_pce()) do_analytic(c);
}

void do_pce(Ctx& c) {
    const auto& m = c.model();
    if (!m.pce_input) throw ConfigError("model \"" + m.name + "\" has no PCE factor");
    c.stage("pce");
    const auto& input = c.cfg.inputs.at(*m.pce_input);
    const auto germ = Distribution::uniform(0.0, 1.0);
    const auto res = pce::project(m.pce_function, input.second, germ, c.cfg.params.N, c.cfg.params.quad_nodes);
    const auto p = pce::collect_powers(res.coeffs, res.basis);
    c.out << "PCE of the factor in " << input.first << " (germ U(0,1), orthonormal shifted Legendre, N = "
          << c.cfg.params.N << ", " << (c.cfg.params.quad_nodes ? c.cfg.params.quad_nodes : c.cfg.params.N + 1)
          << " Gauss nodes)\n";
    c.out << "  coefficients:    ";
    for (double v : res.coeffs) c.out << num(v, 5) << " ";
    c.out << "\n  collected powers:";
    for (double v : p.coeffs) c.out << " " << num(v, 5);
    c.out << "\n\n";
    nlohmann::json chat = nlohmann::json::array();
    for (int s = 1; s <= c.cfg.params.n_moms + 1; ++s)
        chat.push_back({{"s", s}, {"chat", pce::chat_coefficients(p, s)}, {"mellin", pce::mellin_of_pce(p, s)}});
    c.rep.data["pce"] = {{"input", input.first}, {"coefficients", res.coeffs}, {"power_polynomial", p},
                         {"cumulated", chat}};
}

void do_moments(Ctx& c) {
    const auto m = mellin_moments(c);
    std::optional<montecarlo::McResult> mc;
    if (c.cfg.params.n_samples > 0 && !c.cfg.model.empty()) mc = run_mc(c, m.n_moms());
    moments_table(c, m, mc ? &*mc : nullptr, nullptr);
}

void do_fit_gmm(Ctx& c) {
    const auto m = mellin_moments(c);
    const auto fit = gmm_stage(c, m);
    moments_table(c, m, nullptr, &fit.mixture);
    c.rep.data["subcritical_probability"] = c.rep.data["gmm"]["subcritical_probability"];
}

}  // namespace

Report run_command(const ExperimentConfig& cfg, Command cmd) {
    Report rep;
    Ctx c{cfg, rep, {}};
    header(c, cmd == Command::Analyze ? "analyze (" + cfg.method + ")" : command_name(cmd));
    const bool needs_model = !(cmd == Command::FitGmm || cmd == Command::Reconstruct ||
                               (cmd == Command::Analyze &&
                                (cfg.method == "mellin_pce_gmm" || cfg.method == "polynomial_reconstruct")));
    if (needs_model && cfg.model.empty()) throw ConfigError("command needs a model");
    switch (cmd) {
        case Command::Analyze:
            if (cfg.method == "analytic")
                do_analytic(c);
            else if (cfg.method == "mellin_pce_gmm")
                do_mellin_pce_gmm(c);
            else if (cfg.method == "polynomial_reconstruct")
                do_reconstruct(c);
            else if (cfg.method == "unscented")
                do_unscented(c);
            else
                do_monte_carlo(c);
            break;
        case Command::MellinProduct: do_mellin_product(c); break;
        case Command::Pce: do_pce(c); break;
        case Command::Moments: do_moments(c); break;
        case Command::FitGmm: do_fit_gmm(c); break;
        case Command::Reconstruct: do_reconstruct(c); break;
        case Command::Ut: do_unscented(c); break;
        case Command::Mc: do_monte_carlo(c); break;
    }
    rep.data["stages"] = rep.stages;
    c.out << "stages: ";
    for (std::size_t i = 0; i < rep.stages.size(); ++i) c.out << (i ? ", " : "") << rep.stages[i];
    c.out << "\n";
    rep.text = c.out.str();
    return rep;
}

}  // namespace bifprob
