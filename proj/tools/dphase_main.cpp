// dphase: double phase functional laboratory.
//
// Subcommands probe weight factorizations, decay/Muckenhoupt class
// constants, polynomial interval covers, the squeezing mollifier, the
// energy approximation pipeline, and the discrete minimization
// experiments. Every seeded subcommand writes byte-identical output for a
// fixed seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

#include "dphase/classifiers.hpp"
#include "dphase/csv.hpp"
#include "dphase/decomposition.hpp"
#include "dphase/energy.hpp"
#include "dphase/experiments.hpp"
#include "dphase/mollifier.hpp"
#include "dphase/parallel.hpp"
#include "dphase/polycover.hpp"
#include "dphase/weights.hpp"

namespace {

using namespace dphase;

// Config files: TOML-style handled by CLI11's default reader (subcommand
// options live in [subcommand] sections), JSON objects translated into the
// same item stream with nesting mapped to sections.
class SniffingConfig : public CLI::ConfigTOML {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::istream::sentry s(input);
        if (input.peek() == '{') {
            nlohmann::json j;
            input >> j;
            std::vector<CLI::ConfigItem> out;
            flatten(j, {}, out);
            return out;
        }
        return CLI::ConfigTOML::from_config(input);
    }

  private:
    static void flatten(const nlohmann::json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object()) {
                auto deeper = parents;
                deeper.push_back(it.key());
                flatten(it.value(), deeper, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it.value().is_array()) {
                for (const auto& e : it.value())
                    item.inputs.push_back(e.is_string() ? e.get<std::string>() : e.dump());
            } else {
                item.inputs.push_back(it.value().is_string() ? it.value().get<std::string>()
                                                             : it.value().dump());
            }
            out.push_back(item);
        }
    }
};

Domain parse_region(const std::vector<double>& bounds) {
    if (bounds.size() == 2) return Domain::interval(bounds[0], bounds[1]);
    if (bounds.size() == 4) return Domain::box(bounds[0], bounds[1], bounds[2], bounds[3]);
    throw parameter_error("regions take 2 (interval) or 4 (box) bounds");
}

std::vector<std::string> witness_row(const Witness& w) {
    if (w.is_ball)
        return {"ball", "", "", "", "", num(w.ball.center[0]), num(w.ball.center[1]),
                num(w.ball.radius)};
    return {"pair", num(w.x[0]), num(w.x[1]), num(w.y[0]), num(w.y[1]), "", "", ""};
}

Table report_table(const ConditionReport& rep) {
    Table t;
    t.header = {"level",      "estimate",  "verdict",   "witness_kind", "x1", "x2",
                "y1",         "y2",        "ball_cx",   "ball_cy",      "ball_r"};
    for (const auto& [lvl, est] : rep.estimates) {
        std::vector<std::string> row{std::to_string(lvl), num(est),
                                     verdict_name(rep.verdict)};
        const auto wr = witness_row(rep.witness);
        row.insert(row.end(), wr.begin(), wr.end());
        t.add_row(std::move(row));
    }
    return t;
}

ScalarField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open field file " + path);
    std::string line;
    std::getline(is, line);
    const int dim = line.find("y") != std::string::npos &&
                            line.find("x,y") != std::string::npos
                        ? 2
                        : 1;
    std::vector<double> xs, ys, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> nums;
        while (std::getline(ls, tok, ',')) nums.push_back(std::stod(tok));
        if (int(nums.size()) != dim + 1) throw config_error("bad field row: " + line);
        xs.push_back(nums[0]);
        if (dim == 2) ys.push_back(nums[1]);
        vs.push_back(nums.back());
    }
    if (vs.size() < 2) throw config_error("field file too small");
    if (dim == 1) {
        ScalarField f = ScalarField::lattice(Domain::interval(xs.front(), xs.back()),
                                             int(xs.size()));
        f.values = vs;
        return f;
    }
    const double x0 = xs.front(), y0 = ys.front();
    int nx = 0;
    while (nx < int(xs.size()) && ys[std::size_t(nx)] == y0) ++nx;
    const int ny = int(vs.size()) / nx;
    ScalarField f = ScalarField::lattice(
        Domain::box(x0, xs[std::size_t(nx - 1)], y0, ys.back()), nx, ny);
    f.values = vs;
    return f;
}

void write_field_csv(const ScalarField& f, const std::string& path,
                     const std::string& format) {
    Table t;
    t.header = f.dim() == 1 ? std::vector<std::string>{"x", "value"}
                            : std::vector<std::string>{"x", "y", "value"};
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            const Point p = f.node(i, j);
            if (f.dim() == 1)
                t.add_row({num(p[0]), num(f.at(i, j))});
            else
                t.add_row({num(p[0]), num(p[1]), num(f.at(i, j))});
        }
    t.write(path, format);
}

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
    std::string format = "csv";
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dphase: numerical laboratory for double phase functionals"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<SniffingConfig>());
    app.set_config("--config", "", "config file (TOML or JSON) mirroring the flags");

    GlobalOpts g;
    app.add_option("--seed", g.seed, "seed for all sampling")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads")->capture_default_str();
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--format", g.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // catalog
    auto* cmd_catalog = app.add_subcommand("catalog", "list the example weights; writes name,N,k,alpha,claims");
    std::string catalog_action = "list";
    cmd_catalog->add_option("action", catalog_action, "list")
        ->check(CLI::IsMember({"list"}));

    // decompose
    auto* cmd_dec = app.add_subcommand("decompose", "tabulate the factorization a = sigma*omega; writes x[,y],a,sigma,omega");
    std::string dec_weight = "power2n:1";
    int dec_k = -1, dec_res = 1001;
    double dec_alpha = -1.0;
    std::vector<double> dec_region{-1.0, 1.0};
    cmd_dec->add_option("--weight", dec_weight, "catalog weight name");
    cmd_dec->add_option("--k", dec_k, "override smoothness order");
    cmd_dec->add_option("--alpha", dec_alpha, "override Hoelder exponent");
    cmd_dec->add_option("--region", dec_region, "a,b or ax,bx,ay,by")->expected(2, 4)->delimiter(',');
    cmd_dec->add_option("--resolution", dec_res, "grid points per axis");

    // zconst
    auto* cmd_z = app.add_subcommand("zconst", "decay-class constant estimate; writes level,estimate,verdict,witness fields");
    std::string z_weight = "power2n:1";
    double z_kappa = 2.0;
    int z_levels = 3;
    std::vector<double> z_region{-1.0, 1.0};
    std::string z_part = "raw";
    double z_stab = 0.25, z_growth = 10.0;
    cmd_z->add_option("--weight", z_weight, "catalog weight name");
    cmd_z->add_option("--kappa", z_kappa, "decay exponent kappa > 0");
    cmd_z->add_option("--region", z_region)->expected(2, 4)->delimiter(',');
    cmd_z->add_option("--levels", z_levels);
    cmd_z->add_option("--part", z_part, "raw | sigma | omega")
        ->check(CLI::IsMember({"raw", "sigma", "omega"}));
    cmd_z->add_option("--stabilization", z_stab, "bounded threshold");
    cmd_z->add_option("--growth", z_growth, "diverging threshold");

    // muck / muck-global
    auto* cmd_m = app.add_subcommand("muck", "Muckenhoupt constant estimate; writes level,estimate,verdict,witness fields");
    auto* cmd_mg = app.add_subcommand("muck-global", "global Muckenhoupt variant; writes level,estimate,verdict,witness fields");
    std::string m_weight = "power2n:1", m_part = "raw";
    double m_r = 3.5, m_stab = 0.25, m_growth = 10.0;
    int m_levels = 3;
    std::vector<double> m_inner{-1.0, 1.0}, m_outer{-2.0, 2.0};
    for (auto* cmd : {cmd_m, cmd_mg}) {
        cmd->add_option("--weight", m_weight, "catalog weight name");
        cmd->add_option("--r", m_r, "Muckenhoupt index r > 1");
        cmd->add_option("--inner", m_inner, "region the weight lives on")->expected(2, 4)->delimiter(',');
        cmd->add_option("--levels", m_levels);
        cmd->add_option("--part", m_part)->check(CLI::IsMember({"raw", "sigma", "omega"}));
        cmd->add_option("--stabilization", m_stab);
        cmd->add_option("--growth", m_growth);
    }
    cmd_m->add_option("--outer", m_outer, "balls stay inside this region")->expected(2, 4)->delimiter(',');

    // classify
    auto* cmd_cl = app.add_subcommand("classify", "exponent gate plus factor class checks; writes record,condition,parameter,level,estimate,verdict");
    std::string cl_weight = "power2n:1";
    double cl_p = 2.0, cl_q = 4.0;
    int cl_levels = 3;
    std::vector<double> cl_inner{-1.0, 1.0}, cl_outer{-2.0, 2.0};
    cmd_cl->add_option("--weight", cl_weight);
    cmd_cl->add_option("--p", cl_p);
    cmd_cl->add_option("--q", cl_q);
    cmd_cl->add_option("--inner", cl_inner)->expected(2, 4)->delimiter(',');
    cmd_cl->add_option("--outer", cl_outer)->expected(2, 4)->delimiter(',');
    cmd_cl->add_option("--levels", cl_levels);

    // polycover
    auto* cmd_pc = app.add_subcommand("polycover", "interval cover for a nonnegative polynomial; writes s,tau");
    std::vector<double> pc_coeffs{1.0, -2.0, 1.0};
    double pc_T = 2.0, pc_eps = 1.0;
    long pc_verify = 0;
    cmd_pc->add_option("--coeffs", pc_coeffs, "lambda_0,...,lambda_k")->required()->delimiter(',');
    cmd_pc->add_option("--T", pc_T);
    cmd_pc->add_option("--eps", pc_eps);
    cmd_pc->add_option("--verify", pc_verify, "run the brute-force oracle at N samples");

    // mollify
    auto* cmd_mo = app.add_subcommand("mollify", "squeeze-mollify a lattice field; reads and writes x[,y],value");
    std::string mo_field;
    double mo_delta = 0.05, mo_R = 0.9;
    std::vector<double> mo_x0{0.0};
    cmd_mo->add_option("--field", mo_field, "CSV field file (x[,y],value)")->required();
    cmd_mo->add_option("--delta", mo_delta);
    cmd_mo->add_option("--x0", mo_x0, "star center")->expected(1, 2)->delimiter(',');
    cmd_mo->add_option("--R", mo_R, "inner star radius");

    // approx
    auto* cmd_ap = app.add_subcommand("approx", "truncate-and-mollify approximation trace; writes delta,energy,p_term,q_term,w11_error,equi_index");
    std::string ap_weight = "power2n:1", ap_mode = "i";
    double ap_p = 2.0, ap_q = 4.0, ap_gamma = -1.0, ap_R = 0.9;
    std::vector<double> ap_region{-1.0, 1.0};
    std::vector<double> ap_deltas{0.05, 0.02, 0.01};
    cmd_ap->add_option("--weight", ap_weight);
    cmd_ap->add_option("--p", ap_p);
    cmd_ap->add_option("--q", ap_q);
    cmd_ap->add_option("--mode", ap_mode)->check(CLI::IsMember({"i", "ii"}));
    cmd_ap->add_option("--gamma", ap_gamma, "Hoelder exponent for mode ii");
    cmd_ap->add_option("--region", ap_region)->expected(2)->delimiter(',');
    cmd_ap->add_option("--R", ap_R, "inner star radius");
    cmd_ap->add_option("--deltas", ap_deltas, "strictly decreasing schedule")->delimiter(',');

    // minimize
    auto* cmd_mi = app.add_subcommand("minimize", "discrete convex minimization; writes x[,y],value, summary on stderr");
    std::string mi_weight = "power2n:1";
    double mi_p = 2.0, mi_q = 4.0, mi_tol = 1e-8;
    double mi_u0a = 0.0, mi_u0b = 1.0;
    int mi_level = 4;
    std::vector<double> mi_region{0.0, 1.0};
    cmd_mi->add_option("--weight", mi_weight);
    cmd_mi->add_option("--p", mi_p);
    cmd_mi->add_option("--q", mi_q);
    cmd_mi->add_option("--region", mi_region)->expected(2, 4)->delimiter(',');
    cmd_mi->add_option("--level", mi_level);
    cmd_mi->add_option("--u0a", mi_u0a, "left boundary value (1D)");
    cmd_mi->add_option("--u0b", mi_u0b, "right boundary value (1D)");
    cmd_mi->add_option("--tol", mi_tol);

    // absence
    auto* cmd_ab = app.add_subcommand("absence", "absence-of-gap experiment; writes record,value rows");
    std::string ab_weight = "power2n:1";
    double ab_p = 2.0, ab_q = 4.0, ab_R = -1.0;
    std::vector<double> ab_region{0.0, 1.0};
    std::vector<int> ab_levels{3, 4, 5};
    cmd_ab->add_option("--weight", ab_weight);
    cmd_ab->add_option("--p", ab_p);
    cmd_ab->add_option("--q", ab_q);
    cmd_ab->add_option("--region", ab_region)->expected(2)->delimiter(',');
    cmd_ab->add_option("--levels", ab_levels)->delimiter(',');
    cmd_ab->add_option("--R", ab_R, "inner star radius (default 0.45 * width)");

    // gap
    auto* cmd_gap = app.add_subcommand("gap", "cone-weight gap experiment on the unit disk; writes record,value rows");
    GapConfig gap_cfg;
    std::string gap_control = "none";
    cmd_gap->add_option("--theta", gap_cfg.cone_half_angle);
    cmd_gap->add_option("--kalpha", gap_cfg.k_alpha);
    cmd_gap->add_option("--p", gap_cfg.p);
    cmd_gap->add_option("--q", gap_cfg.q);
    cmd_gap->add_option("--levels", gap_cfg.mesh_levels)->delimiter(',');
    cmd_gap->add_option("--margin", gap_cfg.margin_threshold);
    cmd_gap->add_option("--stabilization", gap_cfg.stabilization);
    cmd_gap->add_option("--control", gap_control, "none | single-phase | in-range")
        ->check(CLI::IsMember({"none", "single-phase", "in-range"}));

    // let --seed/--out/--format appear after the subcommand name, and let
    // config file sections address each subcommand
    for (CLI::App* sc : app.get_subcommands([](CLI::App*) { return true; })) {
        sc->fallthrough(true);
        sc->configurable(true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 64;
    }

    set_thread_count(g.threads);
    const VerdictThresholds zth{z_stab, z_growth};
    const VerdictThresholds mth{m_stab, m_growth};

    try {
        if (*cmd_catalog) {
            Table t;
            t.header = {"name", "N", "k", "alpha", "claims"};
            for (const auto& name : catalog_names()) {
                const CatalogEntry e = catalog_get(name);
                std::string claims;
                for (const auto& c : e.claims) {
                    if (!claims.empty()) claims += ";";
                    claims += c.condition + ":" + num(c.parameter) + ":" + c.expected;
                }
                t.add_row({e.name, std::to_string(e.weight.dim),
                           std::to_string(e.weight.k), num(e.weight.alpha), claims});
            }
            t.write(g.out, g.format);
        } else if (*cmd_dec) {
            CatalogEntry e = catalog_get(dec_weight);
            Weight w = e.weight;
            if (dec_k >= 0 || dec_alpha > 0.0)
                w = with_smoothness(w, dec_k >= 0 ? dec_k : w.k,
                                    dec_alpha > 0.0 ? dec_alpha : w.alpha);
            const DecompositionField f =
                decompose_on_grid(w, parse_region(dec_region), dec_res);
            Table t;
            t.header = f.dim == 1 ? std::vector<std::string>{"x", "a", "sigma", "omega"}
                                  : std::vector<std::string>{"x", "y", "a", "sigma", "omega"};
            for (std::size_t i = 0; i < f.grid.size(); ++i) {
                std::vector<std::string> row{num(f.grid[i][0])};
                if (f.dim == 2) row.push_back(num(f.grid[i][1]));
                row.push_back(num(f.a[i]));
                row.push_back(num(f.sigma[i]));
                row.push_back(num(f.omega[i]));
                t.add_row(std::move(row));
            }
            t.write(g.out, g.format);
        } else if (*cmd_z) {
            const CatalogEntry e = catalog_get(z_weight);
            const FieldOracle oracle = z_part == "sigma"   ? sigma_oracle(e.weight)
                                       : z_part == "omega" ? omega_oracle(e.weight)
                                                           : weight_oracle(e.weight);
            const ConditionReport rep =
                z_constant(oracle, z_kappa, parse_region(z_region), z_levels, g.seed, zth);
            report_table(rep).write(g.out, g.format);
        } else if (*cmd_m || *cmd_mg) {
            const CatalogEntry e = catalog_get(m_weight);
            const FieldOracle oracle = m_part == "sigma"   ? sigma_oracle(e.weight)
                                       : m_part == "omega" ? omega_oracle(e.weight)
                                                           : weight_oracle(e.weight);
            const ConditionReport rep =
                *cmd_m ? muckenhoupt_constant(oracle, m_r, parse_region(m_inner),
                                              parse_region(m_outer), m_levels, g.seed, mth)
                       : global_muckenhoupt_constant(oracle, m_r, parse_region(m_inner),
                                                     m_levels, g.seed, mth);
            report_table(rep).write(g.out, g.format);
        } else if (*cmd_cl) {
            const CatalogEntry e = catalog_get(cl_weight);
            const ClassifyReport rep =
                classify_weight(e.weight, cl_p, cl_q, parse_region(cl_inner),
                                parse_region(cl_outer), cl_levels, g.seed);
            Table t;
            t.header = {"record", "condition", "parameter", "level", "estimate", "verdict"};
            t.add_row({"gate", "q<=p+(k+a)max(1,p/N)", num(rep.gate_rhs), "",
                       num(rep.q), rep.gate ? "holds" : "fails"});
            for (const auto& [lvl, est] : rep.sigma_z.estimates)
                t.add_row({"sigma_z", "Z", num(rep.sigma_z.parameter),
                           std::to_string(lvl), num(est), verdict_name(rep.sigma_z.verdict)});
            for (const auto& [lvl, est] : rep.omega_a.estimates)
                t.add_row({"omega_a", "A", num(rep.omega_a.parameter),
                           std::to_string(lvl), num(est), verdict_name(rep.omega_a.verdict)});
            t.add_row({"overall", "", "", "", "", verdict_name(rep.overall)});
            t.write(g.out, g.format);
        } else if (*cmd_pc) {
            const Polynomial P{pc_coeffs};
            const IntervalCover cover = interval_cover(P, pc_T, pc_eps);
            if (pc_verify > 0) {
                const CoverCheck check = verify_cover(P, pc_T, pc_eps, cover, pc_verify);
                std::cerr << "verified=" << (check.ok ? "true" : "false");
                if (check.has_counterexample)
                    std::cerr << " counterexample=" << num(check.counterexample);
                std::cerr << " max_ratio=" << num(cover.max_ratio)
                          << " ratio_bound=" << num(cover.ratio_bound) << "\n";
                if (!check.ok) return 3;
            }
            Table t;
            t.header = {"s", "tau"};
            for (const auto& [s, tau] : cover.intervals) t.add_row({num(s), num(tau)});
            t.write(g.out, g.format);
        } else if (*cmd_mo) {
            const ScalarField u = read_field_csv(mo_field);
            Point x0{mo_x0[0], mo_x0.size() > 1 ? mo_x0[1] : 0.0};
            const StarShape star = StarShape::make(u.domain, x0, mo_R);
            const MollifierConfig cfg = MollifierConfig::make(star, mo_delta);
            write_field_csv(mollify_field(cfg, u), g.out, g.format);
        } else if (*cmd_ap) {
            const CatalogEntry e = catalog_get(ap_weight);
            const Domain omega = parse_region(ap_region);
            const EnergySpec spec = EnergySpec::make(ap_p, ap_q, e.weight, omega, 3);
            const StarShape star = StarShape::make(
                omega, {0.5 * (omega.lo[0] + omega.hi[0]), 0.0}, ap_R);
            const int nx = 4097;
            const double mid = 0.5 * (omega.lo[0] + omega.hi[0]);
            const double half = 0.5 * (omega.hi[0] - omega.lo[0]);
            const ScalarField u = ScalarField::sample(
                omega, nx, 1, [&](const Point& x) {
                    return std::max(0.0, 1.0 - std::abs(x[0] - mid) / half);
                });
            const ApproximationTrace tr = approximate(
                u, spec, star, ap_deltas,
                ap_mode == "i" ? ApproxMode::CaseI : ApproxMode::CaseII,
                ap_gamma > 0.0 ? std::optional<double>(ap_gamma) : std::nullopt);
            Table t;
            t.header = {"delta", "energy", "p_term", "q_term", "w11_error", "equi_index"};
            for (std::size_t i = 0; i < tr.deltas.size(); ++i)
                t.add_row({num(tr.deltas[i]), num(tr.energies[i]), num(tr.p_terms[i]),
                           num(tr.q_terms[i]), num(tr.w11_errors[i]),
                           num(tr.equi_indices[i])});
            t.write(g.out, g.format);
        } else if (*cmd_mi) {
            const CatalogEntry e = catalog_get(mi_weight);
            const Domain omega = parse_region(mi_region);
            const EnergySpec spec = EnergySpec::make(mi_p, mi_q, e.weight, omega, 3);
            const double a = omega.lo[0], b = omega.hi[0];
            auto u0 = [&](const Point& x) {
                if (omega.dim == 2) return x[0];
                return mi_u0a + (mi_u0b - mi_u0a) * (x[0] - a) / (b - a);
            };
            const MinimizationResult res = minimize_discrete(spec, mi_level, u0, mi_tol);
            std::cerr << "energy=" << num(res.energy) << " iterations=" << res.iterations
                      << " residual=" << num(res.residual) << "\n";
            write_field_csv(res.minimizer, g.out, g.format);
        } else if (*cmd_ab) {
            const CatalogEntry e = catalog_get(ab_weight);
            const Domain omega = parse_region(ab_region);
            const double R = ab_R > 0.0 ? ab_R : 0.45 * (omega.hi[0] - omega.lo[0]);
            const StarShape star =
                StarShape::make(omega, {0.5 * (omega.lo[0] + omega.hi[0]), 0.0}, R);
            const GapReport rep = absence_experiment(e.weight, ab_p, ab_q, ab_levels, star);
            Table t;
            t.header = {"record", "value"};
            t.add_row({"competitor_energy", num(rep.competitor_energy)});
            for (std::size_t i = 0; i < rep.minima.size(); ++i)
                t.add_row({"min_level_" + std::to_string(ab_levels[i]), num(rep.minima[i])});
            for (std::size_t i = 0; i < rep.pipeline_energies.size(); ++i)
                t.add_row({"pipeline_" + std::to_string(i), num(rep.pipeline_energies[i])});
            t.add_row({"margin", num(rep.margin)});
            t.add_row({"verdict", gap_verdict_name(rep.verdict)});
            t.write(g.out, g.format);
        } else if (*cmd_gap) {
            GapConfig cfg = gap_cfg;
            if (gap_control == "single-phase") {
                cfg.single_phase = true;
            } else if (gap_control == "in-range") {
                cfg.q = std::min(cfg.q, cfg.p + cfg.k_alpha * std::max(1.0, cfg.p / 2.0));
            }
            const GapReport rep = gap_experiment(cfg);
            Table t;
            t.header = {"record", "value"};
            t.add_row({"competitor_energy", num(rep.competitor_energy)});
            t.add_row({"oracle_value", num(rep.oracle_value)});
            for (std::size_t i = 0; i < rep.minima.size(); ++i)
                t.add_row({"min_level_" + std::to_string(cfg.mesh_levels[i]),
                           num(rep.minima[i])});
            t.add_row({"margin", num(rep.margin)});
            t.add_row({"verdict", gap_verdict_name(rep.verdict)});
            t.write(g.out, g.format);
        }
    } catch (const gate_refused& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
