#include "scenarios.hpp"

#include <filesystem>

#include "ops.hpp"
#include "spectral.hpp"
#include "synthetic.hpp"

namespace ciw {

namespace {

namespace fs = std::filesystem;

void push(std::vector<ReportRecord>& recs, int q, const std::string& quantity, double value,
          double tol, bool pass, const std::string& module, const std::string& op,
          int sample = -1) {
    ReportRecord r;
    r.q = q;
    r.quantity = quantity;
    r.value = value;
    r.tolerance = tol;
    r.has_tolerance = true;
    r.pass = pass;
    r.module = module;
    r.op = op;
    r.sample = sample;
    recs.push_back(r);
}

void push_info(std::vector<ReportRecord>& recs, int q, const std::string& quantity, double value,
               const std::string& module, const std::string& op, int sample = -1) {
    ReportRecord r;
    r.q = q;
    r.quantity = quantity;
    r.value = value;
    r.has_tolerance = false;
    r.module = module;
    r.op = op;
    r.sample = sample;
    recs.push_back(r);
}

bool run_verify_identities(const RunConfig& cfg, std::vector<ReportRecord>& recs,
                           ordered_json& doc);
bool run_iterate(const RunConfig& cfg, std::vector<ReportRecord>& recs, ordered_json& doc);
bool run_scaling(const RunConfig& cfg, std::vector<ReportRecord>& recs, ordered_json& doc);
bool run_euler_limit(const RunConfig& cfg, std::vector<ReportRecord>& recs, ordered_json& doc);

}  // namespace

ordered_json geometry_json(int d) {
    DirectionSet ds = build_direction_set(d);
    ordered_json o;
    o["schema_version"] = 1;
    o["dim"] = d;
    o["N_Lambda"] = ds.N_Lambda;
    o["eps_u"] = ds.eps_u;
    o["cond_M"] = ds.cond_M;
    ordered_json dirs = ordered_json::array();
    for (const auto& dir : ds.dirs) {
        ordered_json jd;
        jd["k"] = {dir.frame_num[0][0], dir.frame_num[0][1], dir.frame_num[0][2]};
        jd["den"] = dir.den;
        dirs.push_back(jd);
    }
    o["directions"] = dirs;
    ordered_json cid = ordered_json::array();
    for (double c : ds.c_id) cid.push_back(c);
    o["c_identity"] = cid;
    return o;
}

std::shared_ptr<MollifiedState> make_synthetic_mollified(const GridPtr& g, std::uint64_t seed) {
    auto ml = std::make_shared<MollifiedState>();
    ml->rho = ScalarTimeField(g);
    ml->m = VectorTimeField(g);
    ml->R = SymTensorTimeField(g);
    ml->P = ScalarTimeField(g);
    ml->R_com = SymTensorTimeField(g);
    ml->ell_x = 0.1;
    ml->ell_t = 0.0;

    ScalarField s1 = TrigPoly::random(g->dim(), 2, 4, seed).sample(g);
    ScalarField s2 = TrigPoly::random(g->dim(), 2, 4, seed + 1).sample(g);
    ScalarField s3 = TrigPoly::random(g->dim(), 2, 4, seed + 2).sample(g);
    double a1 = 0.2 / s1.max_abs(), a2 = 0.4 / s2.max_abs(), a3 = 0.3 / s3.max_abs();
    const double T = g->horizon();
    for (int i = 0; i < g->nt(); ++i) {
        double t = g->time_at(i);
        // stress active strictly inside (T/4, 3T/4)
        double b = bump((t - T / 2.0) / (T / 4.0)) / bump(0.0);
        double slow = 0.9 + 0.1 * std::cos(t / T);
        ml->rho.s[i] = ScalarField(g, 1.0);
        axpy(a1 * slow, s1, ml->rho.s[i]);
        ml->R.s[i] = SymTensorField(g);
        ml->R.s[i].c[0] = (a2 * b) * s2;
        ml->R.s[i].c[ml->R.s[i].comps() - 1] = (-a3 * b) * s3;
        ml->R.s[i].c[1] = (0.3 * a2 * b) * s3;
        ml->m.s[i] = VectorField(g);
        axpy(0.1 * b, gradient(s1), ml->m.s[i]);
    }
    return ml;
}

namespace {

bool run_verify_identities(const RunConfig& cfg, std::vector<ReportRecord>& recs,
                           ordered_json& doc) {
    auto g = make_grid(cfg.d, cfg.n, cfg.nt, cfg.T);
    auto ds = std::make_shared<const DirectionSet>(build_direction_set(cfg.d));
    auto ml = make_synthetic_mollified(g, cfg.seed);
    ConstructionParams par = cfg.ledger.construction(cfg.mode);
    auto pb = build_perturbation(ml, ds, par);

    IdentityReport rep = verify_cancellations(*pb);
    bool ok = true;
    for (const auto& row : rep.rows) {
        bool finite_tol = std::isfinite(row.tolerance) && row.tolerance > 0.0;
        if (finite_tol) {
            bool pass = row.residual <= row.tolerance;
            ok = ok && pass;
            push(recs, 0, "identity." + row.name, row.residual, row.tolerance, pass,
                 "perturbation_builder", "verify_cancellations");
        } else {
            push_info(recs, 0, "identity." + row.name, row.residual, "perturbation_builder",
                      "verify_cancellations");
        }
    }

    // amplitude-layer guarantees
    push(recs, 0, "amplitudes.sup_R_over_varrho", pb->amps().sup_ratio, ds->eps_u,
         pb->amps().sup_ratio <= ds->eps_u, "perturbation_builder", "build_amplitudes");
    push(recs, 0, "chi.flat_region", std::fabs(chi(0.5) - 1.0), 1e-15, chi(0.5) == 1.0,
         "perturbation_builder", "chi");
    push(recs, 0, "chi.linear_region", std::fabs(chi(3.0) - 3.0), 1e-15, chi(3.0) == 3.0,
         "perturbation_builder", "chi");
    bool chi_mid = chi(1.5) >= 0.75 && chi(1.5) <= 3.0;
    push(recs, 0, "chi.blend_region", chi(1.5), 3.0, chi_mid, "perturbation_builder", "chi");

    // density perturbation structure
    double z0 = sup_norm(pb->z().s[0]);
    push(recs, 0, "z.initial_value", z0, 1e-14, z0 <= 1e-14, "perturbation_builder",
         "build_perturbation", 0);
    double zmean = 0.0, zsup = 0.0;
    for (int i = 0; i < g->nt(); ++i) {
        zmean = std::max(zmean, std::fabs(pb->z().s[i].mean()));
        zsup = std::max(zsup, sup_norm(pb->z().s[i]));
    }
    push(recs, 0, "z.spatial_mean", zmean, 1e-12 * std::max(1.0, zsup), true,
         "perturbation_builder", "build_perturbation");

    // exported perturbations are mean-free sample by sample
    double wmean = 0.0, wsup = 1e-30;
    for (int i = 0; i < g->nt(); ++i) {
        VectorField w = pb->w(i);
        wsup = std::max(wsup, sup_norm(w));
        for (int a = 0; a < cfg.d; ++a) wmean = std::max(wmean, std::fabs(w.c[a].mean()));
    }
    bool mf = wmean <= 1e-12 * std::max(1.0, wsup);
    ok = ok && mf;
    push(recs, 0, "w.mean_free", wmean, 1e-12 * std::max(1.0, wsup), mf,
         "perturbation_builder", "build_perturbation");

    // temporal support confinement: w and z vanish before the stress window
    int first_active = g->nt();
    for (int i = 0; i < g->nt(); ++i)
        if (pb->amps().f[i] > 0.0) {
            first_active = i;
            break;
        }
    double leak = 0.0;
    for (int i = 0; i < first_active; ++i)
        leak = std::max(leak, sup_norm(pb->w(i)));
    push(recs, 0, "w.support_confined", leak, 1e-13 * std::max(1.0, wsup),
         leak <= 1e-13 * std::max(1.0, wsup), "perturbation_builder", "build_perturbation");

    // inverse-divergence spot checks on this grid
    {
        VectorField v(g);
        for (int a = 0; a < cfg.d; ++a)
            v.c[a] = TrigPoly::random(cfg.d, 5, 8, cfg.seed + 11 + a).sample(g);
        SymTensorField R = inverse_divergence(v);
        VectorField dv = divergence(R);
        double err = 0.0;
        for (int a = 0; a < cfg.d; ++a)
            for (std::int64_t p = 0; p < g->points(); ++p)
                err = std::max(err, std::fabs(dv.c[a].v[p] - v.c[a].v[p]));
        double rel = err / sup_norm(v);
        ok = ok && rel <= 1e-10;
        push(recs, 0, "inverse_divergence.r_iden", rel, 1e-10, rel <= 1e-10, "field_operators",
             "inverse_divergence");
        double tr = trace(R).max_abs() / std::max(1.0, R.max_frobenius());
        ok = ok && tr <= 1e-12;
        push(recs, 0, "inverse_divergence.trace_free", tr, 1e-12, tr <= 1e-12,
             "field_operators", "inverse_divergence");
    }

    ordered_json ids = ordered_json::array();
    for (const auto& row : rep.rows) {
        ordered_json o;
        o["name"] = row.name;
        o["residual"] = row.residual;
        if (std::isfinite(row.tolerance)) o["tolerance"] = row.tolerance;
        o["per_sample"] = row.per_sample;
        ids.push_back(o);
    }
    doc["identities"] = ids;
    return ok && rep.all_pass();
}

bool run_iterate(const RunConfig& cfg, std::vector<ReportRecord>& recs, ordered_json& doc) {
    auto g = make_grid(cfg.d, cfg.n, cfg.nt, cfg.T);
    DirectionSet ds0 = build_direction_set(cfg.d);
    ParameterLedger led = make_ledger(cfg.ledger, cfg.n, ds0.N_Lambda);

    TransportPair tp = make_transport_pair(
        g, cfg.mode == FlowMode::incompressible ? 0.0 : 0.2, 0.5, cfg.seed);
    RelaxedState st = init_from_transport(tp.rho, tp.m, led, cfg.mode);
    ResidualReport r0 = residual_check(st, st.R, led.phys(), cfg.mode);
    push(recs, 0, "residual.continuity", r0.continuity_rel, 1e-6, r0.continuity_rel <= 1e-6,
         "reynolds_assembler", "residual_check");
    push(recs, 0, "residual.momentum", r0.momentum_rel, 1e-4, r0.momentum_rel <= 1e-4,
         "reynolds_assembler", "residual_check");
    bool ok = r0.continuity_rel <= 1e-6 && r0.momentum_rel <= 1e-4;

    ordered_json steps = ordered_json::array();
    for (int step = 0; step < cfg.steps; ++step) {
        IterateResult res = iterate_once(st, led, cfg.mode);
        const StepDiagnostics& dg = res.diag;
        int q = dg.q;

        bool cont_ok = dg.residual.continuity_rel <= 1e-6;
        bool mom_ok = dg.residual.momentum_rel <= 1e-4;
        double mass = dg.values.at("mass_drift");
        bool mass_ok = mass <= 1e-10;
        ok = ok && cont_ok && mom_ok && mass_ok;
        push(recs, q, "residual.continuity", dg.residual.continuity_rel, 1e-6, cont_ok,
             "reynolds_assembler", "residual_check");
        push(recs, q, "residual.momentum", dg.residual.momentum_rel, 1e-4, mom_ok,
             "reynolds_assembler", "residual_check");
        push(recs, q, "mass.drift", mass, 1e-10, mass_ok, "perturbation_builder",
             "assemble_next_state");
        for (const auto& row : dg.identities.rows) {
            if (!std::isfinite(row.tolerance) || row.tolerance <= 0.0) {
                push_info(recs, q, "identity." + row.name, row.residual,
                          "perturbation_builder", "verify_cancellations");
                continue;
            }
            push(recs, q, "identity." + row.name, row.residual, row.tolerance,
                 row.residual <= row.tolerance, "perturbation_builder", "verify_cancellations");
        }
        for (const auto& pn : dg.reynolds_norms)
            push_info(recs, q, "reynolds." + pn.name + ".L1tCx", pn.l1_c, "reynolds_assembler",
                      "assemble_reynolds");
        for (const auto& [k, v] : dg.values) push_info(recs, q, k, v, "iteration_driver",
                                                       "iterate_once");

        ordered_json sd;
        sd["schema_version"] = 1;
        sd["q"] = q;
        for (const auto& [k, v] : dg.values) sd[k] = v;
        sd["wall_seconds"] = dg.wall_seconds;
        ordered_json rn = ordered_json::array();
        for (const auto& pn : dg.reynolds_norms) {
            ordered_json o;
            o["part"] = pn.name;
            o["L1tCx"] = pn.l1_c;
            o["sup"] = pn.sup;
            rn.push_back(o);
        }
        sd["reynolds_norms"] = rn;
        steps.push_back(sd);
        if (!cfg.out_dir.empty())
            write_json(cfg.out_dir + "/step_" + std::to_string(q) + ".json", sd);

        st = std::move(res.next);
    }
    doc["steps"] = steps;
    return ok;
}

bool run_scaling(const RunConfig& cfg, std::vector<ReportRecord>& recs, ordered_json& doc) {
    ScalingConfig sc;
    sc.n = std::min(cfg.n, 128);
    sc.nt = 33;
    sc.T = cfg.T;
    sc.alpha = cfg.ledger.alpha;
    sc.mu = cfg.ledger.mu;
    sc.nu = cfg.ledger.nu;
    sc.seed = cfg.seed;

    struct Exp {
        std::string name;
        std::vector<double> ladder;
        double p;
        double expected;
        double tol;       // |slope - expected| <= tol; tol < 0: slope <= expected
    };
    std::vector<Exp> exps = {
        {"gk", {4, 16, 64}, 1.0, -0.5, 0.05},
        {"gk", {4, 16, 64}, 2.0, 0.0, 0.05},
        {"gk", {4, 16, 64}, 4.0, 0.25, 0.05},
        {"wprin", {4, 16, 64}, 1.0, -0.5, 0.05},
        {"wc_ratio", {8, 16, 32}, 0.0, -1.0, 0.05},
        {"stationary_phase", {8, 16, 32, 64}, 0.0, -(1.0 - sc.eps_holder), 0.1},
        {"decorrelation", {4, 16, 64}, 2.0, -0.4, -1.0},
        {"osc1", {8, 16, 32}, 0.0, -0.7, -1.0},
        {"osc2", {2, 4, 8, 16}, 0.0, -1.0, 0.15},
    };

    bool ok = true;
    ordered_json arr = ordered_json::array();
    for (const auto& e : exps) {
        ScalingConfig c2 = sc;
        c2.p_exp = e.p;
        ScalingReport rep = scaling_ladder(e.name, e.ladder, c2);
        bool pass = e.tol >= 0.0 ? std::fabs(rep.fit.slope - e.expected) <= e.tol
                                 : rep.fit.slope <= e.expected;
        ok = ok && pass;
        std::string label = e.name + (e.p > 0 ? "_p" + std::to_string((int)e.p) : "");
        push(recs, 0, "scaling." + label + ".slope", rep.fit.slope, e.expected, pass,
             "iteration_driver", "scaling_ladder");
        push_info(recs, 0, "scaling." + label + ".r_squared", rep.fit.r_squared,
                  "iteration_driver", "scaling_ladder");
        ordered_json o;
        o["experiment"] = label;
        o["x"] = rep.x;
        o["y"] = rep.y;
        o["slope"] = rep.fit.slope;
        o["intercept"] = rep.fit.intercept;
        o["r_squared"] = rep.fit.r_squared;
        o["expected"] = e.expected;
        o["pass"] = pass;
        arr.push_back(o);
    }
    doc["scaling"] = arr;
    return ok;
}

bool run_euler_limit(const RunConfig& cfg, std::vector<ReportRecord>& recs, ordered_json& doc) {
    auto g = make_grid(cfg.d, cfg.n, cfg.nt, cfg.T);
    TransportPair tp = make_rough_pair(g, 0.5, cfg.n / 4, cfg.seed);
    std::vector<double> lambdas{8, 16, 32};
    ScalingReport rep =
        euler_mollification_reynolds(tp.rho, tp.m, lambdas, cfg.ledger.phys());
    bool decreasing = true;
    for (size_t i = 1; i < rep.y.size(); ++i) decreasing = decreasing && rep.y[i] < rep.y[i - 1];
    bool slope_ok = rep.fit.slope <= -0.3;
    push(recs, 0, "euler_limit.monotone_decrease", decreasing ? 1.0 : 0.0, 1.0, decreasing,
         "reynolds_assembler", "euler_mollification_reynolds");
    push(recs, 0, "euler_limit.slope", rep.fit.slope, -0.3, slope_ok, "reynolds_assembler",
         "euler_mollification_reynolds");
    ordered_json o;
    o["x"] = rep.x;
    o["y"] = rep.y;
    o["slope"] = rep.fit.slope;
    o["r_squared"] = rep.fit.r_squared;
    doc["euler_limit"] = o;
    return decreasing && slope_ok;
}

}  // namespace

bool run_scenario(const RunConfig& cfg) {
    if (!cfg.out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(cfg.out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + cfg.out_dir);
    }

    std::vector<ReportRecord> recs;
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["scenario"] = cfg.scenario;
    doc["grid"] = {{"d", cfg.d}, {"n", cfg.n}, {"n_t", cfg.nt}, {"T", cfg.T}};
    doc["seed"] = cfg.seed;

    bool ok = true;
    if (cfg.scenario == "verify-identities") {
        ok = run_verify_identities(cfg, recs, doc);
    } else if (cfg.scenario == "iterate") {
        ok = run_iterate(cfg, recs, doc);
    } else if (cfg.scenario == "scaling-laws") {
        ok = run_scaling(cfg, recs, doc);
    } else if (cfg.scenario == "geometry") {
        ordered_json gj = geometry_json(cfg.d);
        doc["geometry"] = gj;
        push_info(recs, 0, "geometry.eps_u", gj["eps_u"].get<double>(), "direction_geometry",
                  "build_direction_set");
        push_info(recs, 0, "geometry.cond_M", gj["cond_M"].get<double>(), "direction_geometry",
                  "build_direction_set");
        push_info(recs, 0, "geometry.N_Lambda", gj["N_Lambda"].get<double>(),
                  "direction_geometry", "build_direction_set");
    } else if (cfg.scenario == "euler-viscosity-limit") {
        ok = run_euler_limit(cfg, recs, doc);
    } else {
        throw ConfigError("unknown scenario: " + cfg.scenario);
    }

    doc["records"] = records_to_json(recs);
    doc["pass"] = ok;
    if (!cfg.out_dir.empty()) {
        write_csv(cfg.out_dir + "/diagnostics.csv", recs);
        write_json(cfg.out_dir + "/run.json", doc);
    }
    return ok;
}

}  // namespace ciw
