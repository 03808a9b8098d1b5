#include "cliffspec/jobs.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>

namespace cliffspec {

namespace {

std::string out_path(const JobConfig& cfg, const std::string& suffix) {
    return cfg.out_dir + "/" + cfg.prefix + suffix;
}

Paravector grid_j(const JobConfig& cfg) {
    const int n = cfg.op.n;
    if (cfg.grid.j.empty()) return Paravector::unit(n, 1);
    if (static_cast<int>(cfg.grid.j.size()) != n)
        throw ConfigError("grid.j needs the n imaginary components of J");
    Paravector j(n);
    double norm_sq = 0;
    for (int i = 1; i <= n; ++i) {
        j[i] = cfg.grid.j[static_cast<std::size_t>(i - 1)];
        norm_sq += j[i] * j[i];
    }
    if (norm_sq <= 0) throw ConfigError("grid.j must be nonzero");
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (int i = 1; i <= n; ++i) j[i] *= inv;
    return j;
}

Json spec_json(const BoundarySpec& spec, const BoundaryConfig& bc) {
    return Json{{"kind", bc.kind},
                {"alpha", bc.alpha},
                {"constraints", spec.b()},
                {"replace_rows", spec.replace_rows}};
}

CliffordVector random_vector(int n, int m, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CliffordVector v(n, m);
    for (int i = 0; i < m; ++i)
        for (Mask a = 0; a < static_cast<Mask>(1 << n); ++a) v[i][a] = gauss(rng);
    return v;
}

Json residual_json(const ResidualReport& r) {
    return Json{{"type", "residual"},  {"identity", r.identity}, {"vector", r.vector_id},
                {"absolute", r.absolute}, {"relative", r.relative}, {"s", r.s.components()},
                {"q", r.q.components()},  {"mode", r.mode}};
}

struct WorstTracker {
    bool pass = true;
    std::string name = "none";
    double value = 0;
    double tol = 0;
    double ratio = 0;

    void check(const std::string& id, double value_, double tol_) {
        const double r = value_ / tol_;
        if (r > ratio) {
            ratio = r;
            name = id;
            value = value_;
            tol = tol_;
        }
        if (value_ > tol_) pass = false;
    }
};

int failure_code(const std::exception& e, int fallback) {
    std::cerr << "error: " << e.what() << "\n";
    return fallback;
}

} // namespace

Paravector series_target(const Paravector& q, double eps, double fraction, int index) {
    const int n = q.n();
    const double d = fraction * eps;
    Paravector dir(n);
    if (q.imag_norm() > 0) {
        const double inv = 1.0 / q.imag_norm();
        for (int i = 1; i <= n; ++i) dir[i] = q[i] * inv;
    } else {
        dir[1] = 1.0;
    }
    const double q0 = q.real_part();
    const double mod2 = modulus_sq(q);

    auto with = [&](double s0, double im_sq) {
        Paravector s(n);
        s[0] = s0;
        const double im = std::sqrt(std::max(0.0, im_sq));
        for (int i = 1; i <= n; ++i) s[i] = dir[i] * im;
        return s;
    };

    switch (index % 3) {
        case 0: {
            // shift the real part, keep |s|^2
            const double s0 = q0 + d / 2.0;
            const double im_sq = mod2 - s0 * s0;
            if (im_sq >= 0) return with(s0, im_sq);
            [[fallthrough]];
        }
        case 1:
            // keep the real part, grow |s|^2
            return with(q0, mod2 + d - q0 * q0);
        default: {
            // shift both; d_S is still the max component d
            const double s0 = q0 + d / 2.0;
            const double im_sq = mod2 - d / 2.0 - s0 * s0;
            if (im_sq >= 0) return with(s0, im_sq);
            return with(q0, mod2 + d - q0 * q0);
        }
    }
}

int cmd_scan(const JobConfig& cfg) {
    try {
        const BuiltModel model = build_model(cfg);
        ScanGrid grid;
        grid.x_lo = cfg.grid.x_lo;
        grid.x_hi = cfg.grid.x_hi;
        grid.y_hi = cfg.grid.y_hi;
        grid.nx = cfg.grid.nx;
        grid.ny = cfg.grid.ny;
        grid.j = grid_j(cfg);
        const SpectrumMap map = scan(model.T, model.spec, grid, cfg.grid.threshold, cfg.threads);
        emit_csv(map, out_path(cfg, "_scan.csv"));

        Json meta{{"operator", model.description},
                  {"spec", spec_json(model.spec, cfg.boundary)},
                  {"grid",
                   {{"x", {grid.x_lo, grid.x_hi}},
                    {"y", {0.0, grid.y_hi}},
                    {"nx", grid.nx},
                    {"ny", grid.ny}}},
                  {"threshold", map.threshold},
                  {"J", grid.j.components()},
                  {"sigma_max_global", map.sigma_max_global},
                  {"config", resolved_config_json(cfg)}};
        std::ofstream meta_out(out_path(cfg, "_scan_meta.json"), std::ios::trunc);
        if (!meta_out) throw IoError("cannot open '" + out_path(cfg, "_scan_meta.json") + "'");
        meta_out << meta.dump(2) << "\n";
        if (!meta_out) throw IoError("write failed for '" + out_path(cfg, "_scan_meta.json") + "'");
        return 0;
    } catch (const ConfigError& e) {
        return failure_code(e, 2);
    } catch (const IoError& e) {
        return failure_code(e, 3);
    } catch (const Error& e) {
        return failure_code(e, 1);
    }
}

int cmd_verify(const JobConfig& cfg) {
    try {
        const BuiltModel model = build_model(cfg);
        if (cfg.verify.points.empty()) throw ConfigError("verify: needs a point list");
        const bool algebraic = model.spec.algebraic();
        const double tol = algebraic ? cfg.verify.tol_algebraic : cfg.verify.tol_boundary;
        const double slice_tol = 1e-10;

        std::vector<Paravector> points;
        for (const auto& comp : cfg.verify.points)
            points.push_back(paravector_from_components(cfg.op.n, comp));
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            if (same_sphere(points[i], points[i + 1]))
                throw DegeneratePair("verify: consecutive points " + std::to_string(i) + "," +
                                     std::to_string(i + 1) + " lie on the same sphere");

        const std::string report_path = out_path(cfg, "_verify.jsonl");
        std::ofstream out(report_path, std::ios::trunc);
        if (!out) throw IoError("cannot open '" + report_path + "'");
        auto emit = [&](const Json& j) { out << j.dump() << "\n"; };
        emit(Json{{"type", "config"}, {"config", resolved_config_json(cfg)}});

        std::mt19937_64 rng(cfg.seed);
        WorstTracker worst;
        std::vector<std::optional<ConstrainedResolvent>> assembled;

        for (std::size_t p = 0; p < points.size(); ++p) {
            const Paravector& s = points[p];
            std::optional<ConstrainedResolvent> r;
            try {
                r = ConstrainedResolvent::assemble(model.T, s, model.spec);
            } catch (const SingularSystem& e) {
                emit(Json{{"type", "singular"},
                          {"s", s.components()},
                          {"sigma_min", e.sigma_min},
                          {"sigma_max", e.sigma_max}});
                worst.check("singular_point", 1.0, 0.5);
                assembled.push_back(std::nullopt);
                continue;
            }
            assembled.push_back(r);
            const ConstrainedResolvent& R = *r;

            for (int vid = 0; vid < cfg.verify.vectors; ++vid) {
                const CliffordVector v = random_vector(cfg.op.n, model.T.m(), rng);

                ResidualReport left = residual_left_eq(R, v);
                left.vector_id = vid;
                emit(residual_json(left));
                worst.check(left.identity, left.relative, tol);

                ResidualReport right = residual_right_eq(R, v);
                right.vector_id = vid;
                emit(residual_json(right));
                worst.check(right.identity, right.relative, tol);

                const auto [r1, r2] = cr_residuals(R, v);
                const double v_norm = v.norm();
                const double rel1 = r1.norm() / v_norm;
                const double rel2 = r2.norm() / v_norm;
                emit(Json{{"type", "residual"}, {"identity", "cr_first"}, {"vector", vid},
                          {"absolute", r1.norm()}, {"relative", rel1}, {"s", s.components()},
                          {"asserted", algebraic}, {"mode", algebraic ? "algebraic" : "boundary"}});
                emit(Json{{"type", "residual"}, {"identity", "cr_second"}, {"vector", vid},
                          {"absolute", r2.norm()}, {"relative", rel2}, {"s", s.components()},
                          {"asserted", algebraic}, {"mode", algebraic ? "algebraic" : "boundary"}});
                if (algebraic) {
                    worst.check("cr_first", rel1, tol);
                    worst.check("cr_second", rel2, tol);
                }

                if (!algebraic) {
                    // logged, not asserted: the commutator output is expected
                    // to violate the constraints when it is nonzero
                    const CliffordVector comm = commutator(R, v);
                    const CliffordVector cv = model.spec.apply(comm);
                    emit(Json{{"type", "commutator_constraint"}, {"vector", vid},
                              {"commutator_norm", comm.norm()}, {"constraint_norm", cv.norm()},
                              {"s", s.components()}});
                }
            }

            // slice decomposition: reassembly and the y-parity of f0, f1
            {
                const SliceDecomposition sd = slice_parts(R);
                const Eigen::MatrixXd lj =
                    left_mul_rep(R, slice_decompose(s).j.to_multivector());
                const Eigen::MatrixXd sl = s_left_matrix(R);
                const Eigen::MatrixXd sr = s_right_matrix(R);
                const double left_dev = spectral_norm(sd.f0 + sd.f1 * lj - sl) /
                                        std::max(spectral_norm(sl), 1e-300);
                const double right_dev = spectral_norm(sd.f0 + lj * sd.f1 - sr) /
                                         std::max(spectral_norm(sr), 1e-300);

                // rebuild at the conjugate slice point x - Jy
                const SliceCoords sc = slice_decompose(s);
                const Paravector s_conj = slice_compose(s.n(), sc.x, -sc.y, sc.j);
                const ConstrainedResolvent Rc =
                    ConstrainedResolvent::assemble(model.T, s_conj, model.spec);
                const Eigen::MatrixXd& qic = Rc.qinv_matrix();
                const Eigen::MatrixXd f0c = -Rc.op_matrix() * qic + sc.x * qic;
                const Eigen::MatrixXd f1c = -(-sc.y) * qic;
                const double even_dev = spectral_norm(f0c - sd.f0) /
                                        std::max(spectral_norm(sd.f0), 1e-300);
                const double odd_dev = spectral_norm(f1c + sd.f1) /
                                       std::max(spectral_norm(sd.f1), 1e-300);

                emit(Json{{"type", "slice"}, {"s", s.components()},
                          {"reassembly_left", left_dev}, {"reassembly_right", right_dev},
                          {"evenness_f0", even_dev}, {"oddness_f1", odd_dev}});
                worst.check("slice_reassembly_left", left_dev, slice_tol);
                worst.check("slice_reassembly_right", right_dev, slice_tol);
                worst.check("slice_evenness_f0", even_dev, slice_tol);
                worst.check("slice_oddness_f1", sc.y > 0 ? odd_dev : 0.0, slice_tol);
            }

            // commutator kernel against its image characterization
            {
                const Subspace ker = commutator_kernel(R);
                const Subspace img = image_characterization(R);
                const double angle = max_principal_angle(ker, img);
                emit(Json{{"type", "kernel_equality"}, {"s", s.components()},
                          {"kernel_dim", ker.dim()}, {"image_dim", img.dim()}, {"angle", angle}});
                worst.check("kernel_equality_angle", angle, cfg.verify.kernel_angle_tol);
                worst.check("kernel_equality_dim_gap",
                            static_cast<double>(std::abs(ker.dim() - img.dim())), 0.5);
            }

            // equivalence of the CR conditions with the commutation condition
            {
                const CrEquivalenceReport eq = cr_equivalence_check(R);
                emit(Json{{"type", "cr_equivalence"}, {"s", s.components()},
                          {"s_real", eq.s_real}, {"dim_cr_null", eq.dim_cr_null},
                          {"dim_comm_null", eq.dim_comm_null}, {"angle", eq.max_angle},
                          {"r1_max_on_null", eq.r1_max_on_null},
                          {"comm_null_contains_cr", eq.comm_null_contains_cr}});
                worst.check("cr_equivalence_angle", eq.max_angle, cfg.verify.kernel_angle_tol);
                worst.check("cr_equivalence_r1_on_null", eq.r1_max_on_null,
                            cfg.verify.tol_boundary);
                if (eq.s_real)
                    worst.check("cr_equivalence_superset", eq.comm_null_contains_cr ? 0.0 : 1.0, 0.5);
            }
        }

        // two-point resolvent equation over consecutive pairs
        for (std::size_t p = 0; p + 1 < points.size(); ++p) {
            if (!assembled[p] || !assembled[p + 1]) continue;
            for (int vid = 0; vid < cfg.verify.vectors; ++vid) {
                const CliffordVector v = random_vector(cfg.op.n, model.T.m(), rng);
                ResidualReport res = residual_resolvent_eq(*assembled[p], *assembled[p + 1], v);
                res.vector_id = vid;
                emit(residual_json(res));
                worst.check(res.identity, res.relative, tol);
            }
        }

        emit(Json{{"type", "summary"}, {"pass", worst.pass}, {"worst_identity", worst.name},
                  {"worst_value", worst.value}, {"worst_tolerance", worst.tol}});
        if (!out) throw IoError("write failed for '" + report_path + "'");
        out.close();

        if (!worst.pass) {
            std::cerr << "verify failed: worst offender " << worst.name << " = " << worst.value
                      << " (tolerance " << worst.tol << ")\n";
            return 1;
        }
        return 0;
    } catch (const DegeneratePair& e) {
        return failure_code(e, 2);
    } catch (const ConfigError& e) {
        return failure_code(e, 2);
    } catch (const IoError& e) {
        return failure_code(e, 3);
    } catch (const Error& e) {
        return failure_code(e, 1);
    }
}

int cmd_series(const JobConfig& cfg) {
    try {
        const BuiltModel model = build_model(cfg);
        if (cfg.series.center.empty()) throw ConfigError("series: needs a center");
        const Paravector q = paravector_from_components(cfg.op.n, cfg.series.center);
        if (cfg.series.terms < 1) throw ConfigError("series: terms must be >= 1");

        bool fail = false;
        std::optional<ConstrainedResolvent> rq;
        try {
            rq = ConstrainedResolvent::assemble(model.T, q, model.spec);
        } catch (const SingularSystem& e) {
            std::cerr << "series center lies in the S-spectrum: " << e.what() << "\n";
            return 1;
        }
        const double eps = eps_star(*rq);

        std::vector<Paravector> targets;
        for (const auto& comp : cfg.series.targets)
            targets.push_back(paravector_from_components(cfg.op.n, comp));
        for (std::size_t i = 0; i < cfg.series.ds_fractions.size(); ++i)
            targets.push_back(series_target(q, eps, cfg.series.ds_fractions[i], static_cast<int>(i)));
        if (targets.empty()) throw ConfigError("series: needs targets or ds_fractions");

        const std::string csv_path = out_path(cfg, "_series.csv");
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv) throw IoError("cannot open '" + csv_path + "'");
        csv << "target,term,term_norm,error,bound\n";

        Json target_meta = Json::array();
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const Paravector& s = targets[t];
            std::optional<Eigen::MatrixXd> direct;
            try {
                direct = ConstrainedResolvent::assemble(model.T, s, model.spec).qinv_matrix();
            } catch (const SingularSystem&) {
                direct.reset();
            }
            const NeumannResult res =
                neumann_series(*rq, s, cfg.series.terms, direct ? &*direct : nullptr);
            const double qn = spectral_norm(rq->qinv_matrix());
            for (std::size_t k = 0; k < res.term_norms.size(); ++k) {
                const double bound = res.contraction < 1.0
                                         ? qn * std::pow(res.contraction, static_cast<double>(k + 1)) /
                                               (1.0 - res.contraction)
                                         : std::numeric_limits<double>::infinity();
                csv << t << ',' << k << ',' << format_g17(res.term_norms[k]) << ','
                    << (k < res.errors.size() ? format_g17(res.errors[k]) : "nan") << ','
                    << format_g17(bound) << "\n";
            }
            const bool inside = res.d_s < eps;
            if (inside && (res.diverged || !direct)) fail = true;
            target_meta.push_back(Json{{"components", s.components()},
                                       {"d_s", res.d_s},
                                       {"contraction", res.contraction},
                                       {"inside_radius", inside},
                                       {"diverged", res.diverged},
                                       {"terms_used", res.terms_used},
                                       {"final_error", res.errors.empty() ? -1.0 : res.errors.back()},
                                       {"direct_solve_available", direct.has_value()}});
        }
        if (!csv) throw IoError("write failed for '" + csv_path + "'");
        csv.close();

        Json meta{{"operator", model.description},
                  {"spec", spec_json(model.spec, cfg.boundary)},
                  {"center", q.components()},
                  {"eps_star", eps},
                  {"targets", target_meta},
                  {"config", resolved_config_json(cfg)}};
        const std::string meta_path = out_path(cfg, "_series_meta.json");
        std::ofstream meta_out(meta_path, std::ios::trunc);
        if (!meta_out) throw IoError("cannot open '" + meta_path + "'");
        meta_out << meta.dump(2) << "\n";
        if (!meta_out) throw IoError("write failed for '" + meta_path + "'");

        if (fail) {
            std::cerr << "series: divergence inside the guaranteed neighborhood\n";
            return 1;
        }
        return 0;
    } catch (const ConfigError& e) {
        return failure_code(e, 2);
    } catch (const IoError& e) {
        return failure_code(e, 3);
    } catch (const Error& e) {
        return failure_code(e, 1);
    }
}

int cmd_kernel(const JobConfig& cfg) {
    try {
        const BuiltModel model = build_model(cfg);
        if (cfg.kernel.points.empty()) throw ConfigError("kernel: needs a point list");

        bool pass = true;
        Json entries = Json::array();
        for (const auto& comp : cfg.kernel.points) {
            const Paravector s = paravector_from_components(cfg.op.n, comp);
            try {
                const ConstrainedResolvent R = ConstrainedResolvent::assemble(model.T, s, model.spec);
                const Subspace ker = commutator_kernel(R);
                const Subspace img = image_characterization(R);
                const double angle = max_principal_angle(ker, img);
                const bool ok = (ker.dim() == img.dim()) && (angle <= cfg.kernel.angle_tol);
                pass = pass && ok;
                entries.push_back(Json{{"s", s.components()},
                                       {"kernel_dim", ker.dim()},
                                       {"image_dim", img.dim()},
                                       {"angle", angle},
                                       {"sigma_min", R.sigma_min()},
                                       {"pass", ok}});
            } catch (const SingularSystem& e) {
                pass = false;
                entries.push_back(Json{{"s", s.components()},
                                       {"singular", true},
                                       {"sigma_min", e.sigma_min},
                                       {"pass", false}});
            }
        }

        Json report{{"operator", model.description},
                    {"spec", spec_json(model.spec, cfg.boundary)},
                    {"angle_tol", cfg.kernel.angle_tol},
                    {"points", entries},
                    {"pass", pass},
                    {"config", resolved_config_json(cfg)}};
        const std::string path = out_path(cfg, "_kernel.json");
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot open '" + path + "'");
        out << report.dump(2) << "\n";
        if (!out) throw IoError("write failed for '" + path + "'");
        return pass ? 0 : 1;
    } catch (const ConfigError& e) {
        return failure_code(e, 2);
    } catch (const IoError& e) {
        return failure_code(e, 3);
    } catch (const Error& e) {
        return failure_code(e, 1);
    }
}

int run_job(const JobConfig& cfg) {
    if (cfg.task == "scan") return cmd_scan(cfg);
    if (cfg.task == "verify") return cmd_verify(cfg);
    if (cfg.task == "series") return cmd_series(cfg);
    if (cfg.task == "kernel") return cmd_kernel(cfg);
    std::cerr << "error: unknown task '" << cfg.task << "'\n";
    return 2;
}

} // namespace cliffspec
