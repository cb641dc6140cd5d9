#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nlcl/config.hpp"
#include "nlcl/diagnostics.hpp"
#include "nlcl/run.hpp"

namespace {

enum Exit { ok = 0, usage = 1, diagnostic = 2, io = 3 };

int cmd_simulate(const std::string& path, const std::string& out_dir, bool quiet)
{
    nlcl::RunConfig cfg = nlcl::load_config(path);
    if (!out_dir.empty())
        cfg.output.directory = out_dir;
    nlcl::RunOptions opts;
    opts.keep_snapshots = false;
    if (!quiet)
        opts.on_record = [](const nlcl::DiagnosticsRecord& r) {
            if (r.n % 100 != 0)
                return;
            std::fprintf(stderr, "step %ld t=%.4f", r.n, r.t);
            for (std::size_t c = 0; c < r.cls.size(); ++c)
                std::fprintf(stderr, "  U%zu=%.4f max%zu=%.4g", c + 1, r.cls[c].U, c + 1, r.cls[c].max);
            std::fprintf(stderr, "\n");
        };
    const nlcl::SnapshotArchive ar = nlcl::run(cfg, opts);
    std::printf("steps %ld, dt %.6g, J evaluations %ld\n", ar.steps, ar.dt, ar.j_evaluations);
    for (std::size_t c = 0; c < ar.exit.outflow_total.size(); ++c)
        std::printf("class %zu: final U %.6f, exit mass %.6g, crossing below tip %.4f, exit below tip %.4f\n",
                    c + 1, ar.outflow_U.back()[c], ar.exit.outflow_total[c], ar.exit.deflection_fraction(c),
                    ar.exit.exit_below_tip_fraction(c));
    std::printf("exit-zone overlap: peak %.4f at t=%.3f, time-weighted %.4f\n", ar.exit.overlap_peak,
                ar.exit.overlap_peak_t, ar.exit.overlap_time_weighted());
    std::printf("outputs in %s\n", cfg.output.directory.c_str());
    return ok;
}

int cmd_check(const std::string& path)
{
    const nlcl::RunConfig cfg = nlcl::load_config(path);
    const nlcl::ValidationReport rep = nlcl::validate_assumptions(cfg.scenario);
    const auto& g = cfg.scenario.grid;
    std::printf("config ok: %dx%d cells, dx=%g dy=%g, %zu classes, %zu obstacles\n", g.nx, g.ny, g.dx, g.dy,
                cfg.scenario.classes.size(), cfg.scenario.obstacles.regions.size());
    for (const auto& n : rep.notes)
        std::printf("note: %s\n", n.c_str());
    return ok;
}

int cmd_constants(const std::string& path)
{
    const nlcl::RunConfig cfg = nlcl::load_config(path);
    const nlcl::RoeStepper stepper(cfg.scenario, cfg.convolution, cfg.cfl);
    const auto rho0 = nlcl::initial_state(cfg);
    const nlcl::BoundConstants k = nlcl::compute_constants(cfg.scenario, stepper.velocity(), stepper.nonlocal(), rho0);
    nlohmann::json j;
    j["cfl_dt"] = stepper.cfl_step();
    j["L_H"] = k.L_H;
    j["grad_eta_tilde"] = k.grad_tilde;
    j["r_omega_l1"] = k.r_l1;
    j["v_sup"] = k.v_sup;
    j["v_grad"] = k.v_grad;
    j["v_hess"] = k.v_hess;
    j["dx_v1"] = k.d1v1;
    j["dy_v2"] = k.d2v2;
    for (std::size_t c = 0; c < k.cls.size(); ++c) {
        const auto& cc = k.cls[c];
        j["classes"].push_back({{"class", c + 1},
                                {"epsilon", cc.epsilon},
                                {"grad_eta", cc.eta.grad},
                                {"hess_eta", cc.eta.hess},
                                {"third_eta", cc.eta.third},
                                {"C_inf", cc.C_inf},
                                {"K1", cc.K1},
                                {"K2", cc.K2},
                                {"c1", cc.c1},
                                {"c2", cc.c2},
                                {"C_c", cc.C_c},
                                {"tv0", cc.tv0},
                                {"rho_l1", cc.rho_l1},
                                {"rho_linf", cc.rho_linf},
                                {"log_Cx_at_t_end", k.log_Cx(c, cfg.scenario.t_end)},
                                {"log_Ct_at_t_end", k.log_Ct(c, cfg.scenario.t_end)},
                                {"log_Cxt_at_t_end", k.log_Cxt(c, cfg.scenario.t_end)}});
    }
    std::cout << j.dump(2) << '\n';
    return ok;
}

int cmd_diff(const std::string& a, const std::string& b)
{
    const nlcl::ArchiveDiff d = nlcl::diff_archives(a, b);
    std::string out = "t";
    if (!d.distance.empty())
        for (std::size_t c = 0; c < d.distance.front().size(); ++c)
            out += ",l1_class" + std::to_string(c + 1);
    out += '\n';
    for (std::size_t k = 0; k < d.t.size(); ++k) {
        out += nlcl::format_real(d.t[k]);
        for (double v : d.distance[k])
            out += ',' + nlcl::format_real(v);
        out += '\n';
    }
    std::fputs(out.c_str(), stdout);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-volume solver for non-local multi-class conveyor flow"};
    app.require_subcommand(1);

    std::string config, out_dir, dir_a, dir_b;
    bool quiet = false;
    auto* sim = app.add_subcommand("simulate", "run a configuration to t_end");
    sim->add_option("config", config, "config file")->required();
    sim->add_option("-o,--output", out_dir, "override output.directory");
    sim->add_flag("-q,--quiet", quiet, "no progress on stderr");
    auto* chk = app.add_subcommand("check", "parse and validate a configuration");
    chk->add_option("config", config, "config file")->required();
    auto* cst = app.add_subcommand("constants", "print the bound constants as JSON");
    cst->add_option("config", config, "config file")->required();
    auto* dif = app.add_subcommand("diff", "L1 distance between two output directories");
    dif->add_option("archive_a", dir_a, "first output directory")->required();
    dif->add_option("archive_b", dir_b, "second output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*sim)
            return cmd_simulate(config, out_dir, quiet);
        if (*chk)
            return cmd_check(config);
        if (*cst)
            return cmd_constants(config);
        if (*dif)
            return cmd_diff(dir_a, dir_b);
    } catch (const nlcl::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return usage;
    } catch (const nlcl::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return io;
    } catch (const nlcl::DiagnosticFailure& e) {
        std::fprintf(stderr, "diagnostic failure: %s\n", e.what());
        return diagnostic;
    } catch (const nlcl::StepRejected& e) {
        std::fprintf(stderr, "step rejected: %s\n", e.what());
        return diagnostic;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    }
    return usage;
}
