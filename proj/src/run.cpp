#include "nlcl/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace nlcl {

namespace fs = std::filesystem;

double ExitMetrics::deflection_fraction(std::size_t c) const
{
    const double tot = crossing_total.at(c);
    return tot > 0.0 ? crossing_below_tip.at(c) / tot : 0.0;
}

double ExitMetrics::exit_below_tip_fraction(std::size_t c) const
{
    const double tot = outflow_total.at(c);
    return tot > 0.0 ? outflow_below_tip.at(c) / tot : 0.0;
}

double ExitMetrics::overlap_time_weighted() const
{
    if (zone_mass_time.empty())
        return 0.0;
    const double m = *std::min_element(zone_mass_time.begin(), zone_mass_time.end());
    return m > 0.0 ? zone_overlap_time / m : 0.0;
}

namespace {

std::string snapshot_name(long n, const char* ext)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "snapshot_%06ld.%s", n, ext);
    return buf;
}

} // namespace

SnapshotArchive run(const RunConfig& cfg, const RunOptions& opts)
{
    const Scenario& sc = cfg.scenario;
    const std::size_t nc = sc.classes.size();
    RoeStepper stepper(sc, cfg.convolution, cfg.cfl);
    SchemeState state{0.0, 0, initial_state(cfg), 0.0};

    SnapshotArchive ar;
    ar.dt = stepper.cfl_step();
    const BoundConstants K = compute_constants(sc, stepper.velocity(), stepper.nonlocal(), state.rho);
    const OutflowSeries outflow(state.rho);
    const auto obstacles = obstacle_mask(sc);
    std::vector<SpaceTimeBv> bvxt(nc);

    ExitMetrics& ex = ar.exit;
    ex.exit_x = cfg.exit_x;
    for (const Field2D& f : state.rho)
        ex.mass0.push_back(total_mass(f));
    const double mass0_min = *std::min_element(ex.mass0.begin(), ex.mass0.end());
    ex.crossing_total.assign(nc, 0.0);
    ex.crossing_below_tip.assign(nc, 0.0);
    ex.outflow_total.assign(nc, 0.0);
    ex.outflow_below_tip.assign(nc, 0.0);
    ex.zone_mass_time.assign(nc, 0.0);
    for (const auto& ob : sc.obstacles.regions)
        if (ob.name == "diverter") {
            ex.has_diverter = true;
            ex.y_tip = strip_tip_y(ob);
            const auto [p, q] = ob.axis_endpoints();
            ex.crossing_x = std::max(p.x, q.x);
        }
    if (!ex.has_diverter) {
        ex.y_tip = sc.grid.y_max();
        ex.crossing_x = sc.grid.x_max();
    }
    if (!std::isnan(cfg.crossing_x))
        ex.crossing_x = cfg.crossing_x;
    const int crossing_face =
        std::clamp(static_cast<int>(std::lround((ex.crossing_x - sc.grid.x0) / sc.grid.dx)), 0, sc.grid.nx);

    std::ofstream ndjson;
    const fs::path dir(cfg.output.directory);
    if (opts.write_files) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
        ndjson.open(dir / "diagnostics.ndjson", std::ios::binary | std::ios::trunc);
        if (!ndjson)
            throw IoError("cannot write " + (dir / "diagnostics.ndjson").string());
    }

    auto snapshot = [&]() {
        Snapshot snap{state.t, state.rho};
        SnapshotEntry e{state.n, state.t, "", ""};
        if (opts.write_files) {
            if (cfg.output.csv) {
                e.csv = snapshot_name(state.n, "csv");
                write_snapshot_csv(snap, (dir / e.csv).string());
            }
            if (cfg.output.binary) {
                e.binary = snapshot_name(state.n, "bin");
                write_snapshot_binary(snap, (dir / e.binary).string());
            }
        }
        ar.index.push_back(e);
        if (opts.keep_snapshots)
            ar.snapshots.push_back(std::move(snap));
    };

    auto flush = [&]() {
        if (!opts.write_files)
            return;
        ndjson.flush();
        write_outflow_csv(ar.outflow_t, ar.outflow_U, (dir / "outflow.csv").string());
        std::string idx = "n,t,csv,binary\n";
        for (const auto& e : ar.index)
            idx += std::to_string(e.n) + ',' + format_real(e.t) + ',' + e.csv + ',' + e.binary + '\n';
        write_text((dir / "snapshots.csv").string(), idx);
    };

    auto note_failure = [&](const std::string& what) {
        if (ar.failure.empty())
            ar.failure = what;
    };

    auto base_record = [&]() {
        DiagnosticsRecord rec;
        rec.t = state.t;
        rec.n = state.n;
        rec.dt = state.last_dt;
        const auto U = outflow.current(state.rho);
        for (std::size_t c = 0; c < nc; ++c) {
            ClassRecord cr;
            const Field2D& f = state.rho[c];
            cr.mass = total_mass(f);
            cr.min = f.min();
            cr.max = f.max();
            cr.U = U[c];
            cr.log_linf_bound = K.log_linf_bound(c, state.t);
            cr.linf_ratio = linf_check(f, K, c, state.t).ratio;
            cr.bv = bv_seminorm(f);
            cr.log_bv_bound = K.log_Cx(c, state.t);
            cr.bv_ratio = bv_check(f, K, c, state.t).ratio;
            cr.bvxt = bvxt[c].value();
            cr.log_bvxt_bound = K.log_Cxt(c, state.t);
            cr.bvxt_ratio = bvxt[c].check(K, c, state.t).ratio;
            if (cr.linf_ratio > 1.0 + 1e-9)
                note_failure("L-infinity bound exceeded for class " + std::to_string(c + 1));
            if (cr.bv_ratio > 1.0 + 1e-9)
                note_failure("BV bound exceeded for class " + std::to_string(c + 1));
            if (cr.bvxt_ratio > 1.0 + 1e-9)
                note_failure("space-time BV bound exceeded for class " + std::to_string(c + 1));
            rec.cls.push_back(cr);
        }
        return rec;
    };

    auto emit = [&](const DiagnosticsRecord& rec) {
        if (opts.write_files)
            ndjson << to_ndjson(rec) << '\n';
        if (opts.on_record)
            opts.on_record(rec);
        ar.records.push_back(rec);
        ar.outflow_t.push_back(rec.t);
        std::vector<double> U;
        for (const auto& cr : rec.cls)
            U.push_back(cr.U);
        ar.outflow_U.push_back(U);
    };

    emit(base_record());
    snapshot();

    const Grid& g = sc.grid;
    while (state.t < sc.t_end * (1.0 - 1e-12)) {
        StepRecord sr = stepper.step(state);
        for (std::size_t c = 0; c < nc; ++c)
            bvxt[c].add(sr.before[c], state.rho[c], sr.dt);

        DiagnosticsRecord rec = base_record();
        for (std::size_t c = 0; c < nc; ++c) {
            ClassRecord& cr = rec.cls[c];
            cr.outflux = sr.outflux[c];
            if (cfg.diag_entropy) {
                const double mx = std::max({sr.before[c].max(), sr.half[c].max(), state.rho[c].max()});
                const EntropyResult er =
                    entropy_residual(sr.before[c], sr.half[c], state.rho[c], sr.J[c], stepper.velocity(), sr.dt,
                                     sc.boundary, default_kappas(mx, sc.r_max));
                cr.entropy_residual = er.max_residual;
                if (er.max_residual > 1e-12)
                    note_failure("entropy inequality violated for class " + std::to_string(c + 1));
            }
            if (cfg.diag_kernel_bounds) {
                const KernelBoundReport kr =
                    verify_kernel_bounds(sr.J[c], sr.r_omega, stepper.nonlocal().bound_inputs(c));
                cr.kernel_ratio = kr.max_ratio();
                cr.kernel_worst = kr.worst().name;
                if (cr.kernel_ratio > 1.0 + 1e-9)
                    note_failure("kernel estimate exceeded (" + cr.kernel_worst + ") for class " +
                                 std::to_string(c + 1));
            }
            const InvarianceResult inv = boundary_invariance_check(state.rho[c], obstacles, stepper.velocity(), sr.J[c]);
            cr.boundary_violations = inv.violations;
            cr.obstacle_mass = inv.obstacle_mass;

            for (int j = 0; j < g.ny; ++j) {
                const EdgeStates st = x_face_states(sr.before[c], crossing_face, j, sc.boundary);
                if (st.closed)
                    continue;
                const double v = stepper.velocity().v1(crossing_face, j), J = sr.J[c].J1(crossing_face, j);
                const double m = sr.dt * g.dy * (flux_static(v, st.u, st.w) + flux_nonlocal(st.u, st.w, J));
                ex.crossing_total[c] += m;
                if (g.y_center(j) < ex.y_tip)
                    ex.crossing_below_tip[c] += m;
            }
            const auto& rows = sr.right_rows[c];
            for (int j = 0; j < g.ny; ++j) {
                ex.outflow_total[c] += rows[j];
                if (g.y_center(j) < ex.y_tip)
                    ex.outflow_below_tip[c] += rows[j];
            }
        }
        // Exit zone statistics on the new state.
        double overlap = 0.0;
        std::vector<double> zone(nc, 0.0);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (g.x_center(i) < ex.exit_x)
                    continue;
                double mn = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < nc; ++c) {
                    zone[c] += state.rho[c](i, j);
                    mn = std::min(mn, state.rho[c](i, j));
                }
                if (nc >= 2)
                    overlap += mn;
            }
        ex.zone_overlap_time += sr.dt * g.cell_area() * overlap;
        for (std::size_t c = 0; c < nc; ++c)
            ex.zone_mass_time[c] += sr.dt * g.cell_area() * zone[c];
        if (nc >= 2 && mass0_min > 0.0 && g.cell_area() * overlap / mass0_min > ex.overlap_peak) {
            ex.overlap_peak = g.cell_area() * overlap / mass0_min;
            ex.overlap_peak_t = state.t;
        }

        emit(rec);
        const bool last = !(state.t < sc.t_end * (1.0 - 1e-12));
        if (state.n % cfg.snapshot_every == 0 || last)
            snapshot();
        if (!ar.failure.empty())
            break;
    }
    ar.steps = state.n;
    ar.j_evaluations = stepper.nonlocal().evaluations();
    flush();
    if (!ar.failure.empty() && opts.throw_on_failure)
        throw DiagnosticFailure(ar.failure);
    return ar;
}

ArchiveDiff diff_archives(const std::string& dir_a, const std::string& dir_b)
{
    auto entries = [](const std::string& dir) {
        const std::string text = read_text((fs::path(dir) / "snapshots.csv").string());
        std::istringstream in(text);
        std::string line;
        std::getline(in, line);
        std::vector<std::string> files;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            std::istringstream ls(line);
            std::string n, t, csv;
            std::getline(ls, n, ',');
            std::getline(ls, t, ',');
            std::getline(ls, csv, ',');
            if (csv.empty())
                throw IoError("archive " + dir + " has no CSV snapshots");
            files.push_back((fs::path(dir) / csv).string());
        }
        return files;
    };
    const auto fa = entries(dir_a), fb = entries(dir_b);
    ArchiveDiff out;
    for (std::size_t k = 0; k < std::min(fa.size(), fb.size()); ++k) {
        const Snapshot a = read_snapshot_csv(fa[k]);
        const Snapshot b = read_snapshot_csv(fb[k], &a.rho.front().grid());
        if (a.rho.size() != b.rho.size())
            throw StructuralError("archives have different class counts");
        out.t.push_back(a.t);
        std::vector<double> d;
        for (std::size_t c = 0; c < a.rho.size(); ++c)
            d.push_back(l1_distance(a.rho[c], b.rho[c]));
        out.distance.push_back(d);
    }
    return out;
}

} // namespace nlcl
