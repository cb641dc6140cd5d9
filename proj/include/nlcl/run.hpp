#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlcl/config.hpp"
#include "nlcl/diagnostics.hpp"
#include "nlcl/snapshot_io.hpp"

namespace nlcl {

/**
 * Exit-side statistics for the two-class diverter runs.
 *
 * Crossing: x-flux through the face column nearest crossing_x (the
 * downstream end of the diverter by default), split by row into the part
 * below the diverter tip and the rest. The same split is kept for the
 * right edge. The exit zone is the strip of cells with center x >= exit_x.
 */
struct ExitMetrics {
    double y_tip = 0.0;
    bool has_diverter = false;
    double crossing_x = 0.0;
    double exit_x = 0.0;
    std::vector<double> mass0;
    std::vector<double> crossing_total;
    std::vector<double> crossing_below_tip;
    std::vector<double> outflow_total;
    std::vector<double> outflow_below_tip;
    std::vector<double> zone_mass_time;
    double zone_overlap_time = 0.0;
    double overlap_peak = 0.0;  // max over t of dx dy sum_zone min(rho1, rho2) / min_c mass0
    double overlap_peak_t = 0.0;

    /// Share of class c's net crossing flux passing below the tip.
    double deflection_fraction(std::size_t c) const;
    /// Same split for the right-edge outflow.
    double exit_below_tip_fraction(std::size_t c) const;
    /// Time-weighted variant: zone_overlap_time / min_c zone_mass_time.
    double overlap_time_weighted() const;
};

struct SnapshotEntry {
    long n = 0;
    double t = 0.0;
    std::string csv, binary;
};

struct SnapshotArchive {
    std::vector<Snapshot> snapshots;
    std::vector<SnapshotEntry> index;
    std::vector<DiagnosticsRecord> records;
    std::vector<double> outflow_t;
    std::vector<std::vector<double>> outflow_U;
    ExitMetrics exit;
    long steps = 0;
    long j_evaluations = 0;
    double dt = 0.0;
    std::string failure;  // first hard diagnostic failure, empty when all passed
};

struct RunOptions {
    bool write_files = true;
    bool keep_snapshots = true;
    bool throw_on_failure = true;  // DiagnosticFailure after flushing outputs
    std::function<void(const DiagnosticsRecord&)> on_record;
};

SnapshotArchive run(const RunConfig& cfg, const RunOptions& opts = {});

/// Per-snapshot L1 distance between two output directories, matched by snapshot index order.
struct ArchiveDiff {
    std::vector<double> t;
    std::vector<std::vector<double>> distance;
};
ArchiveDiff diff_archives(const std::string& dir_a, const std::string& dir_b);

} // namespace nlcl
