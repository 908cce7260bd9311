#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "trispec/resolvent.hpp"

namespace trispec {

struct ScanRegion {
    double re_min = -1.0, re_max = 1.0;
    double im_min = -1.0, im_max = 1.0;
    int nx = 2, ny = 2;
};

struct ScanParams {
    ClassifyParams classify{};
    int workers = 1;
    bool norm_bound_fast_path = true;
    int escalate_n_max = 256;  // second pass for indeterminate points; 0 disables
};

// Grid coordinates are computed the same way everywhere so that coincident
// points of refined grids get bit-identical lambdas.
cplx grid_point(const ScanRegion& region, int ix, int iy);

struct ScanResult {
    ScanRegion region{};
    ScanParams params{};
    std::vector<PointClassification> points;  // row-major, iy * nx + ix, from (re_min, im_min)
};

// Classifies every grid point independently.  Points outside the norm-bound
// disk are fast-pathed to Resolvent when the bound is available.  Safe under
// any worker count; the result does not depend on the partitioning.
ScanResult scan(const OperatorModel& model, const ScanRegion& region,
                const ScanParams& params = {});

// Per-point scalar channels as they appear in the CSV/heatmaps.
double channel_q(const PointClassification& pc);
double channel_growth(const PointClassification& pc);
double channel_residual(const PointClassification& pc);

// CSV: header "re,im,label,q,growth,residual", one row per grid point,
// row-major from (re_min, im_min).
void export_csv(const ScanResult& result, std::ostream& out);
void export_csv(const ScanResult& result, const std::filesystem::path& path);

// Plain-text PGM (P2), 255 = resolvent-certain.  label channel gray levels:
// resolvent 255, indeterminate 128, spectrum 64, eigenvalue 0.  q channel:
// 255 * (1 - clamp(q, 0, 1)).  growth channel: 255 * clamp(growth - 1, 0, 1).
// Rows run from im_max down to im_min (image order).
enum class HeatmapChannel { Label, Q, Growth };

HeatmapChannel heatmap_channel_from_name(const std::string& name);
void export_heatmap(const ScanResult& result, HeatmapChannel channel, std::ostream& out);
void export_heatmap(const ScanResult& result, HeatmapChannel channel,
                    const std::filesystem::path& path);

}  // namespace trispec
