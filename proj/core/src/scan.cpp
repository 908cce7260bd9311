#include "trispec/scan.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace trispec {

cplx grid_point(const ScanRegion& region, int ix, int iy) {
    const double dx = (region.re_max - region.re_min) / (region.nx - 1);
    const double dy = (region.im_max - region.im_min) / (region.ny - 1);
    return {region.re_min + ix * dx, region.im_min + iy * dy};
}

namespace {

void validate(const ScanRegion& r) {
    if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max))
        throw std::invalid_argument("scan region: min bounds must be strictly below max");
    if (r.nx < 2 || r.ny < 2)
        throw std::invalid_argument("scan region: nx and ny must be >= 2");
}

PointClassification classify_grid_point(const OperatorModel& model, cplx lambda,
                                        const ScanParams& params, bool have_bound,
                                        double bound) {
    if (params.norm_bound_fast_path && have_bound && std::abs(lambda) > bound) {
        PointClassification pc;
        pc.lambda = lambda;
        pc.label = PointLabel::Resolvent;
        pc.fast_path = true;
        pc.growth = std::abs(lambda) / bound;
        pc.series = {SeriesResult::Diverges, 0.0, 0};
        pc.note = "outside operator norm bound";
        pc.params = params.classify;
        return pc;
    }
    PointClassification pc = classify_point(model, lambda, params.classify);
    if (pc.label == PointLabel::Indeterminate && params.escalate_n_max > params.classify.n_max) {
        ClassifyParams deeper = params.classify;
        deeper.n_max = params.escalate_n_max;
        pc = classify_point(model, lambda, deeper);
        pc.escalated = true;
    }
    return pc;
}

}  // namespace

ScanResult scan(const OperatorModel& model, const ScanRegion& region, const ScanParams& params) {
    validate(region);

    double bound = 0.0;
    bool have_bound = false;
    if (params.norm_bound_fast_path && model.has_bounded_tail()) {
        bound = norm_upper_bound(model).value;
        have_bound = true;
    }

    ScanResult result;
    result.region = region;
    result.params = params;
    const int total = region.nx * region.ny;
    result.points.resize(total);

    const auto work = [&](int idx) {
        const int iy = idx / region.nx;
        const int ix = idx % region.nx;
        result.points[idx] =
            classify_grid_point(model, grid_point(region, ix, iy), params, have_bound, bound);
    };

    const int workers = std::max(1, params.workers);
    if (workers == 1) {
        for (int idx = 0; idx < total; ++idx) work(idx);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) work(idx);
            });
        for (auto& t : pool) t.join();
    }
    return result;
}

double channel_q(const PointClassification& pc) {
    if (pc.fast_path) return 0.0;
    if (pc.decay && pc.decay->verdict != DecayFit::Verdict::InsufficientData) return pc.decay->q;
    return 1.0;
}

double channel_growth(const PointClassification& pc) { return pc.growth; }

double channel_residual(const PointClassification& pc) {
    if (pc.fast_path) return 0.0;
    if (pc.gamma) return pc.gamma->residual;
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}
}  // namespace

void export_csv(const ScanResult& result, std::ostream& out) {
    out << "re,im,label,q,growth,residual\n";
    for (const auto& pc : result.points) {
        out << fmt(pc.lambda.real()) << ',' << fmt(pc.lambda.imag()) << ','
            << label_name(pc.label) << ',' << fmt(channel_q(pc)) << ','
            << fmt(channel_growth(pc)) << ',' << fmt(channel_residual(pc)) << '\n';
    }
}

void export_csv(const ScanResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path.string());
    export_csv(result, out);
    out.flush();
    if (!out) throw std::runtime_error("export_csv: write failed for " + path.string());
}

HeatmapChannel heatmap_channel_from_name(const std::string& name) {
    if (name == "label") return HeatmapChannel::Label;
    if (name == "q") return HeatmapChannel::Q;
    if (name == "growth") return HeatmapChannel::Growth;
    throw std::invalid_argument("unknown heatmap channel: " + name);
}

namespace {

int gray_value(const PointClassification& pc, HeatmapChannel channel) {
    switch (channel) {
        case HeatmapChannel::Label:
            switch (pc.label) {
                case PointLabel::Resolvent: return 255;
                case PointLabel::Indeterminate: return 128;
                case PointLabel::Spectrum: return 64;
                case PointLabel::Eigenvalue: return 0;
            }
            return 128;
        case HeatmapChannel::Q: {
            const double q = std::clamp(channel_q(pc), 0.0, 1.0);
            return static_cast<int>(std::lround(255.0 * (1.0 - q)));
        }
        case HeatmapChannel::Growth: {
            const double g = std::clamp(channel_growth(pc) - 1.0, 0.0, 1.0);
            return static_cast<int>(std::lround(255.0 * g));
        }
    }
    return 0;
}

}  // namespace

void export_heatmap(const ScanResult& result, HeatmapChannel channel, std::ostream& out) {
    const auto& r = result.region;
    out << "P2\n";
    out << "# trispec scan n_max=" << result.params.classify.n_max
        << " escalate=" << result.params.escalate_n_max
        << " region=[" << fmt(r.re_min) << ',' << fmt(r.re_max) << "]x[" << fmt(r.im_min)
        << ',' << fmt(r.im_max) << "] grid=" << r.nx << 'x' << r.ny << "\n";
    out << r.nx << ' ' << r.ny << "\n255\n";
    // image order: top row is im_max
    std::string line;
    for (int iy = r.ny - 1; iy >= 0; --iy) {
        line.clear();
        for (int ix = 0; ix < r.nx; ++ix) {
            const std::string v = std::to_string(gray_value(result.points[iy * r.nx + ix], channel));
            if (!line.empty() && line.size() + 1 + v.size() > 68) {
                out << line << '\n';
                line.clear();
            }
            if (!line.empty()) line += ' ';
            line += v;
        }
        if (!line.empty()) out << line << '\n';
    }
}

void export_heatmap(const ScanResult& result, HeatmapChannel channel,
                    const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_heatmap: cannot open " + path.string());
    export_heatmap(result, channel, out);
    out.flush();
    if (!out) throw std::runtime_error("export_heatmap: write failed for " + path.string());
}

}  // namespace trispec
