#include "trispec/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace trispec {

namespace {

using json = nlohmann::ordered_json;

json complex_pair(cplx v) { return json::array({v.real(), v.imag()}); }

const char* series_name(SeriesResult r) {
    switch (r) {
        case SeriesResult::Converges: return "converges";
        case SeriesResult::Diverges: return "diverges";
        case SeriesResult::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

const char* decay_verdict_name(DecayFit::Verdict v) {
    switch (v) {
        case DecayFit::Verdict::Geometric: return "geometric";
        case DecayFit::Verdict::NotGeometric: return "not-geometric";
        case DecayFit::Verdict::InsufficientData: return "insufficient-data";
    }
    return "insufficient-data";
}

json params_json(const ClassifyParams& p) {
    return json{
        {"n_max", p.n_max},
        {"series_converge_tol", p.series.converge_tol},
        {"series_diverge_factor", p.series.diverge_factor},
        {"decay_q_max", p.decay.q_max},
        {"decay_rms_max", p.decay.rms_max},
        {"decay_min_offsets", p.decay.min_offsets},
        {"growth_margin", p.growth_margin},
        {"gamma_condition_tol", p.gamma_condition_tol},
    };
}

json classification_json(const PointClassification& pc) {
    json j{
        {"lambda", complex_pair(pc.lambda)},
        {"label", label_name(pc.label)},
        {"growth_exponent", pc.growth},
        {"fast_path", pc.fast_path},
        {"escalated", pc.escalated},
        {"params", params_json(pc.params)},
    };
    j["series"] = json{{"verdict", series_name(pc.series.verdict)},
                       {"tail_ratio", pc.series.tail_ratio},
                       {"window", pc.series.window}};
    if (pc.gamma) {
        j["gamma"] = json{{"value", complex_pair(pc.gamma->gamma)},
                          {"residual", pc.gamma->residual},
                          {"condition", pc.gamma->condition}};
    }
    if (pc.decay) {
        j["decay"] = json{{"c", pc.decay->c},
                          {"q", pc.decay->q},
                          {"rms_residual", pc.decay->rms_residual},
                          {"verdict", decay_verdict_name(pc.decay->verdict)},
                          {"window", json::array({pc.decay->window_lo, pc.decay->window_hi})},
                          {"offsets", pc.decay->offsets}};
    }
    if (!pc.note.empty()) j["note"] = pc.note;
    return j;
}

}  // namespace

std::string classification_to_json(const PointClassification& pc, int indent) {
    return classification_json(pc).dump(indent);
}

std::string probe_report_to_json(const ProbeReport& report, int indent) {
    json j;
    j["classification"] = classification_json(report.classification);

    json tail = json::array();
    const auto& entries = report.convergents.entries;
    const int size = static_cast<int>(entries.size());
    const int from = std::max(0, size - report.tail_length);
    for (int n = from; n < size; ++n) {
        const auto& e = entries[n];
        json row{{"n", e.n}, {"pole", e.pole}};
        if (!e.pole) row["value"] = complex_pair(e.value);
        tail.push_back(std::move(row));
    }
    j["convergents_tail"] = std::move(tail);

    json rem{{"rate", report.remainders.rate}, {"fit_rms", report.remainders.fit_rms}};
    json vals = json::array();
    const int vsize = static_cast<int>(report.remainders.values.size());
    for (int n = std::max(0, vsize - report.tail_length); n < vsize; ++n)
        vals.push_back(report.remainders.values[n]);
    rem["values_tail"] = std::move(vals);
    j["remainder_diagnostics"] = std::move(rem);
    return j.dump(indent);
}

}  // namespace trispec
