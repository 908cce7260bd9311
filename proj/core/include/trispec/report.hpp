#pragma once

#include <string>

#include "trispec/jfraction.hpp"
#include "trispec/resolvent.hpp"

namespace trispec {

// JSON serialization of classification evidence, thresholds included, so a
// verdict can be audited (and reproduced) from the report alone.
std::string classification_to_json(const PointClassification& pc, int indent = 2);

// Full probe report: evidence plus the tail of the convergent table and the
// linear-form remainder diagnostics at the estimated resolvent value.
struct ProbeReport {
    PointClassification classification;
    ConvergentTable convergents;
    RemainderDiagnostics remainders;
    int tail_length = 16;
};

std::string probe_report_to_json(const ProbeReport& report, int indent = 2);

}  // namespace trispec
