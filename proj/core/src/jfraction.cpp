#include "trispec/jfraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "trispec/errors.hpp"
#include "linfit.hpp"

namespace trispec {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

ConvergentTable convergents(const RecurrenceTrace& trace) {
    ConvergentTable table;
    table.lambda = trace.lambda;
    table.entries.resize(trace.n_max + 1);
    for (int n = 0; n <= trace.n_max; ++n) {
        Convergent& c = table.entries[n];
        c.n = n;
        if (trace.q[n].is_zero()) {
            c.pole = true;
        } else {
            c.value = (trace.p[n] / trace.q[n]).value();
        }
    }
    return table;
}

RemainderDiagnostics remainder_diagnostics(const RecurrenceTrace& trace, cplx phi) {
    const RemainderTrace rem = evaluate_remainder(trace, phi);
    RemainderDiagnostics d;
    d.values.resize(trace.n_max + 1);
    d.log_values.resize(trace.n_max + 1);

    std::vector<double> xs, ys;
    for (int n = 0; n <= trace.n_max; ++n) {
        const ScaledReal v = rem.r[n].abs() * trace.h[n];
        d.values[n] = v.value();
        d.log_values[n] = v.log_abs();
        if (std::isfinite(d.log_values[n])) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(d.log_values[n]);
        }
    }
    const auto fit = detail::fit_line(xs, ys);
    if (fit.count >= 2) {
        d.rate = std::exp(fit.slope);
        d.fit_rms = fit.rms;
    }
    return d;
}

GeometricSubsequence geometric_subsequence(const ConvergentTable& table, cplx phi,
                                           const GeometricFitParams& params) {
    const int size = static_cast<int>(table.entries.size());
    if (size < 32)
        throw std::invalid_argument("geometric_subsequence: table must have >= 32 entries");

    GeometricSubsequence out;
    const int need = (size + 3) / 4;

    // |phi - pi_n| is meaningless below the roundoff of pi_n itself; such
    // residuals count as converged and sit inside any envelope.
    struct Pt {
        int n;
        double log_err;
        bool at_floor;
    };
    std::vector<Pt> pts;
    std::vector<int> floor_idx;
    for (const auto& entry : table.entries) {
        if (entry.pole) continue;
        const double err = std::abs(phi - entry.value);
        const double floor = 64.0 * kEps * (std::abs(phi) + std::abs(entry.value));
        if (err <= floor) {
            floor_idx.push_back(entry.n);
        } else {
            pts.push_back({entry.n, std::log(err), false});
        }
    }

    if (static_cast<int>(pts.size()) < 4) {
        // everything (or nearly) converged to the floor
        if (static_cast<int>(floor_idx.size()) >= need) {
            out.verdict = GeometricSubsequence::Verdict::Found;
            out.indices = floor_idx;
            for (const auto& p : pts) out.indices.push_back(p.n);
            std::sort(out.indices.begin(), out.indices.end());
            out.rate = 0.0;
            out.envelope_c = 0.0;
        }
        return out;
    }

    // Seed the fit with the tail, then grow the qualifying set greedily.
    const int seed = std::max<int>(8, static_cast<int>(pts.size()) / 4);
    std::vector<double> xs, ys;
    for (int i = static_cast<int>(pts.size()) - seed; i < static_cast<int>(pts.size()); ++i) {
        xs.push_back(pts[i].n);
        ys.push_back(pts[i].log_err);
    }
    auto fit = detail::fit_line(xs, ys);

    std::vector<int> qualifying;
    const double log_slack = std::log(params.slack);
    for (int pass = 0; pass < 3; ++pass) {
        qualifying.clear();
        xs.clear();
        ys.clear();
        for (const auto& p : pts) {
            if (p.log_err <= fit.intercept + fit.slope * p.n + log_slack) {
                qualifying.push_back(p.n);
                xs.push_back(p.n);
                ys.push_back(p.log_err);
            }
        }
        if (xs.size() < 2) break;
        fit = detail::fit_line(xs, ys);
    }

    out.rate = std::exp(fit.slope);
    out.envelope_c = std::exp(fit.intercept);
    std::vector<int> all = qualifying;
    all.insert(all.end(), floor_idx.begin(), floor_idx.end());
    std::sort(all.begin(), all.end());
    out.indices = std::move(all);
    if (out.rate <= params.rate_max && static_cast<int>(out.indices.size()) >= need)
        out.verdict = GeometricSubsequence::Verdict::Found;
    return out;
}

namespace {

// Two-row moment table; R is double or long double.
template <typename R>
JFractionCoefficients moments_table(const std::vector<cplx>& c_in) {
    using C = std::complex<R>;
    const int count = static_cast<int>(c_in.size());
    const int m = (count - 1) / 2;

    std::vector<C> cur(c_in.size()), prev, next;
    for (int i = 0; i < count; ++i) cur[i] = C(c_in[i].real(), c_in[i].imag());

    const auto row_scale = [](const std::vector<C>& row, int lo, int hi) {
        R s = 0;
        for (int l = lo; l <= hi; ++l) s = std::max(s, std::abs(row[l]));
        return s;
    };

    std::vector<C> bs, as;
    if (std::abs(cur[0]) == 0) throw DegeneracyError("moment c_0 is zero", 0);
    bs.push_back(cur[1] / cur[0]);

    // row k of the table spans l = k .. 2m-k
    for (int k = 1; k <= m; ++k) {
        next.assign(cur.size(), C(0));
        const C bk = bs[k - 1];
        const C ak = (k >= 2) ? as[k - 2] : C(0);
        for (int l = k; l <= 2 * m - k; ++l) {
            C v = cur[l + 1] - bk * cur[l];
            if (k >= 2) v -= ak * prev[l];
            next[l] = v;
        }
        const R scale = std::max(row_scale(next, k, 2 * m - k), row_scale(cur, k - 1, k));
        const C pivot = next[k];
        if (scale == 0 || std::abs(pivot) <= 1e-13 * scale)
            throw DegeneracyError("moment table pivot vanished at level " + std::to_string(k),
                                  k);
        as.push_back(pivot / cur[k - 1]);
        if (k < m) bs.push_back(next[k + 1] / next[k] - cur[k] / cur[k - 1]);
        prev = std::move(cur);
        cur = std::move(next);
    }

    JFractionCoefficients out;
    for (const auto& v : bs)
        out.b.push_back(cplx(static_cast<double>(v.real()), static_cast<double>(v.imag())));
    for (const auto& v : as)
        out.a.push_back(cplx(static_cast<double>(v.real()), static_cast<double>(v.imag())));
    return out;
}

}  // namespace

JFractionCoefficients moments_to_jfraction(const MomentSequence& moments, bool high_precision) {
    const int count = static_cast<int>(moments.c.size());
    if (count < 3 || count % 2 == 0)
        throw std::invalid_argument(
            "moments_to_jfraction: need an odd number (2M+1, M >= 1) of moments");
    if (moments.c[0] == cplx{0.0, 0.0})
        throw std::invalid_argument("moments_to_jfraction: c_0 must be nonzero");
    return high_precision ? moments_table<long double>(moments.c)
                          : moments_table<double>(moments.c);
}

MomentSequence jfraction_to_moments(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                    int m_levels) {
    if (m_levels < 1) throw std::invalid_argument("jfraction_to_moments: m_levels must be >= 1");
    for (const auto& v : a)
        if (v == cplx{0.0, 0.0})
            throw std::invalid_argument("jfraction_to_moments: a coefficients must be nonzero");

    const int count = 2 * m_levels + 1;
    const int size = count;  // vector iteration never reaches past index m_levels
    const auto a_at = [&](int i) {  // subdiagonal entry a_i, i >= 1
        return (i - 1 < static_cast<int>(a.size())) ? a[i - 1] : cplx{0.0, 0.0};
    };
    const auto b_at = [&](int i) {
        return (i < static_cast<int>(b.size())) ? b[i] : cplx{0.0, 0.0};
    };

    MomentSequence ms;
    ms.c.resize(count);
    std::vector<cplx> w(size, cplx{0.0, 0.0}), next(size);
    w[0] = {1.0, 0.0};
    ms.c[0] = {1.0, 0.0};
    for (int k = 1; k < count; ++k) {
        for (int i = 0; i < size; ++i) {
            cplx v = b_at(i) * w[i];
            if (i >= 1) v += a_at(i) * w[i - 1];
            if (i + 1 < size) v += w[i + 1];
            next[i] = v;
        }
        std::swap(w, next);
        ms.c[k] = w[0];
    }
    return ms;
}

MomentSequence read_moments_csv(std::istream& in) {
    MomentSequence ms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) != 2)
            throw std::invalid_argument("moments csv: cannot parse line " +
                                        std::to_string(lineno) + ": " + line);
        ms.c.emplace_back(re, im);
    }
    return ms;
}

MomentSequence read_moments_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("moments csv: cannot open " + path.string());
    return read_moments_csv(in);
}

void write_convergents_csv(std::ostream& out, const ConvergentTable& table, cplx phi,
                           const GeometricSubsequence& fit) {
    char buf[128];
    out << "n,pi_re,pi_im,abs_err\n";
    for (const auto& e : table.entries) {
        if (e.pole) {
            out << e.n << ",nan,nan,nan\n";
            continue;
        }
        const double err = std::abs(phi - e.value);
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g\n", e.n, e.value.real(),
                      e.value.imag(), err);
        out << buf;
    }
    const bool found = fit.verdict == GeometricSubsequence::Verdict::Found;
    const bool whole =
        found && fit.indices.size() == table.entries.size() -
                     static_cast<size_t>(std::count_if(table.entries.begin(),
                                                       table.entries.end(),
                                                       [](const Convergent& c) { return c.pole; }));
    std::snprintf(buf, sizeof buf, "# geometric_subsequence: verdict=%s rate=%.10g c=%.10g",
                  found ? "found" : "none-found", fit.rate, fit.envelope_c);
    out << buf << " indices=" << fit.indices.size()
        << (whole ? " whole-sequence=yes" : " whole-sequence=no") << "\n";
}

}  // namespace trispec
