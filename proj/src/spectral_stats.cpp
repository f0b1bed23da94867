// spectral_stats.cpp

#include "tpdicke/spectral_stats.hpp"

#include "tpdicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace tpdicke {

namespace {

void require_sorted(std::span<const double> e) {
    for (std::size_t i = 1; i < e.size(); ++i)
        if (!(e[i] >= e[i - 1])) throw InvalidParameters("energies must be sorted ascending");
}

double mean_of(std::span<const double> x) {
    return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// ln F and ln(1 − F) computed without cancellation.
double log_cdf(SpacingModel m, double s) {
    const double x = m == SpacingModel::GOE ? std::numbers::pi * s * s / 4.0 : s;
    const double f = -std::expm1(-x);
    return std::log(std::max(f, std::numeric_limits<double>::min()));
}

double log_survival(SpacingModel m, double s) {
    return m == SpacingModel::GOE ? -std::numbers::pi * s * s / 4.0 : -s;
}

} // namespace

std::string to_string(SpacingModel m) { return m == SpacingModel::GOE ? "GOE" : "Poisson"; }

MergedLevels merge_degenerate(std::span<const double> energies, double tol) {
    require_sorted(energies);
    MergedLevels out;
    if (energies.empty()) return out;
    double scale = 1.0;
    for (double e : energies) scale = std::max(scale, std::abs(e));
    const double gap = tol * scale;
    out.levels.push_back(energies.front());
    for (std::size_t i = 1; i < energies.size(); ++i) {
        if (energies[i] - out.levels.back() < gap)
            ++out.merged;
        else
            out.levels.push_back(energies[i]);
    }
    return out;
}

SpacingSample unfold(std::span<const double> energies, int nu, double scale) {
    if (nu < 1) throw InvalidParameters("unfolding half-window must be >= 1");
    if (!(scale > 0.0)) throw InvalidParameters("energy scale must be > 0");
    const auto merged = merge_degenerate(energies);
    const auto& e = merged.levels;
    const auto need = static_cast<std::size_t>(2 * nu + 2);
    if (e.size() < need)
        throw TooFewLevels("unfolding with nu=" + std::to_string(nu) + " needs " +
                           std::to_string(need) + " levels, got " + std::to_string(e.size()));

    const std::size_t m = e.size() - 1;
    std::vector<double> raw(m);
    for (std::size_t k = 0; k < m; ++k) raw[k] = e[k + 1] - e[k];
    // prefix sums for O(1) window means
    std::vector<double> prefix(m + 1, 0.0);
    std::partial_sum(raw.begin(), raw.end(), prefix.begin() + 1);

    const auto width = static_cast<long>(2 * nu);
    SpacingSample out;
    out.merged = merged.merged;
    out.s.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        long lo = static_cast<long>(k) - nu + 1;
        lo = std::clamp(lo, 0L, static_cast<long>(m) - width);
        const double local = (prefix[static_cast<std::size_t>(lo + width)] - prefix[static_cast<std::size_t>(lo)]) /
                             static_cast<double>(width);
        out.s[k] = raw[k] / local;
    }

    double sum = 0.0, sq = 0.0;
    for (double x : e) {
        sum += x / scale;
        sq += (x / scale) * (x / scale);
    }
    const auto n = static_cast<double>(e.size());
    out.window_center = sum / n;
    out.window_width = std::sqrt(std::max(0.0, sq / n - out.window_center * out.window_center));
    return out;
}

double goe_pdf(double s) {
    return s < 0.0 ? 0.0 : 0.5 * std::numbers::pi * s * std::exp(-std::numbers::pi * s * s / 4.0);
}
double poisson_pdf(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }
double goe_cdf(double s) { return s <= 0.0 ? 0.0 : -std::expm1(-std::numbers::pi * s * s / 4.0); }
double poisson_cdf(double s) { return s <= 0.0 ? 0.0 : -std::expm1(-s); }

double model_pdf(SpacingModel m, double s) { return m == SpacingModel::GOE ? goe_pdf(s) : poisson_pdf(s); }
double model_cdf(SpacingModel m, double s) { return m == SpacingModel::GOE ? goe_cdf(s) : poisson_cdf(s); }

std::vector<double> ratio_sequence(std::span<const double> energies) {
    if (energies.size() < 3) throw TooFewLevels("ratio statistics need at least 3 levels");
    require_sorted(energies);
    std::vector<double> r;
    r.reserve(energies.size() - 2);
    for (std::size_t k = 1; k + 1 < energies.size(); ++k) {
        const double a = energies[k] - energies[k - 1];
        const double b = energies[k + 1] - energies[k];
        const double hi = std::max(a, b);
        if (hi == 0.0) throw ZeroSpacing(k);
        r.push_back(std::min(a, b) / hi);
    }
    return r;
}

double mean_ratio(std::span<const double> energies) {
    const auto r = ratio_sequence(energies);
    return mean_of(r);
}

std::vector<RatioPoint> windowed_mean_ratio(std::span<const double> energies,
                                            const ModelParams& params, std::size_t window_levels,
                                            std::size_t stride) {
    if (window_levels < kMinWindowLevels)
        throw InvalidParameters("ratio windows need at least " + std::to_string(kMinWindowLevels) + " levels");
    if (stride == 0) throw InvalidParameters("window stride must be >= 1");
    const auto e = merge_degenerate(energies).levels;
    if (e.size() < window_levels)
        throw TooFewLevels("window of " + std::to_string(window_levels) + " levels exceeds the " +
                           std::to_string(e.size()) + " available");

    const double j = params.j();
    std::vector<RatioPoint> out;
    for (std::size_t start = 0; start + window_levels <= e.size(); start += stride) {
        const std::span<const double> w(e.data() + start, window_levels);
        out.push_back({mean_of(w) / j, mean_ratio(w), window_levels});
    }
    return out;
}

std::vector<RatioPoint> average_ratio_curves(const std::vector<std::vector<RatioPoint>>& curves) {
    if (curves.empty()) throw InvalidParameters("no ratio curves to average");
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::size_t points = 0;
    for (const auto& c : curves) {
        if (c.empty()) throw TooFewLevels("a sector produced no ratio windows");
        lo = std::max(lo, c.front().epsilon_center);
        hi = std::min(hi, c.back().epsilon_center);
        points = std::max(points, c.size());
    }
    if (lo > hi) throw TooFewLevels("sector ratio curves do not overlap in energy");
    if (lo == hi) points = 1;

    auto interpolate = [](const std::vector<RatioPoint>& c, double x) {
        auto it = std::lower_bound(c.begin(), c.end(), x, [](const RatioPoint& p, double v) {
            return p.epsilon_center < v;
        });
        if (it == c.begin()) return std::pair{it->r_mean, it->n_levels};
        if (it == c.end()) return std::pair{c.back().r_mean, c.back().n_levels};
        const auto& b = *it;
        const auto& a = *(it - 1);
        const double t = (x - a.epsilon_center) / (b.epsilon_center - a.epsilon_center);
        return std::pair{a.r_mean + t * (b.r_mean - a.r_mean), t < 0.5 ? a.n_levels : b.n_levels};
    };

    std::vector<RatioPoint> out;
    out.reserve(points);
    std::vector<double> values(curves.size());
    for (std::size_t i = 0; i < points; ++i) {
        const double x = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        std::size_t levels = 0;
        for (std::size_t c = 0; c < curves.size(); ++c) {
            const auto [r, n] = interpolate(curves[c], x);
            values[c] = r;
            levels += n;
        }
        // fixed summation order so the result does not depend on curve order
        std::sort(values.begin(), values.end());
        const double sum = std::accumulate(values.begin(), values.end(), 0.0);
        out.push_back({x, sum / static_cast<double>(curves.size()), levels});
    }
    return out;
}

double anderson_darling(std::span<const double> samples, SpacingModel model) {
    if (samples.size() < 20)
        throw TooFewSamples("Anderson-Darling needs at least 20 samples, got " + std::to_string(samples.size()));
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const auto n = x.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double weight = 2.0 * static_cast<double>(i + 1) - 1.0;
        acc += weight * (log_cdf(model, x[i]) + log_survival(model, x[n - 1 - i]));
    }
    return -static_cast<double>(n) - acc / static_cast<double>(n);
}

SpacingHistogram spacing_histogram(const SpacingSample& sample, std::size_t bins, double s_max) {
    if (sample.s.empty()) throw TooFewSamples("histogram of an empty spacing sample");
    if (bins == 0) throw InvalidParameters("histogram needs at least one bin");
    if (!(s_max > 0.0)) throw InvalidParameters("histogram range must be > 0");

    SpacingHistogram h;
    const double width = s_max / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    std::size_t inside = 0;
    for (double s : sample.s) {
        if (s < 0.0 || s > s_max) continue;
        auto b = static_cast<std::size_t>(s / width);
        if (b == bins) b = bins - 1;
        ++counts[b];
        ++inside;
    }
    h.clipped_fraction = 1.0 - static_cast<double>(inside) / static_cast<double>(sample.s.size());
    h.clip_warning = h.clipped_fraction > 0.01;
    for (std::size_t b = 0; b < bins; ++b) {
        const double left = width * static_cast<double>(b);
        const double mid = left + 0.5 * width;
        h.bin_left.push_back(left);
        h.bin_right.push_back(left + width);
        h.density.push_back(inside == 0 ? 0.0
                                        : static_cast<double>(counts[b]) / (static_cast<double>(inside) * width));
        h.goe_pdf_mid.push_back(goe_pdf(mid));
        h.poisson_pdf_mid.push_back(poisson_pdf(mid));
    }
    return h;
}

} // namespace tpdicke
