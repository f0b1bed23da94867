// spectral_stats.hpp: unfolding, spacing and ratio statistics, reference
// ensembles and the Anderson-Darling goodness-of-fit statistic

#pragma once

#include "tpdicke/model.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tpdicke {

inline constexpr int kDefaultUnfoldHalfWindow = 10;
inline constexpr std::size_t kDefaultWindowLevels = 400;
inline constexpr std::size_t kDefaultWindowStride = 200;
inline constexpr std::size_t kMinWindowLevels = 50;
inline constexpr double kDegeneracyTolerance = 1e-12;
inline constexpr double kAndersonDarlingThreshold = 2.5;
inline const double kMeanRatioGOE = 4.0 - 2.0 * std::sqrt(3.0);
inline const double kMeanRatioPoisson = 2.0 * std::log(2.0) - 1.0;

enum class SpacingModel { GOE, Poisson };

std::string to_string(SpacingModel m);

struct SpacingSample {
    std::vector<double> s;     // unfolded spacings, mean ≈ 1
    double window_center{0.0}; // ⟨ε⟩ of the levels used
    double window_width{0.0};  // σ_ε of the levels used
    std::size_t merged{0};     // degenerate levels collapsed before unfolding
};

struct RatioPoint {
    double epsilon_center{0.0};
    double r_mean{0.0};
    std::size_t n_levels{0};
};

struct MergedLevels {
    std::vector<double> levels;
    std::size_t merged{0};
};

// Collapses neighbours closer than tol·max(1, max|E|). Input must be sorted.
MergedLevels merge_degenerate(std::span<const double> energies,
                              double tol = kDegeneracyTolerance);

// Local mean-spacing unfolding: s_k = (E_{k+1} − E_k)/S_k, where S_k is the
// mean of the 2ν raw spacings centred on k, shifted inward at the edges.
// `scale` converts energies to ε for the reported window statistics.
// Throws TooFewLevels below 2ν + 2 distinct levels.
SpacingSample unfold(std::span<const double> energies, int nu = kDefaultUnfoldHalfWindow,
                     double scale = 1.0);

double goe_pdf(double s);
double poisson_pdf(double s);
double goe_cdf(double s);
double poisson_cdf(double s);
double model_pdf(SpacingModel m, double s);
double model_cdf(SpacingModel m, double s);

// r_k = min(s_k, s_{k−1})/max(s_k, s_{k−1}) over interior levels, from raw
// spacings. Throws ZeroSpacing (with the level index) on 0/0.
std::vector<double> ratio_sequence(std::span<const double> energies);

double mean_ratio(std::span<const double> energies);

// Sliding windows of `window_levels` consecutive levels advanced by `stride`.
// Degenerate levels are merged first. ε = E/j uses params.j().
std::vector<RatioPoint> windowed_mean_ratio(std::span<const double> energies,
                                            const ModelParams& params,
                                            std::size_t window_levels = kDefaultWindowLevels,
                                            std::size_t stride = kDefaultWindowStride);

// Interpolates each curve onto a common ε grid spanning the overlap of all
// curves (as many points as the longest curve) and averages them.
std::vector<RatioPoint> average_ratio_curves(const std::vector<std::vector<RatioPoint>>& curves);

// A² = −n − (1/n) Σ (2i − 1)[ln F(s_(i)) + ln(1 − F(s_(n+1−i)))].
// Throws TooFewSamples below 20 samples.
double anderson_darling(std::span<const double> samples, SpacingModel model);

inline bool anderson_darling_accepts(double a2) { return a2 <= kAndersonDarlingThreshold; }

struct SpacingHistogram {
    std::vector<double> bin_left;
    std::vector<double> bin_right;
    std::vector<double> density;
    std::vector<double> goe_pdf_mid;
    std::vector<double> poisson_pdf_mid;
    double clipped_fraction{0.0}; // mass above s_max
    bool clip_warning{false};     // clipped_fraction > 1%
};

// Density-normalised histogram (unit area over [0, s_max]).
SpacingHistogram spacing_histogram(const SpacingSample& sample, std::size_t bins,
                                   double s_max = 4.0);

} // namespace tpdicke
