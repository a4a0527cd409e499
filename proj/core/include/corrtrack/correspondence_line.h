#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "corrtrack/color_histograms.h"
#include "corrtrack/common.h"
#include "corrtrack/image.h"

namespace corrtrack {

/// Parameters of the smoothed step functions that model the conditional line
/// coordinate probabilities. The amplitude sets a constant global
/// uncertainty; the slope models local uncertainty around the contour.
/// slope = 0 selects the sharp-step limit.
struct StepFunctionParams {
  double amplitude = 0.36;  // in (0, 0.5]
  double slope = 0.0;       // >= 0
};

/// h_f(x) = 0.5 - amplitude * tanh(x / (2 * slope)); at slope = 0 the sharp
/// step 0.5 - amplitude * sgn(x), with value 0.5 at x = 0.
double smoothed_step_foreground(double x, const StepFunctionParams &params);
/// Complement of the foreground step: h_b(x) = 1 - h_f(x).
double smoothed_step_background(double x, const StepFunctionParams &params);

/// Smoothed step function evaluated over the 8 half-integer arguments
/// x in {-3.5, ..., 3.5}; outside that span values clamp to the asymptotes
/// 0.5 -+ amplitude.
class StepFunctionTable {
 public:
  static constexpr int kLength = 8;
  static constexpr double kMaxArgument = 0.5 * (kLength - 1);

  explicit StepFunctionTable(const StepFunctionParams &params);

  const StepFunctionParams &params() const { return params_; }

  /// Foreground step value with tail clamping; grid arguments use the
  /// precomputed table.
  double foreground(double x) const {
    if (x < -kMaxArgument) return 0.5 + params_.amplitude;
    if (x > kMaxArgument) return 0.5 - params_.amplitude;
    const double index = x + kMaxArgument;
    const int i = static_cast<int>(std::lround(index));
    if (std::abs(index - i) < 1e-9) return foreground_[i];
    return smoothed_step_foreground(x, params_);
  }
  double background(double x) const { return 1.0 - foreground(x); }

 private:
  StepFunctionParams params_;
  std::array<double, kLength> foreground_;
};

/// A fixed 1D probe in the image along which contour evidence is gathered.
/// Pixel coordinates r along the line map to scaled segment coordinates
/// r_s = (r - offset) * major_component / scale, where scale is the number
/// of pixels per segment and major_component = max(|n_x|, |n_y|). The offset
/// is the minimal shift that puts segment centers onto the pixel grid so that
/// scaled coordinates are integers for every line.
struct CorrespondenceLine {
  Vector2d center = Vector2d::Zero();     // pixels
  Vector2d normal = Vector2d::Zero();     // unit, points toward background
  double major_component = 1.0;           // max(|n_x|, |n_y|)
  double offset = 0.0;                    // Delta r, pixels
  int scale = 1;                          // pixels per segment
  int half_length = 0;                    // segments on each side of center
  std::vector<double> segment_fg_posteriors;  // index 0 <=> r_s=-half_length
  Vector3d model_point = Vector3d::Zero();    // meters, model frame
  double depth_at_center = 0.0;               // meters
  bool valid = false;

  double to_scaled(double r) const {
    return (r - offset) * major_component / scale;
  }
  double from_scaled(double r_s) const {
    return r_s * scale / major_component + offset;
  }
  double scaled_coordinate(int index) const {
    return static_cast<double>(index - half_length);
  }
};

/// Builds the line geometry (major component and grid offset) for a center,
/// unit normal, and scale. Posteriors are left empty.
CorrespondenceLine setup_line(const Vector2d &center, const Vector2d &normal,
                              int scale, int half_length);

/// Pixel colors of every segment: segment k (scaled coordinate
/// k - half_length) holds the `scale` pixels closest to its continuous
/// positions. Returns nullopt when the line leaves the image.
std::optional<std::vector<std::vector<Color>>> sample_line(
    const ImageRGB &image, const CorrespondenceLine &line);

/// Pixel-wise posterior (p_f, p_b) from histogram likelihoods; colors without
/// evidence in either histogram give (0.5, 0.5).
std::pair<double, double> pixel_posterior(const Color &color,
                                          const ColorHistograms &histograms);

/// Segment-wise posterior from the product of per-pixel likelihoods.
std::pair<double, double> segment_posterior(const std::vector<Color> &colors,
                                            const ColorHistograms &histograms);

/// Samples the image along the line and fills segment_fg_posteriors; sets and
/// returns line.valid (false when the line leaves the image).
bool evaluate_line(const ImageRGB &image, const ColorHistograms &histograms,
                   CorrespondenceLine &line);

/// Discrete posterior of the scaled contour distance with its Gaussian
/// summary. Probabilities are nonnegative and sum to 1; the variance is
/// floored at 0.01 to keep inverse-variance weights bounded.
struct PosteriorDistribution {
  std::vector<double> support;       // scaled distances d_s
  std::vector<double> probabilities;
  double mean = 0.0;
  double variance = 0.0;
};

constexpr double kVarianceFloor = 0.01;

/// Symmetric half-integer support {-(size-1)/2 - 0.5 + k}; size 12 yields
/// {-5.5, ..., 5.5}.
std::vector<double> make_support(int size = 12);

/// Evaluates the unnormalized product of per-segment mixture terms in log
/// space at every support point and normalizes. Throws "degenerate
/// distribution" when every support point has zero probability.
PosteriorDistribution posterior_distribution(const CorrespondenceLine &line,
                                             const StepFunctionTable &table,
                                             const std::vector<double> &support);

/// Closed-form first-order derivative of the continuous-limit log-posterior
/// for a perfect step at the line center: -2 atanh(2 a tanh(d / 2 s)).
/// Requires slope > 0; throws when the inner argument reaches +-1.
double closed_form_log_derivative(double d, const StepFunctionParams &params);

/// Scale parameter of the sharp-step limit posterior (a Laplace
/// distribution): b = 1 / (2 atanh(2 amplitude)), for amplitude in (0, 0.5).
double closed_form_laplace_scale(double amplitude);

/// Three-model formulation with explicit noise class: evaluates
/// 2a h0_f(r-d) p_f + 2a h0_b(r-d) p_b + (1-2a)/2, where h0 are the
/// unit-amplitude steps. Equals the smoothed-step mixture up to one global
/// constant whenever p_f + p_b = 1.
double extended_model_posterior(double p_f, double p_b, double d, double r,
                                const StepFunctionParams &params);

/// Debug dump: one CSV row per segment (scaled coordinate and foreground
/// posterior), followed by the distribution rows.
void dump_line_csv(const std::string &path, const CorrespondenceLine &line,
                   const PosteriorDistribution &distribution);

}  // namespace corrtrack
