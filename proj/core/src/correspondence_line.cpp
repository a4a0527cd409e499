#include "corrtrack/correspondence_line.h"

#include <cmath>
#include <fstream>
#include <limits>

namespace corrtrack {

double smoothed_step_foreground(double x, const StepFunctionParams &params) {
  if (params.slope <= 0.0) {
    if (x == 0.0) return 0.5;
    return 0.5 - params.amplitude * (x > 0.0 ? 1.0 : -1.0);
  }
  return 0.5 - params.amplitude * std::tanh(x / (2.0 * params.slope));
}

double smoothed_step_background(double x, const StepFunctionParams &params) {
  return 1.0 - smoothed_step_foreground(x, params);
}

StepFunctionTable::StepFunctionTable(const StepFunctionParams &params)
    : params_{params} {
  if (!(params.amplitude > 0.0 && params.amplitude <= 0.5))
    throw Error{"StepFunctionTable: amplitude must be in (0, 0.5]"};
  if (params.slope < 0.0)
    throw Error{"StepFunctionTable: slope must be >= 0"};
  for (int i = 0; i < kLength; ++i)
    foreground_[i] =
        smoothed_step_foreground(-kMaxArgument + i, params);
}

CorrespondenceLine setup_line(const Vector2d &center, const Vector2d &normal,
                              int scale, int half_length) {
  if (scale < 1) throw Error{"setup_line: scale must be >= 1"};
  CorrespondenceLine line;
  line.center = center;
  line.normal = normal;
  line.scale = scale;
  line.half_length = half_length;
  const int axis = std::abs(normal.x()) >= std::abs(normal.y()) ? 0 : 1;
  const double n_major = normal[axis];
  line.major_component = std::abs(n_major);

  // Minimal offset that puts segment centers onto the pixel grid: odd scales
  // center segments on pixel centers, even scales on pixel edges.
  const double c_major = center[axis];
  double target;
  if (scale % 2 == 1)
    target = std::round(c_major);
  else
    target = std::round(c_major + 0.5) - 0.5;
  line.offset = (target - c_major) / n_major;
  return line;
}

namespace {

// Iterates the pixels of every segment; visit(segment_index, x, y) returns
// false to abort (out-of-image). Returns false when aborted.
template <typename Visit>
bool for_each_line_pixel(const CorrespondenceLine &line, int width, int height,
                         Visit &&visit) {
  const int axis =
      std::abs(line.normal.x()) >= std::abs(line.normal.y()) ? 0 : 1;
  const double n_major = line.normal[axis];
  const double n_minor = line.normal[1 - axis];
  const double c_major = line.center[axis];
  const double c_minor = line.center[1 - axis];
  const double grid_major = c_major + line.offset * n_major;
  const double direction = n_major > 0.0 ? 1.0 : -1.0;
  const int count = 2 * line.half_length + 1;
  for (int k = 0; k < count; ++k) {
    const double segment = static_cast<double>(k - line.half_length);
    for (int j = 0; j < line.scale; ++j) {
      const double along = segment * line.scale -
                           0.5 * (line.scale - 1) + static_cast<double>(j);
      const double major = grid_major + direction * along;
      const double r = (major - c_major) / n_major;
      const double minor = c_minor + r * n_minor;
      const int u = round_to_pixel(major);
      const int v = round_to_pixel(minor);
      const int x = axis == 0 ? u : v;
      const int y = axis == 0 ? v : u;
      if (x < 0 || x >= width || y < 0 || y >= height) return false;
      if (!visit(k, x, y)) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<std::vector<std::vector<Color>>> sample_line(
    const ImageRGB &image, const CorrespondenceLine &line) {
  std::vector<std::vector<Color>> segments(2 * line.half_length + 1);
  for (auto &s : segments) s.reserve(line.scale);
  const bool ok = for_each_line_pixel(
      line, image.width(), image.height(), [&](int k, int x, int y) {
        segments[k].push_back(image.at(x, y));
        return true;
      });
  if (!ok) return std::nullopt;
  return segments;
}

std::pair<double, double> pixel_posterior(const Color &color,
                                          const ColorHistograms &histograms) {
  const double fg = histograms.foreground_likelihood(color);
  const double bg = histograms.background_likelihood(color);
  const double sum = fg + bg;
  if (sum <= 0.0) return {0.5, 0.5};
  return {fg / sum, bg / sum};
}

std::pair<double, double> segment_posterior(const std::vector<Color> &colors,
                                            const ColorHistograms &histograms) {
  double fg_product = 1.0;
  double bg_product = 1.0;
  for (const Color &color : colors) {
    fg_product *= histograms.foreground_likelihood(color);
    bg_product *= histograms.background_likelihood(color);
  }
  const double sum = fg_product + bg_product;
  if (sum <= 0.0) return {0.5, 0.5};
  return {fg_product / sum, bg_product / sum};
}

bool evaluate_line(const ImageRGB &image, const ColorHistograms &histograms,
                   CorrespondenceLine &line) {
  const int count = 2 * line.half_length + 1;
  std::vector<double> fg_products(count, 1.0);
  std::vector<double> bg_products(count, 1.0);
  const bool ok = for_each_line_pixel(
      line, image.width(), image.height(), [&](int k, int x, int y) {
        const Color &color = image.at(x, y);
        fg_products[k] *= histograms.foreground_likelihood(color);
        bg_products[k] *= histograms.background_likelihood(color);
        return true;
      });
  if (!ok) {
    line.valid = false;
    line.segment_fg_posteriors.clear();
    return false;
  }
  line.segment_fg_posteriors.resize(count);
  for (int k = 0; k < count; ++k) {
    const double sum = fg_products[k] + bg_products[k];
    line.segment_fg_posteriors[k] = sum > 0.0 ? fg_products[k] / sum : 0.5;
  }
  line.valid = true;
  return true;
}

std::vector<double> make_support(int size) {
  if (size < 2) throw Error{"make_support: size must be >= 2"};
  std::vector<double> support(size);
  const double start = -0.5 * (size - 1);
  for (int i = 0; i < size; ++i) support[i] = start + i;
  return support;
}

PosteriorDistribution posterior_distribution(
    const CorrespondenceLine &line, const StepFunctionTable &table,
    const std::vector<double> &support) {
  if (!line.valid || line.segment_fg_posteriors.empty())
    throw Error{"posterior_distribution: line has no evidence"};
  const int count = static_cast<int>(line.segment_fg_posteriors.size());

  PosteriorDistribution distribution;
  distribution.support = support;
  distribution.probabilities.resize(support.size());

  std::vector<double> log_values(support.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < support.size(); ++j) {
    double log_sum = 0.0;
    for (int k = 0; k < count; ++k) {
      const double r_s = line.scaled_coordinate(k);
      const double x = r_s - support[j];
      const double p_f = line.segment_fg_posteriors[k];
      const double h_f = table.foreground(x);
      const double value = h_f * p_f + (1.0 - h_f) * (1.0 - p_f);
      if (value <= 0.0) {
        log_sum = -std::numeric_limits<double>::infinity();
        break;
      }
      log_sum += std::log(value);
    }
    log_values[j] = log_sum;
    max_log = std::max(max_log, log_sum);
  }
  if (!std::isfinite(max_log))
    throw Error{"posterior_distribution: degenerate distribution"};

  double total = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    distribution.probabilities[j] = std::exp(log_values[j] - max_log);
    total += distribution.probabilities[j];
  }
  double mean = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    distribution.probabilities[j] /= total;
    mean += distribution.probabilities[j] * support[j];
  }
  double variance = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    const double delta = support[j] - mean;
    variance += distribution.probabilities[j] * delta * delta;
  }
  distribution.mean = mean;
  distribution.variance = std::max(variance, kVarianceFloor);
  return distribution;
}

double closed_form_log_derivative(double d, const StepFunctionParams &params) {
  if (params.slope <= 0.0)
    throw Error{"closed_form_log_derivative: requires slope > 0"};
  const double argument =
      2.0 * params.amplitude * std::tanh(d / (2.0 * params.slope));
  if (std::abs(argument) >= 1.0)
    throw Error{"closed_form_log_derivative: argument out of range"};
  return -2.0 * std::atanh(argument);
}

double closed_form_laplace_scale(double amplitude) {
  if (!(amplitude > 0.0 && amplitude < 0.5))
    throw Error{"closed_form_laplace_scale: amplitude must be in (0, 0.5)"};
  return 1.0 / (2.0 * std::atanh(2.0 * amplitude));
}

double extended_model_posterior(double p_f, double p_b, double d, double r,
                                const StepFunctionParams &params) {
  const StepFunctionParams unit_amplitude{0.5, params.slope};
  const double x = r - d;
  const double h0_f = smoothed_step_foreground(x, unit_amplitude);
  const double h0_b = 1.0 - h0_f;
  const double a = params.amplitude;
  return 2.0 * a * h0_f * p_f + 2.0 * a * h0_b * p_b + 0.5 * (1.0 - 2.0 * a);
}

void dump_line_csv(const std::string &path, const CorrespondenceLine &line,
                   const PosteriorDistribution &distribution) {
  std::ofstream file{path};
  if (!file) throw Error{"dump_line_csv: cannot open " + path};
  file << "r_s,fg_posterior\n";
  for (std::size_t k = 0; k < line.segment_fg_posteriors.size(); ++k)
    file << line.scaled_coordinate(static_cast<int>(k)) << ','
         << line.segment_fg_posteriors[k] << '\n';
  file << "d_s,probability\n";
  for (std::size_t j = 0; j < distribution.support.size(); ++j)
    file << distribution.support[j] << ',' << distribution.probabilities[j]
         << '\n';
}

}  // namespace corrtrack
