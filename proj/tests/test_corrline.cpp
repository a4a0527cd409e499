#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corrtrack/correspondence_line.h"
#include "support/test_utils.h"

using namespace corrtrack;

namespace {

ColorHistograms make_histograms(
    const std::vector<std::pair<Color, double>> &fg,
    const std::vector<std::pair<Color, double>> &bg) {
  std::vector<double> fg_bins(ColorHistograms::kBinCount, 0.0);
  std::vector<double> bg_bins(ColorHistograms::kBinCount, 0.0);
  for (const auto &[color, value] : fg)
    fg_bins[ColorHistograms::flat_bin(color)] += value;
  for (const auto &[color, value] : bg)
    bg_bins[ColorHistograms::flat_bin(color)] += value;
  ColorHistograms histograms;
  histograms.update(fg_bins, bg_bins);
  return histograms;
}

// Line with directly prescribed segment posteriors (scale 1, unit normal
// along x), bypassing image sampling.
CorrespondenceLine synthetic_line(const std::vector<double> &fg_posteriors) {
  CorrespondenceLine line =
      setup_line({100.0, 100.0}, {1.0, 0.0}, 1,
                 (static_cast<int>(fg_posteriors.size()) - 1) / 2);
  line.segment_fg_posteriors = fg_posteriors;
  line.valid = true;
  return line;
}

// Perfect step at the line center: foreground for r_s < 0, background for
// r_s > 0, equivocal center segment.
std::vector<double> perfect_step(int half_length) {
  std::vector<double> posteriors(2 * half_length + 1, 0.0);
  for (int i = 0; i < half_length; ++i) posteriors[i] = 1.0;
  posteriors[half_length] = 0.5;
  return posteriors;
}

// Perfect step at a segment boundary: foreground for r_s <= -1, background
// for r_s >= 0; the contour sits at scaled coordinate -0.5.
std::vector<double> boundary_step(int half_length) {
  std::vector<double> posteriors(2 * half_length + 1, 0.0);
  for (int i = 0; i < half_length; ++i) posteriors[i] = 1.0;
  return posteriors;
}

// Direct term-by-term evaluation of the per-support product in plain
// arithmetic, independent of the log-space implementation.
std::vector<double> naive_distribution(const std::vector<double> &fg_posteriors,
                                       const std::vector<double> &support,
                                       const StepFunctionParams &params) {
  const int half = (static_cast<int>(fg_posteriors.size()) - 1) / 2;
  std::vector<double> values(support.size());
  for (std::size_t j = 0; j < support.size(); ++j) {
    double product = 1.0;
    for (std::size_t k = 0; k < fg_posteriors.size(); ++k) {
      const double x = static_cast<double>(static_cast<int>(k) - half) -
                       support[j];
      double h_f;
      if (x < -3.5)
        h_f = 0.5 + params.amplitude;
      else if (x > 3.5)
        h_f = 0.5 - params.amplitude;
      else
        h_f = smoothed_step_foreground(x, params);
      product *= h_f * fg_posteriors[k] + (1.0 - h_f) * (1.0 - fg_posteriors[k]);
    }
    values[j] = product;
  }
  double total = 0.0;
  for (double v : values) total += v;
  for (double &v : values) v /= total;
  return values;
}

}  // namespace

TEST_CASE("smoothed step is 0.5 at the origin for any parameters") {
  for (const StepFunctionParams params :
       {StepFunctionParams{0.5, 1.0}, StepFunctionParams{0.36, 0.0},
        StepFunctionParams{0.1, 2.5}}) {
    CHECK(smoothed_step_foreground(0.0, params) == doctest::Approx(0.5));
    CHECK(smoothed_step_background(0.0, params) == doctest::Approx(0.5));
  }
}

TEST_CASE("smoothed step matches the tanh form") {
  const StepFunctionParams params{0.5, 1.0};
  CHECK(smoothed_step_foreground(2.0, params) ==
        doctest::Approx(0.119202922).epsilon(1e-8));
}

TEST_CASE("sharp-step limit") {
  const StepFunctionParams params{1.0 / 3.0, 0.0};
  CHECK(smoothed_step_foreground(1.0, params) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(smoothed_step_background(1.0, params) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("step functions are complementary and monotone") {
  const StepFunctionParams params{0.42, 0.5};
  double previous = 1.0;
  for (double x = -6.0; x <= 6.0; x += 0.125) {
    const double f = smoothed_step_foreground(x, params);
    const double b = smoothed_step_background(x, params);
    CHECK(f + b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f <= previous + 1e-12);
    previous = f;
  }
}

TEST_CASE("step table matches the direct formula and clamps the tails") {
  const StepFunctionParams params{0.36, 0.5};
  const StepFunctionTable table{params};
  for (double x = -3.5; x <= 3.5; x += 1.0)
    CHECK(table.foreground(x) ==
          doctest::Approx(smoothed_step_foreground(x, params)).epsilon(1e-15));
  CHECK(table.foreground(4.5) == doctest::Approx(0.5 - params.amplitude));
  CHECK(table.foreground(-12.5) == doctest::Approx(0.5 + params.amplitude));
}

TEST_CASE("pixel posterior from histogram likelihoods") {
  const Color red{200, 10, 10};
  const Color blue{10, 10, 200};
  const ColorHistograms histograms =
      make_histograms({{red, 1.0}}, {{blue, 1.0}});
  const auto [fg_only, bg_zero] = pixel_posterior(red, histograms);
  CHECK(fg_only == doctest::Approx(1.0));
  CHECK(bg_zero == doctest::Approx(0.0));

  const Color unseen{100, 100, 100};
  const auto [fg_u, bg_u] = pixel_posterior(unseen, histograms);
  CHECK(fg_u == doctest::Approx(0.5));
  CHECK(bg_u == doctest::Approx(0.5));
}

TEST_CASE("pixel posterior normalizes for equal likelihoods") {
  const Color gray{128, 128, 128};
  const ColorHistograms histograms =
      make_histograms({{gray, 0.3}}, {{gray, 0.3}});
  const auto [fg, bg] = pixel_posterior(gray, histograms);
  CHECK(fg == doctest::Approx(0.5));
  CHECK(fg + bg == doctest::Approx(1.0));
}

TEST_CASE("single-pixel segments reduce to the pixel posterior") {
  std::mt19937 rng{47};
  for (int trial = 0; trial < 50; ++trial) {
    const Color color{static_cast<std::uint8_t>(rng() % 256),
                      static_cast<std::uint8_t>(rng() % 256),
                      static_cast<std::uint8_t>(rng() % 256)};
    const double fg_value = 1e-4 * static_cast<double>(rng() % 10000 + 1);
    const double bg_value = 1e-4 * static_cast<double>(rng() % 10000 + 1);
    const ColorHistograms histograms =
        make_histograms({{color, fg_value}}, {{color, bg_value}});
    const auto pixel = pixel_posterior(color, histograms);
    const auto segment = segment_posterior({color}, histograms);
    CHECK(segment.first == doctest::Approx(pixel.first).epsilon(1e-12));
    CHECK(segment.first + segment.second == doctest::Approx(1.0));
  }
}

TEST_CASE("two-pixel segment multiplies likelihood ratios") {
  const Color c1{16, 16, 16};
  const Color c2{240, 240, 240};
  // Both colors have a 2:1 foreground:background likelihood ratio.
  const ColorHistograms histograms =
      make_histograms({{c1, 0.4}, {c2, 0.4}}, {{c1, 0.2}, {c2, 0.2}});
  const auto [fg, bg] = segment_posterior({c1, c2}, histograms);
  CHECK(fg == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(bg == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("make_support yields the half-integer grid") {
  const auto support = make_support(12);
  REQUIRE(support.size() == 12);
  CHECK(support.front() == doctest::Approx(-5.5));
  CHECK(support.back() == doctest::Approx(5.5));
  for (std::size_t i = 1; i < support.size(); ++i)
    CHECK(support[i] - support[i - 1] == doctest::Approx(1.0));
}

TEST_CASE("perfect step with symmetric support has zero mean") {
  const StepFunctionTable table{{0.36, 0.0}};
  const auto distribution =
      posterior_distribution(synthetic_line(perfect_step(9)), table,
                             make_support(12));
  CHECK(distribution.mean == doctest::Approx(0.0).epsilon(1e-12));
  double total = 0.0;
  for (double p : distribution.probabilities) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("uniform segment posteriors give a uniform distribution") {
  const StepFunctionTable table{{0.36, 0.0}};
  const std::vector<double> uniform(19, 0.5);
  const auto distribution =
      posterior_distribution(synthetic_line(uniform), table, make_support(12));
  for (double p : distribution.probabilities)
    CHECK(p == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(distribution.mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(distribution.variance == doctest::Approx(143.0 / 12.0).epsilon(1e-9));
}

TEST_CASE("Gaussian limit: amplitude 0.5, slope 1") {
  const StepFunctionParams params{0.5, 1.0};
  const StepFunctionTable table{params};
  const auto support = make_support(12);
  // Contour at the boundary between segments -1 and 0, i.e. at -0.5.
  const auto distribution =
      posterior_distribution(synthetic_line(boundary_step(9)), table, support);

  std::vector<double> gaussian(support.size());
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double centered = support[i] + 0.5;
    gaussian[i] = std::exp(-centered * centered / (2.0 * params.slope));
    total += gaussian[i];
  }
  double tvd = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i)
    tvd += 0.5 * std::abs(distribution.probabilities[i] - gaussian[i] / total);
  CHECK(tvd < 0.05);
  CHECK(distribution.mean == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("Laplace limit: slope 0") {
  for (const double amplitude : {1.0 / 3.0, 0.36}) {
    const StepFunctionTable table{{amplitude, 0.0}};
    const auto support = make_support(12);
    const auto distribution = posterior_distribution(
        synthetic_line(boundary_step(9)), table, support);
    const double b = closed_form_laplace_scale(amplitude);
    std::vector<double> laplace(support.size());
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      laplace[i] = std::exp(-std::abs(support[i] + 0.5) / b);
      total += laplace[i];
    }
    for (std::size_t i = 0; i < support.size(); ++i)
      CHECK(distribution.probabilities[i] ==
            doctest::Approx(laplace[i] / total).epsilon(1e-9));
  }
}

TEST_CASE("log-space evaluation equals the naive product") {
  std::mt19937 rng{53};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};
  const StepFunctionParams params{0.36, 0.5};
  const StepFunctionTable table{params};
  const auto support = make_support(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> posteriors(13);
    for (double &p : posteriors) p = uniform(rng);
    const auto distribution =
        posterior_distribution(synthetic_line(posteriors), table, support);
    const auto naive = naive_distribution(posteriors, support, params);
    for (std::size_t i = 0; i < support.size(); ++i)
      CHECK(distribution.probabilities[i] ==
            doctest::Approx(naive[i]).epsilon(1e-12));
  }
}

TEST_CASE("all-zero products raise a degenerate-distribution error") {
  const StepFunctionTable table{{0.5, 1.0}};
  // Inverted step: every support point sees at least one zero factor.
  std::vector<double> inverted(19, 1.0);
  for (int i = 0; i < 9; ++i) inverted[i] = 0.0;
  inverted[9] = 0.5;
  for (int i = 10; i < 19; ++i) inverted[i] = 1.0;
  CHECK_THROWS_WITH_AS(
      posterior_distribution(synthetic_line(inverted), table, make_support(12)),
      doctest::Contains("degenerate"), Error);
}

TEST_CASE("variance floor") {
  const StepFunctionTable table{{0.36, 0.0}};
  // Extremely peaked evidence: repeated sharp steps sharpen the distribution.
  std::vector<double> posteriors(19, 0.0);
  for (int i = 0; i < 9; ++i) posteriors[i] = 1.0;
  posteriors[9] = 0.5;
  auto line = synthetic_line(posteriors);
  const auto distribution =
      posterior_distribution(line, table, make_support(12));
  CHECK(distribution.variance >= kVarianceFloor);
}

TEST_CASE("scale transform round trip") {
  std::mt19937 rng{59};
  std::uniform_real_distribution<double> uniform{-1.0, 1.0};
  for (int trial = 0; trial < 200; ++trial) {
    Vector2d normal{uniform(rng), uniform(rng)};
    while (normal.norm() < 1e-3) normal = {uniform(rng), uniform(rng)};
    normal.normalize();
    const Vector2d center{320.0 + 100.0 * uniform(rng),
                          240.0 + 100.0 * uniform(rng)};
    const int scale = 1 + static_cast<int>(rng() % 5);
    const CorrespondenceLine line = setup_line(center, normal, scale, 9);
    const double r = 10.0 * uniform(rng);
    CHECK(line.from_scaled(line.to_scaled(r)) ==
          doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("line offset puts scaled coordinates on the pixel grid") {
  std::mt19937 rng{61};
  std::uniform_real_distribution<double> uniform{-1.0, 1.0};
  for (int trial = 0; trial < 200; ++trial) {
    Vector2d normal{uniform(rng), uniform(rng)};
    while (normal.norm() < 1e-3) normal = {uniform(rng), uniform(rng)};
    normal.normalize();
    const Vector2d center{320.0 + 100.0 * uniform(rng),
                          240.0 + 100.0 * uniform(rng)};
    const int scale = 1 + static_cast<int>(rng() % 5);
    const CorrespondenceLine line = setup_line(center, normal, scale, 9);
    CHECK(std::abs(line.offset) <= 0.5 / line.major_component + 1e-12);
    // Segment centers land on pixel centers (odd scale) or edges (even).
    const int axis = std::abs(normal.x()) >= std::abs(normal.y()) ? 0 : 1;
    for (int k = -2; k <= 2; ++k) {
      const double r = line.from_scaled(k);
      const double major = center[axis] + r * normal[axis];
      const double target = scale % 2 == 1 ? std::round(major)
                                           : std::round(major - 0.5) + 0.5;
      CHECK(major == doctest::Approx(target).epsilon(1e-9));
    }
  }
}

TEST_CASE("sample_line picks the pixel row for a horizontal line") {
  ImageRGB image{64, 64};
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      image.at(x, y) = {static_cast<std::uint8_t>(x),
                        static_cast<std::uint8_t>(y), 0};
  CorrespondenceLine line = setup_line({30.3, 15.7}, {1.0, 0.0}, 1, 4);
  const auto segments = sample_line(image, line);
  REQUIRE(segments.has_value());
  REQUIRE(segments->size() == 9);
  for (int k = 0; k < 9; ++k) {
    REQUIRE((*segments)[k].size() == 1);
    CHECK((*segments)[k][0].g == 16);        // rounded row
    CHECK((*segments)[k][0].r == 30 + k - 4);  // consecutive columns
  }
}

TEST_CASE("sample_line advances one pixel diagonal per segment at 45 deg") {
  ImageRGB image{128, 128};
  for (int y = 0; y < 128; ++y)
    for (int x = 0; x < 128; ++x)
      image.at(x, y) = {static_cast<std::uint8_t>(x),
                        static_cast<std::uint8_t>(y), 0};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CorrespondenceLine line =
      setup_line({60.0, 70.0}, {inv_sqrt2, inv_sqrt2}, 1, 4);
  const auto segments = sample_line(image, line);
  REQUIRE(segments.has_value());
  for (int k = 1; k < 9; ++k) {
    CHECK((*segments)[k][0].r == (*segments)[k - 1][0].r + 1);
    CHECK((*segments)[k][0].g == (*segments)[k - 1][0].g + 1);
  }
}

TEST_CASE("lines leaving the image are flagged invalid") {
  ImageRGB image{64, 64};
  ColorHistograms histograms = make_histograms({{Color{0, 0, 0}, 1.0}},
                                               {{Color{255, 255, 255}, 1.0}});
  CorrespondenceLine line = setup_line({3.0, 32.0}, {1.0, 0.0}, 1, 9);
  CHECK_FALSE(evaluate_line(image, histograms, line));
  CHECK_FALSE(line.valid);
  CHECK(sample_line(image, line) == std::nullopt);
}

TEST_CASE("closed-form log derivative") {
  CHECK(closed_form_log_derivative(0.0, {0.36, 1.0}) == doctest::Approx(0.0));
  // Limit for large d: -2 atanh(2/3) = -ln 5.
  CHECK(closed_form_log_derivative(100.0, {1.0 / 3.0, 1.0}) ==
        doctest::Approx(-std::log(5.0)).epsilon(1e-9));
  // Amplitude 0.5 collapses to the linear derivative -d / slope.
  for (double d : {-2.0, -0.5, 0.25, 1.5}) {
    CHECK(closed_form_log_derivative(d, {0.5, 1.0}) ==
          doctest::Approx(-d).epsilon(1e-9));
    CHECK(closed_form_log_derivative(d, {0.5, 0.5}) ==
          doctest::Approx(-d / 0.5).epsilon(1e-9));
  }
  CHECK_THROWS_AS(closed_form_log_derivative(1.0, {0.36, 0.0}), Error);
}

TEST_CASE("closed-form Laplace scale") {
  CHECK(closed_form_laplace_scale(0.36) ==
        doctest::Approx(0.550877).epsilon(1e-5));
  CHECK(closed_form_laplace_scale(1.0 / 3.0) ==
        doctest::Approx(1.0 / std::log(5.0)).epsilon(1e-12));
  CHECK(closed_form_laplace_scale(0.499999) < 0.1);
  CHECK_THROWS_AS(closed_form_laplace_scale(0.5), Error);
  CHECK_THROWS_AS(closed_form_laplace_scale(0.0), Error);
}

TEST_CASE("extended model equals the two-model form at amplitude 0.5") {
  std::mt19937 rng{67};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};
  const StepFunctionParams params{0.5, 1.0};
  for (int trial = 0; trial < 100; ++trial) {
    const double p_f = uniform(rng);
    const double d = 6.0 * (uniform(rng) - 0.5);
    const double r = 6.0 * (uniform(rng) - 0.5);
    const double extended =
        extended_model_posterior(p_f, 1.0 - p_f, d, r, params);
    const double direct =
        smoothed_step_foreground(r - d, params) * p_f +
        smoothed_step_background(r - d, params) * (1.0 - p_f);
    CHECK(extended == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("extended model matches the smoothed-step mixture up to a constant") {
  std::mt19937 rng{71};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};
  for (int trial = 0; trial < 100; ++trial) {
    const StepFunctionParams params{0.05 + 0.44 * uniform(rng),
                                    0.2 + 2.0 * uniform(rng)};
    const double p_f = uniform(rng);
    const double r = 3.0 * (uniform(rng) - 0.5);
    double ratio = 0.0;
    for (double d : make_support(12)) {
      const double extended =
          extended_model_posterior(p_f, 1.0 - p_f, d, r, params);
      const double mixture =
          smoothed_step_foreground(r - d, params) * p_f +
          smoothed_step_background(r - d, params) * (1.0 - p_f);
      REQUIRE(mixture > 0.0);
      const double current = extended / mixture;
      if (ratio == 0.0)
        ratio = current;
      else
        CHECK(current == doctest::Approx(ratio).epsilon(1e-9));
    }
  }
}

TEST_CASE("equivocal pixel evidence makes the extended model flat in d") {
  const StepFunctionParams params{0.3, 0.7};
  const double reference =
      extended_model_posterior(0.5, 0.5, 0.0, 0.4, params);
  for (double d : {-3.0, -1.0, 0.5, 2.0})
    CHECK(extended_model_posterior(0.5, 0.5, d, 0.4, params) ==
          doctest::Approx(reference).epsilon(1e-12));
}

TEST_CASE("line CSV dump writes one row per segment") {
  test_utils::TempDir dir;
  const StepFunctionTable table{{0.36, 0.0}};
  const auto line = synthetic_line(perfect_step(9));
  const auto distribution =
      posterior_distribution(line, table, make_support(12));
  const std::string path = dir.file("line.csv");
  dump_line_csv(path, line, distribution);
  std::ifstream file{path};
  std::string content{std::istreambuf_iterator<char>{file}, {}};
  CHECK(std::count(content.begin(), content.end(), '\n') == 19 + 12 + 2);
}
