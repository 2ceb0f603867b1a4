#include "motivescan/stats.hpp"

#include <cmath>

#include "motivescan/error.hpp"

namespace motivescan {

SummaryStats summarize(const std::vector<double>& values) {
  if (values.size() < 2)
    throw MotiveError("summarize needs at least 2 values, got " +
                      std::to_string(values.size()));
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw MotiveError("summarize: non-finite value");
    sum += v;
  }
  SummaryStats s;
  s.n = values.size();
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(sq / static_cast<double>(s.n - 1));
  return s;
}

double pct_delta(double before, double after) {
  if (before == 0.0)
    throw MotiveError("pct_delta undefined for a zero baseline");
  return 100.0 * (after - before) / before;
}

namespace {

// Continued-fraction kernel for the incomplete beta function (modified Lentz
// algorithm). Converges for x < (a+1)/(a+b+2); the caller picks the branch.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 2000;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw MotiveError("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw MotiveError("incomplete_beta requires positive shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                     a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw MotiveError("student_t_cdf requires df > 0");
  if (std::isnan(t)) throw MotiveError("student_t_cdf: t is NaN");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  // Two regimes, split where their error curves cross. The normal
  // approximation deviates from the t CDF by at most ~0.16/df (max over t of
  // phi(t)(t^3+t)/(4 df)), i.e. below 6e-9 for df > 3e7. The continued
  // fraction in turn loses precision as df grows (~2e-9 at df = 3e7, worse
  // beyond), so past the crossover the normal CDF is the more accurate
  // route; combined error stays under 1e-8 everywhere.
  if (df > 3e7) return normal_cdf(t);
  double x = df / (df + t * t);
  double tail_two_sided = incomplete_beta(df / 2.0, 0.5, x);
  return t > 0.0 ? 1.0 - 0.5 * tail_two_sided : 0.5 * tail_two_sided;
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "*";
  return "";
}

TTestResult welch_t_test(const SummaryStats& a, const SummaryStats& b) {
  if (a.n < 2 || b.n < 2)
    throw MotiveError("welch_t_test requires n >= 2 in both samples");
  if (a.sd < 0.0 || b.sd < 0.0 || !std::isfinite(a.sd) || !std::isfinite(b.sd) ||
      !std::isfinite(a.mean) || !std::isfinite(b.mean))
    throw MotiveError("welch_t_test: invalid summary statistics");

  TTestResult r;
  if (a.sd == 0.0 && b.sd == 0.0) {
    if (a.mean == b.mean)
      throw MotiveError(
          "welch_t_test degenerate: both samples constant and equal");
    // Constant samples with different means: the statistic diverges.
    r.t = b.mean > a.mean ? INFINITY : -INFINITY;
    r.df = static_cast<double>(a.n + b.n - 2);
    r.p_two_sided = 0.0;
    r.stars = significance_stars(r.p_two_sided);
    r.degenerate = true;
    return r;
  }

  double va = a.sd * a.sd / static_cast<double>(a.n);
  double vb = b.sd * b.sd / static_cast<double>(b.n);
  r.t = (b.mean - a.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.n - 1) +
          vb * vb / static_cast<double>(b.n - 1));
  r.p_two_sided = 2.0 * (1.0 - student_t_cdf(std::fabs(r.t), r.df));
  if (r.p_two_sided > 1.0) r.p_two_sided = 1.0;
  if (r.p_two_sided < 0.0) r.p_two_sided = 0.0;
  r.stars = significance_stars(r.p_two_sided);
  return r;
}

FrequencyTable frequency_table(const std::vector<Label>& labels,
                               GroupBy group_by) {
  FrequencyTable table;
  switch (group_by) {
    case GroupBy::full_label:
      for (int i = 0; i < kNumClasses; ++i)
        table.keys.push_back(label_to_string(index_to_label(i)));
      break;
    case GroupBy::motive:
      for (char code : kMotiveCodes) table.keys.push_back(std::string(1, code));
      break;
    case GroupBy::level:
      for (int l = 0; l < kNumLevels; ++l)
        table.keys.push_back(std::to_string(l));
      break;
  }
  table.counts.assign(table.keys.size(), 0);
  for (const Label& label : labels) {
    std::size_t key_index = 0;
    switch (group_by) {
      case GroupBy::full_label:
        key_index = static_cast<std::size_t>(label_to_index(label));
        break;
      case GroupBy::motive:
        key_index = static_cast<std::size_t>(label.motive);
        break;
      case GroupBy::level:
        key_index = static_cast<std::size_t>(label.level);
        break;
    }
    ++table.counts[key_index];
  }
  table.total = labels.size();
  table.percentages.assign(table.keys.size(), 0.0);
  if (table.total > 0)
    for (std::size_t i = 0; i < table.counts.size(); ++i)
      table.percentages[i] = 100.0 * static_cast<double>(table.counts[i]) /
                             static_cast<double>(table.total);
  return table;
}

}  // namespace motivescan
