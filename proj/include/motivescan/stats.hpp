#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "motivescan/label.hpp"

namespace motivescan {

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n-1 denominator)
  std::size_t n = 0;
};

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
  std::string stars;       // "***" if p<.01, "*" if .01<=p<.05, else ""
  bool degenerate = false; // both samples constant, distinct means
};

// Mean and sample sd; requires n >= 2.
SummaryStats summarize(const std::vector<double>& values);

// 100 * (after - before) / before; before == 0 is an error (callers render
// such rows as undefined).
double pct_delta(double before, double after);

// P(T <= t) for Student's t with df degrees of freedom, computed through the
// regularized incomplete beta function. For df > 3e7 the normal CDF is used
// (the two regimes agree within 1e-8 at the crossover; see the definition
// for the error analysis).
double student_t_cdf(double t, double df);

// Regularized incomplete beta I_x(a, b) by continued fraction, exposed for
// direct testing.
double incomplete_beta(double a, double b, double x);

// Standard normal CDF.
double normal_cdf(double z);

std::string significance_stars(double p);

// Welch's unequal-variance two-sample test on summary statistics; t is signed
// as (b.mean - a.mean). Both sds zero with equal means is a degeneracy error;
// with distinct means the result is flagged degenerate with p = 0.
TTestResult welch_t_test(const SummaryStats& a, const SummaryStats& b);

// Frequency table over predicted labels, grouped by the full 30-class label,
// the motive marginal, or the level marginal. Every key of the group domain
// is present, including zero counts, in a fixed order (flat label order;
// motives 0,A,F,L,M; levels 0..5).
enum class GroupBy { full_label, motive, level };

struct FrequencyTable {
  std::vector<std::string> keys;
  std::vector<std::size_t> counts;
  std::vector<double> percentages;  // 100 * count / total
  std::size_t total = 0;
};

FrequencyTable frequency_table(const std::vector<Label>& labels,
                               GroupBy group_by);

}  // namespace motivescan
