#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "rftc/fuzzy.hpp"

using namespace rftc;

namespace {

// Independent numeric centroid: composite midpoint rule over the domain.
double quadrature_centroid(const PiecewiseLinearMF& mf, int steps = 2'000'000) {
  const double h = (mf.hi - mf.lo) / steps;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = mf.lo + (i + 0.5) * h;
    const double mu = evaluate_mf(mf, x);
    num += x * mu;
    den += mu;
  }
  return num / den;
}

// Brute-force Mamdani evaluation, written independently of infer():
// min matching, max merging per output term, height defuzzification.
double brute_force_infer(const RuleBase& rb, const FuzzyVariable& in1, double x1,
                         const FuzzyVariable& in2, double x2, const FuzzyVariable& out) {
  std::vector<double> merged(out.terms.size(), 0.0);
  for (const Rule& r : rb.rules) {
    const double o = std::min(in1.grade(r.antecedent1, x1), in2.grade(r.antecedent2, x2));
    const int idx = out.term_index(r.consequent);
    merged[static_cast<std::size_t>(idx)] =
        std::max(merged[static_cast<std::size_t>(idx)], o);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    num += merged[i] * out.terms[i].centroid_or_fallback();
    den += merged[i];
  }
  if (den == 0.0) {
    for (const FuzzyTerm& t : out.terms) num += t.centroid_or_fallback();
    return num / static_cast<double>(out.terms.size());
  }
  return num / den;
}

}  // namespace

TEST_CASE("default QL membership grades match the piecewise equations") {
  const MembershipSet s = default_membership_set();
  // short: 1 on x=0, linear down to 0 at 8.
  const double xs[] = {0, 4, 6, 8, 10, 12, 16, 20};
  for (double x : xs) {
    const double expect_short = x <= 0 ? 1.0 : (x >= 8 ? 0.0 : (8 - x) / 8.0);
    const double expect_medium =
        x <= 4 || x >= 16 ? 0.0 : (x < 10 ? (x - 4) / 6.0 : (16 - x) / 6.0);
    const double expect_long = x <= 12 ? 0.0 : (x >= 20 ? 1.0 : (x - 12) / 8.0);
    CHECK(s.ql.grade("short", x) == doctest::Approx(expect_short).epsilon(1e-12));
    CHECK(s.ql.grade("medium", x) == doctest::Approx(expect_medium).epsilon(1e-12));
    CHECK(s.ql.grade("long", x) == doctest::Approx(expect_long).epsilon(1e-12));
  }
  CHECK(s.ql.grade("short", 6.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.ql.grade("medium", 10.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.ql.grade("long", 12.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.ql.grade("long", 20.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evaluation clamps to the domain and holds shoulder grades") {
  const MembershipSet s = default_membership_set();
  CHECK(s.ql.grade("short", -3.0) == 1.0);
  CHECK(s.ql.grade("long", 25.0) == 1.0);
  CHECK(s.et.grade("long", 16.0) == 1.0);
  CHECK(s.et.grade("long", -1.0) == 0.0);
}

TEST_CASE("default ET term centroids are exactly 2.5 and 12.5") {
  const MembershipSet s = default_membership_set();
  const auto c_short = centroid(s.et.term("short").mf);
  const auto c_long = centroid(s.et.term("long").mf);
  REQUIRE(c_short.has_value());
  REQUIRE(c_long.has_value());
  CHECK(*c_short == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(*c_long == doctest::Approx(12.5).epsilon(1e-12));
}

TEST_CASE("analytic centroid agrees with numeric quadrature on random trapezoids") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    TrapezoidMF t;
    t.upper = 10.0 * u(rng);
    t.spread = 10.0 * u(rng);
    t.center = 20.0 * u(rng);
    const PiecewiseLinearMF mf = t.to_piecewise(0.0, 20.0);
    const auto exact = centroid(mf);
    if (!exact) continue;  // zero area inside the domain
    CHECK(*exact == doctest::Approx(quadrature_centroid(mf)).epsilon(1e-6));
  }
}

TEST_CASE("height defuzzification reproduces the worked example") {
  CHECK(defuzzify({0.408, 0.083}, {2.5, 12.5}) == doctest::Approx(4.19).epsilon(0.002));
}

TEST_CASE("degenerate defuzzification returns the unweighted centroid mean") {
  CHECK(defuzzify({0.0, 0.0}, {2.5, 12.5}) == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(defuzzify({0.0, 0.0, 0.0}, {0.17, 0.5, 0.83}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("defuzzification rejects mismatched inputs") {
  CHECK_THROWS_AS(defuzzify({0.5}, {2.5, 12.5}), RangeError);
}

TEST_CASE("inference pipeline equals the brute-force oracle on 1000 random pairs") {
  const MembershipSet s = default_membership_set();
  const RuleBase et = et_rule_base();
  const RuleBase ud = ud_rule_base();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uql(0.0, 20.0), uwt(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double ql = uql(rng), wt = uwt(rng);
    const double via_et = infer(et, s.ql, ql, s.wt, wt, s.et).crisp;
    const double via_ud = infer(ud, s.ql, ql, s.wt, wt, s.ud).crisp;
    CHECK(std::abs(via_et - brute_force_infer(et, s.ql, ql, s.wt, wt, s.et)) < 1e-9);
    CHECK(std::abs(via_ud - brute_force_infer(ud, s.ql, ql, s.wt, wt, s.ud)) < 1e-9);
  }
}

TEST_CASE("saturated corner fires only the long ET rules") {
  const MembershipSet s = default_membership_set();
  const InferenceResult r = infer(et_rule_base(), s.ql, 20.0, s.wt, 100.0, s.et);
  CHECK(r.term_grades.at("long") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.term_grades.at("short") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.crisp == doctest::Approx(12.5).epsilon(1e-12));
}

TEST_CASE("empty corner fires only low urgency") {
  const MembershipSet s = default_membership_set();
  const InferenceResult r = infer(ud_rule_base(), s.ql, 0.0, s.wt, 0.0, s.ud);
  const auto lo = centroid(s.ud.term("low").mf);
  REQUIRE(lo.has_value());
  CHECK(r.crisp == doctest::Approx(*lo).epsilon(1e-12));
}

TEST_CASE("trapezoid triples convert to the expected breakpoints") {
  // <U=4, D=4, C=10> on [0,20]: plateau [8,12], feet at 6 and 14.
  const TrapezoidMF t{4.0, 4.0, 10.0};
  CHECK(t.lower() == 8.0);
  CHECK(t.grade(10.0) == 1.0);
  CHECK(t.grade(8.0) == 1.0);
  CHECK(t.grade(7.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.grade(6.0) == 0.0);
  const PiecewiseLinearMF mf = t.to_piecewise(0.0, 20.0);
  for (double x = 0.0; x <= 20.0; x += 0.25) {
    CHECK(evaluate_mf(mf, x) == doctest::Approx(t.grade(x)).epsilon(1e-12));
  }
}

TEST_CASE("zero-area terms fall back to the clamped center") {
  const TrapezoidMF spike{0.0, 0.0, 30.0};  // outside [0,20]
  FuzzyTerm term;
  term.name = "spike";
  term.trapezoid = spike;
  term.mf = spike.to_piecewise(0.0, 20.0);
  CHECK(term.centroid_or_fallback() == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("membership JSON document round-trips bit-exactly") {
  const MembershipSet s = default_membership_set();
  const nlohmann::json doc = mf_set_to_json(s);
  const MembershipSet back = mf_set_from_json(doc);
  const nlohmann::json doc2 = mf_set_to_json(back);
  CHECK(doc == doc2);
  // Grades must match exactly after the round trip.
  for (double x = 0.0; x <= 20.0; x += 0.5) {
    CHECK(s.ql.grade("medium", x) == back.ql.grade("medium", x));
  }
}

TEST_CASE("rule bases cover all nine antecedent pairs") {
  CHECK(et_rule_base().rules.size() == 9);
  CHECK(ud_rule_base().rules.size() == 9);
}
