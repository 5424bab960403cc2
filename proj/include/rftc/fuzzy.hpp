#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rftc {

struct ZeroAreaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Piecewise-linear membership curve over a closed variable domain.
// Evaluation clamps x to [lo, hi] and holds the nearest breakpoint grade
// beyond the breakpoint span.
struct PiecewiseLinearMF {
  std::vector<std::pair<double, double>> breakpoints;  // (x, grade), strictly increasing x
  double lo = 0.0;
  double hi = 1.0;

  void validate() const;
};

double evaluate_mf(const PiecewiseLinearMF& mf, double x);

// Exact centroid over [lo, hi] by segment-wise analytic integration.
// Empty area yields nullopt (possible for optimizer-generated trapezoids
// lying entirely outside the domain).
std::optional<double> centroid(const PiecewiseLinearMF& mf);

// Isosceles trapezoid <U, D, C>: plateau length U, lower side L = U + D,
// centered at C. U = 0 gives a triangle; L = 0 degenerates to a spike with
// zero area.
struct TrapezoidMF {
  double upper = 0.0;   // U
  double spread = 0.0;  // D = L - U
  double center = 0.0;  // C

  double lower() const { return upper + spread; }
  double grade(double x) const;
  PiecewiseLinearMF to_piecewise(double lo, double hi) const;
};

struct FuzzyTerm {
  std::string name;
  PiecewiseLinearMF mf;
  std::optional<TrapezoidMF> trapezoid;  // present when the term came from a <U,D,C> triple

  // Total: falls back to the trapezoid center (clamped) or the domain
  // midpoint when the curve has zero area.
  double centroid_or_fallback() const;
};

struct FuzzyVariable {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<FuzzyTerm> terms;

  const FuzzyTerm& term(const std::string& term_name) const;
  int term_index(const std::string& term_name) const;
  double grade(const std::string& term_name, double x) const;
};

// One rule per antecedent pair; names resolve against the two input
// variables and the output variable.
struct Rule {
  std::string antecedent1;
  std::string antecedent2;
  std::string consequent;
};

struct RuleBase {
  std::vector<Rule> rules;
};

struct InferenceResult {
  std::map<std::string, double> term_grades;  // output term -> o_i
  double crisp = 0.0;
};

// Height defuzzification, O = sum(o_i * c_i) / sum(o_i). When every grade is
// zero the unweighted mean of the centroids is returned.
double defuzzify(const std::vector<double>& grades, const std::vector<double>& centroids);

// Mamdani two-input inference: min for rule matching, max for rule merging,
// height defuzzification over the output terms.
InferenceResult infer(const RuleBase& rb, const FuzzyVariable& in1, double x1,
                      const FuzzyVariable& in2, double x2, const FuzzyVariable& out);

// The four controller variables with their default term shapes:
// QL over [0,20], WT over [0,100], ET over [0,15], UD over [0,1].
struct MembershipSet {
  FuzzyVariable ql;
  FuzzyVariable wt;
  FuzzyVariable et;
  FuzzyVariable ud;
};

MembershipSet default_membership_set();

// Built-in 3x3 rule bases: antecedents are (QL term, WT term).
RuleBase et_rule_base();  // consequents over ET {short, long}
RuleBase ud_rule_base();  // consequents over UD {low, medium, high}

// JSON document {variable: {domain, terms: {name: {breakpoints | U/D/C}}}}.
// Round-trips bit-exactly (decimal text with shortest exact representation).
nlohmann::json mf_set_to_json(const MembershipSet& set);
MembershipSet mf_set_from_json(const nlohmann::json& doc);

}  // namespace rftc
