#include "rftc/fuzzy.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace rftc {

void PiecewiseLinearMF::validate() const {
  if (breakpoints.empty()) throw std::invalid_argument("membership curve has no breakpoints");
  if (!(lo < hi)) throw std::invalid_argument("membership domain is empty");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& [x, g] : breakpoints) {
    if (!(x > prev)) throw std::invalid_argument("breakpoints not strictly increasing");
    if (x < lo || x > hi) throw std::invalid_argument("breakpoint outside domain");
    if (g < 0.0 || g > 1.0) throw std::invalid_argument("grade outside [0,1]");
    prev = x;
  }
}

double evaluate_mf(const PiecewiseLinearMF& mf, double x) {
  x = std::clamp(x, mf.lo, mf.hi);
  const auto& bp = mf.breakpoints;
  if (x <= bp.front().first) return bp.front().second;
  if (x >= bp.back().first) return bp.back().second;
  auto it = std::upper_bound(bp.begin(), bp.end(), x,
                             [](double v, const auto& b) { return v < b.first; });
  const auto& [x2, g2] = *it;
  const auto& [x1, g1] = *std::prev(it);
  return g1 + (g2 - g1) * (x - x1) / (x2 - x1);
}

namespace {
// Integrals of mu and x*mu over one linear segment [x1,x2].
void accumulate_segment(double x1, double g1, double x2, double g2, double& area,
                        double& moment) {
  if (x2 <= x1) return;
  const double a = (g2 - g1) / (x2 - x1);
  const double b = g1 - a * x1;
  area += a / 2.0 * (x2 * x2 - x1 * x1) + b * (x2 - x1);
  moment += a / 3.0 * (x2 * x2 * x2 - x1 * x1 * x1) + b / 2.0 * (x2 * x2 - x1 * x1);
}
}  // namespace

std::optional<double> centroid(const PiecewiseLinearMF& mf) {
  const auto& bp = mf.breakpoints;
  double area = 0.0, moment = 0.0;
  // Constant extensions from the domain edges to the breakpoint span.
  accumulate_segment(mf.lo, bp.front().second, bp.front().first, bp.front().second, area, moment);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    accumulate_segment(bp[i].first, bp[i].second, bp[i + 1].first, bp[i + 1].second, area, moment);
  }
  accumulate_segment(bp.back().first, bp.back().second, mf.hi, bp.back().second, area, moment);
  if (area <= 0.0) return std::nullopt;
  return moment / area;
}

double TrapezoidMF::grade(double x) const {
  const double half_lower = lower() / 2.0;
  const double half_upper = upper / 2.0;
  const double d = std::abs(x - center);
  if (d <= half_upper) return 1.0;
  if (d >= half_lower) return 0.0;
  return (half_lower - d) / (half_lower - half_upper);
}

PiecewiseLinearMF TrapezoidMF::to_piecewise(double lo, double hi) const {
  PiecewiseLinearMF out;
  out.lo = lo;
  out.hi = hi;
  if (lower() <= 0.0) {
    // Zero-width spike: zero almost everywhere; the centroid fallback keeps
    // inference total.
    out.breakpoints = {{lo, 0.0}, {hi, 0.0}};
    return out;
  }
  std::vector<double> xs = {lo, hi};
  for (double c : {center - lower() / 2.0, center - upper / 2.0, center + upper / 2.0,
                   center + lower() / 2.0}) {
    if (c > lo && c < hi) xs.push_back(c);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs) out.breakpoints.emplace_back(x, grade(x));
  return out;
}

double FuzzyTerm::centroid_or_fallback() const {
  if (auto c = centroid(mf)) return *c;
  if (trapezoid) return std::clamp(trapezoid->center, mf.lo, mf.hi);
  return (mf.lo + mf.hi) / 2.0;
}

const FuzzyTerm& FuzzyVariable::term(const std::string& term_name) const {
  return terms[static_cast<std::size_t>(term_index(term_name))];
}

int FuzzyVariable::term_index(const std::string& term_name) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].name == term_name) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown term '" + term_name + "' of variable " + name);
}

double FuzzyVariable::grade(const std::string& term_name, double x) const {
  return evaluate_mf(term(term_name).mf, x);
}

double defuzzify(const std::vector<double>& grades, const std::vector<double>& centroids) {
  if (grades.size() != centroids.size() || grades.empty()) {
    throw RangeError("defuzzify needs one grade per centroid");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grades.size(); ++i) {
    num += grades[i] * centroids[i];
    den += grades[i];
  }
  if (den > 0.0) return num / den;
  double mean = 0.0;
  for (double c : centroids) mean += c;
  return mean / static_cast<double>(centroids.size());
}

InferenceResult infer(const RuleBase& rb, const FuzzyVariable& in1, double x1,
                      const FuzzyVariable& in2, double x2, const FuzzyVariable& out) {
  InferenceResult result;
  std::vector<double> merged(out.terms.size(), 0.0);
  for (const Rule& rule : rb.rules) {
    const double strength = std::min(in1.grade(rule.antecedent1, x1), in2.grade(rule.antecedent2, x2));
    const int idx = out.term_index(rule.consequent);
    merged[static_cast<std::size_t>(idx)] =
        std::max(merged[static_cast<std::size_t>(idx)], strength);
  }
  std::vector<double> centroids(out.terms.size());
  for (std::size_t i = 0; i < out.terms.size(); ++i) {
    centroids[i] = out.terms[i].centroid_or_fallback();
    result.term_grades[out.terms[i].name] = merged[i];
  }
  result.crisp = defuzzify(merged, centroids);
  return result;
}

namespace {
FuzzyTerm make_term(std::string name, double lo, double hi,
                    std::vector<std::pair<double, double>> bps) {
  FuzzyTerm t;
  t.name = std::move(name);
  t.mf.lo = lo;
  t.mf.hi = hi;
  t.mf.breakpoints = std::move(bps);
  t.mf.validate();
  return t;
}
}  // namespace

MembershipSet default_membership_set() {
  MembershipSet s;
  s.ql = {"QL", 0.0, 20.0,
          {make_term("short", 0, 20, {{0, 1}, {8, 0}}),
           make_term("medium", 0, 20, {{4, 0}, {10, 1}, {16, 0}}),
           make_term("long", 0, 20, {{12, 0}, {20, 1}})}};
  s.wt = {"WT", 0.0, 100.0,
          {make_term("short", 0, 100, {{0, 1}, {40, 0}}),
           make_term("medium", 0, 100, {{20, 0}, {50, 1}, {80, 0}}),
           make_term("long", 0, 100, {{60, 0}, {100, 1}})}};
  s.et = {"ET", 0.0, 15.0,
          {make_term("short", 0, 15, {{0, 1}, {7.5, 0}}),
           make_term("long", 0, 15, {{7.5, 0}, {15, 1}})}};
  s.ud = {"UD", 0.0, 1.0,
          {make_term("low", 0, 1, {{0, 1}, {0.4, 0}}),
           make_term("medium", 0, 1, {{0.2, 0}, {0.5, 1}, {0.8, 0}}),
           make_term("high", 0, 1, {{0.6, 0}, {1, 1}})}};
  return s;
}

RuleBase et_rule_base() {
  return RuleBase{{
      {"short", "short", "short"},
      {"short", "medium", "short"},
      {"short", "long", "short"},
      {"medium", "short", "short"},
      {"medium", "medium", "long"},
      {"medium", "long", "long"},
      {"long", "short", "long"},
      {"long", "medium", "long"},
      {"long", "long", "long"},
  }};
}

RuleBase ud_rule_base() {
  return RuleBase{{
      {"short", "short", "low"},
      {"short", "medium", "low"},
      {"short", "long", "medium"},
      {"medium", "short", "low"},
      {"medium", "medium", "medium"},
      {"medium", "long", "high"},
      {"long", "short", "medium"},
      {"long", "medium", "high"},
      {"long", "long", "high"},
  }};
}

namespace {
nlohmann::json variable_to_json(const FuzzyVariable& var) {
  nlohmann::json terms = nlohmann::json::object();
  for (const FuzzyTerm& t : var.terms) {
    nlohmann::json entry;
    if (t.trapezoid) {
      entry["U"] = t.trapezoid->upper;
      entry["D"] = t.trapezoid->spread;
      entry["C"] = t.trapezoid->center;
    } else {
      nlohmann::json bps = nlohmann::json::array();
      for (const auto& [x, g] : t.mf.breakpoints) bps.push_back({x, g});
      entry["breakpoints"] = bps;
    }
    terms[t.name] = entry;
  }
  return nlohmann::json{{"domain", {var.lo, var.hi}}, {"terms", terms}};
}

FuzzyVariable variable_from_json(const std::string& name,
                                 const std::vector<std::string>& term_order,
                                 double lo, double hi, const nlohmann::json& node) {
  FuzzyVariable var{name, lo, hi, {}};
  if (node.contains("domain")) {
    var.lo = node["domain"][0].get<double>();
    var.hi = node["domain"][1].get<double>();
  }
  const auto& terms = node.at("terms");
  for (const std::string& tname : term_order) {
    const auto& entry = terms.at(tname);
    FuzzyTerm t;
    t.name = tname;
    if (entry.contains("breakpoints")) {
      t.mf.lo = var.lo;
      t.mf.hi = var.hi;
      for (const auto& bp : entry["breakpoints"]) {
        t.mf.breakpoints.emplace_back(bp[0].get<double>(), bp[1].get<double>());
      }
      t.mf.validate();
    } else {
      TrapezoidMF tz{entry.at("U").get<double>(), entry.at("D").get<double>(),
                     entry.at("C").get<double>()};
      if (tz.upper < 0.0 || tz.spread < 0.0) throw RangeError("negative trapezoid side");
      t.trapezoid = tz;
      t.mf = tz.to_piecewise(var.lo, var.hi);
    }
    var.terms.push_back(std::move(t));
  }
  return var;
}
}  // namespace

nlohmann::json mf_set_to_json(const MembershipSet& set) {
  return nlohmann::json{{"QL", variable_to_json(set.ql)},
                        {"WT", variable_to_json(set.wt)},
                        {"ET", variable_to_json(set.et)},
                        {"UD", variable_to_json(set.ud)}};
}

MembershipSet mf_set_from_json(const nlohmann::json& doc) {
  MembershipSet s;
  s.ql = variable_from_json("QL", {"short", "medium", "long"}, 0, 20, doc.at("QL"));
  s.wt = variable_from_json("WT", {"short", "medium", "long"}, 0, 100, doc.at("WT"));
  s.et = variable_from_json("ET", {"short", "long"}, 0, 15, doc.at("ET"));
  s.ud = variable_from_json("UD", {"low", "medium", "high"}, 0, 1, doc.at("UD"));
  return s;
}

}  // namespace rftc
