#pragma once

// Rayleigh-quotient approach to the sharp constants.
//
// A schedule point epsilon selects the trial member with the critical
// exponent and a plateau of length 1/epsilon in the natural log variable
// (log rho, log r or log|log r|). Quotients then decrease toward the sharp
// constant like epsilon^2.

#include <span>
#include <string>
#include <vector>

#include "mhardy/verifiers.hpp"

namespace mhardy {

struct SchedulePoint {
  double epsilon = 0.0;
  double quotient = 0.0;
};

struct SharpnessResult {
  std::string theorem_id;
  std::vector<SchedulePoint> schedule;
  double best_quotient = 0.0;
  double sharp_constant = 0.0;
  /// (best - sharp) / sharp, or best - sharp when the sharp constant is 0.
  double gap = 0.0;
  bool one_sided = true;  // every quotient >= sharp - tol
  bool monotone = true;   // quotients non-increasing along the schedule
  std::string method;
  Json params = Json::object();
};

struct SharpnessSetup {
  std::string theorem_id;
  // Grushin ids: radial_hardy, magnetic_grushin, ab_hardy
  GrushinGeometry geom{2, 1, 1.0};
  WeightExponents exps;
  double beta = 0.0;
  Admissibility adm = Admissibility::Corollary;
  // Landau ids: landau_hardy_sobolev, landau_log, landau_superweight
  // radial ids: radial_p_weighted, radial_p_log, radial_p_superweight
  SuperweightParams sw;
  double Q = 2.0;
  double p = 2.0;
  double theta = 0.0;
};

/// Ids with a trial family and the family each expects.
std::vector<std::string> sharpness_ids();
TrialBase expected_family(const std::string& theorem_id);

std::vector<double> default_schedule();

/// Trial member for one schedule point.
TestFunction sharpness_trial(const SharpnessSetup& setup, double epsilon);

/// Throws DomainError for ids without a trial family or a mismatched base,
/// AdmissibilityError for inadmissible parameters.
SharpnessResult estimate_sharpness(const SharpnessSetup& setup, TrialBase base,
                                   std::span<const double> schedule,
                                   const QuadratureSpec& spec = {});

}  // namespace mhardy
