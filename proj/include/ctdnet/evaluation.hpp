#pragma once

#include <span>
#include <vector>

#include "ctdnet/question_net.hpp"

namespace ctdnet {

/// Predicted next value of every observation feature, read off the depth-1
/// children of each feature.
///
/// Uncontrolled networks have one child per feature and its prediction is
/// returned as-is. For controlled networks each child's prediction is weighted
/// by the activation of its action condition at `psi_values`; with
/// `normalize` the weighted sum is divided by the total activation (a weighted
/// mean). Throws std::invalid_argument if `psi_values` is present for an
/// uncontrolled network or missing for a controlled one, and std::domain_error
/// if a normalized weighting has zero total activation.
void one_step_feature_prediction(std::span<const double> y, const QuestionNetwork& net,
                                 std::span<const double> psi_values, bool normalize,
                                 std::span<double> out);
std::vector<double> one_step_feature_prediction(std::span<const double> y,
                                                const QuestionNetwork& net,
                                                std::span<const double> psi_values,
                                                bool normalize = true);

/// sqrt(mean_f (predicted_f - actual_f)^2).
double rmse_step(std::span<const double> predicted, std::span<const double> actual);

}  // namespace ctdnet
