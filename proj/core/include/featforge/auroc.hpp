#pragma once

#include <span>

namespace featforge {

// Probability that a random positive outscores a random negative, ties
// counted as one half. `labels` are 0/1. Throws DegenerateLabels unless both
// classes are present.
double auroc(std::span<const double> scores, std::span<const int> labels);

}  // namespace featforge
