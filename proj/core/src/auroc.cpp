#include "featforge/auroc.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "featforge/error.hpp"

namespace featforge {

double auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(Errc::row_count_mismatch, std::to_string(scores.size()) + " scores vs " +
                                              std::to_string(labels.size()) + " labels");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the concordant-pair count keeps tie halves integral.
  std::uint64_t twice_concordant = 0;
  std::uint64_t negatives_below = 0;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t pos = 0, neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] != 0 ? pos : neg) += 1;
      ++j;
    }
    twice_concordant += 2 * pos * negatives_below + pos * neg;
    negatives_below += neg;
    positives += pos;
    negatives += neg;
    i = j;
  }
  if (positives == 0 || negatives == 0) {
    throw Error(Errc::degenerate_labels, "AUROC needs both classes; got " +
                                             std::to_string(positives) + " positives, " +
                                             std::to_string(negatives) + " negatives");
  }
  return static_cast<double>(twice_concordant) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

}  // namespace featforge
