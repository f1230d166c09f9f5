#include "adaptnet/records.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace adaptnet {

std::string Transition::label() const {
  return fmt::format("{}->{}", faction_code(from), faction_code(to));
}

double intervention_delta(const ComplexityProfile& baseline, const ComplexityProfile& intervention,
                          std::uint64_t t_star, std::uint64_t gap) {
  if (baseline.window_ends != intervention.window_ends ||
      baseline.nlz_values.size() != intervention.nlz_values.size())
    throw std::invalid_argument("baseline and intervention profiles use different windows");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < baseline.window_ends.size(); ++k) {
    if (baseline.window_ends[k] < t_star + gap) continue;
    sum += intervention.nlz_values[k] - baseline.nlz_values[k];
    ++count;
  }
  if (count == 0)
    throw std::invalid_argument(
        fmt::format("no analysis window ends at or after t* + {} = {}", gap, t_star + gap));
  return sum / static_cast<double>(count);
}

}  // namespace adaptnet
