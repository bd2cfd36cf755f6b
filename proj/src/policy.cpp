#include "kinkcheck/policy.hpp"

#include "kinkcheck/parse.hpp"

namespace kinkcheck {

std::string TolerancePolicy::describe() const {
  return "active=" + format_double(active) + " rank=" + format_double(rank_eps) +
         " strict=" + format_double(strict) + " psd=" + format_double(psd);
}

}  // namespace kinkcheck
