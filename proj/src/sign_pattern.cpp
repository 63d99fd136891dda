#include "poslr/sign_pattern.hpp"

#include <vector>

namespace poslr {

std::vector<Eigen::VectorXi> enumerate_tie_patterns(const SignPattern& base) {
  std::vector<Index> ties;
  for (Index i = 0; i < base.size(); ++i)
    if (base.tie(i)) ties.push_back(i);
  if (ties.size() > 30) throw TieExplosion("too many tie channels to enumerate");
  const std::size_t count = std::size_t{1} << ties.size();
  std::vector<Eigen::VectorXi> patterns;
  patterns.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Eigen::VectorXi sign = base.sign;
    for (std::size_t k = 0; k < ties.size(); ++k)
      sign(ties[k]) = (mask >> k) & 1U ? -1 : 1;
    patterns.push_back(std::move(sign));
  }
  return patterns;
}

}  // namespace poslr
