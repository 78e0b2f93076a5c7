#include "varlex/cube_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "varlex/exact_sum.hpp"

namespace varlex {

CubeIndex::CubeIndex(DomainPtr domain) : domain_(std::move(domain)) {
  if (!domain_) {
    throw std::invalid_argument("cube index needs a domain");
  }
  n_ = domain_->size();
  if (n_ > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("too many atoms for a cube index");
  }
  order_.resize(n_ * n_);
  std::vector<std::vector<Shell>> per_center(n_);
  const auto n = static_cast<std::ptrdiff_t>(n_);

#pragma omp parallel
  {
    std::vector<double> dist(n_);
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t ci = 0; ci < n; ++ci) {
      const auto c = static_cast<std::size_t>(ci);
      const auto x = domain_->coords(c);
      for (std::size_t j = 0; j < n_; ++j) {
        dist[j] = linf_distance(x, domain_->coords(j));
      }
      std::uint32_t* ord = order_.data() + c * n_;
      std::iota(ord, ord + n_, 0U);
      std::sort(ord, ord + n_, [&](std::uint32_t a, std::uint32_t b) {
        return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
      });
      auto& shells = per_center[c];
      ExactSum mass;
      for (std::size_t k = 0; k < n_; ++k) {
        mass.add(domain_->mass(ord[k]));
        if (k + 1 == n_ || dist[ord[k + 1]] != dist[ord[k]]) {
          shells.push_back({static_cast<std::uint32_t>(k + 1), dist[ord[k]], mass.value()});
        }
      }
    }
  }

  shell_begin_.resize(n_ + 1, 0);
  for (std::size_t c = 0; c < n_; ++c) {
    shell_begin_[c + 1] = shell_begin_[c] + per_center[c].size();
  }
  shells_.reserve(shell_begin_[n_]);
  for (auto& s : per_center) {
    shells_.insert(shells_.end(), s.begin(), s.end());
    std::vector<Shell>().swap(s);
  }
}

std::size_t CubeIndex::shell_at(std::size_t center, double h) const {
  const auto sh = shells(center);
  const auto it = std::upper_bound(sh.begin(), sh.end(), h,
                                   [](double v, const Shell& s) { return v < s.half_side; });
  if (it == sh.begin()) {
    throw std::invalid_argument("shell_at: negative half side");
  }
  return static_cast<std::size_t>(it - sh.begin()) - 1;
}

}  // namespace varlex
