#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "varlex/fields.hpp"

namespace varlex {

// For every atom x, the atoms sorted by (linf distance to x, index) and grouped
// into shells of equal distance. Shell k of x is the content of the closed cube
// centered at x with side 2 * half_side(k): the atoms order(x)[0, end(k)).
// Masses are exact prefix sums. Build cost O(N^2 log N), memory O(N^2).
class CubeIndex {
 public:
  struct Shell {
    std::uint32_t end;
    double half_side;
    double mass;
  };

  explicit CubeIndex(DomainPtr domain);

  [[nodiscard]] const DiscreteDomain& domain() const { return *domain_; }
  [[nodiscard]] const DomainPtr& domain_ptr() const { return domain_; }
  [[nodiscard]] std::size_t size() const { return n_; }

  [[nodiscard]] std::span<const std::uint32_t> order(std::size_t center) const {
    return {order_.data() + center * n_, n_};
  }
  [[nodiscard]] std::span<const Shell> shells(std::size_t center) const {
    return {shells_.data() + shell_begin_[center], shell_begin_[center + 1] - shell_begin_[center]};
  }

  // Index of the last shell of `center` with half_side <= h (shell 0 always
  // qualifies for h >= 0).
  [[nodiscard]] std::size_t shell_at(std::size_t center, double h) const;

  [[nodiscard]] std::size_t shell_count() const { return shells_.size(); }

 private:
  DomainPtr domain_;
  std::size_t n_;
  std::vector<std::uint32_t> order_;
  std::vector<std::size_t> shell_begin_;
  std::vector<Shell> shells_;
};

}  // namespace varlex
