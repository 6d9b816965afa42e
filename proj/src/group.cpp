#include "mvframe/group.hpp"

#include <cmath>
#include <numbers>

#include "mvframe/errors.hpp"

namespace mvframe {

GroupSpec::GroupSpec(std::vector<int> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw ShapeError("group must have at least one cyclic factor");
  for (int n : orders_) {
    if (n < 1) throw ShapeError("cyclic factor orders must be positive");
    if (size_ > 4096 / n) throw ShapeError("group size exceeds the 4096 cap");
    size_ *= n;
  }
}

int GroupSpec::rank(const GroupElement& x) const {
  if (x.coords.size() != orders_.size())
    throw DimensionError("group element has wrong coordinate count");
  int idx = 0;
  for (size_t j = 0; j < orders_.size(); ++j) {
    const int c = x.coords[j];
    if (c < 0 || c >= orders_[j]) throw DimensionError("group coordinate out of range");
    idx = idx * orders_[j] + c;
  }
  return idx;
}

GroupElement GroupSpec::element(int index) const {
  if (index < 0 || index >= size_) throw DimensionError("group index out of range");
  GroupElement x;
  x.coords.resize(orders_.size());
  for (size_t j = orders_.size(); j-- > 0;) {
    x.coords[j] = index % orders_[j];
    index /= orders_[j];
  }
  return x;
}

std::vector<GroupElement> GroupSpec::elements() const {
  std::vector<GroupElement> out;
  out.reserve(size_);
  for (int i = 0; i < size_; ++i) out.push_back(element(i));
  return out;
}

GroupElement GroupSpec::add(const GroupElement& a, const GroupElement& b) const {
  GroupElement c;
  c.coords.resize(orders_.size());
  for (size_t j = 0; j < orders_.size(); ++j)
    c.coords[j] = (a.coords[j] + b.coords[j]) % orders_[j];
  return c;
}

cplx character(const GroupSpec& spec, const GroupElement& dual_index,
               const GroupElement& x) {
  const auto& orders = spec.orders();
  if (dual_index.coords.size() != orders.size() || x.coords.size() != orders.size())
    throw DimensionError("character arguments do not match the group");
  double frac = 0.0;
  for (size_t j = 0; j < orders.size(); ++j) {
    const long long prod =
        (static_cast<long long>(dual_index.coords[j]) * x.coords[j]) % orders[j];
    frac += static_cast<double>(prod) / orders[j];
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

Eigen::MatrixXcd scalar_onb(const GroupSpec& spec) {
  const int n = spec.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd onb(n, n);
  for (int k = 0; k < n; ++k) {
    const GroupElement kk = spec.element(k);
    for (int x = 0; x < n; ++x)
      onb(x, k) = scale * character(spec, kk, spec.element(x));
  }
  return onb;
}

}  // namespace mvframe
