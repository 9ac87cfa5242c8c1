#pragma once

#include <string>
#include <vector>

#include "ipspace/spaces.hpp"

namespace ipspace {

/// A labeled finite list of points in a normed space.
struct PointConfig {
  NormedSpace space;
  std::vector<Vector> points;
  std::vector<std::string> labels;

  PointConfig(NormedSpace s, std::vector<Vector> pts, std::vector<std::string> lbl = {})
      : space(std::move(s)), points(std::move(pts)), labels(std::move(lbl)) {
    if (points.empty()) throw InvalidArgument("point configuration is empty");
    for (const auto& p : points) space.check(p);
    if (!labels.empty() && labels.size() != points.size()) {
      throw InvalidArgument("label count does not match point count");
    }
  }

  std::size_t size() const noexcept { return points.size(); }
  const Vector& operator[](std::size_t i) const { return points[i]; }
};

}  // namespace ipspace
