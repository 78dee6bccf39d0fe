#include "hjsd/controls.hpp"

#include <cmath>

namespace hjsd {

ControlSet discretize_controls(int dimension, int n) {
  ControlSet set;
  set.dimension = dimension;
  switch (dimension) {
    case 1: {
      if (n < 2) throw ConfigError("A^1 needs at least 2 samples");
      for (int m = 0; m < n; ++m) {
        double a = -1.0 + 2.0 * m / (n - 1);
        set.vectors.emplace_back(a, 0.0, 0.0);
      }
      break;
    }
    case 2: {
      if (n < 3) throw ConfigError("A^2 needs at least 3 samples");
      for (int m = 0; m < n; ++m) {
        double phi = 2.0 * M_PI * m / n;
        set.vectors.emplace_back(std::cos(phi), std::sin(phi), 0.0);
      }
      break;
    }
    case 3: {
      if (n < 2) throw ConfigError("A^3 needs at least 2 samples");
      for (int m = 0; m < n; ++m) {
        double phi = 2.0 * M_PI * m / n;
        for (int p = 0; p < n; ++p) {
          double theta = M_PI * (p + 0.5) / n;
          set.vectors.emplace_back(std::sin(theta) * std::cos(phi),
                                   std::sin(theta) * std::sin(phi),
                                   std::cos(theta));
        }
      }
      set.vectors.emplace_back(0.0, 0.0, 1.0);
      set.vectors.emplace_back(0.0, 0.0, -1.0);
      break;
    }
    default:
      throw ConfigError("control set dimension must be 1, 2 or 3");
  }
  return set;
}

}  // namespace hjsd
