#pragma once

#include <string>

#include "zetaforge/presentation.hpp"

// Presentations used across the test suites.
namespace presets {

// discrete Heisenberg group: [x_1, x_2] = y_1
inline zetaforge::Presentation heisenberg() {
  return zetaforge::parse_presentation(std::string(R"({
    "d": 2, "dprime": 1,
    "entries": [ { "i": 1, "j": 2, "form": [1] } ]
  })"));
}

// Heisenberg group over the Gaussian integers: d = 4, dprime = 2,
// Pfaffian y_1^2 + y_2^2
inline zetaforge::Presentation gaussian_heisenberg() {
  return zetaforge::parse_presentation(std::string(R"({
    "d": 4, "dprime": 2,
    "entries": [
      { "i": 1, "j": 3, "form": [1, 0] },
      { "i": 1, "j": 4, "form": [0, 1] },
      { "i": 2, "j": 3, "form": [0, 1] },
      { "i": 2, "j": 4, "form": [-1, 0] }
    ]
  })"));
}

// Grenham group G_n: [x_i, x_n] = y_i for i < n
inline zetaforge::Presentation grenham(int n) {
  nlohmann::json doc;
  doc["d"] = n;
  doc["dprime"] = n - 1;
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 1; i <= n - 1; ++i) {
    std::vector<long long> form(static_cast<size_t>(n - 1), 0);
    form[static_cast<size_t>(i - 1)] = 1;
    entries.push_back({{"i", i}, {"j", n}, {"form", form}});
  }
  doc["entries"] = entries;
  return zetaforge::parse_presentation(doc);
}

// free class-2 group on 4 generators: generic antisymmetric matrix, one
// central generator per commutator pair; Pfaffian is the Klein quadric
inline zetaforge::Presentation free_class2_rank4() {
  nlohmann::json doc;
  doc["d"] = 4;
  doc["dprime"] = 6;
  nlohmann::json entries = nlohmann::json::array();
  int k = 0;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      std::vector<long long> form(6, 0);
      form[static_cast<size_t>(k++)] = 1;
      entries.push_back({{"i", i}, {"j", j}, {"form", form}});
    }
  doc["entries"] = entries;
  return zetaforge::parse_presentation(doc);
}

// Heisenberg group over Z[sqrt(-2)]: d = 4, dprime = 2,
// Pfaffian 2 y_1^2 + y_2^2
inline zetaforge::Presentation sqrt2_heisenberg() {
  return zetaforge::parse_presentation(std::string(R"({
    "d": 4, "dprime": 2,
    "entries": [
      { "i": 1, "j": 3, "form": [1, 0] },
      { "i": 1, "j": 4, "form": [0, 1] },
      { "i": 2, "j": 3, "form": [0, 1] },
      { "i": 2, "j": 4, "form": [-2, 0] }
    ]
  })"));
}

// d = 4, dprime = 3 with Pfaffian y_1 y_3 - y_2^2, a smooth conic in P^2:
// the hypersurface has p + 1 rational points at every prime
inline zetaforge::Presentation conic_presentation() {
  return zetaforge::parse_presentation(std::string(R"({
    "d": 4, "dprime": 3,
    "entries": [
      { "i": 1, "j": 2, "form": [1, 0, 0] },
      { "i": 3, "j": 4, "form": [0, 0, 1] },
      { "i": 1, "j": 3, "form": [0, 1, 0] },
      { "i": 2, "j": 4, "form": [0, 1, 0] }
    ]
  })"));
}

inline zetaforge::MPoly klein_quadric() {
  using zetaforge::MPoly;
  return MPoly::parse("y_1*y_6 - y_2*y_5 + y_3*y_4");
}

}  // namespace presets
