#pragma once

#include <cstddef>

namespace quickim {

inline constexpr std::size_t kDefaultSeedCount = 50;
inline constexpr std::size_t kDefaultWalkLength = 3;
inline constexpr std::size_t kDefaultSimulations = 10000;
inline constexpr double kDefaultTrivalencyBase = 0.1;
inline constexpr double kDefaultUniformProbability = 0.1;

}  // namespace quickim
