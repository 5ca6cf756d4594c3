#pragma once

#include <span>
#include <vector>

namespace ltt {

using Vector = std::vector<double>;
using ConstSpan = std::span<const double>;

}  // namespace ltt
