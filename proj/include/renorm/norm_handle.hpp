#pragma once

#include <functional>
#include <string>

#include "renorm/types.hpp"

namespace renorm {

// A norm on system coordinates with an optional analytic gradient.
struct NormHandle {
    std::string name;
    std::function<double(const Point&)> eval;
    std::function<Functional(const Point&)> grad;
};

}  // namespace renorm
