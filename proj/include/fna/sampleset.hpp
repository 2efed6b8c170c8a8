#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fna {

// Point samples realizing the functionals f -> sqrt(w(x_j)/m) f(x_j).
// Weights are stored before the division by m = points.size().
struct SampleSet {
    std::vector<double> points;
    std::vector<double> weights;
    std::string provenance;

    std::size_t size() const { return points.size(); }
};

} // namespace fna
