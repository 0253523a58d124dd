#pragma once

#include <stdexcept>

#include "crc/curves.hpp"

namespace crc {

// Time-dependent drift level theta(tau_n) of a Hull-White extension, sampled
// on a uniform grid. CIR admissibility (values >= 0) is checked by consumers.
struct HullWhiteExtension {
    TimeGrid grid;
    std::vector<double> values;

    void validate() const {
        if (values.size() != grid.count) {
            throw std::invalid_argument("HullWhiteExtension: values must match grid.count");
        }
    }
};

}  // namespace crc
