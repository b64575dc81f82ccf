#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qif::flow {

/// Square evaluation grid for the density bridge. Cells are indexed
/// row-major by (iy, ix): flat index = iy * resolution + ix.
struct GridSpec {
    double xmin = -1.5;
    double xmax = 1.5;
    double ymin = -1.5;
    double ymax = 1.5;
    int resolution = 64;

    void validate() const {
        if (!(xmax > xmin) || !(ymax > ymin)) {
            throw std::invalid_argument("GridSpec: bounds must satisfy xmax > xmin and ymax > ymin");
        }
        if (resolution < 8 || resolution > 256) {
            throw std::invalid_argument("GridSpec: resolution must lie in [8, 256], got " +
                                        std::to_string(resolution));
        }
    }

    std::size_t cells() const noexcept {
        return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
    }
    double pitch_x() const noexcept { return (xmax - xmin) / resolution; }
    double pitch_y() const noexcept { return (ymax - ymin) / resolution; }
    double center_x(int ix) const noexcept { return xmin + (ix + 0.5) * pitch_x(); }
    double center_y(int iy) const noexcept { return ymin + (iy + 0.5) * pitch_y(); }
};

struct KernelConfig {
    double sigma = 0.3;

    void validate() const {
        if (!(sigma > 0.0)) {
            throw std::invalid_argument("KernelConfig: sigma must be positive, got " +
                                        std::to_string(sigma));
        }
    }
};

}  // namespace qif::flow
