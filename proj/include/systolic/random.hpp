#pragma once

#include <cstdint>
#include <random>

#include "systolic/matrix.hpp"

namespace systolic {

/// Integer-valued test matrices that are reproducible across platforms.
///
/// Algorithm: std::mt19937_64 (bit-exact by the standard) seeded with `seed`.
/// Each element draws 64-bit words until one falls below the largest multiple
/// of the range width (rejection sampling), then maps it to
/// lo + word % (hi - lo + 1). Elements are generated row-major.
/// std::uniform_int_distribution is avoided because its output is
/// implementation-defined.
class IntMatrixGenerator {
public:
    static constexpr int kDefaultLo = -8;
    static constexpr int kDefaultHi = 8;

    explicit IntMatrixGenerator(std::uint64_t seed, int lo = kDefaultLo, int hi = kDefaultHi)
        : engine_(seed), lo_(lo), width_(static_cast<std::uint64_t>(hi - lo) + 1) {}

    int next() {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % width_ + 1) % width_;
        std::uint64_t word = engine_();
        while (word > limit) word = engine_();
        return lo_ + static_cast<int>(word % width_);
    }

    Matrix matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = next();
        }
        return m;
    }

private:
    std::mt19937_64 engine_;
    int lo_;
    std::uint64_t width_;
};

}  // namespace systolic
