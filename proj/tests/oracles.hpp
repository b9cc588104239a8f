#pragma once

// Test-only oracles, written independently of the library code paths.

#include <cstdint>
#include <tuple>

#include "systolic/matrix.hpp"

namespace oracle {

/// k-outer accumulation order; must agree with the triple loop for integers.
inline systolic::Matrix matmul_kij(const systolic::Matrix& w, const systolic::Matrix& i) {
    systolic::Matrix out(w.rows(), i.cols());
    for (std::size_t k = 0; k < w.cols(); ++k) {
        for (std::size_t r = 0; r < w.rows(); ++r) {
            for (std::size_t c = 0; c < i.cols(); ++c) out(r, c) += w(r, k) * i(k, c);
        }
    }
    return out;
}

/// The dataflow mapping table written out as a lookup on (m, n, p): returns (S_R, S_C, T).
/// flow: 0 = WS, 1 = IS, 2 = OS.
inline std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> table_mapping(int flow, std::uint64_t m,
                                                                              std::uint64_t n, std::uint64_t p) {
    const std::uint64_t dims[3] = {m, n, p};
    static constexpr int rows[3][3] = {{0, 1, 2}, {1, 2, 0}, {0, 2, 1}};
    return {dims[rows[flow][0]], dims[rows[flow][1]], dims[rows[flow][2]]};
}

/// PE-cycles proportional to energy: S_R*S_C*(2*S_R + S_C + T - 2).
inline std::uint64_t work(int flow, std::uint64_t m, std::uint64_t n, std::uint64_t p) {
    auto [r, c, t] = table_mapping(flow, m, n, p);
    return r * c * (r + r + c + t - 2);
}

}  // namespace oracle
