#pragma once

// Design-space sweep over GEMM sizes. The default grid is every corner of
// {5, 500}^3 (8 configurations). Small configurations are also run through the
// functional simulator and must agree with the analytical model.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/matrix.hpp"
#include "systolic/model.hpp"
#include "systolic/random.hpp"
#include "systolic/simulator.hpp"

namespace systolic {

struct SweepSpec {
    static constexpr std::uint64_t kDefaultSeed = 0x5157'01C0'FFEEull;

    std::vector<Count> m_values{5, 500};
    std::vector<Count> n_values{5, 500};
    std::vector<Count> p_values{5, 500};
    PEConfig cfg{};
    Count cross_validate_limit = 16;
    std::uint64_t seed = kDefaultSeed;

    void validate() const {
        auto check = [](const std::vector<Count>& values, const char* field) {
            if (values.empty()) throw std::invalid_argument(std::string(field) + ": must be nonempty");
            for (auto v : values) {
                if (v == 0) throw std::invalid_argument(std::string(field) + ": values must be >= 1");
            }
        };
        check(m_values, "m_values");
        check(n_values, "n_values");
        check(p_values, "p_values");
    }
};

struct SweepRow {
    Count m, n, p;
    Dataflow flow;
    Count s_r, s_c, t;
    Count n_pe;
    Count n_c;
    double energy_j;
    bool is_optimal;

    MatrixDims dims() const { return {m, n, p}; }

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

class CrossValidationError : public std::runtime_error {
public:
    CrossValidationError(const MatrixDims& dims, Dataflow flow, const std::string& what)
        : std::runtime_error("cross-validation failed for config " + std::to_string(dims.m()) + "x" +
                             std::to_string(dims.n()) + "x" + std::to_string(dims.p()) + " flow " +
                             std::string(short_name(flow)) + ": " + what),
          dims_(dims),
          flow_(flow) {}

    const MatrixDims& dims() const noexcept { return dims_; }
    Dataflow flow() const noexcept { return flow_; }

private:
    MatrixDims dims_;
    Dataflow flow_;
};

/// Cartesian product of the axis lists, deduplicated, lexicographic in (m, n, p).
inline std::vector<MatrixDims> generate_configs(const SweepSpec& spec) {
    spec.validate();
    std::vector<MatrixDims> configs;
    configs.reserve(spec.m_values.size() * spec.n_values.size() * spec.p_values.size());
    for (auto m : spec.m_values) {
        for (auto n : spec.n_values) {
            for (auto p : spec.p_values) configs.emplace_back(m, n, p);
        }
    }
    std::sort(configs.begin(), configs.end());
    configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
    return configs;
}

inline std::uint64_t cross_validation_seed(std::uint64_t base, const MatrixDims& dims, Dataflow flow) {
    // splitmix64 finalizer over the config coordinates
    std::uint64_t x = base ^ (dims.m() * 0x9E3779B97F4A7C15ull) ^ (dims.n() * 0xC2B2AE3D27D4EB4Full) ^
                      (dims.p() * 0x165667B19E3779F9ull) ^ static_cast<std::uint64_t>(flow);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::vector<SweepRow> rows_for(const CostReport& report) {
    std::vector<SweepRow> rows;
    for (const auto& c : report.per_dataflow) {
        rows.push_back(SweepRow{report.dims.m(), report.dims.n(), report.dims.p(), c.flow, c.shape.rows(),
                                c.shape.cols(), c.shape.temporal(), c.n_pe, c.n_c, c.energy_j,
                                report.is_optimal(c.flow)});
    }
    return rows;
}

/// `sim` has the signature of `simulate`; tests substitute a faulty one to
/// exercise the mismatch path.
template <class Simulate>
std::vector<SweepRow> run_sweep(const SweepSpec& spec, Simulate&& sim) {
    std::vector<SweepRow> rows;
    for (const auto& dims : generate_configs(spec)) {
        const CostReport report = cost_report(dims, spec.cfg);
        const Count limit = spec.cross_validate_limit;
        if (dims.m() <= limit && dims.n() <= limit && dims.p() <= limit) {
            for (const auto& c : report.per_dataflow) {
                IntMatrixGenerator gen(cross_validation_seed(spec.seed, dims, c.flow));
                const Matrix w = gen.matrix(dims.m(), dims.n());
                const Matrix i = gen.matrix(dims.n(), dims.p());
                const SimResult result = sim(c.flow, w, i);
                if (result.cycles != c.n_c) {
                    throw CrossValidationError(dims, c.flow,
                                               "simulated " + std::to_string(result.cycles) +
                                                   " cycles, model predicts " + std::to_string(c.n_c));
                }
                if (!(result.output == reference_matmul(w, i))) {
                    throw CrossValidationError(dims, c.flow, "output differs from reference matmul");
                }
                if (result.mac_count != dims.m() * dims.n() * dims.p()) {
                    throw CrossValidationError(dims, c.flow, "MAC count mismatch");
                }
            }
        }
        auto group = rows_for(report);
        rows.insert(rows.end(), group.begin(), group.end());
    }
    return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    return run_sweep(spec, [](Dataflow f, const Matrix& w, const Matrix& i) { return simulate(f, w, i); });
}

}  // namespace systolic
