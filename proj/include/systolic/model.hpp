#pragma once

// Analytical cost model for GEMM (O = W * I) on a systolic array sized to
// the stationary operand.
//
//   W : M x N   (weights)
//   I : N x P   (inputs)
//   O : M x P   (outputs)
//
// Each dataflow pins one matrix into the PE grid. The grid shape gives the
// spatial extents (S_R rows, S_C columns); the remaining dimension is
// streamed over time (T):
//
//   flow   S_R  S_C  T
//   WS     M    N    P
//   IS     N    P    M
//   OS     M    P    N
//
//   N_PE = S_R * S_C
//   N_C  = 2 * S_R + S_C + T - 2
//   E    = N_PE * P_PE * N_C * T_clk

#include <algorithm>
#include <array>
#include <cstdio>
#include <iterator>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace systolic {

using Count = std::uint64_t;

namespace detail {

inline Count checked_add(Count a, Count b, const char* what) {
    Count r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error(std::string(what) + ": integer overflow");
    }
    return r;
}

inline Count checked_mul(Count a, Count b, const char* what) {
    Count r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error(std::string(what) + ": integer overflow");
    }
    return r;
}

inline Count require_positive(Count v, const char* field) {
    if (v == 0) {
        throw std::invalid_argument(std::string(field) + " must be >= 1");
    }
    return v;
}

}  // namespace detail

enum class Dataflow : std::uint8_t {
    WeightStationary = 0,
    InputStationary = 1,
    OutputStationary = 2,
};

/// Canonical iteration order; ties are always reported in this order.
inline constexpr std::array<Dataflow, 3> kAllDataflows = {
    Dataflow::WeightStationary,
    Dataflow::InputStationary,
    Dataflow::OutputStationary,
};

constexpr std::string_view short_name(Dataflow flow) {
    switch (flow) {
        case Dataflow::WeightStationary: return "WS";
        case Dataflow::InputStationary: return "IS";
        case Dataflow::OutputStationary: return "OS";
    }
    return "??";
}

constexpr std::string_view long_name(Dataflow flow) {
    switch (flow) {
        case Dataflow::WeightStationary: return "weight stationary";
        case Dataflow::InputStationary: return "input stationary";
        case Dataflow::OutputStationary: return "output stationary";
    }
    return "unknown";
}

/// Accepts "ws"/"is"/"os" in any case, plus the hyphenated long names.
inline std::optional<Dataflow> parse_dataflow(std::string_view text) {
    std::string lower(text);
    for (auto& ch : lower) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    if (lower == "ws" || lower == "weight-stationary") return Dataflow::WeightStationary;
    if (lower == "is" || lower == "input-stationary") return Dataflow::InputStationary;
    if (lower == "os" || lower == "output-stationary") return Dataflow::OutputStationary;
    return std::nullopt;
}

/// GEMM problem size for O = W * I with W: m x n, I: n x p.
class MatrixDims {
public:
    MatrixDims(Count m, Count n, Count p)
        : m_(detail::require_positive(m, "m")),
          n_(detail::require_positive(n, "n")),
          p_(detail::require_positive(p, "p")) {}

    Count m() const noexcept { return m_; }
    Count n() const noexcept { return n_; }
    Count p() const noexcept { return p_; }

    friend bool operator==(const MatrixDims&, const MatrixDims&) = default;
    friend auto operator<=>(const MatrixDims&, const MatrixDims&) = default;

private:
    Count m_;
    Count n_;
    Count p_;
};

/// Physical PE grid (rows x cols) plus the streamed temporal extent.
class ArrayShape {
public:
    ArrayShape(Count rows, Count cols, Count temporal)
        : rows_(detail::require_positive(rows, "s_r")),
          cols_(detail::require_positive(cols, "s_c")),
          temporal_(detail::require_positive(temporal, "t")) {}

    Count rows() const noexcept { return rows_; }
    Count cols() const noexcept { return cols_; }
    Count temporal() const noexcept { return temporal_; }

    friend bool operator==(const ArrayShape&, const ArrayShape&) = default;

private:
    Count rows_;
    Count cols_;
    Count temporal_;
};

/// Energy-model constants. Defaults describe a 32-bit floating-point MAC PE
/// in 28nm: 2.17 mW at 700 MHz.
class PEConfig {
public:
    static constexpr double kDefaultPowerPerPeW = 2.17e-3;
    static constexpr double kDefaultClockHz = 700e6;

    PEConfig() = default;
    PEConfig(double power_per_pe_w, double clock_hz)
        : power_per_pe_w_(validate(power_per_pe_w, "power_per_pe_w")),
          clock_hz_(validate(clock_hz, "clock_hz")) {}

    double power_per_pe_w() const noexcept { return power_per_pe_w_; }
    double clock_hz() const noexcept { return clock_hz_; }
    double clock_period_s() const noexcept { return 1.0 / clock_hz_; }

    friend bool operator==(const PEConfig&, const PEConfig&) = default;

private:
    static double validate(double v, const char* field) {
        // also rejects NaN
        if (!(v > 0.0) || v == std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument(std::string(field) + " must be a finite value > 0");
        }
        return v;
    }

    double power_per_pe_w_ = kDefaultPowerPerPeW;
    double clock_hz_ = kDefaultClockHz;
};

inline ArrayShape map_dims(const MatrixDims& dims, Dataflow flow) {
    switch (flow) {
        case Dataflow::WeightStationary: return {dims.m(), dims.n(), dims.p()};
        case Dataflow::InputStationary: return {dims.n(), dims.p(), dims.m()};
        case Dataflow::OutputStationary: return {dims.m(), dims.p(), dims.n()};
    }
    throw std::invalid_argument("map_dims: unknown dataflow");
}

inline Count num_pes(const ArrayShape& shape) {
    return detail::checked_mul(shape.rows(), shape.cols(), "num_pes");
}

inline Count cycle_count(const ArrayShape& shape) {
    // 2*S_R + S_C + T - 2; every term is >= 1 so the subtraction cannot wrap.
    Count twice_rows = detail::checked_mul(2, shape.rows(), "cycle_count");
    Count sum = detail::checked_add(twice_rows, shape.cols(), "cycle_count");
    sum = detail::checked_add(sum, shape.temporal(), "cycle_count");
    return sum - 2;
}

/// PE-cycles billed by the energy model: every PE for every cycle.
inline Count pe_cycles(const ArrayShape& shape) {
    return detail::checked_mul(num_pes(shape), cycle_count(shape), "pe_cycles");
}

/// Joules. The exact integer PE-cycle product is formed first so that shapes
/// with equal products always produce bit-identical energies.
inline double energy(const ArrayShape& shape, const PEConfig& cfg) {
    return static_cast<double>(pe_cycles(shape)) * cfg.power_per_pe_w() / cfg.clock_hz();
}

struct FlowCost {
    Dataflow flow;
    ArrayShape shape;
    Count n_pe;
    Count n_c;
    double energy_j;

    friend bool operator==(const FlowCost&, const FlowCost&) = default;
};

inline FlowCost evaluate(const MatrixDims& dims, Dataflow flow, const PEConfig& cfg) {
    const ArrayShape shape = map_dims(dims, flow);
    return FlowCost{flow, shape, num_pes(shape), cycle_count(shape), energy(shape, cfg)};
}

struct CostReport {
    MatrixDims dims;
    PEConfig config;
    std::array<FlowCost, 3> per_dataflow;  // canonical order WS, IS, OS
    std::vector<Dataflow> optimal;         // nonempty, canonical order

    bool is_optimal(Dataflow flow) const {
        for (auto f : optimal) {
            if (f == flow) return true;
        }
        return false;
    }

    const FlowCost& cost(Dataflow flow) const {
        return per_dataflow[static_cast<std::size_t>(flow)];
    }
};

inline CostReport cost_report(const MatrixDims& dims, const PEConfig& cfg = {}) {
    std::array<FlowCost, 3> costs = {
        evaluate(dims, Dataflow::WeightStationary, cfg),
        evaluate(dims, Dataflow::InputStationary, cfg),
        evaluate(dims, Dataflow::OutputStationary, cfg),
    };
    double best = costs[0].energy_j;
    for (const auto& c : costs) {
        if (c.energy_j < best) best = c.energy_j;
    }
    std::vector<Dataflow> optimal;
    for (const auto& c : costs) {
        if (c.energy_j == best) optimal.push_back(c.flow);
    }
    return CostReport{dims, cfg, costs, std::move(optimal)};
}

/// Dimensions of the stationary matrix for a flow, as (rows, cols) in the
/// GEMM's own naming: WS -> (M, N), IS -> (N, P), OS -> (M, P).
constexpr std::string_view stationary_label(Dataflow flow) {
    switch (flow) {
        case Dataflow::WeightStationary: return "M×N";
        case Dataflow::InputStationary: return "N×P";
        case Dataflow::OutputStationary: return "M×P";
    }
    return "?";
}

/// Dimension left to the temporal axis under `flow`.
inline Count temporal_dim(const MatrixDims& dims, Dataflow flow) {
    return map_dims(dims, flow).temporal();
}

/// Flows whose stationary matrix is built from the two smallest dimensions,
/// i.e. whose temporal axis carries the largest one. With duplicated maxima
/// more than one flow qualifies.
inline std::vector<Dataflow> smallest_pair_flows(const MatrixDims& dims) {
    const Count largest = std::max({dims.m(), dims.n(), dims.p()});
    std::vector<Dataflow> flows;
    for (auto f : kAllDataflows) {
        if (temporal_dim(dims, f) == largest) flows.push_back(f);
    }
    return flows;
}

struct Recommendation {
    std::vector<Dataflow> flows;
    bool heuristic_agrees;
    std::string rationale;
};

/// Renders joules with an SI prefix and three decimals, e.g. "39.758 nJ".
inline std::string format_engineering(double joules) {
    struct Prefix {
        double multiplier;  // exact powers of ten, so scaling rounds once
        const char* symbol;
    };
    static constexpr Prefix prefixes[] = {
        {1.0, ""}, {1e3, "m"}, {1e6, "µ"}, {1e9, "n"}, {1e12, "p"}, {1e15, "f"},
    };
    const Prefix* chosen = &prefixes[std::size(prefixes) - 1];
    for (const auto& p : prefixes) {
        if (joules * p.multiplier >= 1.0) {
            chosen = &p;
            break;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f %sJ", joules * chosen->multiplier, chosen->symbol);
    return buf;
}

/// Always the energy argmin under the given config; the smallest-two-dims
/// rule only shows up in the rationale when every chosen flow satisfies it.
inline Recommendation recommend(const MatrixDims& dims, const PEConfig& cfg = {}) {
    const CostReport report = cost_report(dims, cfg);
    const auto pair_flows = smallest_pair_flows(dims);

    bool agrees = true;
    for (auto f : report.optimal) {
        bool found = false;
        for (auto h : pair_flows) found = found || (h == f);
        agrees = agrees && found;
    }

    auto join = [](const std::vector<Dataflow>& flows) {
        std::string out;
        for (std::size_t i = 0; i < flows.size(); ++i) {
            if (i) out += flows.size() == 2 ? " and " : (i + 1 == flows.size() ? ", and " : ", ");
            out += short_name(flows[i]);
        }
        return out;
    };

    std::string text = "Stationary-matrix mapping: (M×N)↦WS, (N×P)↦IS, (M×P)↦OS. ";
    text += "For M×N×P = " + std::to_string(dims.m()) + "×" + std::to_string(dims.n()) +
            "×" + std::to_string(dims.p()) + ", ";
    if (report.optimal.size() == kAllDataflows.size()) {
        text += "all three dataflows tie at " + format_engineering(report.cost(report.optimal[0]).energy_j) + ".";
    } else {
        const auto& best = report.cost(report.optimal[0]);
        text += join(report.optimal) + (report.optimal.size() > 1 ? " tie for" : " gives") +
                " the minimum energy " + format_engineering(best.energy_j) + " on " +
                std::to_string(best.n_pe) + " PEs over " + std::to_string(best.n_c) + " cycles (stationary ";
        for (std::size_t i = 0; i < report.optimal.size(); ++i) {
            if (i) text += ", ";
            const auto f = report.optimal[i];
            const auto s = report.cost(f).shape;
            text += std::string(stationary_label(f)) + " = " + std::to_string(s.rows()) + "×" +
                    std::to_string(s.cols());
        }
        text += ").";
        if (agrees) {
            text += " This keeps the two smallest dimensions spatial.";
        }
    }
    return Recommendation{report.optimal, agrees, std::move(text)};
}

}  // namespace systolic
