#pragma once

// Per-cycle snapshots of the PE grid.
//
// Text format (one block per cycle, fields always in this order):
//
//   trace <FLOW> m=<M> n=<N> p=<P> grid=<S_R>x<S_C>
//   cycle <k> <prefill|stream|drain>
//   pe <r> <c> stationary=<v> horizontal=<v>@<i> vertical=<v>@<i> psum=<v>@<i>
//   ...                              (row-major over the grid)
//   write <row> <col> <v>            (output elements written this cycle)
//   done cycles=<N_C> macs=<count>
//
// Empty registers print as "-". Values use the shortest round-trip decimal
// form. `@<i>` is the temporal index the value belongs to.

#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/simulator.hpp"

namespace systolic {

struct Snapshot {
    Count cycle;
    Phase phase;
    std::vector<ProcessingElement> pes;  // row-major, grid_rows x grid_cols
    std::vector<OutputWrite> writes;
};

struct Trace {
    Dataflow flow;
    MatrixDims dims;
    std::size_t grid_rows;
    std::size_t grid_cols;
    std::vector<Snapshot> snapshots;
    SimResult result;
};

inline constexpr std::size_t kMaxTraceDim = 16;

inline Trace trace(Dataflow flow, const Matrix& w, const Matrix& i, bool allow_large = false) {
    require_conformable(w, i);
    if (!allow_large && (w.rows() > kMaxTraceDim || w.cols() > kMaxTraceDim || i.cols() > kMaxTraceDim)) {
        throw std::length_error("trace: dimensions above " + std::to_string(kMaxTraceDim) +
                                " need allow_large");
    }
    detail::GridEngine engine(flow, w, i);
    std::vector<Snapshot> snapshots;
    SimResult result = engine.run([&](Count cycle, Phase phase, const std::vector<ProcessingElement>& grid,
                                      const std::vector<OutputWrite>& writes) {
        snapshots.push_back(Snapshot{cycle, phase, grid, writes});
    });
    return Trace{flow,
                 MatrixDims(w.rows(), w.cols(), i.cols()),
                 engine.grid_rows(),
                 engine.grid_cols(),
                 std::move(snapshots),
                 std::move(result)};
}

inline std::string format_value(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("?");
}

namespace detail {

inline std::string format_register(const std::optional<double>& v) { return v ? format_value(*v) : "-"; }

inline std::string format_register(const std::optional<Token>& t) {
    return t ? format_value(t->value) + "@" + std::to_string(t->index) : "-";
}

}  // namespace detail

inline std::string render_trace(const Trace& t) {
    std::string out = "trace " + std::string(short_name(t.flow)) + " m=" + std::to_string(t.dims.m()) +
                      " n=" + std::to_string(t.dims.n()) + " p=" + std::to_string(t.dims.p()) +
                      " grid=" + std::to_string(t.grid_rows) + "x" + std::to_string(t.grid_cols) + "\n";
    for (const auto& snap : t.snapshots) {
        out += "cycle " + std::to_string(snap.cycle) + " " + std::string(phase_name(snap.phase)) + "\n";
        for (std::size_t r = 0; r < t.grid_rows; ++r) {
            for (std::size_t c = 0; c < t.grid_cols; ++c) {
                const auto& pe = snap.pes[r * t.grid_cols + c];
                out += "pe " + std::to_string(r) + " " + std::to_string(c) +
                       " stationary=" + detail::format_register(pe.stationary) +
                       " horizontal=" + detail::format_register(pe.horizontal) +
                       " vertical=" + detail::format_register(pe.vertical) +
                       " psum=" + detail::format_register(pe.psum) + "\n";
            }
        }
        for (const auto& w : snap.writes) {
            out += "write " + std::to_string(w.row) + " " + std::to_string(w.col) + " " + format_value(w.value) +
                   "\n";
        }
    }
    out += "done cycles=" + std::to_string(t.result.cycles) + " macs=" + std::to_string(t.result.mac_count) +
           "\n";
    return out;
}

}  // namespace systolic
