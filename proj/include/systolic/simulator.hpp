#pragma once

// Cycle-stepped functional model of a systolic PE grid.
//
// The grid is sized to the stationary matrix (S_R x S_C from map_dims). Every
// cycle, each PE computes its next register state from the previous state of
// its upstream neighbours only, so the whole grid advances in lockstep.
//
// Cycle accounting: cycles are numbered from 1. The makespan runs from the
// first prefill cycle (WS/IS) or the first operand-injection cycle (OS) through
// the cycle in which the last output element reaches the output buffer.
//
// WS  grid M x N, PE(r,c) holds W[r][c].
//     prefill: S_R cycles; stationary rows shift down from the top, bottom row first.
//     stream:  I[c][p] enters the top of column c on stream step p + c and moves
//              down one row per cycle. Partial sums of O[r][p] move right
//              along row r; the right-edge PE latches its result into the
//              output buffer in the cycle of its MAC.
// IS  grid N x P, PE(r,c) holds I[r][c].
//     prefill as WS.
//     stream:  W[m][r] enters the left of row r on stream step m + r and moves
//              right. Partial sums of O[m][c] move down column c and leave
//              through the bottom edge.
// OS  grid M x P, PE(r,c) accumulates O[r][c]. No prefill.
//     stream:  W[r][k] enters the left of row r on step k + r, I[k][c] enters
//              the top of column c on step k + c; they meet in PE(r,c) on
//              step k + r + c.
//     drain:   after the last MAC, accumulators shift down one row per cycle,
//              and the bottom row is written out each cycle (S_R cycles).
//
// Resulting makespans:
//   WS/IS: S_R + (T-1) + (S_R-1) + (S_C-1) + 1 = 2*S_R + S_C + T - 2
//   OS:    (S_R-1) + (S_C-1) + (T-1) + 1 + S_R = 2*S_R + S_C + T - 2

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "systolic/matrix.hpp"
#include "systolic/model.hpp"

namespace systolic {

enum class Phase : std::uint8_t { Prefill, Stream, Drain };

constexpr std::string_view phase_name(Phase phase) {
    switch (phase) {
        case Phase::Prefill: return "prefill";
        case Phase::Stream: return "stream";
        case Phase::Drain: return "drain";
    }
    return "?";
}

/// A value in flight, tagged with its position along the temporal axis.
struct Token {
    double value;
    std::size_t index;

    friend bool operator==(const Token&, const Token&) = default;
};

struct ProcessingElement {
    std::optional<double> stationary;  // held operand, load register during prefill, or OS accumulator
    std::optional<Token> horizontal;   // operand moving rightward
    std::optional<Token> vertical;     // operand moving downward
    std::optional<Token> psum;         // partial sum in flight (WS/IS)

    friend bool operator==(const ProcessingElement&, const ProcessingElement&) = default;
};

struct OutputWrite {
    std::size_t row;
    std::size_t col;
    double value;

    friend bool operator==(const OutputWrite&, const OutputWrite&) = default;
};

struct SimResult {
    Matrix output;
    Count cycles;
    Count mac_count;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

namespace detail {

class GridEngine {
public:
    GridEngine(Dataflow flow, const Matrix& w, const Matrix& i)
        : flow_(flow),
          w_(w),
          i_(i),
          dims_(w.rows(), w.cols(), i.cols()),
          shape_(map_dims(dims_, flow)),
          rows_(shape_.rows()),
          cols_(shape_.cols()),
          output_(w.rows(), i.cols()),
          grid_(rows_ * cols_),
          next_(rows_ * cols_) {}

    /// `observer(cycle, phase, grid, writes)` is invoked after every cycle.
    template <class Observer>
    SimResult run(Observer&& observer) {
        if (flow_ == Dataflow::OutputStationary) {
            for (auto& pe : grid_) pe.stationary = 0.0;
        } else {
            prefill(observer);
        }

        const Count total_macs = dims_.m() * dims_.n() * dims_.p();
        const Count total_outputs = dims_.m() * dims_.p();
        // Generous bound on stream steps; a correct schedule needs T + S_R + S_C - 2.
        const std::size_t step_limit = shape_.temporal() + rows_ + cols_ + 4;

        for (std::size_t step = 0;; ++step) {
            if (flow_ == Dataflow::OutputStationary ? macs_ == total_macs : written_ == total_outputs) break;
            if (step > step_limit) {
                throw std::logic_error("systolic schedule did not complete");
            }
            writes_.clear();
            ++cycle_;
            switch (flow_) {
                case Dataflow::WeightStationary: stream_ws(step); break;
                case Dataflow::InputStationary: stream_is(step); break;
                case Dataflow::OutputStationary: stream_os(step); break;
            }
            observer(cycle_, Phase::Stream, std::as_const(grid_), std::as_const(writes_));
        }

        if (flow_ == Dataflow::OutputStationary) drain(observer);

        if (macs_ != total_macs || written_ != total_outputs) {
            throw std::logic_error("systolic schedule lost work");
        }
        return SimResult{std::move(output_), cycle_, macs_};
    }

    std::size_t grid_rows() const noexcept { return rows_; }
    std::size_t grid_cols() const noexcept { return cols_; }

private:
    const Matrix& stationary_matrix() const { return flow_ == Dataflow::WeightStationary ? w_ : i_; }

    ProcessingElement& at(std::vector<ProcessingElement>& g, std::size_t r, std::size_t c) {
        return g[r * cols_ + c];
    }
    const ProcessingElement& prev(std::size_t r, std::size_t c) const { return grid_[r * cols_ + c]; }

    void commit() { grid_.swap(next_); }

    void write(std::size_t row, std::size_t col, double value) {
        output_(row, col) = value;
        ++written_;
        writes_.push_back({row, col, value});
    }

    /// Operand entering a grid edge lane on a given stream step, skewed by
    /// the lane index: element `step - lane` of the lane's stream.
    static std::optional<std::size_t> skewed_index(std::size_t step, std::size_t lane, std::size_t length) {
        if (step < lane || step - lane >= length) return std::nullopt;
        return step - lane;
    }

    template <class Observer>
    void prefill(Observer& observer) {
        const Matrix& s = stationary_matrix();
        for (std::size_t k = 0; k < rows_; ++k) {
            writes_.clear();
            ++cycle_;
            const std::size_t entering_row = rows_ - 1 - k;
            for (std::size_t r = 0; r < rows_; ++r) {
                for (std::size_t c = 0; c < cols_; ++c) {
                    auto& pe = at(next_, r, c);
                    pe = ProcessingElement{};
                    pe.stationary = r == 0 ? std::optional<double>(s(entering_row, c)) : prev(r - 1, c).stationary;
                }
            }
            commit();
            observer(cycle_, Phase::Prefill, std::as_const(grid_), std::as_const(writes_));
        }
    }

    void step_mac(ProcessingElement& pe, const ProcessingElement& old, const std::optional<Token>& operand,
                  std::optional<Token> psum_in, bool moves_down) {
        pe = ProcessingElement{};
        pe.stationary = old.stationary;
        if (!operand) return;
        if (!psum_in || psum_in->index != operand->index) {
            throw std::logic_error("partial sum and operand out of step");
        }
        ++macs_;
        (moves_down ? pe.vertical : pe.horizontal) = operand;
        pe.psum = Token{psum_in->value + *old.stationary * operand->value, operand->index};
    }

    void stream_ws(std::size_t step) {
        const std::size_t p_len = i_.cols();
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                std::optional<Token> operand;
                if (r == 0) {
                    if (auto p = skewed_index(step, c, p_len)) operand = Token{i_(c, *p), *p};
                } else {
                    operand = prev(r - 1, c).vertical;
                }
                std::optional<Token> psum_in;
                if (c == 0) {
                    if (operand) psum_in = Token{0.0, operand->index};
                } else {
                    psum_in = prev(r, c - 1).psum;
                }
                auto& pe = at(next_, r, c);
                step_mac(pe, prev(r, c), operand, psum_in, true);
                if (c + 1 == cols_ && pe.psum) write(r, pe.psum->index, pe.psum->value);
            }
        }
        commit();
    }

    void stream_is(std::size_t step) {
        const std::size_t m_len = w_.rows();
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                std::optional<Token> operand;
                if (c == 0) {
                    if (auto m = skewed_index(step, r, m_len)) operand = Token{w_(*m, r), *m};
                } else {
                    operand = prev(r, c - 1).horizontal;
                }
                std::optional<Token> psum_in;
                if (r == 0) {
                    if (operand) psum_in = Token{0.0, operand->index};
                } else {
                    psum_in = prev(r - 1, c).psum;
                }
                auto& pe = at(next_, r, c);
                step_mac(pe, prev(r, c), operand, psum_in, false);
                if (r + 1 == rows_ && pe.psum) write(pe.psum->index, c, pe.psum->value);
            }
        }
        commit();
    }

    void stream_os(std::size_t step) {
        const std::size_t k_len = w_.cols();
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                std::optional<Token> from_left;
                if (c == 0) {
                    if (auto k = skewed_index(step, r, k_len)) from_left = Token{w_(r, *k), *k};
                } else {
                    from_left = prev(r, c - 1).horizontal;
                }
                std::optional<Token> from_top;
                if (r == 0) {
                    if (auto k = skewed_index(step, c, k_len)) from_top = Token{i_(*k, c), *k};
                } else {
                    from_top = prev(r - 1, c).vertical;
                }
                auto& pe = at(next_, r, c);
                pe = ProcessingElement{};
                pe.stationary = prev(r, c).stationary;
                if (from_left.has_value() != from_top.has_value() ||
                    (from_left && from_left->index != from_top->index)) {
                    throw std::logic_error("streamed operands out of step");
                }
                if (from_left) {
                    ++macs_;
                    pe.horizontal = from_left;
                    pe.vertical = from_top;
                    pe.stationary = *pe.stationary + from_left->value * from_top->value;
                }
            }
        }
        commit();
    }

    template <class Observer>
    void drain(Observer& observer) {
        for (std::size_t d = 0; d < rows_; ++d) {
            writes_.clear();
            ++cycle_;
            const std::size_t leaving_row = rows_ - 1 - d;
            for (std::size_t c = 0; c < cols_; ++c) {
                write(leaving_row, c, *prev(rows_ - 1, c).stationary);
            }
            for (std::size_t r = 0; r < rows_; ++r) {
                for (std::size_t c = 0; c < cols_; ++c) {
                    auto& pe = at(next_, r, c);
                    pe = ProcessingElement{};
                    pe.stationary = r == 0 ? std::nullopt : prev(r - 1, c).stationary;
                }
            }
            commit();
            observer(cycle_, Phase::Drain, std::as_const(grid_), std::as_const(writes_));
        }
    }

    Dataflow flow_;
    const Matrix& w_;
    const Matrix& i_;
    MatrixDims dims_;
    ArrayShape shape_;
    std::size_t rows_;
    std::size_t cols_;
    Matrix output_;
    std::vector<ProcessingElement> grid_;
    std::vector<ProcessingElement> next_;
    std::vector<OutputWrite> writes_;
    Count cycle_ = 0;
    Count macs_ = 0;
    Count written_ = 0;
};

}  // namespace detail

/// Runs O = W * I on a grid sized to the stationary matrix of `flow`.
inline SimResult simulate(Dataflow flow, const Matrix& w, const Matrix& i) {
    require_conformable(w, i);
    detail::GridEngine engine(flow, w, i);
    return engine.run([](Count, Phase, const auto&, const auto&) {});
}

}  // namespace systolic
