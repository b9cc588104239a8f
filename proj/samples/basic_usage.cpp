// Evaluates one GEMM under all three dataflows, then checks the result with
// the cycle-stepped simulator.

#include <iostream>

#include "systolic/systolic.hpp"

int main() {
    using namespace systolic;

    const MatrixDims dims(5, 5, 500);
    const CostReport report = cost_report(dims);
    for (const auto& c : report.per_dataflow) {
        std::cout << short_name(c.flow) << ": " << c.n_pe << " PEs, " << c.n_c << " cycles, "
                  << format_engineering(c.energy_j) << (report.is_optimal(c.flow) ? "  <- optimal" : "") << "\n";
    }

    std::cout << recommend(dims).rationale << "\n";

    IntMatrixGenerator gen(42);
    const Matrix w = gen.matrix(4, 3);
    const Matrix i = gen.matrix(3, 5);
    const SimResult sim = simulate(Dataflow::OutputStationary, w, i);
    std::cout << "OS 4x3x5: " << sim.cycles << " cycles, " << sim.mac_count << " MACs, output "
              << (sim.output == reference_matmul(w, i) ? "correct" : "WRONG") << "\n";
}
