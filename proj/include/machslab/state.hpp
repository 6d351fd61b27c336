// One time slice (u, B, p, S) of the compressible system and its time stack.
#pragma once

#include <vector>

#include "machslab/grid.hpp"

namespace machslab {

struct MhdState {
    VecField u;
    VecField B;
    Field p;
    Field S;
    double t = 0.0;

    MhdState() = default;
    /// Zero state on grid.
    explicit MhdState(const GridPtr& grid);
    MhdState(VecField u_, VecField B_, Field p_, Field S_, double t_ = 0.0);

    const GridPtr& grid_ptr() const { return p.grid_ptr(); }
    const SlabGrid& grid() const { return p.grid(); }
    int dim() const { return grid().dim(); }

    bool all_finite() const;
    /// Number of scalar arrays (2 dim + 2).
    int field_count() const { return 2 * dim() + 2; }
    /// Scalar arrays in the order u_1..u_d, B_1..B_d, p, S.
    std::vector<const Field*> fields() const;
    std::vector<Field*> fields();

    MhdState& axpy(double a, const MhdState& x);
    MhdState& scale(double a);
};

/// levels[k] = d_t^k of the state at one instant.
struct TimeStack {
    std::vector<MhdState> levels;

    int depth() const { return static_cast<int>(levels.size()) - 1; }
    const MhdState& operator[](int k) const { return levels[static_cast<std::size_t>(k)]; }
    std::vector<Field> scalar_stack(int field_index) const;
};

}  // namespace machslab
