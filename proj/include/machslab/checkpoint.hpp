// MSLB1 binary checkpoints.
//
// Layout (all little-endian): "MSLB1" | i64 dim | i64 n_tangential[dim-1] |
// i64 n_normal | f64 period | i64 field_count | i64 aux_count |
// f64 aux[aux_count] | field_count arrays of f64 in row-major grid order.
#pragma once

#include <string>
#include <vector>

#include "machslab/grid.hpp"

namespace machslab {

struct Checkpoint {
    GridPtr grid;
    std::vector<Field> fields;
    std::vector<double> aux;
};

void write_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace machslab
