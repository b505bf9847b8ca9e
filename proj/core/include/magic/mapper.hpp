#pragma once

#include <optional>

#include "magic/netlist.hpp"
#include "magic/program.hpp"

namespace magic {

// Naive row mapper: schedules one gate per cycle in netlist order, allocating
// the lowest-index free cell for each gate output. Primary inputs occupy
// cells 0..n-1 in declaration order and are never reused; a cell is freed
// after its signal's last consumer (primary outputs are never freed). All
// first-time output cells are covered by one leading Init cycle; cells freed
// after use are re-initialized by a batched Init cycle immediately before the
// first gate that reuses one of them. Throws ValidationError ("row overflow")
// when row_size is given but smaller than the peak number of live cells.
ExecutionProgram map_to_row(const GateNetlist& n,
                            std::optional<int> row_size = std::nullopt);

// The peak cell demand of the netlist under the naive allocation discipline
// (inputs pinned forever, intermediates live from definition to last use,
// outputs live forever). map_to_row succeeds exactly when row_size >= this.
int peak_live_cells(const GateNetlist& n);

} // namespace magic
