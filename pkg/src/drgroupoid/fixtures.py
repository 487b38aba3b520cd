"""Small reference systems and the two-vertex graph."""

from .dynsys import validate_system
from .pathspace import GRAPH_HS

# one 3-cycle
CYCLE3 = validate_system(["p0", "p1", "p2"], [[1, 2, 0]])
# T1 swaps two points, T2 is the identity
SWAP2 = validate_system(["a", "b"], [[1, 0], [0, 1]])
# a -> b, b fixed
COLLAPSE = validate_system(["a", "b"], [[1, 1]])
# two disjoint 2-cycles
TWO_CYCLES = validate_system(["a", "b", "c", "d"], [[1, 0, 3, 2]])

SYSTEMS = {
    "cycle3": CYCLE3,
    "swap2": SWAP2,
    "collapse": COLLAPSE,
    "two_cycles": TWO_CYCLES,
}

__all__ = ["CYCLE3", "SWAP2", "COLLAPSE", "TWO_CYCLES", "GRAPH_HS", "SYSTEMS"]
