# create contants that can be use anywhere
class Constants:
    # graph text format
    MISSING_HEADER = "expected header 'p graph <n> <m>' before any other line"
    DUPLICATE_HEADER = "header given more than once"
    MALFORMED_LINE = "malformed line"
    VERTEX_OUT_OF_RANGE = "vertex id out of range"
    SELF_LOOP = "self-loops are not allowed"
    DUPLICATE_EDGE = "duplicate edge"
    DUPLICATE_COLOR = "color given more than once for vertex"
    NEGATIVE_COLOR = "colors must be nonnegative"
    EDGE_COUNT_MISMATCH = "edge count does not match header"
    EMPTY_INPUT = "empty graph text"

    # partitions and contractions
    NOT_A_PARTITION = "parts do not partition the vertex set"
    DEAD_PART = "part is not live"
    SAME_PART = "cannot contract a part with itself"
    SEQUENCE_GRAPH_MISMATCH = "sequence header does not match the graph"

    # preconditions
    NOT_CONNECTED_COCONNECTED = (
        "graph must be connected and coconnected; use mod_tree for the recursion"
    )
    NOT_PRIME_QUOTIENT = "quotient by the maximal modules is not prime"
    NOT_TWW1 = "graph does not have twin-width at most 1"
    CS_MISMATCH = "canonical contraction strings differ"
    WL_UNSTABLE = "k-WL coloring failed its exact stability check"
    SINGLE_RED_EDGE_REQUIRED = "trigraph must have exactly one red edge"
    ENDPOINT_REQUIRED = "x must be an endpoint of the red edge"
    NOT_PARTIAL_HALF_GRAPH = "bipartite graph is not a partial half-graph"
    WIDTH_ABOVE_ONE = "sequence width exceeds 1"
    NOT_CUBIC = "CFI base must be 3-regular"
    NOT_CONNECTED = "CFI base must be connected"
    NOT_DISJOINT = "vertex sets must be disjoint"
    INVALID_PERMUTATION = "not a permutation of the vertex set"
    INVALID_PARAMETER = "invalid parameter"

    # budgets
    WL_TOO_LARGE = "n^k exceeds WL_MAX_TUPLES; lower k or n"
    WL_MEMORY_TOO_LARGE = "k-WL tuple arrays would exceed WL_MAX_MEMORY_MB"
    PEBBLE_TOO_LARGE = "pebble position space exceeds PEBBLE_MAX_POSITIONS"
    RANK_CONNECTIVITY_TOO_LARGE = (
        "rank_connectivity enumerates cuts; graph exceeds RANK_CONNECTIVITY_MAX_VERTICES"
    )
    NAIVE_TOO_LARGE = "naive enumeration refused above NAIVE_TWW_MAX_VERTICES"

    UNKNOWN_EXPERIMENT = "unknown experiment"
