"""Numerical tolerances and sampling defaults, shared across the package.

All membership margins are "graph normalized": a level function g satisfies
g(x + t*ones) = g(x) + t along the diagonal whenever the set is monotone, so
margins are comparable across sets and the tolerances below have a single
meaning everywhere (signed diagonal distance to the boundary).
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # membership band: |margin| <= tau_member classifies as Boundary
    tau_member: float = 1e-9
    # containment slack on boundary-graph comparisons
    tau_contain: float = 1e-7
    # bisection/bracket search limit; exceeding it means EMPTY or FULL
    bracket_limit: float = 1e6
    # default number of sampled trace-free directions
    n_dirs: int = 200
    # seed for direction sampling (per-call generators, thread safe)
    seed: int = 20260810

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **kw)


DEFAULT = Tolerances()
