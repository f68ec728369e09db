"""Resource caps shared by the lazy constructions.

Appearance of a node in the level filtration is guaranteed eventually but
with no a-priori bound, so every expanding search carries a cap; hitting one
raises CapExceededError instead of looping.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Caps:
    level_cap: int = 64       # deepest level filtration stage consulted
    net_cap: int = 10 ** 6    # largest point set / level set materialized
    word_cap: int = 20        # longest map word for diameter sweeps
    match_cap: int = 4096     # greedy matcher scan bound per node


DEFAULT_CAPS = Caps()
