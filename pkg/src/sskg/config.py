"""Search limits shared by the CLI and the scripts."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass

from .tails import DEFAULT_MAX_VERTICES

DEFAULT_BOUND_COMPONENT = 4
BOUND_ENV = "SSKG_DEFAULT_BOUND"


@dataclass(frozen=True)
class SearchConfig:
    bound: tuple[int, ...]
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_nucleus: int = 1000
    assume_cyc: bool = False

    @classmethod
    def default(cls, k: int, **kw) -> "SearchConfig":
        """Bound from ``$SSKG_DEFAULT_BOUND`` (one integer per color, or one for all) or 4."""
        env = os.environ.get(BOUND_ENV)
        if env:
            parts = tuple(int(x) for x in env.split(","))
            bound = parts * k if len(parts) == 1 else parts
        else:
            bound = (DEFAULT_BOUND_COMPONENT,) * k
        return cls(bound, **kw)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["degree"] = list(out.pop("bound"))
        return out
