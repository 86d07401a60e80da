"""Effort budgets. Every search bound in the package is read from here."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class Budgets:
    xi_height: int = 32                # coordinate height ceiling for the splitting search
    enum_nodes: int = 10**6            # nodes visited by any enumeration
    factor_budget: int = 10**6         # Pollard rho iterations
    trial_division_bound: int = 10**6
    factor_max_degree: int = 16        # univariate factorization over Q
    conic_moves: int = 200             # alternative conic points tried by the quartic pipeline

    def with_overrides(self, **kw) -> "Budgets":
        known = {f.name for f in fields(self)}
        bad = set(kw) - known
        if bad:
            raise ValueError(f"unknown budget keys: {sorted(bad)}")
        return replace(self, **{k: int(v) for k, v in kw.items()})

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_BUDGETS = Budgets()


def load_budgets(path: str | Path | None = None, overrides: dict | None = None) -> Budgets:
    b = DEFAULT_BUDGETS
    if path is not None:
        b = b.with_overrides(**json.loads(Path(path).read_text(encoding="utf-8")))
    if overrides:
        b = b.with_overrides(**overrides)
    return b
