"""Coefficient report shared by the exact and empirical routes."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

# Order of the JSON keys is part of the output contract.
_FIELDS = ("d", "beta", "components", "beta_star", "beta_nelsen", "beta_pairwise_avg", "source")


@dataclass(frozen=True)
class CoefficientsReport:
    """Multivariate medial correlation and its companions for one vector.

    ``components[i]`` is the medial correlation between coordinate ``i``
    and the block of all other coordinates; ``beta`` is their mean.
    """

    d: int
    beta: float
    components: tuple
    beta_star: float
    beta_nelsen: float
    beta_pairwise_avg: float
    source: str = "exact"
    n: Optional[int] = None
    labels: Optional[tuple] = None
    ci: Optional[dict] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "beta": self.beta,
            "components": list(self.components),
            "beta_star": self.beta_star,
            "beta_nelsen": self.beta_nelsen,
            "beta_pairwise_avg": self.beta_pairwise_avg,
            "source": self.source,
        }
        if self.n is not None:
            out["n"] = self.n
        if self.labels is not None:
            out["labels"] = list(self.labels)
        if self.ci is not None:
            out["ci"] = self.ci
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, obj: dict) -> "CoefficientsReport":
        missing = [k for k in _FIELDS if k not in obj]
        if missing:
            raise ValueError(f"report is missing fields {missing}")
        return cls(
            d=int(obj["d"]),
            beta=float(obj["beta"]),
            components=tuple(float(c) for c in obj["components"]),
            beta_star=float(obj["beta_star"]),
            beta_nelsen=float(obj["beta_nelsen"]),
            beta_pairwise_avg=float(obj["beta_pairwise_avg"]),
            source=str(obj["source"]),
            n=obj.get("n"),
            labels=tuple(obj["labels"]) if obj.get("labels") is not None else None,
            ci=obj.get("ci"),
        )
