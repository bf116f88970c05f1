"""Copula models evaluable at points of the unit cube.

Every model is an immutable object exposing ``dim`` and a vectorised
``_cdf(u)`` over an ``(n, d)`` array. The public entry points
:func:`cdf` and :func:`marginal_cdf` validate their arguments and then
delegate to the model.

Families
--------
Product(d)            independence copula
Comonotone(d)         upper Frechet bound, min(u)
CountermonotonePair   lower Frechet bound in two dimensions
Gumbel(d, delta)      exp(-(sum (-ln u_i)^(1/delta))^delta), 0 < delta <= 1
MarshallOlkin(a1, a2) min(u1^(1-a1) u2, u1 u2^(1-a2))
BlockCompose(parts)   product of models acting on disjoint coordinate blocks

Model strings
-------------
``parse_model`` reads the small text form used on the command line::

    model  := family [":" key "=" value ("," key "=" value)*]
            | "compose:[" part ("|" part)* "]"
    part   := model ["@" index ("," index)*]

Indices after ``@`` are 1-based and name the coordinates a block acts
on; without them blocks are laid out contiguously. Family names:
``product`` (``d``), ``comonotone`` (``d``), ``counter``, ``gumbel``
(``d``, ``delta``), ``mo`` (``a1``, ``a2``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_DIM = 20

__all__ = [
    "MAX_DIM",
    "Copula",
    "Product",
    "Comonotone",
    "CountermonotonePair",
    "Gumbel",
    "MarshallOlkin",
    "BlockCompose",
    "ReflectionMask",
    "AxiomReport",
    "cdf",
    "marginal_cdf",
    "survival",
    "axiom_check",
    "parse_model",
    "format_model",
]


class Copula:
    """Base class for copula models.

    Subclasses set ``dim`` and implement ``_cdf`` on an ``(n, dim)`` array
    whose entries are already known to lie in [0, 1].
    """

    dim: int

    def _cdf(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def cdf(self, u):
        return cdf(self, u)


@dataclass(frozen=True)
class Product(Copula):
    dim: int

    def __post_init__(self):
        _check_dim(self.dim)

    def _cdf(self, u):
        return np.prod(u, axis=1)


@dataclass(frozen=True)
class Comonotone(Copula):
    dim: int

    def __post_init__(self):
        _check_dim(self.dim)

    def _cdf(self, u):
        return np.min(u, axis=1)


@dataclass(frozen=True)
class CountermonotonePair(Copula):
    dim: int = field(default=2, init=False)

    def _cdf(self, u):
        return np.maximum(u[:, 0] + u[:, 1] - 1.0, 0.0)


@dataclass(frozen=True)
class Gumbel(Copula):
    """Gumbel copula with ``delta`` in (0, 1]; ``delta = 1`` is independence."""

    dim: int
    delta: float

    def __post_init__(self):
        _check_dim(self.dim)
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"Gumbel delta must lie in (0, 1], got {self.delta!r}")

    def _cdf(self, u):
        out = np.zeros(u.shape[0])
        # any zero coordinate grounds the copula; never take log(0)
        live = np.all(u > 0.0, axis=1)
        if np.any(live):
            t = -np.log(u[live])
            s = np.sum(t ** (1.0 / self.delta), axis=1)
            out[live] = np.exp(-(s ** self.delta))
        return out


@dataclass(frozen=True)
class MarshallOlkin(Copula):
    """Bivariate Marshall-Olkin copula min(u1^(1-a1) u2, u1 u2^(1-a2))."""

    alpha1: float
    alpha2: float
    dim: int = field(default=2, init=False)

    def __post_init__(self):
        for name, a in (("alpha1", self.alpha1), ("alpha2", self.alpha2)):
            if not 0.0 <= a <= 1.0:
                raise ValueError(f"Marshall-Olkin {name} must lie in [0, 1], got {a!r}")

    def _cdf(self, u):
        u1, u2 = u[:, 0], u[:, 1]
        return np.minimum(u1 ** (1.0 - self.alpha1) * u2, u1 * u2 ** (1.0 - self.alpha2))


@dataclass(frozen=True)
class BlockCompose(Copula):
    """Product of copulas acting on disjoint coordinate blocks.

    ``parts`` is a sequence of ``(model, block)`` pairs where ``block`` lists
    zero-based coordinates. ``block=None`` places blocks contiguously.
    """

    parts: tuple
    dim: int = field(init=False)

    def __init__(self, parts):
        normalized = []
        offset = 0
        for item in parts:
            if isinstance(item, Copula):
                model, block = item, None
            else:
                model, block = item
            if block is None:
                block = tuple(range(offset, offset + model.dim))
            block = tuple(int(i) for i in block)
            if len(block) != model.dim:
                raise ValueError(
                    f"block {block} has {len(block)} coordinates but model has dimension {model.dim}"
                )
            offset += model.dim
            normalized.append((model, block))
        if not normalized:
            raise ValueError("BlockCompose needs at least one block")
        dim = sum(m.dim for m, _ in normalized)
        seen = sorted(i for _, b in normalized for i in b)
        if seen != list(range(dim)):
            raise ValueError("blocks must partition the coordinates 0..d-1 without overlap")
        _check_dim(dim)
        object.__setattr__(self, "parts", tuple(normalized))
        object.__setattr__(self, "dim", dim)

    def _cdf(self, u):
        out = np.ones(u.shape[0])
        for model, block in self.parts:
            out = out * model._cdf(u[:, list(block)])
        return out


def _check_dim(d):
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")


@dataclass(frozen=True)
class ReflectionMask:
    """Set of coordinates (zero-based) whose uniform is replaced by 1 - U."""

    mask: int
    d: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >= (1 << self.d):
            raise ValueError(f"mask {self.mask:#b} is not a subset of {self.d} coordinates")

    @classmethod
    def of(cls, coords: Sequence[int], d: int) -> "ReflectionMask":
        m = 0
        for i in coords:
            if not 0 <= i < d:
                raise ValueError(f"coordinate {i} out of range for dimension {d}")
            m |= 1 << i
        return cls(m, d)

    @property
    def coords(self) -> tuple:
        return tuple(i for i in range(self.d) if self.mask >> i & 1)


def _as_points(model, point):
    u = np.asarray(point, dtype=float)
    single = u.ndim == 1
    u = np.atleast_2d(u)
    if u.ndim != 2 or u.shape[1] != model.dim:
        raise ValueError(f"point dimension {u.shape[-1]} does not match model dimension {model.dim}")
    if np.any(~np.isfinite(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise ValueError("copula arguments must lie in [0, 1]")
    return u, single


def cdf(model: Copula, point):
    """Evaluate the copula at one point (shape ``(d,)``) or many (``(n, d)``)."""
    u, single = _as_points(model, point)
    out = np.clip(model._cdf(u), 0.0, 1.0)
    return float(out[0]) if single else out


def marginal_cdf(model: Copula, subset: Sequence[int], point):
    """Marginal copula of the coordinates in ``subset`` (zero-based).

    Off-subset coordinates are set to 1.
    """
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise ValueError("subset has repeated coordinates")
    for i in subset:
        if not 0 <= i < model.dim:
            raise ValueError(f"coordinate {i} out of range for dimension {model.dim}")
    p = np.asarray(point, dtype=float)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    if p.shape[1] != len(subset):
        raise ValueError(f"point has {p.shape[1]} coordinates but subset has {len(subset)}")
    full = np.ones((p.shape[0], model.dim))
    full[:, subset] = p
    out = cdf(model, full)
    return float(out[0]) if single else out


def survival(model: Copula, point):
    """Survival copula: the copula of (1 - U_1, ..., 1 - U_d) at ``point``.

    Uses inclusion-exclusion over the 2^d vertices, so keep ``d`` small.
    """
    u, single = _as_points(model, point)
    d = model.dim
    total = np.zeros(u.shape[0])
    for mask in range(1 << d):
        w = np.ones_like(u)
        sign = 1.0
        for i in range(d):
            if mask >> i & 1:
                w[:, i] = 1.0 - u[:, i]
                sign = -sign
        total += sign * model._cdf(w)
    total = np.clip(total, 0.0, 1.0)
    return float(total[0]) if single else total


@dataclass
class AxiomReport:
    violations: list
    checked_points: int
    checked_rectangles: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _grid(d, k, rng, cap):
    axis = np.linspace(0.0, 1.0, k)
    if k ** d <= cap:
        mesh = np.meshgrid(*([axis] * d), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)
    return axis[rng.integers(0, k, size=(cap, d))]


def axiom_check(model: Copula, grid_resolution: int = 11, rectangles: int = 200,
                seed: int = 0, tol: float = 1e-12, max_points: int = 50_000) -> AxiomReport:
    """Spot-check that ``model`` behaves like a copula.

    Looks for violations of groundedness and uniform margins on a grid and
    for negative C-volume on randomly drawn boxes. Large grids are
    subsampled. Never raises on a violation; they are returned as text.
    """
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    d = model.dim
    rng = np.random.default_rng(seed)
    pts = _grid(d, grid_resolution, rng, max_points)
    violations = []

    for i in range(d):
        grounded = pts.copy()
        grounded[:, i] = 0.0
        vals = model._cdf(grounded)
        bad = np.abs(vals) > tol
        if np.any(bad):
            j = int(np.argmax(bad))
            violations.append(
                f"groundedness: C = {vals[j]:.3g} at {grounded[j].tolist()} (coordinate {i + 1} is 0)"
            )

    axis = np.linspace(0.0, 1.0, grid_resolution)
    for i in range(d):
        margin = np.ones((grid_resolution, d))
        margin[:, i] = axis
        vals = model._cdf(margin)
        err = np.abs(vals - axis)
        if np.any(err > tol):
            j = int(np.argmax(err))
            violations.append(
                f"uniform margin {i + 1}: C = {vals[j]:.6g} at u_{i + 1} = {axis[j]:.6g}"
            )

    if d <= 12:
        lo = rng.uniform(size=(rectangles, d))
        hi = rng.uniform(size=(rectangles, d))
        lo, hi = np.minimum(lo, hi), np.maximum(lo, hi)
        volume = np.zeros(rectangles)
        for mask in range(1 << d):
            corner = np.where([(mask >> i) & 1 for i in range(d)], lo, hi)
            sign = -1.0 if bin(mask).count("1") % 2 else 1.0
            volume += sign * model._cdf(corner)
        bad = volume < -1e-10
        if np.any(bad):
            j = int(np.argmin(volume))
            violations.append(
                f"negative volume {volume[j]:.3g} on box {lo[j].tolist()} x {hi[j].tolist()}"
            )
        n_rect = rectangles
    else:
        n_rect = 0

    return AxiomReport(violations, len(pts), n_rect)


# --------------------------------------------------------------------------
# model strings

_FAMILIES = {
    "product": ("d",),
    "comonotone": ("d",),
    "counter": (),
    "gumbel": ("d", "delta"),
    "mo": ("a1", "a2"),
}


def _split_top(text, sep):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_model(text: str) -> Copula:
    """Parse a model string such as ``gumbel:d=3,delta=0.5``."""
    text = text.strip()
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    if family == "compose":
        rest = rest.strip()
        if not (rest.startswith("[") and rest.endswith("]")):
            raise ValueError(f"compose expects [A | B | ...], got {rest!r}")
        parts = []
        offset = 0
        for chunk in _split_top(rest[1:-1], "|"):
            chunk = chunk.strip()
            if not chunk:
                raise ValueError("empty block in compose")
            body, at, idx = chunk.rpartition("@") if "@" in chunk.split("]")[-1] else (chunk, "", "")
            model = parse_model(body)
            if at:
                block = tuple(int(s) - 1 for s in idx.split(","))
            else:
                block = tuple(range(offset, offset + model.dim))
            offset += model.dim
            parts.append((model, block))
        return BlockCompose(parts)
    if family not in _FAMILIES:
        raise ValueError(f"unknown copula family {family!r}")
    params = {}
    if rest.strip():
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"expected key=value, got {item!r}")
            params[key.strip()] = value.strip()
    expected = set(_FAMILIES[family])
    if set(params) != expected:
        raise ValueError(f"{family} takes parameters {sorted(expected)}, got {sorted(params)}")
    try:
        if family == "product":
            return Product(int(params["d"]))
        if family == "comonotone":
            return Comonotone(int(params["d"]))
        if family == "counter":
            return CountermonotonePair()
        if family == "gumbel":
            return Gumbel(int(params["d"]), float(params["delta"]))
        return MarshallOlkin(float(params["a1"]), float(params["a2"]))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad parameters for {family}: {exc}") from None


def format_model(model: Copula) -> str:
    """Inverse of :func:`parse_model` for the built-in families."""
    if isinstance(model, Product):
        return f"product:d={model.dim}"
    if isinstance(model, Comonotone):
        return f"comonotone:d={model.dim}"
    if isinstance(model, CountermonotonePair):
        return "counter"
    if isinstance(model, Gumbel):
        return f"gumbel:d={model.dim},delta={model.delta!r}"
    if isinstance(model, MarshallOlkin):
        return f"mo:a1={model.alpha1!r},a2={model.alpha2!r}"
    if isinstance(model, BlockCompose):
        chunks = []
        for m, block in model.parts:
            chunks.append(format_model(m) + "@" + ",".join(str(i + 1) for i in block))
        return "compose:[" + " | ".join(chunks) + "]"
    return f"<{type(model).__name__} d={model.dim}>"
