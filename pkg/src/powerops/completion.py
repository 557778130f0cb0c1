"""Truncated analytic p-completion.

The cokernel of multiplication by (x - p) on M[[x]] is cut down to
M[x]/(x^N). Elements of M[x]/(x^N) are TruncatedSeries; the generator
e_{g,k} stands for x^k times generator g of M.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .modules import ModuleMap, PresentedModule


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_k coefficients[k] x^k in M[x]/(x^N), N = len(coefficients)."""

    module: PresentedModule
    coefficients: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        coeffs = tuple(tuple(int(a) for a in c) for c in self.coefficients)
        g = self.module.num_generators
        if any(len(c) != g for c in coeffs):
            raise ValueError(f"each coefficient vector must have length {g}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zero(cls, module: PresentedModule, order: int) -> TruncatedSeries:
        return cls(module, [[0] * module.num_generators for _ in range(order)])

    @classmethod
    def monomial(cls, module: PresentedModule, order: int, gen: int, k: int) -> TruncatedSeries:
        coeffs = [[0] * module.num_generators for _ in range(order)]
        coeffs[k][gen] = 1
        return cls(module, coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        if other.module != self.module or other.order != self.order:
            raise ValueError("series live in different truncations")
        return TruncatedSeries(
            self.module,
            [[a + b for a, b in zip(u, v)] for u, v in zip(self.coefficients, other.coefficients)],
        )

    def scale(self, c: int) -> TruncatedSeries:
        return TruncatedSeries(self.module, [[c * a for a in u] for u in self.coefficients])

    def times_x(self) -> TruncatedSeries:
        if not self.coefficients:
            return self
        g = self.module.num_generators
        return TruncatedSeries(self.module, [[0] * g] + list(self.coefficients[:-1]))

    def times_x_minus_p(self) -> TruncatedSeries:
        return self.times_x() + self.scale(-self.module.p)

    def flat(self) -> list[int]:
        """Coordinates on the generators e_{g,k}, ordered by (k, g)."""
        return [a for u in self.coefficients for a in u]


def _truncated_presentation(m: PresentedModule, order: int) -> PresentedModule:
    g = m.num_generators
    size = g * order
    rels = []
    for k in range(order):
        for r in m.relations:
            row = [0] * size
            row[k * g:(k + 1) * g] = r
            rels.append(row)
    for k in range(order):
        for gen in range(g):
            rels.append(TruncatedSeries.monomial(m, order, gen, k).times_x_minus_p().flat())
    return PresentedModule(m.ctx, size, rels)


def truncated_analytic_cokernel(m: PresentedModule, order: int) -> PresentedModule:
    """coker((x - p) on M[x]/(x^order)), presented on the e_{g,k}.

    Since x acts as p in the quotient and x^order = 0, this is M / p^order M.
    """
    if order < 1:
        raise ValueError("truncation order must be >= 1")
    return _truncated_presentation(m, order)


def taylor_expand(a: int, p: int, digits: int) -> list[int]:
    """Base-p digits c_0..c_{digits-1} in [0, p-1] with a = sum c_k p^k mod p^digits."""
    if digits < 1:
        raise ValueError("need at least one digit")
    r = a % p**digits
    out = []
    for _ in range(digits):
        r, c = divmod(r, p)
        out.append(c)
    return out


def evaluate_digits(digits: Sequence[int], p: int) -> int:
    return sum(c * p**k for k, c in enumerate(digits))


def stabilization_tower(m: PresentedModule, n_max: int) -> list[PresentedModule]:
    """[coker((x - p) on M[x]/(x^N)) for N = 1..n_max]."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [truncated_analytic_cokernel(m, order) for order in range(1, n_max + 1)]


def tower_map(m: PresentedModule, order: int) -> ModuleMap:
    """The truncation M[x]/(x^(order+1)) -> M[x]/(x^order) on cokernels."""
    g = m.num_generators
    src = truncated_analytic_cokernel(m, order + 1)
    tgt = truncated_analytic_cokernel(m, order)
    matrix = [[int(col == row) for col in range(g * (order + 1))] for row in range(g * order)]
    return ModuleMap(src, tgt, matrix)
