"""Nilpotency modulo p versus the residue of the telescope.

For an endomorphism phi of a finite free Z_p-module F, the colimit of
F -phi-> F -phi-> ... is never built. Its residue F_p (x) phi^{-1}F is the
colimit of the reduction phibar over F_p, which is the eventual image
im(phibar^d) with d = dim F; phibar acts invertibly there.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .linalg import Matrix, det_mod_p, identity_matrix, matmul_mod_p, mod_matrix, rank_mod_p, row_basis_mod_p, transpose


@dataclass(frozen=True)
class ResidueMatrix:
    """A square matrix over F_p, reduced from an integer endomorphism."""

    p: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) % self.p for x in r) for r in self.entries)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def reduce(cls, phi: Sequence[Sequence[int]], p: int) -> ResidueMatrix:
        return cls(p, phi)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def power(self, e: int) -> Matrix:
        result = identity_matrix(self.dimension)
        base = [list(r) for r in self.entries]
        while e:
            if e & 1:
                result = matmul_mod_p(result, base, self.p)
            e >>= 1
            if e:
                base = matmul_mod_p(base, base, self.p)
        return result

    def eventual_image(self) -> Matrix:
        """Row basis (as vectors) of im(phibar^d), using column vectors."""
        cols = transpose(self.power(self.dimension), self.dimension)
        return row_basis_mod_p(cols, self.p)

    def restricted_to_eventual_image(self) -> Matrix:
        """Matrix of phibar on its eventual image, in the eventual_image basis."""
        p = self.p
        basis = self.eventual_image()
        if not basis:
            return []
        pivots = [next(i for i, x in enumerate(b) if x) for b in basis]
        out = []
        for b in basis:
            image = [sum(row[j] * b[j] for j in range(self.dimension)) % p for row in self.entries]
            # basis is in reduced echelon form: coordinates are read off the pivots
            out.append([image[c] for c in pivots])
        return transpose(out, 0)


def _square(phi: Sequence[Sequence[int]]) -> None:
    if any(len(r) != len(phi) for r in phi):
        raise ValueError("matrix must be square")


def is_nilpotent_mod_p(phi: Sequence[Sequence[int]], p: int) -> bool:
    """Whether phibar^k = 0 for some k; k = dim suffices."""
    _square(phi)
    d = len(phi)
    power = identity_matrix(d)
    bar = mod_matrix(phi, p)
    for _ in range(d):
        power = matmul_mod_p(power, bar, p)
        if not any(any(r) for r in power):
            return True
    return d == 0


def telescope_residue_rank(phi: Sequence[Sequence[int]], p: int) -> int:
    """dim over F_p of F_p (x) phi^{-1}F, the rank of phibar^d."""
    _square(phi)
    return rank_mod_p(ResidueMatrix.reduce(phi, p).power(len(phi)), p)


@dataclass
class TelescopeReport:
    p: int
    dimension: int
    checked: int = 0
    nilpotent: int = 0
    counterexamples: list[Matrix] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.counterexamples


def _samples(d: int, p: int, samples: Optional[int], seed: int):
    if d <= 2 and samples is None:
        yield from (
            [list(entries[i * d:(i + 1) * d]) for i in range(d)]
            for entries in itertools.product(range(p * p), repeat=d * d)
        )
        return
    rng = random.Random(seed)
    for _ in range(samples if samples is not None else 1000):
        yield [[rng.randrange(p * p) for _ in range(d)] for _ in range(d)]


def verify_telescope_equivalence(d: int, p: int, samples: Optional[int] = None,
                                 seed: int = 0) -> TelescopeReport:
    """Check nilpotent mod p <=> telescope residue rank 0 over a sample.

    For d <= 2 with no sample size, every matrix with entries in [0, p^2)
    is checked; otherwise ``samples`` random ones (default 1000).
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    report = TelescopeReport(p, d)
    for phi in _samples(d, p, samples, seed):
        nil = is_nilpotent_mod_p(phi, p)
        rank = telescope_residue_rank(phi, p)
        report.checked += 1
        report.nilpotent += nil
        if nil != (rank == 0):
            report.counterexamples.append(phi)
    return report


def eventual_image_is_stable(phi: Sequence[Sequence[int]], p: int) -> bool:
    bar = ResidueMatrix.reduce(phi, p)
    d = bar.dimension
    return rank_mod_p(bar.power(d), p) == rank_mod_p(bar.power(d + 1), p)


def acts_invertibly_on_eventual_image(phi: Sequence[Sequence[int]], p: int) -> bool:
    return det_mod_p(ResidueMatrix.reduce(phi, p).restricted_to_eventual_image(), p) != 0
