"""Finitely presented modules over the p-adic integers.

A module is a set of generators together with integer relations (rows).
Everything is exact: Z_p-linear questions about integer data are answered
over Z_(p), which gives the same answers as Z_p for finitely presented
modules.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple, Optional, Sequence

from .linalg import LocalEchelon, local_invariants, matmul, rank_mod_p, transpose


class ExactnessError(ArithmeticError):
    """An exact division that should have been exact was not.

    Never a user error: raising this means an internal invariant broke.
    """


class IllDefinedMapError(ValueError):
    """A matrix does not define a map between the given presentations."""

    def __init__(self, relation_index: int, image: Sequence[int]):
        self.relation_index = relation_index
        self.image = list(image)
        super().__init__(
            f"source relation {relation_index} maps to {self.image}, "
            "which is not in the span of the target relations"
        )


class ModuleExpressionError(ValueError):
    pass


@lru_cache(maxsize=None)
def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The prime p shared by every object in a computation."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"p must be a prime, got {self.p!r}")

    def module(self, free_rank: int = 0, torsion: Sequence[int] = ()) -> PresentedModule:
        """Z_p^free_rank + Z/p^e1 + ... presented on one generator per summand."""
        if free_rank < 0 or any(e < 1 for e in torsion):
            raise ValueError("free rank must be >= 0 and exponents >= 1")
        g = free_rank + len(torsion)
        rels = []
        for i, e in enumerate(torsion):
            row = [0] * g
            row[free_rank + i] = self.p**e
            rels.append(row)
        return PresentedModule(self, g, rels)

    def free(self, rank: int = 1) -> PresentedModule:
        return self.module(rank)

    def cyclic(self, e: int) -> PresentedModule:
        return self.module(0, [e])

    def zero(self) -> PresentedModule:
        return PresentedModule(self, 0)


class NormalForm(NamedTuple):
    free_rank: int
    torsion: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def as_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Zp" if self.free_rank == 1 else f"Zp^{self.free_rank}")
        parts += ["Z/p" if e == 1 else f"Z/p^{e}" for e in self.torsion]
        return " + ".join(parts) if parts else "0"


def normal_form(relations: Sequence[Sequence[int]], ctx: PrimeContext,
                num_generators: Optional[int] = None) -> NormalForm:
    """p-local invariants of the cokernel of an integer relation matrix.

    Invariant factors prime to p are units over Z_p and disappear.
    ``num_generators`` is required when there are no relations.
    """
    if num_generators is None:
        if not relations:
            raise ValueError("num_generators is required for an empty relation matrix")
        num_generators = len(relations[0])
    free_rank, torsion = local_invariants(relations, num_generators, ctx.p)
    return NormalForm(free_rank, tuple(torsion))


@dataclass(frozen=True)
class PresentedModule:
    """Z_p^num_generators modulo the row span of ``relations``."""

    ctx: PrimeContext
    num_generators: int
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relations)
        for r in rels:
            if len(r) != self.num_generators:
                raise ValueError(
                    f"relation {list(r)} has length {len(r)}, expected {self.num_generators}"
                )
        object.__setattr__(self, "relations", rels)

    @property
    def p(self) -> int:
        return self.ctx.p

    @cached_property
    def echelon(self) -> LocalEchelon:
        return LocalEchelon(self.relations, self.num_generators, self.p)

    @cached_property
    def normal_form(self) -> NormalForm:
        ech = self.echelon
        torsion = tuple(e for e in ech.invariant_valuations() if e > 0)
        return NormalForm(self.num_generators - ech.rank, torsion)

    @property
    def is_zero(self) -> bool:
        return self.normal_form.is_zero

    def residue_dimension(self) -> int:
        """dim over F_p of F_p tensor M, computed directly from the presentation."""
        return self.num_generators - rank_mod_p(self.relations, self.p)

    def contains_relation(self, vec: Sequence[int]) -> bool:
        """Whether ``vec`` is zero in the module (lies in the relation span)."""
        return self.echelon.contains(vec)

    def normalized(self) -> PresentedModule:
        nf = self.normal_form
        return self.ctx.module(nf.free_rank, nf.torsion)

    def __str__(self) -> str:
        return str(self.normal_form)


def _check_same_prime(*objs) -> PrimeContext:
    ctx = objs[0].ctx
    for o in objs[1:]:
        if o.ctx != ctx:
            raise ValueError(f"prime mismatch: {ctx.p} vs {o.ctx.p}")
    return ctx


@dataclass(frozen=True)
class ModuleMap:
    """A map of presented modules.

    ``matrix`` has one row per target generator and one column per source
    generator: column i is the image of source generator i. Composition is
    matrix multiplication, written ``g @ f`` for g after f.
    """

    source: PresentedModule
    target: PresentedModule
    matrix: tuple[tuple[int, ...], ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        _check_same_prime(self.source, self.target)
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(mat) != self.target.num_generators or any(
            len(row) != self.source.num_generators for row in mat
        ):
            raise ValueError(
                f"matrix shape does not match {self.target.num_generators} x "
                f"{self.source.num_generators}"
            )
        object.__setattr__(self, "matrix", mat)
        if self.check:
            self.require_well_defined()

    @property
    def ctx(self) -> PrimeContext:
        return self.source.ctx

    @property
    def p(self) -> int:
        return self.source.p

    def apply(self, vec: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, vec)) for row in self.matrix]

    def failing_relation(self) -> Optional[tuple[int, list[int]]]:
        """First source relation whose image is not a target relation, if any."""
        for i, rel in enumerate(self.source.relations):
            image = self.apply(rel)
            if any(image) and not self.target.contains_relation(image):
                return i, image
        return None

    def require_well_defined(self) -> None:
        bad = self.failing_relation()
        if bad is not None:
            raise IllDefinedMapError(*bad)

    def columns(self) -> list[list[int]]:
        return transpose(self.matrix, self.source.num_generators)

    def __matmul__(self, other: ModuleMap) -> ModuleMap:
        if other.target != self.source:
            raise ValueError("maps are not composable")
        mat = matmul(self.matrix, other.matrix, other.source.num_generators)
        return ModuleMap(other.source, self.target, mat, check=False)


def identity_map(m: PresentedModule) -> ModuleMap:
    n = m.num_generators
    return ModuleMap(m, m, [[int(i == j) for j in range(n)] for i in range(n)], check=False)


def scalar_map(m: PresentedModule, nu: int) -> ModuleMap:
    """Multiplication by an integer scalar nu."""
    n = m.num_generators
    return ModuleMap(m, m, [[nu * (i == j) for j in range(n)] for i in range(n)], check=False)


def quotient_map(ctx: PrimeContext, k: int) -> ModuleMap:
    """q : Z_p -> Z/p^k."""
    return ModuleMap(ctx.free(1), ctx.cyclic(k), [[1]])


def direct_sum(m: PresentedModule, n: PresentedModule) -> PresentedModule:
    ctx = _check_same_prime(m, n)
    a, b = m.num_generators, n.num_generators
    rels = [list(r) + [0] * b for r in m.relations]
    rels += [[0] * a + list(r) for r in n.relations]
    return PresentedModule(ctx, a + b, rels)


def direct_sum_all(mods: Sequence[PresentedModule], ctx: PrimeContext) -> PresentedModule:
    out = ctx.zero()
    for m in mods:
        out = direct_sum(out, m)
    return out


def tensor(m: PresentedModule, n: PresentedModule) -> PresentedModule:
    """Tensor product on generators e_i (x) f_j, ordered row-major in (i, j)."""
    ctx = _check_same_prime(m, n)
    a, b = m.num_generators, n.num_generators
    rels = []
    for r in m.relations:
        for j in range(b):
            row = [0] * (a * b)
            for i, c in enumerate(r):
                row[i * b + j] = c
            rels.append(row)
    for s in n.relations:
        for i in range(a):
            row = [0] * (a * b)
            for j, c in enumerate(s):
                row[i * b + j] = c
            rels.append(row)
    return PresentedModule(ctx, a * b, rels)


def tensor_maps(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    """f (x) g on tensor presentations (Kronecker product of matrices)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    F, G = f.matrix, g.matrix
    mat = [
        [F[a][i] * G[b][j] for i in range(f.source.num_generators) for j in range(g.source.num_generators)]
        for a in range(f.target.num_generators)
        for b in range(g.target.num_generators)
    ]
    return ModuleMap(src, tgt, mat, check=False)


def residue_map(f: ModuleMap) -> ModuleMap:
    """Z/p (x) f."""
    return tensor_maps(identity_map(f.ctx.cyclic(1)), f)


def map_cokernel(f: ModuleMap) -> PresentedModule:
    """Target generators modulo target relations and the image of f."""
    f.require_well_defined()
    rels = list(f.target.relations) + f.columns()
    return PresentedModule(f.ctx, f.target.num_generators, rels)


def nakayama_surjectivity(f: ModuleMap) -> bool:
    """Whether F_p (x) f is surjective.

    Works purely over F_p: the images of the source generators together
    with the target relations must span F_p^(target generators).
    """
    t = f.target.num_generators
    rows = list(f.target.relations) + f.columns()
    return rank_mod_p(rows, f.p) == t if rows else t == 0


def is_iso_map(f: ModuleMap) -> bool:
    """A surjection between abstractly isomorphic f.g. modules is an isomorphism."""
    return map_cokernel(f).is_zero and f.source.normal_form == f.target.normal_form


_TERM = re.compile(r"^(?:(?P<free>Zp)(?:\^(?P<r>\d+))?|Z/p(?:\^(?P<e>\d+))?|(?P<zero>0))$")


def parse_module(expr: str, ctx: PrimeContext) -> PresentedModule:
    """Parse ``Zp^r + Z/p^e1 + Z/p^e2 + ...`` (whitespace-insensitive).

    ``Zp`` and ``Z/p`` abbreviate exponent 1, and ``0`` is the zero module.
    """
    text = re.sub(r"\s+", "", expr)
    if not text:
        raise ModuleExpressionError("empty module expression")
    free_rank = 0
    torsion = []
    for term in text.split("+"):
        m = _TERM.match(term)
        if m is None:
            raise ModuleExpressionError(f"cannot parse term {term!r} in {expr!r}")
        if m.group("zero"):
            continue
        if m.group("free"):
            free_rank += int(m.group("r") or 1)
        else:
            e = int(m.group("e") or 1)
            if e < 1:
                raise ModuleExpressionError(f"torsion exponent must be >= 1 in {term!r}")
            torsion.append(e)
    return ctx.module(free_rank, torsion)
