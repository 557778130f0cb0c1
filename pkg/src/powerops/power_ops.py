"""Power operations T_n on finitely presented Z_p-modules at height 1.

T(M) is the free theta-algebra on M: the free theta-ring on the generators
of M modulo the theta-ideal generated by its relations. T_n(M) is the
weight-n part. The theta-ideal generated by linear relations r is the
ordinary ideal generated by all iterates theta^j(r), and in weight n only
iterates with p^j <= n can contribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .modules import (
    ModuleMap,
    NormalForm,
    PresentedModule,
    PrimeContext,
    direct_sum,
    direct_sum_all,
    is_iso_map,
    map_cokernel,
    quotient_map,
    residue_map,
    tensor,
)
from .theta import (
    ThetaMonomial,
    ThetaPolynomial,
    monomial_mul,
    substitute,
    theta_iterates,
    weight_monomials,
)


@dataclass(frozen=True)
class WeightPiece:
    """Weight-n part of a free theta-algebra modulo a theta-ideal."""

    weight: int
    monomial_basis: tuple[ThetaMonomial, ...]
    module: PresentedModule

    @property
    def normal_form(self) -> NormalForm:
        return self.module.normal_form


def _depth(n: int, p: int) -> int:
    """Number of theta-iterates of a weight-1 element of weight <= n."""
    count = 0
    while n >= 1 and p**count <= n:
        count += 1
    return count


def _ideal_slice(relations: Sequence[Sequence[int]], num_generators: int, n: int, p: int,
                 basis: Sequence[ThetaMonomial], with_theta: bool = True) -> list[list[int]]:
    index = {m: k for k, m in enumerate(basis)}
    depth = _depth(n, p) if with_theta else min(1, n)
    rows = []
    for rel in relations:
        if not any(rel):
            continue
        for j, it in enumerate(theta_iterates(ThetaPolynomial.linear(rel, p), depth)):
            if with_theta:
                cofactors = weight_monomials(num_generators, n - p**j, p)
            else:
                cofactors = _sym_monomials(num_generators, n - 1, p)
            for m in cofactors:
                shifted = ThetaPolynomial(p, {monomial_mul(m, t): c for t, c in it.terms.items()})
                rows.append(shifted.coefficient_vector(basis, index))
    return rows


def compute_Tn(m: PresentedModule, n: int,
               generator_weights: Optional[Sequence[int]] = None) -> WeightPiece:
    """T_n(M) materialized on the weight-n monomial basis.

    Any presentation is accepted: the theta-ideal is generated by the given
    relation rows, and isomorphic presentations give isomorphic answers.
    """
    if generator_weights is not None and any(w != 1 for w in generator_weights):
        raise ValueError("T_n is only defined here for generators of weight 1")
    if n < 0:
        raise ValueError("weight must be non-negative")
    p = m.p
    basis = tuple(weight_monomials(m.num_generators, n, p))
    rows = _ideal_slice(m.relations, m.num_generators, n, p, basis) if n else []
    return WeightPiece(n, basis, PresentedModule(m.ctx, len(basis), rows))


def _generator_images(f: ModuleMap) -> list[ThetaPolynomial]:
    p = f.p
    return [ThetaPolynomial.linear(col, p) for col in f.columns()]


def _theta_images(f: ModuleMap, n: int) -> dict[tuple[int, int], ThetaPolynomial]:
    depth = _depth(n, f.p)
    images = {}
    for i, z in enumerate(_generator_images(f)):
        for j, it in enumerate(theta_iterates(z, depth) if depth else []):
            images[i, j] = it
    return images


def compute_Tn_map(f: ModuleMap, n: int, *, check: bool = True,
                   source: Optional[WeightPiece] = None,
                   target: Optional[WeightPiece] = None) -> ModuleMap:
    """T_n(f) on monomial bases: prod (theta^j x_i)^a -> prod (theta^j f(x_i))^a.

    With ``check`` the result is verified to be well defined, so an
    ill-defined input map surfaces as IllDefinedMapError here too.
    """
    src = source or compute_Tn(f.source, n)
    tgt = target or compute_Tn(f.target, n)
    images = _theta_images(f, n)
    index = {m: k for k, m in enumerate(tgt.monomial_basis)}
    columns = []
    for mono in src.monomial_basis:
        poly = substitute(ThetaPolynomial(f.p, {mono: 1}), images)
        columns.append(poly.coefficient_vector(tgt.monomial_basis, index))
    matrix = [[col[r] for col in columns] for r in range(len(tgt.monomial_basis))]
    return ModuleMap(src.module, tgt.module, matrix, check=check)


def _sym_monomials(num_generators: int, n: int, p: int) -> list[ThetaMonomial]:
    return [m for m in weight_monomials(num_generators, n, p) if all(j == 0 for _, j, _ in m)]


def compute_sym(m: PresentedModule, n: int) -> tuple[tuple[ThetaMonomial, ...], PresentedModule]:
    """Sym^n(M): degree-n monomials in the generators modulo (relations)."""
    p = m.p
    basis = tuple(_sym_monomials(m.num_generators, n, p))
    rows = _ideal_slice(m.relations, m.num_generators, n, p, basis, with_theta=False) if n else []
    return basis, PresentedModule(m.ctx, len(basis), rows)


class SymComparison(NamedTuple):
    sym: PresentedModule
    comparison: ModuleMap
    is_iso: bool


def sym_n_and_compare(m: PresentedModule, n: int) -> SymComparison:
    """The monomial inclusion Sym^n M -> T_n M and whether it is an isomorphism."""
    sym_basis, sym = compute_sym(m, n)
    tn = compute_Tn(m, n)
    index = {mono: k for k, mono in enumerate(tn.monomial_basis)}
    matrix = [[0] * len(sym_basis) for _ in tn.monomial_basis]
    for col, mono in enumerate(sym_basis):
        matrix[index[mono]][col] = 1
    comparison = ModuleMap(sym, tn.module, matrix)
    return SymComparison(sym, comparison, is_iso_map(comparison))


def binomial_sides(m: PresentedModule, n_mod: PresentedModule, n: int) -> tuple[NormalForm, NormalForm]:
    """Normal forms of T_n(M + N) and of the sum over i+j=n of T_i(M) (x) T_j(N)."""
    lhs = compute_Tn(direct_sum(m, n_mod), n).normal_form
    pieces = [tensor(compute_Tn(m, i).module, compute_Tn(n_mod, n - i).module) for i in range(n + 1)]
    rhs = direct_sum_all(pieces, m.ctx).normal_form
    return lhs, rhs


def verify_binomial(m: PresentedModule, n_mod: PresentedModule, n: int) -> bool:
    lhs, rhs = binomial_sides(m, n_mod, n)
    return lhs == rhs


def Tn_via_coequalizer(m: PresentedModule, n: int) -> PresentedModule:
    """T_n(M) as the cokernel of T_n(d0) - T_n(d1).

    M is the coequalizer of the reflexive pair d0, d1 : F1 -> F0 where F0
    is free on the generators, F1 is free on generators plus relations,
    d0 sends each relation generator to its relation and d1 sends it to 0.
    T_n preserves reflexive coequalizers, so T_n(M) is F0's weight-n piece
    modulo the image of T_n(d0) - T_n(d1).
    """
    ctx = m.ctx
    g = m.num_generators
    rels = [r for r in m.relations if any(r)]
    f0 = ctx.free(g)
    f1 = ctx.free(g + len(rels))
    ident = [[int(i == j) for j in range(g)] for i in range(g)]
    d0 = [ident[i] + [r[i] for r in rels] for i in range(g)]
    d1 = [ident[i] + [0] * len(rels) for i in range(g)]
    src = compute_Tn(f1, n)
    tgt = compute_Tn(f0, n)
    t0 = compute_Tn_map(ModuleMap(f1, f0, d0), n, source=src, target=tgt, check=False)
    t1 = compute_Tn_map(ModuleMap(f1, f0, d1), n, source=src, target=tgt, check=False)
    diff = [[a - b for a, b in zip(r0, r1)] for r0, r1 in zip(t0.matrix, t1.matrix)]
    return map_cokernel(ModuleMap(src.module, tgt.module, diff, check=False))


class ScanResult(NamedTuple):
    n: int
    flags: list[bool]
    k0: Optional[int]

    def as_dict(self) -> dict:
        return {"n": self.n, "flags": list(self.flags), "k0": self.k0}


class TableRow(NamedTuple):
    k: int
    source: NormalForm
    target: NormalForm
    is_iso: bool


def residue_Tn_quotient(ctx: PrimeContext, n: int, k: int,
                        free_piece: Optional[WeightPiece] = None) -> ModuleMap:
    """Z/p (x) T_n(q_k) for the quotient q_k : Z_p -> Z/p^k."""
    q = quotient_map(ctx, k)
    tq = compute_Tn_map(q, n, source=free_piece, check=False)
    return residue_map(tq)


def residue_table(ctx: PrimeContext, n: int, k_max: int) -> list[TableRow]:
    free_piece = compute_Tn(ctx.free(1), n)
    rows = []
    for k in range(1, k_max + 1):
        f = residue_Tn_quotient(ctx, n, k, free_piece)
        rows.append(TableRow(k, f.source.normal_form, f.target.normal_form, is_iso_map(f)))
    return rows


def stabilization_scan(ctx: PrimeContext, n: int, k_max: int) -> ScanResult:
    """Test Z/p (x) T_n(q_k) for k = 1..k_max and find where it becomes an iso.

    k0 is the least k such that every k0 <= k <= k_max is an isomorphism,
    or None when the last flag is false.
    """
    if n < 1 or k_max < 1:
        raise ValueError("need n >= 1 and k_max >= 1")
    flags = [row.is_iso for row in residue_table(ctx, n, k_max)]
    k0 = None
    for k in range(k_max, 0, -1):
        if not flags[k - 1]:
            break
        k0 = k
    return ScanResult(n, flags, k0)
