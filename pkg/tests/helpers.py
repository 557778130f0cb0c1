"""Shared generators and independent oracles for the test suite."""

import itertools
import random

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from powerops.linalg import valuation
from powerops.modules import ModuleMap, PresentedModule, PrimeContext


def sympy_normal_form(rows, ncols, p):
    """Integer Smith form via sympy, then drop the prime-to-p parts."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return ncols, ()
    factors = [int(d) for d in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [d for d in factors if d != 0]
    torsion = sorted((valuation(d, p) for d in nonzero if d % p == 0), reverse=True)
    return ncols - len(nonzero), tuple(torsion)


def random_unimodular(rng: random.Random, n: int, steps: int = 6):
    """A random integer matrix of determinant +-1 built from elementary moves."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    if n < 2:
        return [[rng.choice((1, -1))]] if n else []
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-3, 3)
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        if rng.random() < 0.3:
            m[i], m[j] = m[j], m[i]
    return m


def summand_types(max_gens=2, max_exp=3):
    """Normal-form module shapes: tuples of None (free) or torsion exponents."""
    kinds = [None] + list(range(1, max_exp + 1))
    out = []
    for g in range(max_gens + 1):
        out += list(itertools.combinations_with_replacement(kinds, g))
    return out


def module_from_types(ctx: PrimeContext, types):
    free = sum(1 for t in types if t is None)
    return ctx.module(free, [t for t in types if t is not None])


def random_module(rng, ctx, max_gens=2, max_exp=3):
    types = [rng.choice([None] + list(range(1, max_exp + 1))) for _ in range(rng.randint(0, max_gens))]
    return module_from_types(ctx, types)


def _generator_exponents(m: PresentedModule):
    """Torsion exponent of each generator of a diagonal presentation (None = free)."""
    exps = [None] * m.num_generators
    for rel in m.relations:
        (idx, c), = [(i, c) for i, c in enumerate(rel) if c]
        exps[idx] = valuation(c, m.p)
    return exps


def random_map(rng, src: PresentedModule, tgt: PresentedModule, spread=4):
    """A random well-defined map between diagonal presentations."""
    p = src.p
    a_exps = _generator_exponents(src)
    b_exps = _generator_exponents(tgt)
    matrix = []
    for b in b_exps:
        row = []
        for a in a_exps:
            if b is None:
                row.append(0 if a is not None else rng.randint(-spread, spread))
            elif a is None:
                row.append(rng.randint(-spread, spread))
            else:
                row.append(p ** max(b - a, 0) * rng.randint(-spread, spread))
        matrix.append(row)
    return ModuleMap(src, tgt, matrix)


def entry_choices(p, a, b, coeffs):
    """Entries allowed for a generator of exponent a mapping to one of exponent b."""
    if b is None:
        return [0] if a is not None else list(coeffs)
    if a is None:
        return list(coeffs)
    return [p ** max(b - a, 0) * c for c in coeffs]


def all_maps(src: PresentedModule, tgt: PresentedModule, coeffs):
    p = src.p
    a_exps = _generator_exponents(src)
    b_exps = _generator_exponents(tgt)
    cells = [entry_choices(p, a, b, coeffs) for b in b_exps for a in a_exps]
    s = src.num_generators
    for entries in itertools.product(*cells):
        matrix = [list(entries[r * s:(r + 1) * s]) for r in range(len(b_exps))]
        yield ModuleMap(src, tgt, matrix)
