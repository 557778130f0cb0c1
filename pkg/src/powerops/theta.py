"""Polynomials in the free theta-ring on generators x_0, x_1, ...

The free theta-ring over Z_p on generators x_i is the polynomial ring on
the symbols theta^j x_i (j >= 0). The Adams operation psi is the ring
endomorphism with

    psi(theta^j x_i) = (theta^j x_i)^p + p * theta^(j+1) x_i

and theta(z) = (psi(z) - z^p) / p. Since the ring is p-torsion free this
pins theta down on every element, and the division is always exact.

Generators have weight 1 and theta multiplies weight by p, so the symbol
theta^j x_i has weight p^j.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

from .modules import ExactnessError

# A monomial is a tuple of (generator i, theta-depth j, multiplicity a >= 1)
# triples sorted by (i, j). The empty tuple is the monomial 1.
ThetaMonomial = tuple[tuple[int, int, int], ...]

ONE: ThetaMonomial = ()


def monomial_weight(m: ThetaMonomial, p: int) -> int:
    return sum(a * p**j for _, j, a in m)


def monomial_mul(m1: ThetaMonomial, m2: ThetaMonomial) -> ThetaMonomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps: dict[tuple[int, int], int] = {}
    for i, j, a in m1:
        exps[i, j] = a
    for i, j, a in m2:
        exps[i, j] = exps.get((i, j), 0) + a
    return tuple((i, j, a) for (i, j), a in sorted(exps.items()))


def monomial_str(m: ThetaMonomial) -> str:
    if not m:
        return "1"
    names = "xyzwuv"
    out = []
    for i, j, a in m:
        base = names[i] if i < len(names) else f"x{i}"
        if j == 1:
            base = f"θ{base}"
        elif j > 1:
            base = f"θ^{j}{base}"
        out.append(base if a == 1 else (f"({base})^{a}" if j else f"{base}^{a}"))
    return "·".join(out)


def theta_variables(num_generators: int, n: int, p: int) -> list[tuple[int, int]]:
    """Symbols theta^j x_i that can occur in weight n, sorted by (i, j)."""
    if n < 1:
        return []
    depth = 0
    while p ** (depth + 1) <= n:
        depth += 1
    return [(i, j) for i in range(num_generators) for j in range(depth + 1)]


@lru_cache(maxsize=None)
def _weight_monomials(num_generators: int, n: int, p: int) -> tuple[ThetaMonomial, ...]:
    variables = theta_variables(num_generators, n, p)
    out: list[ThetaMonomial] = []

    def rec(idx: int, remaining: int, acc: list[tuple[int, int, int]]) -> None:
        if idx == len(variables):
            if remaining == 0:
                out.append(tuple(acc))
            return
        i, j = variables[idx]
        w = p**j
        for a in range(remaining // w, -1, -1):
            if a:
                acc.append((i, j, a))
            rec(idx + 1, remaining - a * w, acc)
            if a:
                acc.pop()

    if n == 0:
        return (ONE,)
    rec(0, n, [])
    return tuple(out)


def weight_monomials(num_generators: int, n: int, p: int) -> list[ThetaMonomial]:
    """All monomials of weight n, in descending lexicographic order.

    The order compares exponent vectors indexed by (i, j) ascending, so for
    one generator and n = p the basis is [x^p, theta x].
    """
    if n < 0:
        raise ValueError("weight must be non-negative")
    return list(_weight_monomials(num_generators, n, p))


class ThetaPolynomial:
    """An integer polynomial in the symbols theta^j x_i."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Optional[Mapping[ThetaMonomial, int]] = None):
        self.p = p
        self.terms: dict[ThetaMonomial, int] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, c: int, p: int) -> ThetaPolynomial:
        return cls(p, {ONE: c})

    @classmethod
    def variable(cls, i: int, p: int, j: int = 0) -> ThetaPolynomial:
        return cls(p, {((i, j, 1),): 1})

    @classmethod
    def linear(cls, coeffs: Sequence[int], p: int) -> ThetaPolynomial:
        """sum_i coeffs[i] * x_i."""
        return cls(p, {((i, 0, 1),): c for i, c in enumerate(coeffs) if c})

    def _coerce(self, other: Union[ThetaPolynomial, int]) -> ThetaPolynomial:
        if isinstance(other, ThetaPolynomial):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return ThetaPolynomial.constant(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return ThetaPolynomial(self.p, terms)

    __radd__ = __add__

    def __neg__(self):
        return ThetaPolynomial(self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ThetaPolynomial(self.p, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[ThetaMonomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return ThetaPolynomial(self.p, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> ThetaPolynomial:
        if e < 0:
            raise ValueError("negative power")
        result = ThetaPolynomial.constant(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = ThetaPolynomial.constant(other, self.p)
        if not isinstance(other, ThetaPolynomial):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            parts.append(f"{c}" if m == ONE else f"{c}*{monomial_str(m)}")
        return " + ".join(parts)

    def weights(self) -> set[int]:
        return {monomial_weight(m, self.p) for m in self.terms}

    def homogeneous_components(self) -> dict[int, ThetaPolynomial]:
        parts: dict[int, dict[ThetaMonomial, int]] = {}
        for m, c in self.terms.items():
            parts.setdefault(monomial_weight(m, self.p), {})[m] = c
        return {w: ThetaPolynomial(self.p, t) for w, t in sorted(parts.items())}

    def coefficient_vector(self, basis: Sequence[ThetaMonomial],
                           index: Optional[Mapping[ThetaMonomial, int]] = None) -> list[int]:
        """Coordinates in ``basis``; every term must be a basis monomial."""
        if index is None:
            index = {m: k for k, m in enumerate(basis)}
        vec = [0] * len(basis)
        for m, c in self.terms.items():
            try:
                vec[index[m]] += c
            except KeyError:
                raise ValueError(f"monomial {monomial_str(m)} is not in the basis") from None
        return vec

    def psi(self) -> ThetaPolynomial:
        return adams(self)

    def theta(self) -> ThetaPolynomial:
        return theta_apply(self)


@lru_cache(maxsize=4096)
def _psi_symbol_power(i: int, j: int, a: int, p: int) -> ThetaPolynomial:
    v = ThetaPolynomial.variable(i, p, j)
    image = v**p + ThetaPolynomial.variable(i, p, j + 1) * p
    return image**a


def adams(z: ThetaPolynomial) -> ThetaPolynomial:
    """The Adams operation psi, a ring endomorphism lifting Frobenius."""
    p = z.p
    out = ThetaPolynomial(p)
    for m, c in z.terms.items():
        term = ThetaPolynomial.constant(c, p)
        for i, j, a in m:
            term = term * _psi_symbol_power(i, j, a, p)
        out = out + term
    return out


def theta_apply(z: ThetaPolynomial) -> ThetaPolynomial:
    """theta(z) = (psi(z) - z^p) / p, with the division checked to be exact."""
    p = z.p
    diff = adams(z) - z**p
    terms = {}
    for m, c in diff.terms.items():
        q, r = divmod(c, p)
        if r:
            raise ExactnessError(
                f"coefficient {c} of {monomial_str(m)} in psi(z) - z^p is not divisible by {p}"
            )
        terms[m] = q
    return ThetaPolynomial(p, terms)


def theta_iterates(z: ThetaPolynomial, count: int) -> list[ThetaPolynomial]:
    """[z, theta z, theta^2 z, ...] of length ``count``."""
    out = [z]
    for _ in range(count - 1):
        out.append(theta_apply(out[-1]))
    return out


def substitute(z: ThetaPolynomial, images: Mapping[tuple[int, int], ThetaPolynomial]) -> ThetaPolynomial:
    """Ring map sending each symbol theta^j x_i to ``images[(i, j)]``."""
    p = z.p
    out = ThetaPolynomial(p)
    for m, c in z.terms.items():
        term = ThetaPolynomial.constant(c, p)
        for i, j, a in m:
            term = term * images[i, j] ** a
        out = out + term
    return out
