import random

import pytest
from hypothesis import given, settings, strategies as st

from powerops.linalg import matmul
from powerops.modules import (
    IllDefinedMapError,
    ModuleMap,
    PresentedModule,
    PrimeContext,
    identity_map,
    is_iso_map,
    quotient_map,
    residue_map,
    scalar_map,
)
from powerops.power_ops import (
    Tn_via_coequalizer,
    binomial_sides,
    compute_Tn,
    compute_Tn_map,
    stabilization_scan,
    sym_n_and_compare,
    verify_binomial,
)
from powerops.theta import weight_monomials

from helpers import random_map, random_module, random_unimodular, sympy_normal_form


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_Tp_of_Zp_is_rank_two(p):
    piece = compute_Tn(PrimeContext(p).free(1), p)
    assert piece.normal_form == (2, ())
    assert len(piece.monomial_basis) == 2


@pytest.mark.parametrize("p", [2, 3, 5])
def test_Tp_of_cyclic(p):
    ctx = PrimeContext(p)
    assert compute_Tn(ctx.cyclic(1), p).normal_form == (0, (2,))
    for k in range(2, 6):
        assert compute_Tn(ctx.cyclic(k), p).normal_form == (0, (k + 1, k - 1))


def test_Tp_of_cyclic_relation_matrix():
    # weight p slice for Z/p^k: p^k x^p and theta(p^k x) = p^k theta x + ((p^k - p^(kp))/p) x^p
    p, k = 3, 2
    piece = compute_Tn(PrimeContext(p).cyclic(k), p)
    a = p**k
    assert sorted(piece.module.relations) == sorted([(a, 0), ((a - a**p) // p, a)])


def test_low_weights_agree_with_sym():
    assert compute_Tn(PrimeContext(3).free(1), 2).normal_form == (1, ())
    assert compute_Tn(PrimeContext(2).free(1), 4).normal_form == (len(weight_monomials(1, 4, 2)), ())
    assert len(weight_monomials(1, 4, 2)) == 4


def test_weight_zero_and_empty():
    ctx = PrimeContext(3)
    assert compute_Tn(ctx.cyclic(2), 0).normal_form == (1, ())
    assert compute_Tn(ctx.zero(), 0).normal_form == (1, ())
    assert compute_Tn(ctx.zero(), 4).normal_form == (0, ())
    assert compute_Tn(ctx.module(1, [1]), 1).normal_form == (1, (1,))


def test_rejects_non_unit_generator_weights():
    ctx = PrimeContext(2)
    with pytest.raises(ValueError):
        compute_Tn(ctx.free(1), 2, generator_weights=[2])
    compute_Tn(ctx.free(1), 2, generator_weights=[1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_Tn_independent_of_presentation(seed, p):
    rng = random.Random(seed)
    ctx = PrimeContext(p)
    m = random_module(rng, ctx, max_gens=2, max_exp=2)
    g = m.num_generators
    rels = [list(r) for r in m.relations]
    if rng.random() < 0.5:
        # a relation with a unit coefficient kills an extra generator
        rels = [r + [0] for r in rels] + [[0] * g + [rng.choice([1, p + 1, -1])]]
        g += 1
    row_op = random_unimodular(rng, len(rels))
    col_op = random_unimodular(rng, g)
    changed = matmul(matmul(row_op, rels, g), col_op, g) if rels else []
    other = PresentedModule(ctx, g, changed)
    assert other.normal_form == m.normal_form
    n = rng.randint(1, p * p)
    assert compute_Tn(other, n).normal_form == compute_Tn(m, n).normal_form


@pytest.mark.parametrize("p", [2, 3, 5])
def test_Tn_of_identity_is_identity(p):
    ctx = PrimeContext(p)
    m = ctx.module(1, [2])
    for n in range(0, p + 2):
        t = compute_Tn_map(identity_map(m), n)
        size = len(t.matrix)
        assert t.matrix == tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_Tp_of_multiplication_by_p(p):
    t = compute_Tn_map(scalar_map(PrimeContext(p).free(1), p), p)
    # columns are the images of [x^p, theta x]
    assert t.matrix == ((p**p, 1 - p ** (p - 1)), (0, p))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_Tp_of_quotient_residue(p):
    ctx = PrimeContext(p)
    flags = [is_iso_map(residue_map(compute_Tn_map(quotient_map(ctx, k), p))) for k in range(1, 5)]
    assert flags == [False, True, True, True]


def test_Tn_map_propagates_ill_definedness():
    ctx = PrimeContext(2)
    bad = ModuleMap(ctx.cyclic(1), ctx.free(1), [[1]], check=False)
    with pytest.raises(IllDefinedMapError):
        compute_Tn_map(bad, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_functoriality(seed, p):
    rng = random.Random(seed)
    ctx = PrimeContext(p)
    a, b, c = (random_module(rng, ctx) for _ in range(3))
    f, g = random_map(rng, a, b), random_map(rng, b, c)
    n = rng.randint(0, p * p)
    assert compute_Tn_map(g @ f, n).matrix == (compute_Tn_map(g, n) @ compute_Tn_map(f, n)).matrix


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sym_comparison_below_p(p):
    ctx = PrimeContext(p)
    for m in (ctx.free(1), ctx.free(2), ctx.cyclic(2)):
        for n in range(1, p):
            assert sym_n_and_compare(m, n).is_iso


@pytest.mark.parametrize("p", [2, 3, 5])
def test_sym_comparison_at_p(p):
    ctx = PrimeContext(p)
    sym, comparison, iso = sym_n_and_compare(ctx.free(1), p)
    assert sym.normal_form == (1, ())
    assert comparison.target.normal_form == (2, ())
    assert not iso
    assert sym_n_and_compare(ctx.cyclic(2), 1).is_iso
    assert sym_n_and_compare(ctx.cyclic(2), 1).sym.normal_form == (0, (2,))


def test_binomial_examples():
    ctx = PrimeContext(2)
    lhs, rhs = binomial_sides(ctx.free(1), ctx.free(1), 2)
    # 1*2 + 1*1 + 2*1 on the right; two-generator weight-2 monomials on the left
    assert len(weight_monomials(2, 2, 2)) == 5
    assert lhs == rhs == (5, ())
    m = ctx.module(1, [2])
    assert verify_binomial(m, ctx.zero(), 3)
    ctx3 = PrimeContext(3)
    assert verify_binomial(ctx3.free(1), ctx3.cyclic(1), 3)


def test_binomial_hand_count_Z3_plus_Z3mod3():
    # T_3(Zp + Z/3): T_3(Zp) (x) T_0 + T_2(Zp) (x) T_1(Z/3) + T_1(Zp) (x) T_2(Z/3) + T_0 (x) T_3(Z/3)
    #   = Zp^2 + Z/3 + Z/3 + (Z/9 + 0)       [T_2(Z/3) = Sym^2 = Z/3, T_3(Z/3) = Z/9]
    ctx = PrimeContext(3)
    lhs, rhs = binomial_sides(ctx.free(1), ctx.cyclic(1), 3)
    assert lhs == rhs == (2, (2, 1, 1))


@pytest.mark.parametrize("p", [2, 3])
def test_coequalizer_path_matches(p):
    ctx = PrimeContext(p)
    for k in range(1, 4):
        for n in range(1, p * p + 1):
            m = ctx.cyclic(k)
            assert Tn_via_coequalizer(m, n).normal_form == compute_Tn(m, n).normal_form


def test_coequalizer_path_general_presentation():
    ctx = PrimeContext(2)
    m = PresentedModule(ctx, 2, [[4, 2], [0, 6]])
    for n in range(1, 5):
        assert Tn_via_coequalizer(m, n).normal_form == compute_Tn(m, n).normal_form


def weight4_relations_p2(k):
    """Weight-4 slice of the theta-ideal of (2^k x), basis [x^4, x^2 θx, (θx)^2, θ^2 x].

    Hand derivation with a = 2^k, b = θ(a) = (a - a^2)/2, c = θ(b) = (b - b^2)/2:
      x^3 * a x, x θx * a x                    -> [a,0,0,0], [0,a,0,0]
      x^2 * θ(ax), θx * θ(ax), θ(ax) = aθx + bx^2 -> [b,a,0,0], [0,b,a,0]
      θ^2(ax) = θ(aθx) + θ(bx^2) - ab x^2θx
              = aθ^2x + b(θx)^2 + c x^4 + 2b(x^2θx + (θx)^2) - ab x^2θx
                                                -> [c, 2b - ab, 3b, a]
    """
    a = 2**k
    b = (a - a * a) // 2
    c = (b - b * b) // 2
    return [[a, 0, 0, 0], [0, a, 0, 0], [b, a, 0, 0], [0, b, a, 0], [c, 2 * b - a * b, 3 * b, a]]


def test_weight4_stabilization_against_hand_snf():
    ctx = PrimeContext(2)
    scan = stabilization_scan(ctx, 4, 10)
    for k in range(1, 11):
        free_rank, torsion = sympy_normal_form(weight4_relations_p2(k), 4, 2)
        assert compute_Tn(ctx.cyclic(k), 4).normal_form == (free_rank, torsion)
        # Z/2 (x) T_4(q_k) is iso exactly when all four summands survive mod 2
        assert scan.flags[k - 1] == (free_rank == 0 and len(torsion) == 4)
    assert scan.k0 == 3
    assert scan.flags[:3] == [False, False, True]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_stabilization_scan_examples(p):
    ctx = PrimeContext(p)
    scan = stabilization_scan(ctx, p, 8)
    assert scan.flags == [False] + [True] * 7
    assert scan.k0 == 2
    scan1 = stabilization_scan(ctx, 1, 4)
    assert scan1.flags == [True] * 4 and scan1.k0 == 1


def test_stabilization_scan_below_p_starts_at_one():
    scan = stabilization_scan(PrimeContext(3), 2, 4)
    assert scan.k0 == 1


def test_stabilization_scan_reports_none_when_last_flag_false():
    scan = stabilization_scan(PrimeContext(2), 4, 2)
    assert scan.flags == [False, False]
    assert scan.k0 is None


def test_stabilization_scan_bounds():
    with pytest.raises(ValueError):
        stabilization_scan(PrimeContext(2), 0, 3)
