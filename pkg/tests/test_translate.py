from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from matrixmech.ladder import solve_quantum
from matrixmech.oscillator import Kind, OscillatorSpec
from matrixmech.series import LambdaSeries
from matrixmech.translate import AmpRef, Translation, translate_product


def terms_as_dict(t: Translation):
    return {term.factors: term.weight for term in t.terms}


def test_two_step_product():
    # a1*a1 at the second harmonic: single chained walk, unit weight
    t = translate_product([1, 1], 5, 2)
    assert terms_as_dict(t) == {(AmpRef.amp(4, 3), AmpRef.amp(5, 4)): Fraction(1)}


def test_mixed_product_symmetrized():
    # a1*a2 at the third harmonic: both factor orders, half weight each
    t = translate_product([1, 2], 5, 3)
    assert terms_as_dict(t) == {
        (AmpRef.amp(3, 2), AmpRef.amp(5, 3)): Fraction(1, 2),
        (AmpRef.amp(4, 2), AmpRef.amp(5, 4)): Fraction(1, 2),
    }


def test_dc_product_is_half_sum_of_round_trips():
    # a1*a1 acting on the spot: emission and absorption returns, half each
    t = translate_product([1, 1], 5, 0)
    assert terms_as_dict(t) == {
        (AmpRef.amp(5, 4), AmpRef.amp(5, 4)): Fraction(1, 2),
        (AmpRef.amp(6, 5), AmpRef.amp(6, 5)): Fraction(1, 2),
    }


def test_second_order_monomials():
    # a1*a4: an absorption-then-emission walk and its reverse
    t = translate_product([1, 4], 5, 3)
    assert terms_as_dict(t) == {
        (AmpRef.amp(2, 1), AmpRef.amp(5, 1)): Fraction(1, 2),
        (AmpRef.amp(6, 2), AmpRef.amp(6, 5)): Fraction(1, 2),
    }
    # a0*a3: the DC offset acts at either end
    t2 = translate_product([0, 3], 5, 3)
    assert terms_as_dict(t2) == {
        (AmpRef.amp(5, 2), AmpRef.dc(2)): Fraction(1, 2),
        (AmpRef.amp(5, 2), AmpRef.dc(5)): Fraction(1, 2),
    }


def test_combined_second_order_expression():
    # a1*a4 + 2*a0*a3 keeps the 1/2 on the first brace only
    t14 = translate_product([1, 4], 5, 3)
    t03 = translate_product([0, 3], 5, 3)
    combined = {}
    for term in t14.terms:
        combined[term.factors] = combined.get(term.factors, 0) + term.weight
    for term in t03.terms:
        combined[term.factors] = combined.get(term.factors, 0) + 2 * term.weight
    assert combined == {
        (AmpRef.amp(2, 1), AmpRef.amp(5, 1)): Fraction(1, 2),
        (AmpRef.amp(6, 2), AmpRef.amp(6, 5)): Fraction(1, 2),
        (AmpRef.amp(5, 2), AmpRef.dc(2)): Fraction(1),
        (AmpRef.amp(5, 2), AmpRef.dc(5)): Fraction(1),
    }


def test_floor_drops_paths_but_keeps_weights():
    # at n=0 only the absorption round trip survives, still at half weight
    t = translate_product([1, 1], 0, 0)
    assert terms_as_dict(t) == {(AmpRef.amp(1, 0), AmpRef.amp(1, 0)): Fraction(1, 2)}
    # two steps down from n=1 would pass through -1: empty but reachable
    t2 = translate_product([1, 1], 1, 2)
    assert t2.reachable and t2.is_empty


def test_unreachable_target_flagged():
    t = translate_product([1, 1], 5, 3)
    assert not t.reachable and t.is_empty
    with pytest.raises(ValueError):
        translate_product([], 5, 0)
    with pytest.raises(ValueError):
        translate_product([1], -1, 0)


def test_three_quanta_walks():
    # a1^3 to the third harmonic: the unique downward walk
    t = translate_product([1, 1, 1], 5, 3)
    assert terms_as_dict(t) == {
        (AmpRef.amp(3, 2), AmpRef.amp(4, 3), AmpRef.amp(5, 4)): Fraction(1)
    }


@settings(max_examples=60, deadline=None)
@given(
    factors=st.lists(st.integers(0, 3), min_size=1, max_size=4),
    tau=st.integers(0, 8),
)
def test_weights_sum_to_one_away_from_floor(factors, tau):
    # far from the ladder floor no walk is dropped, so the ordering/sign
    # average is a true average: the weights add up to exactly 1
    n = 40
    t = translate_product(factors, n, tau)
    if not t.reachable:
        return
    total = sum(term.weight for term in t.terms)
    assert total == Fraction(1)


def _amp_lookup(table):
    def lookup(ref: AmpRef) -> LambdaSeries:
        if ref.is_dc:
            return table.dc_series(ref.n).shifted(1)
        return table.amp(ref.n, ref.m)
    return lookup


def test_evaluation_against_solved_table():
    spec = OscillatorSpec(m=1, omega0=1, lam=1e-3, planck_h=3.141592653589793,
                          kind=Kind.QUADRATIC_FORCE)
    table = solve_quantum(spec, n_max=6, order=1)
    t = translate_product([1, 1], 2, 2)
    value = t.evaluate(_amp_lookup(table))
    expected = table.amp(2, 1) * table.amp(1, 0)
    assert abs((value - expected).max_abs()) < 1e-14


@settings(max_examples=60, deadline=None)
@given(
    factors=st.lists(st.integers(0, 3), min_size=1, max_size=3),
    n=st.integers(0, 6),
    tau=st.integers(0, 6),
)
def test_matrix_product_equivalence(factors, n, tau):
    """The walk sum equals the entry of the symmetrized matrix product.

    With per-factor matrices holding half amplitudes off the diagonal and
    the coupling-shifted DC offsets on it, the ordering-averaged product
    entry times 2^j/N_s (j nonzero factors, N_s admissible sign choices)
    must reproduce the translation exactly.
    """
    import itertools
    from matrixmech.translate import _sign_assignments

    spec = OscillatorSpec(m=1, omega0=1, lam=1e-3, kind=Kind.QUADRATIC_FORCE)
    table = solve_quantum(spec, n_max=8, order=1)
    dim = 16

    t = translate_product(factors, n, tau)
    n_signs = len(_sign_assignments(factors, tau))
    if n_signs == 0:
        assert not t.reachable
        return

    def factor_matrix(p):
        mat = [[LambdaSeries.zero() for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            if p == 0:
                mat[i][i] = table.dc_series(i).shifted(1)
            elif i + p < dim:
                half = table.amp(i + p, i).scaled(Fraction(1, 2))
                mat[i][i + p] = half
                mat[i + p][i] = half
        return mat

    def matmul(a, b):
        return [
            [sum((a[i][k] * b[k][j] for k in range(dim)), LambdaSeries.zero())
             for j in range(dim)]
            for i in range(dim)
        ]

    k = len(factors)
    total = LambdaSeries.zero()
    for perm in itertools.permutations(range(k)):
        prod = factor_matrix(factors[perm[0]])
        for idx in perm[1:]:
            prod = matmul(prod, factor_matrix(factors[idx]))
        if 0 <= n - tau < dim:
            total = total + prod[n][n - tau]
    import math
    j = sum(1 for p in factors if p)
    scale = Fraction(2**j, math.factorial(k) * n_signs)
    matrix_value = total.scaled(scale)

    walk_value = t.evaluate(_amp_lookup(table))
    assert (walk_value - matrix_value).max_abs() < 1e-12
