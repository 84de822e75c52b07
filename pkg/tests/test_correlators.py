"""Tests for exact free-boson correlation functions."""

from fractions import Fraction
from itertools import permutations

import pytest

from voa import (ExpansionRegion, RationalCorrelator, State,
                 bootstrap_verify, consistency_check, expand, get_preset,
                 heisenberg_npoint)
from voa.correlators import (Term, VACUUM_PHI, matrix_element_coefficient,
                             state_insertion, zvar)
from voa.scalars import Poly


def _pole(i, j, mult):
    return RationalCorrelator([Term(Fraction(1), Poly.const(1),
                                    ((i, j, mult),), ())])


def _perfect_matchings(indices):
    if not indices:
        yield []
        return
    first, rest = indices[0], indices[1:]
    for pos, j in enumerate(rest):
        remaining = rest[:pos] + rest[pos + 1:]
        for m in _perfect_matchings(remaining):
            yield [(first, j)] + m


def _pairing_oracle(n):
    """Sum over perfect matchings of prod 1/(z_i - z_j)^2."""
    out = RationalCorrelator.zero()
    for matching in _perfect_matchings(list(range(1, n + 1))):
        prod = RationalCorrelator.constant(1)
        for i, j in matching:
            prod = prod * _pole(i, j, 2)
        out = out + prod
    return out


def test_two_point():
    f = heisenberg_npoint(VACUUM_PHI, 2)
    assert f == _pole(1, 2, 2)
    assert f.render() == "1/(z1-z2)^2"


@pytest.mark.parametrize("n,count", [(2, 1), (4, 3), (6, 15)])
def test_npoint_equals_pairing_formula(n, count):
    matchings = list(_perfect_matchings(list(range(1, n + 1))))
    assert len(matchings) == count  # (2m-1)!!
    assert heisenberg_npoint(VACUUM_PHI, n) == _pairing_oracle(n)


def test_odd_npoint_vanishes():
    for n in (1, 3, 5):
        assert heisenberg_npoint(VACUUM_PHI, n).is_zero


def test_expand_geometric_series():
    f = _pole(1, 2, 2)
    region = ExpansionRegion((zvar(1), zvar(2)))
    coeffs = expand(f, region, 6)
    # 1/(z1-z2)^2 = sum_{k>=0} (k+1) z2^k z1^{-2-k} for |z1| > |z2|
    for k in range(5):
        assert coeffs.get((-2 - k, k)) == k + 1
    # exponent tuples follow the region order, so in |z2| > |z1| the first
    # entry is the z2 exponent: 1/(z1-z2)^2 = sum (k+1) z1^k z2^{-2-k}
    other = ExpansionRegion((zvar(2), zvar(1)))
    coeffs2 = expand(f, other, 6)
    for k in range(5):
        assert coeffs2.get((-2 - k, k)) == k + 1


def test_matrix_element_matches_expansion():
    inst = get_preset("heisenberg", lam=0)
    alg = inst.algebra
    b = inst.gen_state("b")
    states = [b, b]
    f = heisenberg_npoint(VACUUM_PHI, 2)
    region = ExpansionRegion((zvar(1), zvar(2)))
    coeffs = expand(f, region, 8)
    for e1 in range(-4, 2):
        for e2 in range(-4, 2):
            direct = matrix_element_coefficient(alg, states, VACUUM_PHI,
                                                (e1, e2), region)
            assert direct == coeffs.get((e1, e2), Fraction(0))


def test_state_insertion_descriptors():
    inst = get_preset("heisenberg", lam=0)
    assert state_insertion(inst.algebra, State.vacuum()) is None
    assert state_insertion(inst.algebra, inst.state([("b", -1)])) == 0
    assert state_insertion(inst.algebra, inst.state([("b", -3)])) == 2
    with pytest.raises(ValueError):
        state_insertion(inst.algebra,
                        inst.state([("b", -1), ("b", -1)]))


def test_consistency_all_regions_n3():
    inst = get_preset("heisenberg", lam=0)
    alg = inst.algebra
    states = [inst.state([("b", -1)]), inst.state([("b", -2)]),
              inst.state([("b", -1)])]
    regions = [ExpansionRegion(tuple(zvar(i) for i in perm))
               for perm in permutations((1, 2, 3))]
    report = consistency_check(alg, states, VACUUM_PHI, regions, 8)
    assert report.passed, report.render()


def test_derivative_insertions():
    # <b(z1) (db)(z2)> = d/dz2 1/(z1-z2)^2 = 2/(z1-z2)^3
    f = heisenberg_npoint(VACUUM_PHI, 2, [0, 1])
    two_pt = heisenberg_npoint(VACUUM_PHI, 2)
    assert f == two_pt.deriv(2)
    assert f == _pole(1, 2, 3).scale(2)


def test_bootstrap():
    report = bootstrap_verify(VACUUM_PHI, 6)
    assert report.passed, report.render()


def test_correlator_arithmetic_and_json():
    f = _pole(1, 2, 1)
    assert f.deriv(1) == _pole(1, 2, 2).scale(-1)
    assert (f - f).is_zero
    doc = f.to_json()
    assert doc[0]["poles"] == [[1, 2, 1]]
