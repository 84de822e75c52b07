"""Tests for state fields, reconstruction, and the translation operator."""

from fractions import Fraction

import pytest

from voa import (State, apply_mode, basis_monomials, get_preset,
                 lattice_vertex_op, state_field_mode, translate)
from voa.fields import field_weight, mono_field


@pytest.fixture(scope="module")
def heis():
    return get_preset("heisenberg", lam=0)


@pytest.fixture(scope="module")
def vir():
    return get_preset("virasoro")


def _basis_states(alg, D, sectors=(0,)):
    out = []
    for d in range(D + 1):
        for s in sectors:
            out.extend(State.monomial(m) for m in basis_monomials(alg, d, s))
    return out


def test_generator_field_matches_mode_action(heis):
    alg = heis.algebra
    b = alg.gen_index("b")
    A = heis.gen_state("b")
    for v in _basis_states(alg, 3):
        for p in range(-3, 4):
            assert state_field_mode(alg, A, p, v) == apply_mode(alg, b, p, v)


def test_vacuum_field_is_identity(heis, vir):
    for inst in (heis, vir):
        alg = inst.algebra
        vac = State.vacuum()
        for v in _basis_states(alg, 3):
            assert state_field_mode(alg, vac, 0, v) == v
            assert state_field_mode(alg, vac, 1, v).is_zero
            assert state_field_mode(alg, vac, -1, v).is_zero


def test_creation_axiom_constant_term(vir):
    # Y(A, z)|0> is regular at z = 0 with constant term A.
    alg = vir.algebra
    vac = State.vacuum()
    for A in _basis_states(alg, 4):
        d = alg.mono_degree(next(iter(A.terms)))
        assert state_field_mode(alg, A, -d, vac) == A
        for p in range(int(-d) + 1, int(-d) + 4):
            assert state_field_mode(alg, A, p, vac).is_zero


def test_translate_heisenberg_modes(heis):
    alg = heis.algebra
    # T b(-n)|0> = n b(-n-1)|0>
    for n in range(1, 5):
        v = heis.state([("b", -n)])
        assert translate(alg, v) == heis.state([("b", -n - 1)]).scale(n)
    assert translate(alg, State.vacuum()).is_zero


def test_translate_is_conformal_minus_one_mode(vir):
    alg = vir.algebra
    omega = vir.conformal
    for v in _basis_states(alg, 4):
        assert translate(alg, v) == state_field_mode(alg, omega, -1, v)


def test_conformal_zero_mode_grades(heis):
    alg = heis.algebra
    omega = heis.conformal
    for d in range(5):
        for m in basis_monomials(alg, d, 0):
            v = State.monomial(m)
            assert state_field_mode(alg, omega, 0, v) == v.scale(d)


def test_field_weight_and_mono_field(vir):
    alg = vir.algebra
    omega = vir.conformal
    mono = next(iter(omega.terms))
    fx, pref = mono_field(alg, mono)
    assert field_weight(alg, fx) == Fraction(2)
    assert pref == Fraction(1)


def test_composite_field_virasoro_bracket(vir):
    # omega_[m] acts as L_m: check on L(-2)L(-2)|0>.
    alg = vir.algebra
    omega = vir.conformal
    v = vir.state([("L", -2), ("L", -2)])
    L = alg.gen_index("L")
    for m in range(-2, 4):
        assert state_field_mode(alg, omega, m, v) == apply_mode(alg, L, m, v)


def test_fermion_field_anticommutes():
    inst = get_preset("fermion")
    alg = inst.algebra
    psi = inst.gen_state("psi")
    star = inst.gen_state("psi*")
    v = inst.state([("psi", -2), ("psi*", -1)])
    for p in range(-2, 3):
        for q in range(-2, 3):
            lhs = state_field_mode(alg, psi, p,
                                   state_field_mode(alg, star, q, v))
            rhs = state_field_mode(alg, star, q,
                                   state_field_mode(alg, psi, p, v))
            anti = lhs + rhs
            expect = v if p + q == 0 else State.zero()
            assert anti == expect


def test_lattice_vertex_operator_shifts_sector():
    inst = get_preset("lattice:1")
    alg = inst.algebra
    vac = State.vacuum()
    coeffs = lattice_vertex_op(inst, 1, range(-3, 3), vac)
    # Y(1_1, z)|0> = e^{...} z^{...} 1_1: the constant term is the shifted
    # vacuum itself and no singular term appears.
    nonzero = {e: s for e, s in coeffs.items() if not s.is_zero}
    assert State.vacuum(1) in nonzero.values()
    for e, s in nonzero.items():
        for mono in s.terms:
            assert mono.sector == 1


def test_commutative_field_has_no_singular_part():
    inst = get_preset("commutative")
    alg = inst.algebra
    x = inst.gen_state("x")
    for v in _basis_states(alg, 3):
        for p in range(1, 4):
            assert state_field_mode(alg, x, p, v).is_zero
