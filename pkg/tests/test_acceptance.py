"""Acceptance gate: one printed pass/fail line per criterion.

Run with `python3 -m pytest tests/test_acceptance.py -s` to see the lines.
"""

import json
import subprocess
import sys
import time
from fractions import Fraction
from itertools import permutations
from pathlib import Path

import pytest

from voa import (BracketRule, CentralTerm, CoordChange, ExpansionRegion,
                 GeneratorSpec, ModeAlgebra, ParamPoint, Poly, Scalar, State,
                 apply_mode, basis_monomials, boson_fermion_character_check,
                 bootstrap_verify, character, consistency_check, coset_graded,
                 decompose, get_preset, heisenberg_npoint, huang_check,
                 lattice_theta_character, locality_order, parse_scalar,
                 primary_differential_check, reconstruct, singular_part,
                 state_field_mode, sugawara, translate, verify_axioms)
from voa.correlators import VACUUM_PHI, zvar
from voa.ope import apply_combination, commutator_via_formula

FIXTURES = Path(__file__).parent / "fixtures"


def _report(n, desc, ok):
    print(f"\ncriterion {n} ({desc}): {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {n} failed: {desc}"


# -- criterion 1: axiom verification across all presets -----------------------

VERIFY_PLAN = [
    ("heisenberg", 4), ("virasoro", 4), ("affine:sl2", 4), ("fermion", 4),
    ("weyl:1", 4), ("lattice:1", 4), ("lattice:2", 4), ("commutative", 4),
    ("affine:sl3", 3), ("lattice:3", 3),
]


def test_criterion_1_verify_all_presets():
    ok = True
    detail = []
    for name, D in VERIFY_PLAN:
        inst = get_preset(name)
        t0 = time.monotonic()
        report = verify_axioms(inst.algebra, D)
        dt = time.monotonic() - t0
        passed = report.passed and dt < 120
        detail.append(f"  {name} D={D}: "
                      f"{'pass' if report.passed else 'FAIL'} ({dt:.1f}s)")
        ok = ok and passed
    # negative control: corrupted bracket must fail with a witness
    corrupted = ModeAlgebra(
        "heisenberg-corrupted", [GeneratorSpec("b", Fraction(1))],
        {(0, 0): BracketRule((), CentralTerm(Scalar.one(), Poly.const(1)))})
    neg = verify_axioms(corrupted, 2)
    neg_ok = (not neg.passed) and any(c.witness for c in neg.checks
                                      if not c.passed)
    detail.append(f"  negative control: "
                  f"{'fails with witness' if neg_ok else 'MISSED'}")
    print()
    for line in detail:
        print(line)
    _report(1, "verify_axioms on all presets + negative control",
            ok and neg_ok)


# -- criterion 2: conformal OPE table in every conformal preset ---------------

CONFORMAL_PRESETS = ["heisenberg", "virasoro", "affine:sl2", "affine:sl3",
                     "fermion", "weyl:1", "lattice:1", "lattice:2"]


def test_criterion_2_conformal_ope_table():
    ok = True
    for name in CONFORMAL_PRESETS:
        inst = get_preset(name)
        alg = inst.algebra
        omega = inst.conformal
        table = singular_part(alg, omega, omega)
        good = (set(table) <= {4, 3, 2, 1}
                and table.get(3, State.zero()).is_zero
                and table[4] == State.vacuum().scale(inst.central_charge / 2)
                and table[2] == omega.scale(2)
                and table[1] == translate(alg, omega))
        ok = ok and good
    _report(2, "singular_part(omega, omega) = {4: (c/2)|0>, 2: 2w, 1: Tw}",
            ok)


# -- criterion 3: commutator-formula regeneration -----------------------------

def _basis_to(alg, D):
    out = []
    for d in range(D + 1):
        out.extend(State.monomial(m) for m in basis_monomials(alg, d, 0))
    return out


def test_criterion_3_commutator_regeneration():
    ok = True
    # Virasoro: [L_m, L_n] = (m-n) L_{m+n} + ((m^3-m)/12) delta_{m+n,0} c
    vir = get_preset("virasoro")
    alg = vir.algebra
    omega = vir.conformal
    L = alg.gen_index("L")
    c = Scalar.param("c")
    for v in _basis_to(alg, 5):
        for m in range(-3, 4):
            for n in range(-3, 4):
                comb = commutator_via_formula(alg, omega, m, omega, n)
                got = apply_combination(alg, comb, v)
                expect = apply_mode(alg, L, m + n, v).scale(Fraction(m - n))
                if m + n == 0:
                    expect = expect + v.scale(c * Fraction(m ** 3 - m, 12))
                if got != expect:
                    ok = False
    # affine sl2: [x_m, y_n] = [x,y]_{m+n} + m (x,y) k delta_{m+n,0}
    inst = get_preset("affine:sl2")
    alg = inst.algebra
    lie = inst.lie
    k = Scalar.param("k")
    gens = [(i, inst.gen_state(nm)) for i, nm in enumerate(lie.basis)]
    states = _basis_to(alg, 5)
    for i, A in gens:
        for j, B in gens:
            for m in range(-3, 4):
                for n in range(-3, 4):
                    comb = commutator_via_formula(alg, A, m, B, n)
                    for v in states:
                        got = apply_combination(alg, comb, v)
                        expect = State.zero()
                        for t, coeff in lie.bracket.get((i, j), {}).items():
                            expect = expect + apply_mode(
                                alg, t, m + n, v).scale(coeff)
                        if m + n == 0 and lie.form[i][j]:
                            expect = expect + v.scale(
                                k * (lie.form[i][j] * m))
                        if got != expect:
                            ok = False
    _report(3, "commutator formula regenerates Virasoro and affine "
               "relations to degree 5, |m|,|n| <= 3", ok)


# -- criterion 4: central charges and the Sugawara oracle ---------------------

def test_criterion_4_central_charge_and_sugawara():
    heis = get_preset("heisenberg")
    table = singular_part(heis.algebra, heis.conformal, heis.conformal)
    c_sym = parse_scalar("1 - 12*lam^2")
    ok = (heis.central_charge == c_sym
          and table[4] == State.vacuum().scale(c_sym / 2))

    doc = json.loads((FIXTURES / "sugawara_sl2_l2_oracle.json").read_text())
    A = parse_scalar(doc["normalization_A"])
    k = Scalar.param("k")
    contraction = Scalar.zero()
    for term in doc["contraction_terms"]:
        contraction = contraction + (parse_scalar(term["coefficient"])
                                     * parse_scalar(term["form_value"]))
    oracle = A * A * (parse_scalar(doc["casimir_coeff"]) * k
                      + parse_scalar(doc["double_central_coeff"]) * k * k) \
        * contraction
    ok = ok and oracle == parse_scalar(doc["expected_scalar"])

    inst = get_preset("affine:sl2")
    omega = sugawara(inst)
    got = state_field_mode(inst.algebra, omega, 2, omega)
    ok = ok and got == State.vacuum().scale(oracle)
    ok = ok and got == State.vacuum().scale(parse_scalar("3*k/(2*(k+2))"))
    _report(4, "c = 1 - 12 lam^2 and Sugawara L_2 w = (3k/(2k+4)) v_k "
               "vs hand-expanded oracle", ok)


# -- criterion 5: center of V_k(sl2) ------------------------------------------

def test_criterion_5_center_sl2():
    t0 = time.monotonic()
    generic = get_preset("affine:sl2")
    currents = [s for _, s in generic.generator_states()]
    ok = all(len(coset_graded(generic.algebra, currents, d)) == 0
             for d in range(1, 4))
    critical = get_preset("affine:sl2", level=-2)
    crit_currents = [s for _, s in critical.generator_states()]
    ok = ok and len(coset_graded(critical.algebra, crit_currents, 2)) == 1
    dt = time.monotonic() - t0
    ok = ok and dt < 60
    _report(5, f"center of V_k(sl2): generic degrees 1..3 trivial, "
               f"dimension 1 at k=-2 degree 2 ({dt:.1f}s)", ok)


# -- criterion 6: correlation functions ---------------------------------------

def _perfect_matchings(indices):
    if not indices:
        yield []
        return
    first, rest = indices[0], indices[1:]
    for pos, j in enumerate(rest):
        remaining = rest[:pos] + rest[pos + 1:]
        for m in _perfect_matchings(remaining):
            yield [(first, j)] + m


def test_criterion_6_correlators():
    from voa.correlators import RationalCorrelator, Term
    ok = True
    for n, count in ((2, 1), (4, 3), (6, 15)):
        oracle = RationalCorrelator.zero()
        matchings = list(_perfect_matchings(list(range(1, n + 1))))
        ok = ok and len(matchings) == count
        for matching in matchings:
            prod = RationalCorrelator.constant(1)
            for i, j in matching:
                prod = prod * RationalCorrelator(
                    [Term(Fraction(1), Poly.const(1), ((i, j, 2),), ())])
            oracle = oracle + prod
        ok = ok and heisenberg_npoint(VACUUM_PHI, n) == oracle
    ok = ok and bootstrap_verify(VACUUM_PHI, 6).passed
    # region independence for n <= 4, all expansion regions
    inst = get_preset("heisenberg", lam=0)
    alg = inst.algebra
    for states in ([inst.state([("b", -1)])] * 2,
                   [inst.state([("b", -1)]), inst.state([("b", -2)]),
                    inst.state([("b", -1)])],
                   [inst.state([("b", -1)])] * 4):
        n = len(states)
        regions = [ExpansionRegion(tuple(zvar(i) for i in perm))
                   for perm in permutations(range(1, n + 1))]
        rep = consistency_check(alg, states, VACUUM_PHI, regions, 8)
        ok = ok and rep.passed
    _report(6, "n-point pairing formula, bootstrap to n=6, region "
               "independence to n=4", ok)


# -- criterion 7: characters ---------------------------------------------------

def _partition_oracle(cutoff, min_part=1):
    def count(n, largest):
        if n == 0:
            return 1
        return sum(count(n - p, p) for p in range(min_part, largest + 1)
                   if p <= n)
    return [count(d, d) for d in range(cutoff + 1)]


def test_criterion_7_characters():
    ok = True
    heis = character(get_preset("heisenberg", lam=0), cutoff=10)
    for d, p in enumerate(_partition_oracle(10)):
        ok = ok and heis.coefficient(d) == p
    vir = character(get_preset("virasoro"), cutoff=10,
                    point=ParamPoint(c="1"))
    for d, p in enumerate(_partition_oracle(10, min_part=2)):
        ok = ok and vir.coefficient(d) == p
    for N in (1, 2, 3):
        inst = get_preset(f"lattice:{N}")
        total = None
        m = 0
        while inst.algebra.sector_energy(m) <= 6:
            for s in ([0] if m == 0 else [m, -m]):
                ch = character(inst, sector=s, cutoff=6)
                total = ch if total is None else total + ch
            m += 1
        ok = ok and total == lattice_theta_character(N, 6)
    ok = ok and boson_fermion_character_check(4).passed
    _report(7, "partition/parts>=2 counts to q^10, lattice theta vs "
               "sectors N<=3, boson-fermion dims to doubled degree 8", ok)


# -- criterion 8: coordinate changes ------------------------------------------

def test_criterion_8_coordinates():
    import random
    ok = True
    rng = random.Random(11)
    for M in range(1, 7):
        for _ in range(4):
            coeffs = [Scalar.from_fraction(Fraction(rng.randint(1, 4)))]
            coeffs += [Scalar.from_fraction(
                Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
                for _ in range(M - 1)]
            rho = CoordChange(tuple(coeffs))
            ok = ok and reconstruct(decompose(rho)) == rho
    heis = get_preset("heisenberg", lam=0)
    a = Scalar.param("a")
    scaling = CoordChange((a,))
    for A in (heis.state([("b", -1)]), heis.conformal):
        ok = ok and huang_check(heis, A, scaling, window=2, D=4).passed
    eps = Scalar.param("eps")
    quad = CoordChange((Scalar.one(), eps))
    b1 = heis.state([("b", -1)])
    ok = ok and huang_check(heis, b1, quad, window=2, D=2,
                            first_order_in="eps").passed
    ok = ok and primary_differential_check(heis, b1, quad, window=2, D=2,
                                           first_order_in="eps").passed
    sl2 = get_preset("affine:sl2")
    current = sl2.gen_state("e")
    ok = ok and primary_differential_check(sl2, current, quad, window=2,
                                           D=2,
                                           first_order_in="eps").passed
    _report(8, "charge decomposition round-trips M<=6, transformation "
               "formula for scaling/quadratic changes, primary checks", ok)


# -- criterion 9: CLI determinism ---------------------------------------------

CLI_CASES = [
    ["ope", "--algebra", "virasoro", "--a", "L(-2) |0>", "--b", "L(-2) |0>"],
    ["character", "--algebra", "heisenberg", "--lambda", "0",
     "--cutoff", "8", "--json"],
    ["npoint", "--n", "4", "--json"],
    ["verify", "--algebra", "heisenberg", "--degree", "2", "--json"],
    ["center", "--algebra", "affine:sl2", "--param", "k=-2",
     "--degree", "2", "--json"],
]


def test_criterion_9_cli_determinism():
    ok = True
    for argv in CLI_CASES:
        runs = [subprocess.run([sys.executable, "-m", "voa.cli"] + argv,
                               capture_output=True, check=True).stdout
                for _ in range(2)]
        ok = ok and runs[0] == runs[1] and bool(runs[0])
    _report(9, "identical CLI invocations produce identical bytes", ok)
