"""OPE singular parts, commutator formula, locality, axiom verification.

Modes follow the weight-shifted convention of the fields module:
Y(A, z) = sum_p A_[p] z^(-p - wt A), so the pole order of the term A_[p]B in
the OPE is j = p + wt A, and A_[p]B vanishes once p exceeds deg B.

The associativity check uses the finite coefficient identities that the
re-expansion of Y(A,z)Y(B,w)C into Y(Y(A,z-w)B,w)C imposes on singular
products: for n >= 0 (in the unshifted indexing Y(A,z) = sum A_(n) z^{-n-1})

  (A_(n)B)_(m) = sum_{i=0..n} (-1)^i C(n,i)
                 (A_(n-i) B_(m+i) - (-1)^{n+|A||B|} B_(n+m-i) A_(i)),

which is exhaustive over a computed mode window (the coefficient-wise
domain swap involves no other finite data).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .scalars import Scalar
from .fock import ModeAlgebra, State, all_sector_monomials, render_state
from .fields import state_field_mode, translate
from .linalg import kernel_basis


class NotLocalUpTo(Exception):
    def __init__(self, D, witness=None):
        super().__init__(f"no locality order found up to degree bound {D}")
        self.D = D
        self.witness = witness


def gbinom(a, k: int) -> Fraction:
    """Binomial coefficient with integer (possibly negative) upper index."""
    if k < 0:
        return Fraction(0)
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(a - i, i + 1)
    return num


def state_parity(alg: ModeAlgebra, state: State) -> int:
    ps = {alg.mono_parity(m) for m in state.terms}
    if len(ps) > 1:
        raise ValueError("state has mixed parity")
    return ps.pop() if ps else 0


def _weight(alg, A):
    return A.degree(alg)


def _max_target_degree(alg, B):
    """Largest p with A_[p]B possibly nonzero: result degree must be >= 0."""
    return max(alg.mono_degree(m) for m in B.terms)


# ---------------------------------------------------------------------------
# Singular part and commutator formula
# ---------------------------------------------------------------------------

def singular_part(alg: ModeAlgebra, A: State, B: State) -> dict:
    """Poles of Y(A,z)B as {pole order j >= 1: State}."""
    dA = _weight(alg, A)
    poles = {}
    p = 1 - dA
    p_max = _max_target_degree(alg, B)
    while p <= p_max:
        v = state_field_mode(alg, A, p, B)
        if not v.is_zero:
            j = p + dA
            assert j.denominator == 1
            poles[int(j)] = v
        p += 1
    return poles


def commutator_via_formula(alg: ModeAlgebra, A: State, m, B: State, kk):
    """[A_[m], B_[kk]] as a finite combination sum_n C(..) (A_[n]B)_[m+kk].

    Returns (terms, mode) where terms is a list of (Fraction, State) and the
    combination acts as sum coeff * state_field_mode(state, mode, .).
    """
    dA = _weight(alg, A)
    m = Fraction(m)
    terms = []
    p = 1 - dA
    p_max = _max_target_degree(alg, B)
    while p <= p_max:
        AB = state_field_mode(alg, A, p, B)
        if not AB.is_zero:
            c = gbinom(m + dA - 1, int(p + dA - 1))
            if c:
                terms.append((c, AB))
        p += 1
    return terms, m + Fraction(kk)


def apply_combination(alg: ModeAlgebra, combination, C: State) -> State:
    terms, mode = combination
    out = State.zero()
    for c, AB in terms:
        out = out + state_field_mode(alg, AB, mode, C).scale(c)
    return out


def commutator_direct(alg: ModeAlgebra, A: State, m, B: State, kk,
                      C: State) -> State:
    """[A_[m], B_[kk]] C by two mode-application orders (supercommutator).

    Memoized: the finite-difference windows of the locality check revisit
    the same mode pairs many times.
    """
    key = ("cd", A, m, B, kk, C)
    hit = alg._apply_memo.get(key)
    if hit is not None:
        return hit
    eps = -1 if (state_parity(alg, A) and state_parity(alg, B)) else 1
    first = state_field_mode(alg, A, m, state_field_mode(alg, B, kk, C))
    second = state_field_mode(alg, B, kk, state_field_mode(alg, A, m, C))
    result = first - second.scale(eps)
    alg._apply_memo[key] = result
    return result


# ---------------------------------------------------------------------------
# Locality
# ---------------------------------------------------------------------------

def _charge(alg, state: State) -> int:
    qs = {m.sector for m in state.terms}
    if len(qs) > 1:
        raise ValueError("state has mixed charge")
    return qs.pop() if qs else 0


def _locality_windows(alg, A, B, C, N, cap):
    """Mode pairs (r, t) to test for the (z-w)^N kernel on C.

    Modes are aligned to the charge cosets where the terms are nonzero; the
    window covers every reachable result degree up to `cap` and N+4 values
    of the mode split, enough to expose any failure of the N-th finite
    difference (the kernel is polynomial of degree < N in the split when
    the bracket table is consistent).
    """
    qA, qB = _charge(alg, A), _charge(alg, B)
    sC = _charge(alg, C)
    dC = C.degree(alg)
    t_top = dC - alg.sector_energy(sC + qB)
    e_res = alg.sector_energy(sC + qA + qB)
    for L in range(int(cap) + 1):
        S = dC - e_res - N - L          # r + t; result degree = e_res + L
        for jt in range(N + 4):
            t = t_top + 1 - jt
            yield S - t, t


def locality_defect(alg: ModeAlgebra, A: State, B: State, N: int,
                    r, t, C: State) -> State:
    """Coefficient of the (z-w)^N-multiplied supercommutator at modes (r,t)."""
    out = State.zero()
    for i in range(N + 1):
        c = (-1) ** i * comb(N, i)
        term = commutator_direct(alg, A, r + N - i, B, t + i, C)
        if not term.is_zero:
            out = out + term.scale(c)
    return out


def locality_witness(alg: ModeAlgebra, A: State, B: State, N: int,
                     test_states, cap):
    """First (r, t, C) where (z-w)^N [Y(A,z),Y(B,w)] C != 0, else None."""
    for C in test_states:
        for r, t in _locality_windows(alg, A, B, C, N, cap):
            if not locality_defect(alg, A, B, N, r, t, C).is_zero:
                return (r, t, C)
    return None


def locality_order(alg: ModeAlgebra, A: State, B: State, D) -> int:
    """Least N annihilating the supercommutator on basis states of deg <= D."""
    dA, dB = _weight(alg, A), _weight(alg, B)
    states = _basis_states_upto(alg, D)
    bound = int(D + dA + dB)
    witness = None
    for N in range(bound + 1):
        witness = locality_witness(alg, A, B, N, states, int(D))
        if witness is None:
            return N
    raise NotLocalUpTo(D, witness)


def _basis_states_upto(alg, D):
    out = []
    d = Fraction(0)
    step = Fraction(1, alg.grading_denominator)
    while d <= D:
        out.extend(State.monomial(m) for m in all_sector_monomials(alg, d))
        d += step
    return out


# ---------------------------------------------------------------------------
# Associativity (finite Borcherds-type coefficient identities)
# ---------------------------------------------------------------------------

def _umode(alg, A, j, v):
    """Unshifted j-th product: A_(j) = A_[j + 1 - wt A].  Memoized."""
    key = ("um", A, j, v)
    hit = alg._apply_memo.get(key)
    if hit is not None:
        return hit
    result = state_field_mode(alg, A, Fraction(j) + 1 - _weight(alg, A), v)
    alg._apply_memo[key] = result
    return result


def associativity_defect(alg: ModeAlgebra, A: State, B: State, n: int,
                         m, C: State) -> State:
    """LHS - RHS of the singular-product re-expansion identity (n >= 0)."""
    eps = state_parity(alg, A) * state_parity(alg, B)
    AB = _umode(alg, A, n, B)
    lhs = _umode(alg, AB, m, C) if not AB.is_zero else State.zero()
    rhs = State.zero()
    sign2 = (-1) ** (n + eps)
    for i in range(n + 1):
        c = (-1) ** i * comb(n, i)
        t1 = _umode(alg, A, n - i, _umode(alg, B, m + i, C))
        t2 = _umode(alg, B, n + m - i, _umode(alg, A, i, C))
        rhs = rhs + (t1 - t2.scale(sign2)).scale(c)
    return lhs - rhs


# ---------------------------------------------------------------------------
# Axiom verification
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None

    def to_json(self):
        return {"check": self.name, "passed": self.passed,
                "witness": self.witness}


@dataclass
class AxiomReport:
    algebra: str
    degree: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {"algebra": self.algebra, "degree": self.degree,
                "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}

    def render(self) -> str:
        lines = [f"axiom report: {self.algebra} (degree {self.degree})"]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            line = f"  {c.name:<14} {status}"
            if c.witness:
                line += f"  witness: {c.witness}"
            lines.append(line)
        lines.append(f"result: {'all axioms pass' if self.passed else 'FAILED'}")
        return "\n".join(lines)


def _grouped_basis(alg, D):
    """Basis states grouped by degree, for all sectors, degrees <= D."""
    groups = []
    d = Fraction(0)
    step = Fraction(1, alg.grading_denominator)
    while d <= D:
        monos = all_sector_monomials(alg, d)
        if monos:
            groups.append((d, [State.monomial(m) for m in monos]))
        d += step
    return groups


def verify_axioms(alg: ModeAlgebra, D: int) -> AxiomReport:
    """Check the vertex-algebra axioms on basis triples of total degree <= D.

    Pairs and triples are bounded by total degree (deg A + deg B (+ deg C)
    <= D), which keeps the verification exhaustive over a well-defined
    finite family while scaling to multi-generator presets.
    """
    report = AxiomReport(alg.name, D)
    groups = _grouped_basis(alg, D)
    vac = State.vacuum()

    # vacuum axiom: Y(A,z)|0> is regular with constant term A
    witness = None
    for dA, As in groups:
        for A in As:
            p = 1 - dA
            while p <= 0:
                if p > -dA and not state_field_mode(alg, A, p, vac).is_zero:
                    witness = f"A={render_state(alg, A)}, mode {p}"
                    break
                p += 1
            if witness is None and state_field_mode(alg, A, -dA, vac) != A:
                witness = f"A={render_state(alg, A)}, creation mode"
            if witness:
                break
        if witness:
            break
    report.checks.append(CheckResult("vacuum", witness is None, witness))

    # translation axiom: [T, A_[p]] = (1 - p - wt A) A_[p-1]
    witness = None
    for dA, As in groups:
        for dB, Bs in groups:
            if dA + dB > D:
                continue
            for A in As:
                for B in Bs:
                    top = _max_target_degree(alg, B)
                    p = -dA - 1
                    while p <= top + 1 and witness is None:
                        lhs = translate(alg, state_field_mode(alg, A, p, B)) \
                            - state_field_mode(alg, A, p, translate(alg, B))
                        rhs = state_field_mode(alg, A, p - 1, B).scale(1 - p - dA)
                        if lhs != rhs:
                            witness = (f"A={render_state(alg, A)}, "
                                       f"B={render_state(alg, B)}, mode {p}")
                        p += 1
                    if witness:
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    report.checks.append(CheckResult("translation", witness is None, witness))

    # locality: N from the maximal pole order annihilates the supercommutator
    witness = None
    for dA, As in groups:
        for dB, Bs in groups:
            if dB < dA or dA + dB > D:
                continue
            for A in As:
                for B in Bs:
                    poles = singular_part(alg, A, B)
                    N = max(poles, default=0)
                    Cs = [C for dC, Cgrp in groups
                          if dA + dB + dC <= D for C in Cgrp]
                    w = locality_witness(alg, A, B, N, Cs, int(D))
                    if w is not None:
                        r, t, C = w
                        witness = (f"A={render_state(alg, A)}, "
                                   f"B={render_state(alg, B)}, N={N}, "
                                   f"modes ({r},{t}), C={render_state(alg, C)}")
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    report.checks.append(CheckResult("locality", witness is None, witness))

    # associativity: singular products re-expand consistently
    witness = None
    for dA, As in groups:
        for dB, Bs in groups:
            if dA + dB > D:
                continue
            for A in As:
                for B in Bs:
                    n_max = int(_max_target_degree(alg, B) + dA - 1)
                    for n in range(0, n_max + 1):
                        dAB = dB - (n + 1 - dA)      # weight of A_(n)B
                        for dC, Cgrp in groups:
                            if dA + dB + dC > D:
                                continue
                            for C in Cgrp:
                                s_res = (_charge(alg, C) + _charge(alg, A)
                                         + _charge(alg, B))
                                e_res = alg.sector_energy(s_res)
                                # m values hitting result degrees in [0, D]
                                for L in range(int(D) + 1):
                                    m = dC - (e_res + L) + dAB - 1
                                    if not associativity_defect(
                                            alg, A, B, n, m, C).is_zero:
                                        witness = (
                                            f"A={render_state(alg, A)}, "
                                            f"B={render_state(alg, B)}, "
                                            f"n={n}, m={m}, "
                                            f"C={render_state(alg, C)}")
                                        break
                                if witness:
                                    break
                            if witness:
                                break
                        if witness:
                            break
                    if witness:
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    report.checks.append(CheckResult("associativity", witness is None, witness))
    return report


# ---------------------------------------------------------------------------
# Coset and center
# ---------------------------------------------------------------------------

def coset_graded(alg: ModeAlgebra, Wgens, d):
    """Basis of {v in V_d : Y(A,z)v regular for all A in Wgens} as States."""
    from .fock import basis_monomials
    monos = basis_monomials(alg, d, 0)
    if not monos:
        return []
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for A in Wgens:
        dA = _weight(alg, A)
        p = 1 - dA
        while p <= Fraction(d):
            # rows of the matrix of A_[p] restricted to V_d
            images = [state_field_mode(alg, A, p, State.monomial(m))
                      for m in monos]
            targets = sorted({t for img in images for t in img.terms})
            for tmono in targets:
                rows.append([img.coeff(tmono) for img in images])
            p += 1
    if not rows:
        return [State.monomial(m) for m in monos]
    kernel = kernel_basis(rows, len(monos))
    out = []
    for vec in kernel:
        v = State.zero()
        for m, c in zip(monos, vec):
            v = v + State.monomial(m, c)
        out.append(v)
    return out
