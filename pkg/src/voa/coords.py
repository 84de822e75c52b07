"""Coordinate changes on the formal disc acting on conformal algebras.

A CoordChange is a truncated automorphism rho(z) = rho_1 z + ... + rho_M z^M
with Scalar coefficients (rho_1 invertible).  Its action on a conformal
algebra is R(rho) = rho_1^{L_0} exp(-sum_j v_j L_j), where the charges v_j
come from factoring rho through the exponential of the vector field
sum_j v_j z^{j+1} d/dz; the exponential is exact on graded components
because each L_j lowers degree.

Huang's identity Y(A,t) = R(rho) Y(R(rho_t)^{-1} A, rho(t)) R(rho)^{-1}
(rho_t(z) = rho(t+z) - rho(t)) is verified on matrix elements with t kept
as a Scalar parameter, expanding exact rational functions of t as Laurent
series only at the final comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .scalars import DivisionByZero, Poly, Scalar, poly_derivative
from .fields import state_field_mode
from .fock import State, basis_monomials, render_monomial


class NonInvertibleLinearTerm(ValueError):
    """The coordinate change has no invertible z-coefficient."""


class NotPrimary(ValueError):
    """The state is not annihilated by every positive Virasoro mode."""


class TruncationMismatch(ValueError):
    """Operands carry different truncation orders."""


def _coerce_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar.from_fraction(x)


@dataclass(frozen=True)
class CoordChange:
    """rho(z) = sum_k coeffs[k-1] z^k, truncated after z^M."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           tuple(_coerce_scalar(c) for c in self.coeffs))
        if not self.coeffs or self.coeffs[0].is_zero:
            raise NonInvertibleLinearTerm(
                "coordinate change needs a nonzero linear coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @staticmethod
    def identity(M: int) -> "CoordChange":
        return CoordChange((Scalar.one(),) + (Scalar.zero(),) * (M - 1))

    def coefficient(self, k: int) -> Scalar:
        return self.coeffs[k - 1] if 1 <= k <= self.order else Scalar.zero()

    def compose(self, other: "CoordChange") -> "CoordChange":
        """(self * other)(z) = other(self(z)), truncated."""
        if self.order != other.order:
            raise TruncationMismatch(
                f"orders {self.order} != {other.order}")
        M = self.order
        out = [Scalar.zero()] * M
        power = [Scalar.zero()] * (M + 1)  # self(z)^j coefficients
        power[0] = Scalar.one()
        cur = [Scalar.zero()] + list(self.coeffs)  # z^0..z^M of self(z)
        acc = [Scalar.one()] + [Scalar.zero()] * M
        for j in range(1, M + 1):
            acc = _series_mul(acc, cur, M)
            cj = other.coeffs[j - 1]
            if not cj.is_zero:
                for k in range(1, M + 1):
                    out[k - 1] = out[k - 1] + acc[k] * cj
        return CoordChange(tuple(out))

    def inverse(self) -> "CoordChange":
        """mu with mu(self(z)) = z modulo z^{M+1}."""
        M = self.order
        mu = [Scalar.zero()] * M
        mu[0] = Scalar.one() / self.coeffs[0]
        acc = [Scalar.one()] + [Scalar.zero()] * M
        cur = [Scalar.zero()] + list(self.coeffs)
        powers = []
        for j in range(1, M + 1):
            acc = _series_mul(acc, cur, M)
            powers.append(list(acc))
        for k in range(2, M + 1):
            total = Scalar.zero()
            for j in range(1, k):
                total = total + mu[j - 1] * powers[j - 1][k]
            mu[k - 1] = -total / powers[k - 1][k]
        return CoordChange(tuple(mu))

    def derivative_at(self, t: Scalar) -> Scalar:
        """rho'(t) as an exact Scalar."""
        out = Scalar.zero()
        for k in range(1, self.order + 1):
            out = out + self.coeffs[k - 1] * k * (t ** (k - 1))
        return out

    def evaluate_at(self, t: Scalar) -> Scalar:
        out = Scalar.zero()
        for k in range(1, self.order + 1):
            out = out + self.coeffs[k - 1] * (t ** k)
        return out

    def padded(self, M: int) -> "CoordChange":
        """The same polynomial at truncation order M >= order.

        Appending explicit zero coefficients states that the higher terms
        vanish exactly, which lets `decompose` solve for the higher
        Virasoro charges of a genuine polynomial instead of truncating
        them away.
        """
        if M <= self.order:
            return self
        return CoordChange(self.coeffs +
                           (Scalar.zero(),) * (M - self.order))

    def shifted(self, tname: str = "t") -> "CoordChange":
        """rho_t(z) = rho(t + z) - rho(t) with t a Scalar parameter."""
        t = Scalar.param(tname)
        out = [Scalar.zero()] * self.order
        for i in range(1, self.order + 1):
            ci = self.coeffs[i - 1]
            if ci.is_zero:
                continue
            for k in range(1, i + 1):
                out[k - 1] = out[k - 1] + ci * comb(i, k) * (t ** (i - k))
        return CoordChange(tuple(out))

    def render(self) -> str:
        from .scalars import render_scalar
        parts = []
        for k in range(1, self.order + 1):
            c = self.coeffs[k - 1]
            if c.is_zero:
                continue
            cs = render_scalar(c)
            z = "z" if k == 1 else f"z^{k}"
            parts.append(z if cs == "1" else f"({cs})*{z}")
        return " + ".join(parts) if parts else "0"


def _series_mul(a, b, M):
    """Product of z-coefficient lists (index = exponent), kept to z^M."""
    out = [Scalar.zero()] * (M + 1)
    for i, ai in enumerate(a):
        if ai.is_zero or i > M:
            continue
        for j, bj in enumerate(b):
            if i + j > M:
                break
            if not bj.is_zero:
                out[i + j] = out[i + j] + ai * bj
    return out


# ---------------------------------------------------------------------------
# Factoring through the vector-field exponential
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VirasoroCharge:
    """v_0 rescaling plus v_1..v_{M-1}: rho = v_0 * exp(sum v_j z^{j+1} d/dz) z."""

    scaling: Scalar
    charges: tuple

    @property
    def order(self) -> int:
        return len(self.charges) + 1


def _exp_vector_field(charges, M):
    """Coefficients of exp(sum_j charges[j-1] z^{j+1} d/dz) applied to z."""
    cur = [Scalar.zero(), Scalar.one()] + [Scalar.zero()] * (M - 1)
    out = list(cur)
    fact = 1
    for step in range(1, M + 1):
        nxt = [Scalar.zero()] * (M + 1)
        for k in range(M + 1):
            if cur[k].is_zero:
                continue
            # D(z^k) = sum_j v_j k z^{k+j}
            for j, vj in enumerate(charges, start=1):
                if k + j <= M and not vj.is_zero:
                    nxt[k + j] = nxt[k + j] + cur[k] * (vj * k)
        cur = nxt
        fact *= step
        inv = Fraction(1, fact)
        for k in range(M + 1):
            if not cur[k].is_zero:
                out[k] = out[k] + cur[k] * inv
        if all(c.is_zero for c in cur):
            break
    return out


def decompose(rho: CoordChange) -> VirasoroCharge:
    """Solve for the charges so that reconstruct(decompose(rho)) == rho."""
    M = rho.order
    r1 = rho.coeffs[0]
    unit = [c / r1 for c in rho.coeffs]
    charges = [Scalar.zero()] * (M - 1)
    for j in range(1, M):
        cur = _exp_vector_field(charges, M)
        charges[j - 1] = unit[j] - cur[j + 1]
    return VirasoroCharge(r1, tuple(charges))


def reconstruct(charge: VirasoroCharge) -> CoordChange:
    M = charge.order
    series = _exp_vector_field(list(charge.charges), M)
    return CoordChange(tuple(series[k] * charge.scaling
                             for k in range(1, M + 1)))


# ---------------------------------------------------------------------------
# The operator R(rho) on graded components
# ---------------------------------------------------------------------------

def _virasoro_mode(inst, j, v: State) -> State:
    return state_field_mode(inst.algebra, inst.conformal, Fraction(j), v)


def _exp_lowering(inst, charges, v: State, sign: int) -> State:
    """exp(sign * sum_j charges[j-1] L_j) v; exact since L_j lowers degree."""
    out = v
    cur = v
    fact = 1
    step = 0
    while not cur.is_zero:
        step += 1
        nxt = State.zero()
        for j, vj in enumerate(charges, start=1):
            if not vj.is_zero:
                term = _virasoro_mode(inst, j, cur)
                if not term.is_zero:
                    nxt = nxt + term.scale(vj * sign)
        cur = nxt
        fact *= step
        if not cur.is_zero:
            out = out + cur.scale(Fraction(1, fact))
    return out


def _scaling_power(scaling: Scalar, state: State, alg, sign: int) -> State:
    """scaling^{sign * L_0}: multiply each graded piece by scaling^(sign*deg)."""
    out = State.zero()
    for mono, c in state.terms.items():
        d = alg.mono_degree(mono)
        if d.denominator != 1:
            raise ValueError(
                "scaling^{L_0} needs integral degrees; got degree %s" % d)
        out = out + State.monomial(mono, c * (scaling ** (sign * int(d))))
    return out


def R_apply(inst, rho: CoordChange, A: State) -> State:
    """R(rho) A = exp(-sum_j v_j L_j) rho_1^{-L_0} A.

    The vector field z d/dz corresponds to -L_0, so the rescaling part of
    rho acts by the inverse power of the scaling: a primary of weight
    Delta transforms under z -> az as a^{-Delta}.  The scaling acts first;
    with the factorization rho(z) = rho_1 * rho_+(z) this is the unique
    ordering satisfying both the transformation formula and the group law
    R(mu(rho(z))) = R(rho) R(mu).
    """
    charge = decompose(rho)
    mid = _scaling_power(charge.scaling, A, inst.algebra, -1)
    return _exp_lowering(inst, charge.charges, mid, -1)


def R_inverse_apply(inst, rho: CoordChange, A: State) -> State:
    """R(rho)^{-1} A = rho_1^{+L_0} exp(+sum_j v_j L_j) A."""
    charge = decompose(rho)
    mid = _exp_lowering(inst, charge.charges, A, +1)
    return _scaling_power(charge.scaling, mid, inst.algebra, +1)


# ---------------------------------------------------------------------------
# Laurent expansion of Scalars in one parameter
# ---------------------------------------------------------------------------

def laurent_coefficients(s: Scalar, name: str, top: int) -> dict:
    """{exponent: Scalar} of s as a Laurent series in `name`, up to `top`."""
    if s.is_zero:
        return {}
    num = s.num._as_univariate(name)
    den = s.den._as_univariate(name)
    j0 = min(den)
    unit = {i - j0: Scalar(p) for i, p in den.items()}
    inv0 = Scalar.one() / unit[0]
    n_min = min(num)
    inv = {0: inv0}
    out = {}
    for e in range(n_min - j0, top + 1):
        # coefficient of t^e in num * inverse(unit) * t^{-j0}
        total = Scalar.zero()
        for i, p in num.items():
            k = e + j0 - i
            if k < 0:
                continue
            if k not in inv:
                _extend_inverse(unit, inv, inv0, k)
            total = total + Scalar(p) * inv[k]
        if not total.is_zero:
            out[e] = total
    return out


def _extend_inverse(unit, inv, inv0, upto):
    for k in range(max(inv) + 1, upto + 1):
        acc = Scalar.zero()
        for i, u in unit.items():
            if 1 <= i <= k:
                acc = acc + u * inv[k - i]
        inv[k] = -(inv0 * acc)


def _first_order_vanishes(s: Scalar, name: str) -> bool:
    """True when s = O(name^2) as a rational function regular at name=0."""
    if s.is_zero:
        return True
    num, den = s.num, s.den
    n0 = num.substitute({name: 0})
    if not n0.is_zero:
        return False
    n1 = poly_derivative(num, name).substitute({name: 0})
    return n1.is_zero


# ---------------------------------------------------------------------------
# Huang's transformation formula
# ---------------------------------------------------------------------------

@dataclass
class CoordReport:
    description: str
    passed: bool
    witness: str | None = None

    def render(self) -> str:
        if self.passed:
            return f"{self.description}: pass"
        return f"{self.description}: FAIL ({self.witness})"


def _conjugated_field_element(inst, B: State, rho: CoordChange, v: State,
                              cap: int, window: int, tname: str) -> State:
    """R(rho) Y(B, rho(t)) R(rho)^{-1} v, complete on degrees <= cap.

    B may be non-homogeneous with t-dependent coefficients; the result is a
    State whose Scalars are rational functions of t.  The substituted-field
    sum includes intermediate degrees above `cap`, since R(rho) lowers
    degree again: the mode p contributes t-exponents >= -p - wt B, so
    everything relevant below t^{window+1} lies at p >= -window - wt B.
    """
    alg = inst.algebra
    u = R_inverse_apply(inst, rho, v)
    rho_at_t = rho.evaluate_at(Scalar.param(tname))
    total = State.zero()
    for d in sorted({alg.mono_degree(m) for m in B.terms}):
        Bd = B.component(alg, d)
        if Bd.is_zero:
            continue
        if d.denominator != 1:
            raise ValueError("field insertion needs integral weight")
        for mono, c in u.terms.items():
            du = alg.mono_degree(mono)
            rcap = cap + window + int(d)
            for r in range(rcap + 1):
                p = du - r
                if (p + d).denominator != 1:
                    continue
                w = state_field_mode(alg, Bd, p, State.monomial(mono))
                if w.is_zero:
                    continue
                factor = c * (rho_at_t ** int(-p - d))
                total = total + w.scale(factor)
    return R_apply(inst, rho, total)


def _field_element(inst, A: State, v: State, cap: int) -> dict:
    """{t-exponent: State} of Y(A,t) v, output degrees capped at `cap`."""
    alg = inst.algebra
    dA = A.degree(alg)
    out = {}
    dv = v.degree(alg)
    for r in range(cap + 1):
        p = dv - r
        e = -p - dA
        if e.denominator != 1:
            continue
        w = state_field_mode(alg, A, p, v)
        if not w.is_zero:
            out[int(e)] = w
    return out


def _compare_series(alg, lhs: dict, rhs: State, window: int, tname: str,
                    first_order_in: str | None, cap: int):
    """Compare {exponent: State} with a t-dependent State up to t^window.

    Only matrix elements against basis functionals of degree <= cap are
    compared; higher components of the conjugated side are incomplete.
    """
    monos = set()
    for st in lhs.values():
        monos.update(st.terms)
    monos.update(rhs.terms)
    monos = {m for m in monos if alg.mono_degree(m) <= cap}
    for mono in sorted(monos, key=lambda m: (alg.mono_degree(m), str(m))):
        series = {}
        c = rhs.terms.get(mono)
        if c is not None:
            series = laurent_coefficients(c, tname, window)
        exps = set(series) | {e for e, st in lhs.items() if mono in st.terms}
        for e in sorted(exps):
            if e > window:
                continue
            want = lhs.get(e, State.zero()).coeff(mono)
            got = series.get(e, Scalar.zero())
            diff = want - got
            if diff.is_zero:
                continue
            if first_order_in is not None and \
                    _first_order_vanishes(diff, first_order_in):
                continue
            return (f"coefficient of t^{e} {render_monomial(alg, mono)}: "
                    f"direct {want} vs conjugated {got}")
    return None


def huang_check(inst, A: State, rho: CoordChange, window: int, D: int,
                first_order_in: str | None = None) -> CoordReport:
    """Y(A,t) = R(rho) Y(R(rho_t)^{-1} A, rho(t)) R(rho)^{-1} on elements.

    Matrix elements against every basis state and functional of degree <= D
    are compared as Laurent series in t up to t^window.  When
    `first_order_in` names a parameter, differences of second order in it
    are discarded (for infinitesimal changes whose truncated charge
    decomposition is exact only to first order).
    """
    tname = "t"
    alg = inst.algebra
    desc = f"huang_check({rho.render()})"
    dA = int(A.degree(alg))
    rho = rho.padded(D + window + dA + 2)
    rho_t = rho.shifted(tname)
    B = R_inverse_apply(inst, rho_t, A)
    for d in range(D + 1):
        for mono in basis_monomials(alg, d, 0):
            v = State.monomial(mono)
            lhs = _field_element(inst, A, v, D)
            rhs = _conjugated_field_element(inst, B, rho, v, D, window, tname)
            witness = _compare_series(alg, lhs, rhs, window, tname,
                                      first_order_in, D)
            if witness is not None:
                return CoordReport(
                    desc, False,
                    f"on {render_monomial(alg, mono)}: {witness}")
    return CoordReport(desc, True)


def primary_differential_check(inst, A: State, rho: CoordChange, window: int,
                               D: int,
                               first_order_in: str | None = None) -> CoordReport:
    """For a primary A of weight Delta, Y(A,z)(dz)^Delta is invariant:

        Y(A,t) = R(rho) Y(rho'(t)^{Delta} A, rho(t)) R(rho)^{-1},

    the specialization of the transformation formula, since R(rho_t)^{-1}
    acts on a primary by rho_t,1^{L_0} = rho'(t)^{Delta}.
    """
    alg = inst.algebra
    dA = A.degree(alg)
    for n in range(1, int(dA) + 2):
        if not state_field_mode(alg, inst.conformal, Fraction(n), A).is_zero:
            raise NotPrimary(f"L_{n} does not annihilate the state")
    if dA.denominator != 1:
        raise ValueError("primary check needs an integral weight")
    tname = "t"
    desc = f"primary_differential_check({rho.render()})"
    rho = rho.padded(D + window + int(dA) + 2)
    dpow = rho.derivative_at(Scalar.param(tname)) ** int(dA)
    B = A.scale(dpow)
    for d in range(D + 1):
        for mono in basis_monomials(alg, d, 0):
            v = State.monomial(mono)
            lhs = _field_element(inst, A, v, D)
            rhs = _conjugated_field_element(inst, B, rho, v, D, window, tname)
            witness = _compare_series(alg, lhs, rhs, window, tname,
                                      first_order_in, D)
            if witness is not None:
                return CoordReport(
                    desc, False,
                    f"on {render_monomial(alg, mono)}: {witness}")
    return CoordReport(desc, True)
