"""Exact n-point functions for the Heisenberg algebra on the formal disc.

A RationalCorrelator is a finite sum of terms

    coeff * num(z_1..z_n) / (prod_i z_i^{k_i} * prod_{i<j} (z_i - z_j)^{m_ij})

kept in factored form: the diagonal pole multiplicities are the meaningful
data and are never expanded away.  Insertions are the fields of the states
b(-1-j)|0> (the j-th derivative of b divided by j!) or the vacuum, and
functionals are finite coefficient lists on the Fock basis, so the Wick
pairing recursion terminates with an exact rational answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .scalars import Poly, poly_derivative as _poly_deriv
from .fock import PbwMonomial, State


def zvar(i: int) -> str:
    return f"z{i}"


def _poly_subst(p: Poly, name: str, q: Poly) -> Poly:
    """Substitute a polynomial for one variable."""
    out = Poly()
    for mono, c in p.terms.items():
        term = Poly.const(c)
        for v, e in mono:
            term = term * (q ** e if v == name else Poly.var(v) ** e)
        out = out + term
    return out


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    num: Poly
    poles: tuple      # ((i, j, mult), ...) with i < j, sorted
    zpows: tuple      # ((i, power), ...) denominator z_i^power, sorted

    def key(self):
        return (self.poles, self.zpows, tuple(sorted(self.num.terms.items())))


class RationalCorrelator:
    """Finite sum of factored rational terms over the diagonal arrangement."""

    def __init__(self, terms=()):
        self.terms = _merge(terms)

    @staticmethod
    def zero():
        return RationalCorrelator()

    @staticmethod
    def constant(c):
        c = Fraction(c)
        if not c:
            return RationalCorrelator()
        return RationalCorrelator([Term(c, Poly.const(1), (), ())])

    @property
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        return RationalCorrelator(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return RationalCorrelator()
        return RationalCorrelator(
            [Term(t.coeff * c, t.num, t.poles, t.zpows) for t in self.terms])

    def __mul__(self, other):
        out = []
        for a in self.terms:
            for b in other.terms:
                poles = {}
                for i, j, m in a.poles + b.poles:
                    poles[(i, j)] = poles.get((i, j), 0) + m
                zp = {}
                for i, k in a.zpows + b.zpows:
                    zp[i] = zp.get(i, 0) + k
                out.append(Term(
                    a.coeff * b.coeff, a.num * b.num,
                    tuple(sorted((i, j, m) for (i, j), m in poles.items())),
                    tuple(sorted(zp.items()))))
        return RationalCorrelator(out)

    def __eq__(self, other):
        if not isinstance(other, RationalCorrelator):
            return NotImplemented
        if [t.key() for t in self.terms] == [t.key() for t in other.terms] \
                and all(a.coeff == b.coeff for a, b in
                        zip(self.terms, other.terms)):
            return True
        return (self - other)._is_zero_expanded()

    def __hash__(self):
        return hash(tuple(t.key() for t in self.terms))

    def _is_zero_expanded(self) -> bool:
        """Exact zero test by clearing all denominators."""
        if not self.terms:
            return True
        poles = {}
        zp = {}
        for t in self.terms:
            for i, j, m in t.poles:
                poles[(i, j)] = max(poles.get((i, j), 0), m)
            for i, k in t.zpows:
                zp[i] = max(zp.get(i, 0), k)
        total = Poly()
        for t in self.terms:
            p = t.num.scale(t.coeff)
            tp = {(i, j): m for i, j, m in t.poles}
            tz = dict(t.zpows)
            for (i, j), m in poles.items():
                extra = m - tp.get((i, j), 0)
                if extra:
                    p = p * (_diag(i, j) ** extra)
            for i, k in zp.items():
                extra = k - tz.get(i, 0)
                if extra:
                    p = p * (Poly.var(zvar(i)) ** extra)
            total = total + p
        return total.is_zero

    def variables(self):
        vs = set()
        for t in self.terms:
            vs.update(t.num.variables())
            for i, j, _ in t.poles:
                vs.add(zvar(i))
                vs.add(zvar(j))
            for i, _ in t.zpows:
                vs.add(zvar(i))
        return sorted(vs)

    def deriv(self, i: int) -> "RationalCorrelator":
        """Partial derivative with respect to z_i."""
        out = []
        zi = zvar(i)
        for t in self.terms:
            dn = _poly_deriv(t.num, zi)
            if not dn.is_zero:
                out.append(Term(t.coeff, dn, t.poles, t.zpows))
            for a, b, m in t.poles:
                if i not in (a, b):
                    continue
                sign = -m if i == a else m
                poles = tuple(sorted(
                    (x, y, mm + (1 if (x, y) == (a, b) else 0))
                    for x, y, mm in t.poles))
                out.append(Term(t.coeff * sign, t.num, poles, t.zpows))
            for a, k in t.zpows:
                if a != i:
                    continue
                zp = tuple(sorted((x, kk + (1 if x == a else 0))
                                  for x, kk in t.zpows))
                out.append(Term(t.coeff * (-k), t.num, t.poles, zp))
        return RationalCorrelator(out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        from .scalars import render_poly
        parts = []
        for t in self.terms:
            num = t.num.scale(t.coeff)
            ns = render_poly(num)
            if len(num.terms) > 1:
                ns = f"({ns})"
            dens = []
            for i, k in t.zpows:
                dens.append(f"{zvar(i)}" + (f"^{k}" if k > 1 else ""))
            for i, j, m in t.poles:
                f = f"({zvar(i)}-{zvar(j)})"
                dens.append(f + (f"^{m}" if m > 1 else ""))
            if dens:
                ds = "*".join(dens)
                if len(dens) > 1:
                    ds = f"({ds})"
                parts.append(f"{ns}/{ds}")
            else:
                parts.append(ns)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json(self):
        from .scalars import render_poly
        return [{"coeff": str(t.coeff), "numerator": render_poly(t.num),
                 "poles": [[i, j, m] for i, j, m in t.poles],
                 "zpowers": [[i, k] for i, k in t.zpows]}
                for t in self.terms]


def _diag(i, j) -> Poly:
    return Poly.var(zvar(i)) - Poly.var(zvar(j))


def _merge(terms):
    acc = {}
    for t in terms:
        if not t.coeff or t.num.is_zero:
            continue
        key = (t.poles, t.zpows)
        if key in acc:
            c, n = acc[key]
            acc[key] = (Fraction(1), n.scale(c) + t.num.scale(t.coeff))
        else:
            acc[key] = (t.coeff, t.num)
    out = []
    for (poles, zpows), (c, n) in acc.items():
        if n.is_zero:
            continue
        out.append(_reduce_term(Term(c, n, poles, zpows)))
    out = [t for t in out if not t.num.is_zero]
    return sorted(out, key=lambda t: (t.poles, t.zpows,
                                      sorted(t.num.terms.items())))


def _reduce_term(t: Term) -> Term:
    """Cancel diagonal and z_i factors dividing the numerator."""
    from .scalars import _poly_divexact
    num = t.num
    poles = {(i, j): m for i, j, m in t.poles}
    for (i, j) in list(poles):
        while poles[(i, j)] > 0:
            try:
                num = _poly_divexact(num, _diag(i, j))
            except ValueError:
                break
            poles[(i, j)] -= 1
    zp = dict(t.zpows)
    for i in list(zp):
        while zp[i] > 0:
            try:
                num = _poly_divexact(num, Poly.var(zvar(i)))
            except ValueError:
                break
            zp[i] -= 1
    return Term(t.coeff, num,
                tuple(sorted((i, j, m) for (i, j), m in poles.items() if m)),
                tuple(sorted((i, k) for i, k in zp.items() if k)))


# ---------------------------------------------------------------------------
# Wick pairing computation
# ---------------------------------------------------------------------------

VACUUM_PHI = {PbwMonomial(0, ()): Fraction(1)}


def _phi_terms(phi):
    if phi is None:
        return VACUUM_PHI
    if isinstance(phi, State):
        return {m: Fraction(c.num.constant_value()) /
                Fraction(c.den.constant_value())
                for m, c in phi.terms.items()}
    return dict(phi)


def state_insertion(alg, state: State):
    """Insertion descriptor for a state: None for vacuum, j for b(-1-j)|0>."""
    if state == State.vacuum():
        return None
    items = list(state.terms.items())
    if len(items) == 1:
        mono, c = items[0]
        if c == 1 and mono.sector == 0 and len(mono.word) == 1:
            g, n = mono.word[0]
            if n <= -1:
                return -n - 1
    raise ValueError("insertions must be the vacuum or b(-1-j)|0>")


def _pair_kernel(a: int, b: int, i: int, j: int) -> Term:
    """Contraction of d^a b(z_i)/a! with d^b b(z_j)/b! (for i left of j)."""
    c = Fraction((-1) ** a * factorial(a + b + 1), factorial(a) * factorial(b))
    return Term(c, Poly.const(1), ((min(i, j), max(i, j), 2 + a + b)
                                   if i < j else (j, i, 2 + a + b),), ())


def heisenberg_npoint(phi, n: int, insertions=None) -> RationalCorrelator:
    """phi(Y(A_1,z_1)...Y(A_n,z_n)|0>) as an exact rational function.

    `insertions` lists the derivative order j of each field d^j b / j!
    (None entries are vacuum insertions); default is n copies of b itself.
    Variables are z1..zn in insertion order, which is also the expansion
    ordering |z1| > ... > |zn|; the rational answer is order-independent.
    """
    if insertions is None:
        insertions = [0] * n
    if len(insertions) != n:
        raise ValueError("insertion count must match n")
    phi = _phi_terms(phi)
    active = [(i + 1, j) for i, j in enumerate(insertions) if j is not None]
    out = []
    for pairing, free in _partial_pairings([idx for idx, _ in active]):
        kernel = RationalCorrelator.constant(1)
        dv = dict(active)
        for i, j in pairing:
            kernel = kernel * RationalCorrelator(
                [_pair_kernel(dv[i], dv[j], i, j)])
        rest = _creation_polynomial(phi, [(i, dv[i]) for i in free])
        if rest.is_zero:
            continue
        out.extend((kernel * RationalCorrelator(
            [Term(Fraction(1), rest, (), ())])).terms)
    return RationalCorrelator(out)


def _partial_pairings(indices):
    """All (pairing, unpaired) splittings of an index list; pairs ordered."""
    if not indices:
        yield [], []
        return
    first, rest = indices[0], indices[1:]
    # first unpaired
    for pairing, free in _partial_pairings(rest):
        yield pairing, [first] + free
    # first paired with a later insertion
    for pos, j in enumerate(rest):
        remaining = rest[:pos] + rest[pos + 1:]
        for pairing, free in _partial_pairings(remaining):
            yield [(first, j)] + pairing, free


def _creation_polynomial(phi, free) -> Poly:
    """phi applied to the pure-creation part of the unpaired insertions.

    Each unpaired field d^j b(z_i)/j! contributes C(-m-1, j) z_i^{-m-1-j}
    for a creation mode m <= -1; phi selects finitely many assignments.
    """
    out = Poly()
    k = len(free)
    for mono, c in phi.items():
        if mono.sector != 0 or len(mono.word) != k:
            continue
        modes = [n for _, n in mono.word]
        for assign in _distinct_perms(modes):
            term = Poly.const(c)
            ok = True
            for (i, j), m in zip(free, assign):
                coeff = comb(-m - 1, j) if -m - 1 >= j else 0
                if not coeff:
                    ok = False
                    break
                term = term * Poly.var(zvar(i)) ** (-m - 1 - j)
                term = term.scale(coeff)
            if ok:
                out = out + term
    return out


def _distinct_perms(items):
    items = sorted(items)
    import itertools
    seen = set()
    for p in itertools.permutations(items):
        if p not in seen:
            seen.add(p)
            yield p


# ---------------------------------------------------------------------------
# Region expansion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionRegion:
    """Total order on variables: order[0] has the largest modulus."""
    order: tuple

    def rank(self):
        return {v: i for i, v in enumerate(self.order)}


def expand(f: RationalCorrelator, region: ExpansionRegion, order: int) -> dict:
    """Truncated multi-Laurent coefficients {exponent tuple: Fraction}.

    Each diagonal factor is expanded to `order` geometric-series terms in
    the region; coefficients at exponents within the guaranteed-complete
    window (bounded positive exponents) are exact.
    """
    rank = region.rank()
    vars_ = list(region.order)
    out = {}
    for t in f.terms:
        series = {tuple([0] * len(vars_)): t.coeff}
        for i, j, m in t.poles:
            big, small = (i, j) if rank[zvar(i)] < rank[zvar(j)] else (j, i)
            sign = Fraction(1) if big == i else Fraction((-1) ** m)
            factor = {}
            for tt in range(order):
                exps = [0] * len(vars_)
                exps[vars_.index(zvar(big))] = -m - tt
                exps[vars_.index(zvar(small))] = tt
                factor[tuple(exps)] = sign * comb(m - 1 + tt, tt)
            series = _series_mul(series, factor)
        for i, k in t.zpows:
            shift = [0] * len(vars_)
            shift[vars_.index(zvar(i))] = -k
            series = _series_mul(series, {tuple(shift): Fraction(1)})
        numfac = {}
        for mono, c in t.num.terms.items():
            exps = [0] * len(vars_)
            for v, e in mono:
                exps[vars_.index(v)] = e
            numfac[tuple(exps)] = numfac.get(tuple(exps), Fraction(0)) + c
        series = _series_mul(series, numfac)
        for e, c in series.items():
            out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def _series_mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return out


# ---------------------------------------------------------------------------
# Consistency (region independence, horizontality) and bootstrap
# ---------------------------------------------------------------------------

def matrix_element_coefficient(alg, states, phi, exponents, region):
    """Exact coefficient of prod z_i^{e_i} in phi(Y(A_1,z_1)...|0>).

    The operator composition follows `region` (leftmost = largest modulus);
    each field's mode is pinned by its variable's exponent.
    """
    from .fields import state_field_mode
    phi = _phi_terms(phi)
    order = [int(v[1:]) for v in region.order]
    v = State.vacuum()
    for idx in reversed(order):
        A = states[idx - 1]
        e = exponents[idx - 1]
        dA = A.degree(alg)
        v = state_field_mode(alg, A, -Fraction(e) - dA, v)
        if v.is_zero:
            return Fraction(0)
    total = Fraction(0)
    for mono, c in v.terms.items():
        if mono in phi:
            if not c.is_rational:
                raise ValueError("matrix element is not rational")
            total += phi[mono] * c.as_fraction()
    return total


@dataclass
class ConsistencyReport:
    passed: bool
    mismatch: str | None = None

    def render(self):
        return "consistency: pass" if self.passed else \
            f"consistency: FAIL ({self.mismatch})"


def consistency_check(alg, states, phi, regions, order: int,
                      window: int = 3) -> ConsistencyReport:
    """Region independence plus horizontality for free-boson insertions."""
    insertions = [state_insertion(alg, s) for s in states]
    n = len(states)
    f = heisenberg_npoint(phi, n, insertions)
    # window of exponents: modest positive range, wider negative range
    exps = _exponent_window(n, window)
    for region in regions:
        coeffs = expand(f, region, order)
        for e in exps:
            direct = matrix_element_coefficient(alg, states, phi, e, region)
            expanded = coeffs.get(_region_tuple(e, region), Fraction(0))
            if direct != expanded:
                return ConsistencyReport(
                    False, f"region {region.order}, exponents {e}: "
                           f"direct {direct} != expansion {expanded}")
    # horizontality: d/dz_i f = correlator with A_i replaced by T A_i
    from .fields import translate
    for i in range(n):
        if insertions[i] is None:
            continue
        j = insertions[i]
        repl = list(insertions)
        repl[i] = j + 1
        ft = heisenberg_npoint(phi, n, repl).scale(j + 1)
        if f.deriv(i + 1) != ft:
            return ConsistencyReport(False, f"horizontality at insertion {i+1}")
    return ConsistencyReport(True)


def _exponent_window(n, w):
    import itertools
    rng = range(-w - 2, w + 1)
    return list(itertools.product(rng, repeat=n))


def _region_tuple(exponents, region):
    return tuple(exponents[int(v[1:]) - 1] for v in region.order)


@dataclass
class BootstrapReport:
    passed: bool
    mismatch: str | None = None

    def render(self):
        return "bootstrap: pass" if self.passed else \
            f"bootstrap: FAIL ({self.mismatch})"


def bootstrap_verify(phi, n_max: int) -> BootstrapReport:
    """Order-2 diagonal coefficients of omega_n reproduce omega_{n-2}."""
    family = {n: heisenberg_npoint(phi, n) for n in range(0, n_max + 1, 2)}
    for n in range(2, n_max + 1, 2):
        f = family[n]
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                c2, c1 = _diagonal_coefficients(f, i, j)
                target = _relabel(family[n - 2], i, j, n)
                if c2 != target:
                    return BootstrapReport(
                        False, f"n={n}, pair ({i},{j}): order-2 coefficient")
                if not c1._is_zero_expanded():
                    return BootstrapReport(
                        False, f"n={n}, pair ({i},{j}): order-1 coefficient")
    return BootstrapReport(True)


def _diagonal_coefficients(f: RationalCorrelator, i: int, j: int):
    """Laurent coefficients of (z_i - z_j)^{-2} and ^{-1} at z_i -> z_j.

    Requires pole multiplicity at (i,j) at most 2 in every term (true for
    the Wick family).  Returns (c_{-2}, c_{-1}) as correlators in the
    remaining variables (z_j may appear and must cancel for the bootstrap).
    """
    c2_terms, c1_terms = [], []
    zi, zj = zvar(i), zvar(j)
    for t in f.terms:
        mult = next((m for a, b, m in t.poles if (a, b) == (i, j)), 0)
        if mult == 0:
            continue
        if mult > 2:
            raise ValueError("diagonal pole of order > 2")
        others = tuple((a, b, m) for a, b, m in t.poles if (a, b) != (i, j))
        # substitute z_i = z_j + u in numerator and other factors
        num_u = _poly_subst(t.num, zi, Poly.var(zj) + Poly.var("u"))
        den_fac = []
        for a, b, m in others:
            fac = _poly_subst(_diag(a, b), zi, Poly.var(zj) + Poly.var("u"))
            den_fac.append((fac, m, (a, b)))
        for a, k in t.zpows:
            fac = Poly.var(zvar(a))
            fac = _poly_subst(fac, zi, Poly.var(zj) + Poly.var("u"))
            den_fac.append((fac, k, (a,)))
        num0 = num_u.substitute({"u": 0})
        den0_poles, den0_zp = _collect_den0(den_fac, i, j)
        if mult == 2:
            c2_terms.append(Term(t.coeff, num0, den0_poles, den0_zp))
            # c_{-1}: d/du [num_u / prod den_fac] at u = 0
            dnum = _poly_deriv(num_u, "u").substitute({"u": 0})
            if not dnum.is_zero:
                c1_terms.append(Term(t.coeff, dnum, den0_poles, den0_zp))
            for idx, (fac, m, _) in enumerate(den_fac):
                dfac = _poly_deriv(fac, "u").substitute({"u": 0})
                if dfac.is_zero:
                    continue
                # -m * fac' / fac extra factor
                extra_num = num0 * dfac
                poles = {(a, b): mm for a, b, mm in den0_poles}
                zp = dict(den0_zp)
                key = den_fac[idx][2]
                if len(key) == 2:
                    kk = _norm_pair(key, i, j)
                    poles[kk] = poles.get(kk, 0) + 1
                else:
                    a0 = j if key[0] == i else key[0]
                    zp[a0] = zp.get(a0, 0) + 1
                c1_terms.append(Term(
                    t.coeff * (-m), extra_num,
                    tuple(sorted((a, b, mm) for (a, b), mm in poles.items())),
                    tuple(sorted(zp.items()))))
        else:
            c1_terms.append(Term(t.coeff, num0, den0_poles, den0_zp))
    return RationalCorrelator(c2_terms), RationalCorrelator(c1_terms)


def _norm_pair(pair, i, j):
    a, b = pair
    a = j if a == i else a
    b = j if b == i else b
    return (min(a, b), max(a, b))


def _collect_den0(den_fac, i, j):
    poles = {}
    zp = {}
    for fac, m, key in den_fac:
        if len(key) == 2:
            kk = _norm_pair(key, i, j)
            poles[kk] = poles.get(kk, 0) + m
        else:
            a0 = j if key[0] == i else key[0]
            zp[a0] = zp.get(a0, 0) + m
    return (tuple(sorted((a, b, mm) for (a, b), mm in poles.items())),
            tuple(sorted(zp.items())))


def _relabel(f: RationalCorrelator, i: int, j: int, n: int):
    """Rename variables of omega_{n-2} (built on z1..z_{n-2}) to the
    remaining labels after removing z_i, z_j from z1..zn."""
    remaining = [k for k in range(1, n + 1) if k not in (i, j)]
    mapping = {k + 1: remaining[k] for k in range(len(remaining))}
    out = []
    for t in f.terms:
        num = t.num
        for old, new in sorted(mapping.items(), reverse=True):
            if old != new:
                num = _poly_subst(num, zvar(old), Poly.var(f"tmp{new}"))
        for old, new in mapping.items():
            if old != new:
                num = _poly_subst(num, f"tmp{new}", Poly.var(zvar(new)))
        poles = tuple(sorted(
            (min(mapping[a], mapping[b]), max(mapping[a], mapping[b]), m)
            for a, b, m in t.poles))
        zp = tuple(sorted((mapping[a], k) for a, k in t.zpows))
        out.append(Term(t.coeff, num, poles, zp))
    return RationalCorrelator(out)
