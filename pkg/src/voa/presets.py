"""Constructors for the standard vertex (super)algebra instances.

Shipped presets: heisenberg, virasoro (symbolic c), affine sl2/sl3 (symbolic
level k), free fermion, Weyl (beta-gamma) systems, rank-one lattice algebras
V_{sqrt(N) Z}, and commutative vertex algebras built from differential
polynomial algebras.

Lattice algebras store the boson in the rescaled normalization
[b_m, b_n] = (m/N) delta_{m,-n} so that every structure constant is
rational; see the fock module docstring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import Scalar, Poly, parse_scalar
from .fock import (ModeAlgebra, GeneratorSpec, BracketRule, BracketTerm,
                   CentralTerm, PbwMonomial, State, normal_order, apply_mode)
from .fields import field_mode, vertex_mode, translate, state_field_mode


class InvalidLieData(ValueError):
    pass


def _poly(text):
    s = parse_scalar(text)
    return s.num


# ---------------------------------------------------------------------------
# Lie data
# ---------------------------------------------------------------------------

@dataclass
class LieData:
    """Finite-dimensional Lie algebra with an invariant bilinear form.

    Structure constants: bracket[(i, j)] = {k: coefficient}; the form is
    normalized so the highest root has squared length 2, and h_vee is the
    dual Coxeter number (half the Casimir eigenvalue on the adjoint).
    """
    name: str
    basis: list
    bracket: dict
    form: list
    h_vee: Fraction = None

    def __post_init__(self):
        n = len(self.basis)
        for i in range(n):
            for j in range(n):
                for k, c in self.pair(i, j).items():
                    if self.pair(j, i).get(k, Fraction(0)) != -c:
                        raise InvalidLieData(f"bracket not antisymmetric at "
                                             f"({self.basis[i]},{self.basis[j]})")
        # [i,[j,k]] = [[i,j],k] + [j,[i,k]]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = {}
                    for tgt, c in self.pair(j, k).items():
                        for t2, c2 in self.pair(i, tgt).items():
                            lhs[t2] = lhs.get(t2, Fraction(0)) + c * c2
                    rhs = {}
                    for tgt, c in self.pair(i, j).items():
                        for t2, c2 in self.pair(tgt, k).items():
                            rhs[t2] = rhs.get(t2, Fraction(0)) + c * c2
                    for tgt, c in self.pair(i, k).items():
                        for t2, c2 in self.pair(j, tgt).items():
                            rhs[t2] = rhs.get(t2, Fraction(0)) + c * c2
                    for t2 in set(lhs) | set(rhs):
                        if lhs.get(t2, Fraction(0)) != rhs.get(t2, Fraction(0)):
                            raise InvalidLieData(
                                f"Jacobi fails at ({self.basis[i]},"
                                f"{self.basis[j]},{self.basis[k]})")
        # invariance: ([i,j], k) + (j, [i,k]) = 0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    s = sum((c * self.form[t][k] for t, c in
                             self.pair(i, j).items()), Fraction(0))
                    s += sum((c * self.form[j][t] for t, c in
                              self.pair(i, k).items()), Fraction(0))
                    if s != 0:
                        raise InvalidLieData(
                            f"form not invariant at ({self.basis[i]},"
                            f"{self.basis[j]},{self.basis[k]})")
        if self.h_vee is None:
            self.h_vee = self._dual_coxeter()

    def pair(self, i, j):
        return self.bracket.get((i, j), {})

    def gram_inverse(self):
        n = len(self.basis)
        aug = [[Fraction(x) for x in row] + [Fraction(int(i == j))
               for j in range(n)] for i, row in enumerate(self.form)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise InvalidLieData("invariant form is degenerate")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col]
            aug[col] = [x / inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return [row[n:] for row in aug]

    def _dual_coxeter(self) -> Fraction:
        """h_vee from the Casimir acting by 2 h_vee on the adjoint."""
        ginv = self.gram_inverse()
        n = len(self.basis)
        # Casimir on basis vector 0: sum_{a,b} ginv[a][b] [x_a, [x_b, x_0]]
        target = 0
        acc = {}
        for a in range(n):
            for b in range(n):
                g = ginv[a][b]
                if g == 0:
                    continue
                for t, c in self.pair(b, target).items():
                    for t2, c2 in self.pair(a, t).items():
                        acc[t2] = acc.get(t2, Fraction(0)) + g * c * c2
        eig = acc.get(target, Fraction(0))
        for t2, v in acc.items():
            if t2 != target and v != 0:
                raise InvalidLieData("Casimir is not scalar on the adjoint")
        return eig / 2


def _matrix_lie(name, named_mats):
    """LieData from explicit matrices with the trace form."""
    names = [n for n, _ in named_mats]
    mats = [m for _, m in named_mats]
    dim = len(mats[0])

    def mul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(dim))
                 for j in range(dim)] for i in range(dim)]

    def sub(a, b):
        return [[a[i][j] - b[i][j] for j in range(dim)] for i in range(dim)]

    def flat(a):
        return [a[i][j] for i in range(dim) for j in range(dim)]

    cols = [flat(m) for m in mats]

    def decompose(v):
        n = len(cols)
        aug = [[cols[c][r] for c in range(n)] + [v[r]]
               for r in range(len(v))]
        # Gaussian elimination over Q
        row = 0
        pivots = []
        for col in range(n):
            piv = next((r for r in range(row, len(aug)) if aug[r][col] != 0),
                       None)
            if piv is None:
                continue
            aug[row], aug[piv] = aug[piv], aug[row]
            inv = aug[row][col]
            aug[row] = [x / inv for x in aug[row]]
            for r in range(len(aug)):
                if r != row and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
            pivots.append(col)
            row += 1
        for r in range(row, len(aug)):
            if aug[r][-1] != 0:
                raise InvalidLieData("commutator not in the span of the basis")
        out = {c: Fraction(0) for c in range(n)}
        for r, col in enumerate(pivots):
            out[col] = aug[r][-1]
        return {c: v for c, v in out.items() if v}

    bracket = {}
    for i in range(len(mats)):
        for j in range(len(mats)):
            comm = sub(mul(mats[i], mats[j]), mul(mats[j], mats[i]))
            dec = decompose(flat(comm))
            if dec:
                bracket[(i, j)] = dec
    form = [[sum(mul(a, b)[i][i] for i in range(dim))
             for b in mats] for a in mats]
    return LieData(name, names, bracket, form)


def sl2_data() -> LieData:
    F = Fraction
    e = [[F(0), F(1)], [F(0), F(0)]]
    h = [[F(1), F(0)], [F(0), F(-1)]]
    f = [[F(0), F(0)], [F(1), F(0)]]
    return _matrix_lie("sl2", [("e", e), ("h", h), ("f", f)])


def sl3_data() -> LieData:
    F = Fraction

    def E(i, j):
        m = [[F(0)] * 3 for _ in range(3)]
        m[i][j] = F(1)
        return m

    def D(i, j):
        m = [[F(0)] * 3 for _ in range(3)]
        m[i][i] = F(1)
        m[j][j] = F(-1)
        return m

    named = [("e1", E(0, 1)), ("e2", E(1, 2)), ("e3", E(0, 2)),
             ("f1", E(1, 0)), ("f2", E(2, 1)), ("f3", E(2, 0)),
             ("h1", D(0, 1)), ("h2", D(1, 2))]
    return _matrix_lie("sl3", named)


# ---------------------------------------------------------------------------
# Algebra instances
# ---------------------------------------------------------------------------

@dataclass
class AlgebraInstance:
    name: str
    algebra: ModeAlgebra
    conformal: State | None = None
    central_charge: Scalar | None = None
    lie: LieData | None = None
    params: tuple = ()

    def state(self, word, sector=0) -> State:
        return normal_order(self.algebra, word, sector)

    def gen_state(self, gen_name: str) -> State:
        g = self.algebra.gen_index(gen_name)
        w = self.algebra.weight(g)
        return State.monomial(PbwMonomial(0, ((g, int(-w) if w else 0),)))

    def generator_states(self):
        out = []
        for g, spec in enumerate(self.algebra.generators):
            n = int(-spec.weight) if spec.weight > 0 else 0
            out.append((spec.name, State.monomial(PbwMonomial(0, ((g, n),)))))
        return out


def heisenberg(lam=None) -> AlgebraInstance:
    """Rank-one Heisenberg with conformal vector (1/2)b(-1)^2 + lam*b(-2)."""
    alg = ModeAlgebra(
        "heisenberg", [GeneratorSpec("b", Fraction(1))],
        {(0, 0): BracketRule((), CentralTerm(Scalar.one(), _poly("m")))},
        central_params=("lam",))
    if lam is None:
        lam = Scalar.param("lam")
    elif not isinstance(lam, Scalar):
        lam = Scalar.from_fraction(Fraction(lam))
    b = alg.gen_index("b")
    omega = State.monomial(PbwMonomial(0, ((b, -1), (b, -1))),
                           Fraction(1, 2)) \
        + State.monomial(PbwMonomial(0, ((b, -2),)), lam)
    cc = Scalar.one() - lam * lam * 12
    return AlgebraInstance("heisenberg", alg, omega, cc, params=("lam",))


def virasoro() -> AlgebraInstance:
    alg = ModeAlgebra(
        "virasoro", [GeneratorSpec("L", Fraction(2))],
        {(0, 0): BracketRule((BracketTerm(0, _poly("m-n")),),
                             CentralTerm(Scalar.param("c"),
                                         _poly("(m^3-m)/12")))},
        central_params=("c",))
    omega = State.monomial(PbwMonomial(0, ((0, -2),)))
    return AlgebraInstance("virasoro", alg, omega, Scalar.param("c"),
                           params=("c",))


def affine(lie: LieData, level=None) -> AlgebraInstance:
    """Vacuum module V_k(g): [x_m, y_n] = [x,y]_{m+n} + m (x,y) k delta."""
    k = Scalar.param("k") if level is None else (
        level if isinstance(level, Scalar)
        else Scalar.from_fraction(Fraction(level)))
    gens = [GeneratorSpec(nm, Fraction(1)) for nm in lie.basis]
    rules = {}
    for (i, j), targets in lie.bracket.items():
        if i > j:
            continue
        terms = tuple(BracketTerm(t, Poly.const(c)) for t, c in
                      sorted(targets.items()))
        central = None
        if lie.form[i][j]:
            central = CentralTerm(k, _poly("m").scale(lie.form[i][j]))
        rules[(i, j)] = BracketRule(terms, central)
    for i in range(len(lie.basis)):
        for j in range(i, len(lie.basis)):
            if (i, j) not in rules and lie.form[i][j]:
                rules[(i, j)] = BracketRule(
                    (), CentralTerm(k, _poly("m").scale(lie.form[i][j])))
    name = f"affine:{lie.name}"
    alg = ModeAlgebra(name, gens, rules, vacuum_symbol="v_k",
                      central_params=("k",) if level is None else ())
    inst = AlgebraInstance(name, alg, lie=lie,
                           params=("k",) if level is None else ())
    try:
        inst.conformal = sugawara(inst)
        dim_g = len(lie.basis)
        inst.central_charge = (k * dim_g) / (k + Scalar.from_fraction(lie.h_vee))
    except ZeroDivisionError:
        pass
    return inst


def sugawara(inst: AlgebraInstance) -> State:
    """Sugawara vector 1/(2(k+h_vee)) sum_{a,b} G^{ab} J^a_{-1} J^b_{-1} v_k.

    The orthonormal-basis sum is contracted with the inverse Gram matrix of
    the chosen basis, which is equivalent and stays rational.
    """
    lie = inst.lie
    alg = inst.algebra
    if lie is None:
        raise ValueError("sugawara requires an affine instance")
    k = Scalar.param("k") if "k" in alg.central_params else None
    if k is None:
        # fixed numeric level embedded in the central terms
        rule = next(r for r in alg.rules.values() if r.central is not None)
        k = rule.central.scalar / Scalar.from_fraction(
            rule.central.coeff.evaluate({"m": Fraction(1)}))
    denom = (k + Scalar.from_fraction(lie.h_vee)) * 2
    if denom.is_zero:
        raise ZeroDivisionError("level equals the critical level -h_vee")
    ginv = lie.gram_inverse()
    omega = State.zero()
    for a in range(len(lie.basis)):
        for b in range(len(lie.basis)):
            g = ginv[a][b]
            if g == 0:
                continue
            v = apply_mode(alg, a, -1,
                           apply_mode(alg, b, -1, State.vacuum()))
            omega = omega + v.scale(g)
    return omega.scale(Scalar.one() / denom)


def free_fermion() -> AlgebraInstance:
    """Charged fermions: psi of weight 1, psi* of weight 0."""
    alg = ModeAlgebra(
        "fermion",
        [GeneratorSpec("psi", Fraction(1), True),
         GeneratorSpec("psi*", Fraction(0), True)],
        {(0, 1): BracketRule((), CentralTerm(Scalar.one(), _poly("1")))})
    # bc-type conformal vector -:psi dpsi*: with c = -2
    p, q = alg.gen_index("psi"), alg.gen_index("psi*")
    omega = State.monomial(PbwMonomial(0, ((p, -1), (q, -1))), -1)
    return AlgebraInstance("fermion", alg, omega,
                           Scalar.from_fraction(Fraction(-2)))


def weyl(N: int = 1) -> AlgebraInstance:
    """N beta-gamma pairs: [a_{i,m}, a*_{j,n}] = delta_ij delta_{m,-n}."""
    gens = []
    for i in range(1, N + 1):
        gens.append(GeneratorSpec(f"a{i}" if N > 1 else "a", Fraction(1)))
    for i in range(1, N + 1):
        gens.append(GeneratorSpec(f"a*{i}" if N > 1 else "a*", Fraction(0)))
    rules = {}
    for i in range(N):
        rules[(i, N + i)] = BracketRule(
            (), CentralTerm(Scalar.one(), _poly("1")))
    alg = ModeAlgebra(f"weyl:{N}" if N > 1 else "weyl:1", gens, rules)
    omega = State.zero()
    for i in range(N):
        omega = omega + State.monomial(PbwMonomial(0, ((i, -1), (N + i, -1))))
    return AlgebraInstance(alg.name, alg, omega,
                           Scalar.from_fraction(2 * N))


def lattice(N: int) -> AlgebraInstance:
    """Rank-one lattice algebra V_{sqrt(N) Z}; super iff N is odd."""
    if N < 1:
        raise ValueError("lattice rank parameter N must be >= 1")
    alg = ModeAlgebra(
        f"lattice:{N}", [GeneratorSpec("b", Fraction(1))],
        {(0, 0): BracketRule((), CentralTerm(Scalar.one(),
                                             _poly("m").scale(Fraction(1, N))))},
        lattice_N=N, charge_gen=0)
    b = alg.gen_index("b")
    omega = State.monomial(PbwMonomial(0, ((b, -1), (b, -1))),
                           Fraction(N, 2))
    return AlgebraInstance(alg.name, alg, omega, Scalar.one())


def commutative_va(num_gens: int = 1) -> AlgebraInstance:
    """Commutative vertex algebra of a differential polynomial algebra.

    Generators x (or x1..xn) with zero brackets; x(-1-j)|0> represents the
    j-th derivative divided by j!, and Y(A,z) = sum m(T^n A) z^n / n!.
    """
    gens = [GeneratorSpec(f"x{i}" if num_gens > 1 else "x", Fraction(1))
            for i in range(1, num_gens + 1)]
    alg = ModeAlgebra("commutative", gens, {})
    return AlgebraInstance("commutative", alg)


# ---------------------------------------------------------------------------
# Lattice vertex operators and the boson-fermion correspondence
# ---------------------------------------------------------------------------

def lattice_vertex_op(inst: AlgebraInstance, lam: int, window, target: State):
    """Coefficients of Y(1_lam, z) target as {z-exponent: State}."""
    alg = inst.algebra
    w = alg.sector_energy(lam)
    out = {}
    for e in window:
        acc = State.zero()
        for mono, c in target.terms.items():
            acc = acc + vertex_mode(alg, lam, -Fraction(e) - w, mono).scale(c)
        if not acc.is_zero:
            out[Fraction(e)] = acc
    return out


@dataclass
class BosonFermionReport:
    degree: int
    passed: bool
    mismatch: str | None = None
    dims: list = field(default_factory=list)

    def render(self) -> str:
        lines = [f"boson-fermion check to degree {self.degree}: "
                 f"{'pass' if self.passed else 'FAIL'}"]
        for d, nf, nl in self.dims:
            lines.append(f"  degree {d}: fermion dim {nf}, lattice dim {nl}")
        if self.mismatch:
            lines.append(f"  mismatch: {self.mismatch}")
        return "\n".join(lines)


def _fermion_to_lattice(ferm: AlgebraInstance, lat: AlgebraInstance,
                        mono: PbwMonomial) -> State:
    """Image of a fermion PBW monomial under psi -> Y(1_{-1}), psi* -> Y(1_1).

    Mode matching: psi_n = (Gamma_{-1})_[n + 1/2], psi*_n = (Gamma_1)_[n - 1/2].
    """
    lalg = lat.algebra
    psi = ferm.algebra.gen_index("psi")
    out = State.vacuum(0)
    for g, n in reversed(mono.word):
        if g == psi:
            out = field_mode(lalg, ("vert", -1), Fraction(2 * n + 1, 2), out)
        else:
            out = field_mode(lalg, ("vert", 1), Fraction(2 * n - 1, 2), out)
    return out


def boson_fermion_check(D: int = 4) -> BosonFermionReport:
    """Verify the correspondence Lambda ~ V_Z on basis states up to degree D.

    The lattice grading is charge-shifted against the fermion grading
    (deg_ferm = deg_lat - m/2 on the charge-m sector); dimensions are
    compared under that shift and mode intertwining is checked directly.
    """
    from .fock import basis_monomials, all_sector_monomials, render_monomial
    ferm = free_fermion()
    lat = lattice(1)
    falg, lalg = ferm.algebra, lat.algebra
    report = BosonFermionReport(D, True)

    # graded dimensions under the charge shift
    for d in range(D + 1):
        nf = len(basis_monomials(falg, d, 0))
        nl = 0
        m = -3 * D - 2
        while m <= 3 * D + 2:
            dl = Fraction(d) + Fraction(m, 2)
            if dl >= lalg.sector_energy(m):
                nl += len(basis_monomials(lalg, dl, m))
            m += 1
        report.dims.append((d, nf, nl))
        if nf != nl:
            report.passed = False
            report.mismatch = f"graded dimension at degree {d}: {nf} != {nl}"
            return report

    # intertwining of modes on basis states
    psi = falg.gen_index("psi")
    for d in range(D + 1):
        for mono in basis_monomials(falg, d, 0):
            v = State.monomial(mono)
            img = _fermion_to_lattice(ferm, lat, mono)
            for g in (0, 1):
                lo = -d - 2
                hi = d + 1
                for n in range(lo, hi + 1):
                    fv = apply_mode(falg, g, n, v)
                    fimg = State.zero()
                    for m2, c in fv.terms.items():
                        fimg = fimg + _fermion_to_lattice(ferm, lat, m2).scale(c)
                    p = Fraction(2 * n + 1, 2) if g == psi \
                        else Fraction(2 * n - 1, 2)
                    limg = field_mode(lalg, ("vert", -1 if g == psi else 1),
                                      p, img)
                    if fimg != limg:
                        gen = falg.generators[g].name
                        report.passed = False
                        report.mismatch = (f"{gen}({n}) on "
                                           f"{render_monomial(falg, mono)}")
                        return report
    return report


# ---------------------------------------------------------------------------
# Preset registry (CLI entry point)
# ---------------------------------------------------------------------------

def get_preset(name: str, level=None, lam=None) -> AlgebraInstance:
    if name == "heisenberg":
        return heisenberg(lam)
    if name == "virasoro":
        return virasoro()
    if name == "fermion":
        return free_fermion()
    if name == "commutative":
        return commutative_va()
    if name.startswith("affine:"):
        which = name.split(":", 1)[1]
        if which == "sl2":
            return affine(sl2_data(), level)
        if which == "sl3":
            return affine(sl3_data(), level)
        raise ValueError(f"unknown Lie algebra {which!r}")
    if name.startswith("weyl:"):
        return weyl(int(name.split(":", 1)[1]))
    if name.startswith("lattice:"):
        return lattice(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown preset {name!r}")


PRESET_NAMES = ["heisenberg", "virasoro", "affine:sl2", "affine:sl3",
                "fermion", "weyl:1", "lattice:1", "lattice:2", "commutative"]
