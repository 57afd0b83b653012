"""The Mumford-system Poisson bracket on the coefficients of a traceless 2x2 Lax matrix.

Phase space for genus g: alpha = sum a_i lam^i (i < g), beta = lam^g + sum b_i lam^i,
gamma = lam^{g+1} + sum_{i <= g} c_i lam^i.  Brackets live coefficientwise in a
finite antisymmetric table; everything else is the chain rule against that table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .diffjet import R, locus_jet
from .exact import ONE, ZERO, Atom, MultiPoly, Q, X, moduli_atom, s_atom, spec_atom, u_atom
from .laxmat import E21, LaxMat
from .minimal import build_Ag, build_U2n1, c_values, toeplitz
from .series import LambdaSeries
from .symfunc import e_from_roots

LAM, MU = spec_atom(0), spec_atom(1)
ROLES = ("a", "b", "c")


@dataclass(frozen=True)
class MumfordPhase:
    g: int

    def size(self, role: str) -> int:
        return self.g + 1 if role == "c" else self.g

    def atoms(self, role: str | None = None) -> list:
        roles = ROLES if role is None else (role,)
        return [moduli_atom(r, i) for r in roles for i in range(self.size(r))]

    def coeffs(self, role: str) -> dict:
        """{power: coefficient} with the monic leading term included."""
        out = {i: X(moduli_atom(role, i)) for i in range(self.size(role))}
        if role == "b":
            out[self.g] = MultiPoly.const(ONE)
        elif role == "c":
            out[self.g + 1] = MultiPoly.const(ONE)
        return out

    def poly(self, role: str, var: Atom = LAM) -> MultiPoly:
        return sum((c * X(var, i) for i, c in self.coeffs(role).items()), MultiPoly())

    def lax(self, var: Atom = LAM) -> list:
        """[[alpha, beta], [gamma, -alpha]] as MultiPolys in var."""
        a, b, c = (self.poly(r, var) for r in ROLES)
        return [[a, b], [c, -a]]

    def values_from(self, A: LaxMat) -> dict:
        """Read the coefficients off a numeric Lax matrix of this shape."""
        vals = {}
        for role, entry in zip(ROLES, (A[0, 0], A[0, 1], A[1, 0])):
            for i in range(self.size(role)):
                vals[moduli_atom(role, i)] = Q(entry[i])
        return vals


def divided_difference(coeffs: Mapping) -> MultiPoly:
    """(P(lam) - P(mu))/(lam - mu) for P = sum coeffs[n] z^n."""
    total = MultiPoly()
    for n, c in coeffs.items():
        for i in range(n):
            total = total + c * X(LAM, i) * X(MU, n - 1 - i)
    return total


def scalar_formulas(g: int) -> dict:
    """The two-variable bracket formulas {X(lam), Y(mu)} for role pairs (X, Y)."""
    ph = MumfordPhase(g)
    a_l, a_m = ph.poly("a", LAM), ph.poly("a", MU)
    b_l = ph.poly("b", LAM)
    return {
        ("a", "a"): MultiPoly(),
        ("b", "b"): MultiPoly(),
        ("a", "b"): divided_difference(ph.coeffs("b")),
        ("a", "c"): -divided_difference(ph.coeffs("c")) + b_l,
        ("b", "c"): divided_difference(ph.coeffs("a")).scale(2),
        ("c", "c"): (a_l - a_m).scale(-2),
    }


class CoeffBracket:
    """Antisymmetric table {x, y} over phase atoms, extended by the chain rule."""

    def __init__(self, g: int, table: dict):
        self.g = g
        self.phase = MumfordPhase(g)
        self.table = table

    def __getitem__(self, pair) -> MultiPoly:
        return self.table.get(pair, MultiPoly())

    def pairs(self):
        return self.table.items()

    def bracket(self, f: MultiPoly, h: MultiPoly) -> MultiPoly:
        f, h = MultiPoly.lift(f), MultiPoly.lift(h)
        atoms = self.phase.atoms()
        df = {x: f.diff(x) for x in atoms if x in f.atoms()}
        dh = {y: h.diff(y) for y in atoms if y in h.atoms()}
        total = MultiPoly()
        for x, fx in df.items():
            for y, hy in dh.items():
                t = self.table.get((x, y))
                if t:
                    total = total + fx * hy * t
        return total

    def at(self, values: Mapping) -> "NumericBracket":
        return NumericBracket({k: v.evaluate(values) if v.atoms() else v.constant_term() for k, v in self.table.items()})

    def reconstruct(self, X_role: str, Y_role: str) -> MultiPoly:
        """sum_{i,j} {X_i, Y_j} lam^i mu^j."""
        total = MultiPoly()
        for i in range(self.phase.size(X_role)):
            for j in range(self.phase.size(Y_role)):
                v = self[(moduli_atom(X_role, i), moduli_atom(Y_role, j))]
                if v:
                    total = total + v * X(LAM, i) * X(MU, j)
        return total


@dataclass
class NumericBracket:
    table: dict

    def __call__(self, grad_f: Mapping, grad_h: Mapping):
        total = ZERO
        for x, fx in grad_f.items():
            if not fx:
                continue
            for y, hy in grad_h.items():
                t = self.table.get((x, y))
                if t and hy:
                    total += fx * hy * t
        return total


def derive_coeff_brackets(g: int) -> CoeffBracket:
    """Match lam^i mu^j coefficients of the scalar formulas.

    Raises ArithmeticError if a formula puts weight on a monic leading coefficient,
    which would make it inconsistent with a constant entry.
    """
    ph = MumfordPhase(g)
    table: dict = {}
    for (r1, r2), F in scalar_formulas(g).items():
        for i, row in F.collect(LAM).items():
            for j, v in row.collect(MU).items():
                if not v:
                    continue
                if i >= ph.size(r1) or j >= ph.size(r2):
                    raise ArithmeticError(f"{{{r1}, {r2}}} has weight on lam^{i} mu^{j}")
                x, y = moduli_atom(r1, i), moduli_atom(r2, j)
                if (x, y) in table and table[(x, y)] != v:
                    raise ArithmeticError("inconsistent symmetric block")
                table[(x, y)] = v
                table[(y, x)] = -v
    return CoeffBracket(g, table)


def coefficient_rule(g: int) -> dict:
    """The table in closed form, for display: role pair -> text."""
    return {
        "{a_p, b_q}": "b_{p+q+1}",
        "{a_p, c_q}": "-c_{p+q+1} + [q=0] b_p",
        "{b_p, c_q}": "2 a_{p+q+1}",
        "{c_p, c_q}": "-2 a_p [q=0] + 2 a_q [p=0]",
        "{a_p, a_q}": "0",
        "{b_p, b_q}": "0",
        "monic": f"b_{g} = c_{g + 1} = 1, a_j = 0 for j >= {g}",
    }


def scalar_table_check(g: int) -> bool:
    """Rebuilding every two-variable formula from the table gives it back exactly."""
    br = derive_coeff_brackets(g)
    formulas = scalar_formulas(g)
    for (r1, r2), F in formulas.items():
        if br.reconstruct(r1, r2) != F:
            return False
    # the reversed orders follow by antisymmetry
    swap = {LAM: X(MU), MU: X(LAM)}
    for (r1, r2), F in formulas.items():
        if br.reconstruct(r2, r1) != -F.subs(swap):
            return False
    return True


# -- tensor form ----------------------------------------------------------------

_ZERO_P = MultiPoly()


def _mat(rows) -> list:
    return [[MultiPoly.lift(v) for v in r] for r in rows]


def _mat2_mul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), MultiPoly()) for j in range(n)] for i in range(n)]


def _sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def kron(A, B) -> list:
    """4x4 matrix of A (x) B, index (i, k) -> 2i + k."""
    out = [[_ZERO_P] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[2 * i + k][2 * j + l] = A[i][j] * B[k][l]
    return out


def commutator4(A, B) -> list:
    return _sub(_mat2_mul(A, B), _mat2_mul(B, A))


IDENT = _mat([[1, 0], [0, 1]])
SIGMA3 = _mat([[1, 0], [0, -1]])
SIGMA_P = _mat([[0, 1], [0, 0]])
SIGMA_M = _mat([[0, 0], [1, 0]])
SIGMA = {"I": IDENT, "3": SIGMA3, "+": SIGMA_P, "-": SIGMA_M}
PERM = [[MultiPoly.lift(1 if (c == 2 * (r % 2) + r // 2) else 0) for c in range(4)] for r in range(4)]
DELTA = kron(SIGMA_M, SIGMA_M)


def sigma_components(M: list) -> dict:
    """Coordinates of a 4x4 matrix in the basis sigma_x (x) sigma_y, x, y in I, 3, +, -."""
    # E_ab (x) E_cd coefficient sits at row 2a+c, column 2b+d
    def e(a, b, c, d):
        return M[2 * a + c][2 * b + d]

    def split(a_diag_plus, a_diag_minus):
        return (a_diag_plus + a_diag_minus).scale(Q(1, 2)), (a_diag_plus - a_diag_minus).scale(Q(1, 2))

    first = {}
    # decompose the first factor, keeping the second as (c, d) index pairs
    for c in range(2):
        for d in range(2):
            I_part, s3_part = split(e(0, 0, c, d), e(1, 1, c, d))
            first[("I", c, d)] = I_part
            first[("3", c, d)] = s3_part
            first[("+", c, d)] = e(0, 1, c, d)
            first[("-", c, d)] = e(1, 0, c, d)
    out = {}
    for x in SIGMA:
        I_part, s3_part = split(first[(x, 0, 0)], first[(x, 1, 1)])
        out[(x, "I")] = I_part
        out[(x, "3")] = s3_part
        out[(x, "+")] = first[(x, 0, 1)]
        out[(x, "-")] = first[(x, 1, 0)]
    return {k: v for k, v in out.items() if v}


def tensor_definition_scaled(g: int) -> list:
    """(lam - mu) times the commutator definition, a polynomial 4x4 matrix."""
    ph = MumfordPhase(g)
    Al, Am = ph.lax(LAM), ph.lax(MU)
    left = kron(Al, IDENT)
    right = kron(IDENT, Am)
    d = X(LAM) - X(MU)
    r_part = commutator4(_add(left, right), PERM)
    delta_part = commutator4(_sub(left, right), DELTA)
    return _add(r_part, [[v * d for v in row] for row in delta_part])


def tensor_from_table_scaled(br: CoeffBracket) -> list:
    """(lam - mu) sum {A_ab(lam), A_cd(mu)} E_ab (x) E_cd from the coefficient table."""
    ph = br.phase
    Al, Am = ph.lax(LAM), ph.lax(MU)
    d = X(LAM) - X(MU)
    out = [[_ZERO_P] * 4 for _ in range(4)]
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for e in range(2):
                    out[2 * a + c][2 * b + e] = br.bracket(Al[a][b], Am[c][e]) * d
    return out


def closed_form_components_scaled(g: int) -> dict:
    """(lam - mu) times the closed-form sigma expansion of the bracket."""
    ph = MumfordPhase(g)
    a = (ph.poly("a", LAM), ph.poly("a", MU))
    b = (ph.poly("b", LAM), ph.poly("b", MU))
    c = (ph.poly("c", LAM), ph.poly("c", MU))
    d = X(LAM) - X(MU)
    da, db, dc = a[0] - a[1], b[0] - b[1], c[0] - c[1]
    comps = {
        ("-", "-"): da.scale(-2) * d,
        ("+", "-"): da.scale(2),
        ("-", "+"): da.scale(-2),
        ("3", "+"): db,
        ("+", "3"): -db,
        ("3", "-"): -dc + b[0] * d,
        ("-", "3"): dc - b[1] * d,
    }
    return {k: v for k, v in comps.items() if v}


def tensor_vs_scalar_check(g: int) -> dict:
    """Compare the commutator definition, the coefficient table and the closed form."""
    definition = sigma_components(tensor_definition_scaled(g))
    from_table = sigma_components(tensor_from_table_scaled(derive_coeff_brackets(g)))
    closed = closed_form_components_scaled(g)
    keys = sorted(set(definition) | set(from_table) | set(closed))
    mismatches = [
        k for k in keys
        if not (definition.get(k, _ZERO_P) == from_table.get(k, _ZERO_P) == closed.get(k, _ZERO_P))
    ]
    return {"ok": not mismatches, "mismatches": mismatches, "components": keys}


def commutator_table() -> dict:
    """[1 (x) s, P], [s (x) 1, P], [1 (x) s, Delta], [s (x) 1, Delta] as sigma components."""
    out = {}
    for name in ("3", "+", "-"):
        s = SIGMA[name]
        for side, op in (("1x", kron(IDENT, s)), ("x1", kron(s, IDENT))):
            out[(side + name, "P")] = sigma_components(commutator4(op, PERM))
            out[(side + name, "Delta")] = sigma_components(commutator4(op, DELTA))
    return out


def _as_component(pairs: Sequence) -> dict:
    return {(x, y): MultiPoly.const(Q(c)) for x, y, c in pairs}


EXPECTED_COMMUTATORS = {
    ("1x3", "P"): _as_component([("-", "+", 2), ("+", "-", -2)]),
    ("x13", "P"): _as_component([("-", "+", -2), ("+", "-", 2)]),
    ("1x+", "P"): _as_component([("+", "3", 1), ("3", "+", -1)]),
    ("x1+", "P"): _as_component([("+", "3", -1), ("3", "+", 1)]),
    ("1x-", "P"): _as_component([("3", "-", 1), ("-", "3", -1)]),
    ("x1-", "P"): _as_component([("3", "-", -1), ("-", "3", 1)]),
    ("1x3", "Delta"): _as_component([("-", "-", -2)]),
    ("x13", "Delta"): _as_component([("-", "-", -2)]),
    ("1x+", "Delta"): _as_component([("-", "3", 1)]),
    ("x1+", "Delta"): _as_component([("3", "-", 1)]),
    ("1x-", "Delta"): {},
    ("x1-", "Delta"): {},
}


def commutator_table_check() -> list:
    """Keys where the computed commutators differ from the expected table."""
    computed = commutator_table()
    return [k for k, v in EXPECTED_COMMUTATORS.items() if computed[k] != v]


# -- canonical coordinates --------------------------------------------------------


@dataclass
class RootConfiguration:
    g: int
    roots: tuple
    values: dict  # phase atom -> rational

    def alpha(self, z):
        return sum((self.values[moduli_atom("a", i)] * z**i for i in range(self.g)), ZERO)

    def alpha_prime(self, z):
        return sum((i * self.values[moduli_atom("a", i)] * z ** (i - 1) for i in range(1, self.g)), ZERO)

    def beta_prime(self, z):
        total = self.g * z ** (self.g - 1)
        for i in range(1, self.g):
            total += i * self.values[moduli_atom("b", i)] * z ** (i - 1)
        return total

    @property
    def mus(self) -> list:
        return [self.alpha(l) for l in self.roots]


def random_root_configuration(g: int, rng: random.Random) -> RootConfiguration:
    """Distinct rational roots fix beta; alpha and gamma coefficients are free."""
    roots = []
    while len(roots) < g:
        r = Q(rng.randint(-12, 12), rng.randint(1, 3))
        if r not in roots:
            roots.append(r)
    e = e_from_roots(roots)
    vals = {}
    for i in range(g):
        vals[moduli_atom("b", i)] = e[g - i] * (1 if (g - i) % 2 == 0 else -1)
        vals[moduli_atom("a", i)] = Q(rng.randint(-9, 9), rng.randint(1, 4))
    for i in range(g + 1):
        vals[moduli_atom("c", i)] = Q(rng.randint(-9, 9), rng.randint(1, 4))
    return RootConfiguration(g, tuple(roots), vals)


def lambda_gradient(cfg: RootConfiguration, i: int) -> dict:
    """d lam_i / d b_k = -lam_i^k / beta'(lam_i); no dependence on a or c."""
    li = cfg.roots[i]
    bp = cfg.beta_prime(li)
    if not bp:
        raise ZeroDivisionError("repeated root")
    return {moduli_atom("b", k): -(li**k) / bp for k in range(cfg.g)}


def mu_gradient(cfg: RootConfiguration, i: int) -> dict:
    """mu_i = alpha(lam_i)."""
    li = cfg.roots[i]
    grad = {moduli_atom("a", k): li**k for k in range(cfg.g)}
    ap = cfg.alpha_prime(li)
    for x, v in lambda_gradient(cfg, i).items():
        grad[x] = grad.get(x, ZERO) + ap * v
    return grad


def canonical_brackets(br: CoeffBracket, cfg: RootConfiguration) -> dict:
    """{lam_i, lam_j}, {mu_i, mu_j}, {lam_i, mu_j} as g x g rational matrices."""
    nb = br.at(cfg.values)
    lg = [lambda_gradient(cfg, i) for i in range(cfg.g)]
    mg = [mu_gradient(cfg, i) for i in range(cfg.g)]
    n = range(cfg.g)
    return {
        "lam_lam": [[nb(lg[i], lg[j]) for j in n] for i in n],
        "mu_mu": [[nb(mg[i], mg[j]) for j in n] for i in n],
        "lam_mu": [[nb(lg[i], mg[j]) for j in n] for i in n],
    }


def canonical_check(g: int, seeds: Sequence[int]) -> dict:
    br = derive_coeff_brackets(g)
    for seed in seeds:
        cfg = random_root_configuration(g, random.Random(seed))
        m = canonical_brackets(br, cfg)
        for i in range(g):
            for j in range(g):
                want = ONE if i == j else ZERO
                if m["lam_lam"][i][j] or m["mu_mu"][i][j] or m["lam_mu"][i][j] != want:
                    return {"ok": False, "seed": seed, "i": i, "j": j, "roots": [str(r) for r in cfg.roots]}
    return {"ok": True}


# -- Casimirs -------------------------------------------------------------------------


def minus_det(g: int) -> MultiPoly:
    ph = MumfordPhase(g)
    a, b, c = (ph.poly(r) for r in ROLES)
    return a * a + b * c


def casimir_coefficients(g: int) -> dict:
    """{k: coefficient of lam^k in alpha^2 + beta gamma} for k = g..2g+1."""
    h = minus_det(g).collect(LAM)
    return {k: h.get(k, MultiPoly()) for k in range(g, 2 * g + 2)}


def casimir_brackets(g: int) -> dict:
    """{(phase atom, k): {x, coefficient_k}} symbolically."""
    br = derive_coeff_brackets(g)
    out = {}
    for k, Ik in casimir_coefficients(g).items():
        for x in br.phase.atoms():
            out[(x, k)] = br.bracket(X(x), Ik)
    return out


def casimir_check(g: int, symbolic: bool = True, seeds: Sequence[int] = (0,)) -> bool:
    if symbolic:
        return all(not v for v in casimir_brackets(g).values())
    br = derive_coeff_brackets(g)
    ph = br.phase
    coeffs = casimir_coefficients(g)
    grads = {k: {x: Ik.diff(x) for x in ph.atoms() if x in Ik.atoms()} for k, Ik in coeffs.items()}
    for seed in seeds:
        cfg = random_root_configuration(g, random.Random(seed))
        nb = br.at(cfg.values)
        for k, gr in grads.items():
            gnum = {x: v.evaluate(cfg.values) if v.atoms() else v.constant_term() for x, v in gr.items()}
            for x in ph.atoms():
                if nb({x: ONE}, gnum):
                    return False
            for i in range(g):
                if nb(lambda_gradient(cfg, i), gnum) or nb(mu_gradient(cfg, i), gnum):
                    return False
    return True


# -- ad-invariant flows -----------------------------------------------------------------


def random_physical_jet(g: int, rng: random.Random) -> dict:
    """A string-locus jet: free u^{(0..2g-1)}, x and times, u^{(2g)} solved."""
    free = {u_atom(k): Q(rng.randint(-6, 6), rng.randint(1, 3)) for k in range(2 * g)}
    for l in range(g):
        free[s_atom(l)] = Q(rng.randint(-6, 6), rng.randint(1, 3))
    return locus_jet(g, free)


def _eval_entry(p) -> Callable:
    return lambda c: c.evaluate(p) if isinstance(c, MultiPoly) and c.atoms() else (
        c.constant_term() if isinstance(c, MultiPoly) else c
    )


def bracket_with_invariants(g: int, jet: Mapping) -> tuple:
    """(A at the jet, [{A(lam), I_k} for k = 1..g]) as numeric Lax matrices."""
    ev = _eval_entry(jet)
    A = build_Ag(g).map_coeffs(ev)
    br = derive_coeff_brackets(g)
    ph = br.phase
    vals = ph.values_from(A)
    nb = br.at(vals)
    h = minus_det(g).collect(LAM)
    out = []
    for k in range(1, g + 1):
        Ik = h.get(g - k, MultiPoly())
        grad = {x: Ik.diff(x).evaluate(vals) for x in ph.atoms() if x in Ik.atoms()}

        def entry(role: str, sign: int = 1) -> LambdaSeries:
            return LambdaSeries({i: sign * nb({moduli_atom(role, i): ONE}, grad) for i in range(ph.size(role))})

        out.append(LaxMat(entry("a"), entry("b"), entry("c"), entry("a", -1)))
    return A, out


def single_flow_matrix(A: LaxMat, g: int, l: int, jet: Mapping) -> LaxMat:
    """[lam^{l-g} A]_+ - E21 R_{2l+1}."""
    return A.shift(l - g).plus_part() - E21(R(2 * l + 1).evaluate(jet))


def ad_flow_sides(g: int, l: int, jet: Mapping, literal: bool = True) -> tuple:
    """({A(lam), I_{l+1}}, right-hand side) at the jet.

    literal=True: [[lam^{l-g} A]_+ - E21 R_{2l+1}, A].
    literal=False: sum_j C(s)_{l+1, j} [[lam^j U]_+ - E21 R_{2j+1}, A], C the Toeplitz matrix.
    """
    A, lhs = bracket_with_invariants(g, jet)
    if literal:
        return lhs[l], single_flow_matrix(A, g, l, jet).commutator(A)
    c = c_values(g, {a.index: v for a, v in jet.items() if a.tag == s_atom(0).tag})
    C = toeplitz(c, g, g)
    ev = _eval_entry(jet)
    rhs = None
    for j in range(g):
        if C[l][j]:
            term = build_U2n1(j).map_coeffs(ev).commutator(A).scale(C[l][j])
            rhs = term if rhs is None else rhs + term
    return lhs[l], rhs


def ad_flow_check(g: int, seed: int = 0, literal: bool = True) -> dict:
    jet = random_physical_jet(g, random.Random(seed))
    bad = []
    for l in range(g):
        a, b = ad_flow_sides(g, l, jet, literal)
        if a != b:
            bad.append(l)
    return {"ok": not bad, "failing_l": bad}


# -- structural properties -------------------------------------------------------------


def random_linear_observable(ph: MumfordPhase, rng: random.Random) -> MultiPoly:
    return sum((X(x).scale(Q(rng.randint(-5, 5), rng.randint(1, 3))) for x in ph.atoms()), MultiPoly())


def random_quadratic_observable(ph: MumfordPhase, rng: random.Random) -> MultiPoly:
    atoms = ph.atoms()
    f = random_linear_observable(ph, rng)
    for _ in range(3):
        f = f + X(rng.choice(atoms)) * X(rng.choice(atoms)).scale(rng.randint(-3, 3))
    return f


def jacobi_residual(br: CoeffBracket, f, h, k) -> MultiPoly:
    b = br.bracket
    return b(f, b(h, k)) + b(h, b(k, f)) + b(k, b(f, h))


def jacobi_check(g: int, trials: int = 20, seed: int = 0) -> bool:
    br = derive_coeff_brackets(g)
    rng = random.Random(seed)
    for _ in range(trials):
        f, h, k = (random_linear_observable(br.phase, rng) for _ in range(3))
        if jacobi_residual(br, f, h, k):
            return False
    return True


def antisymmetry_leibniz_check(g: int, trials: int = 5, seed: int = 0) -> bool:
    br = derive_coeff_brackets(g)
    rng = random.Random(seed)
    b = br.bracket
    for _ in range(trials):
        f, h, k = (random_quadratic_observable(br.phase, rng) for _ in range(3))
        if b(f, h) != -b(h, f):
            return False
        if b(f, h * k) != b(f, h) * k + h * b(f, k):
            return False
    return True


def gauge_covariance_check(g: int = 1, gauge=Q(3, 2)) -> bool:
    """{G^-1 A G (x), G^-1 A G} = (G (x) G)^-1 {A (x), A} (G (x) G) for G = 1 + gauge E21."""
    br = derive_coeff_brackets(g)
    ph = br.phase
    G = _mat([[1, 0], [gauge, 1]])
    Ginv = _mat([[1, 0], [-gauge, 1]])

    def conj(M):
        return _mat2_mul(_mat2_mul(Ginv, M), G)

    Al, Am = conj(ph.lax(LAM)), conj(ph.lax(MU))
    d = X(LAM) - X(MU)
    lhs = [[_ZERO_P] * 4 for _ in range(4)]
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for e in range(2):
                    lhs[2 * a + c][2 * b + e] = br.bracket(Al[a][b], Am[c][e]) * d
    base = tensor_from_table_scaled(br)
    GG, GGinv = kron(G, G), kron(Ginv, Ginv)
    rhs = _mat2_mul(_mat2_mul(GGinv, base), GG)
    return lhs == rhs
