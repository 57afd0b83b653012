"""Wave matrices of the (2,2g+1) minimal model, their compatibility, and spectral data."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .diffjet import (
    R,
    U,
    c_coeff,
    d_s,
    d_x,
    reduce_mod_string,
    string_lhs,
)
from .exact import ONE, ZERO, MultiPoly, Q, s_atom
from .laxmat import E21, LaxMat
from .series import LambdaSeries, div


# -- wave matrices ------------------------------------------------------------


@lru_cache(maxsize=None)
def build_U(depth: int) -> LaxMat:
    """U = (A B; C -A) with B = sum R_{2k-1} lambda^{-k}, valid down to lambda^{-depth}."""
    B = LambdaSeries({-k: R(2 * k - 1) for k in range(depth + 2)}, lowest=-depth - 1)
    Bx = B.map_coeffs(d_x)
    Bxx = Bx.map_coeffs(d_x)
    A = Bx.scale(Q(-1, 2)).truncate(-depth)
    lam_minus_u = LambdaSeries({1: ONE, 0: -U(0)})
    C = (Bxx.scale(Q(-1, 2)) + lam_minus_u * B).truncate(-depth)
    return LaxMat(A, B.truncate(-depth), C, -A)


@lru_cache(maxsize=None)
def build_U2n1(n: int) -> LaxMat:
    """[lambda^n U]_{inf,+} - E21 R_{2n+1}."""
    Umat = build_U(n + 1)
    return Umat.shift(n).plus_part() - E21(R(2 * n + 1))


@lru_cache(maxsize=None)
def build_Ag(g: int) -> LaxMat:
    """A^(g) = sum_{l=1}^{g+1} c_{2l-1} U_{2l-1}."""
    total = None
    for l in range(1, g + 2):
        c = c_coeff(g, l)
        if not c:
            continue
        term = build_U2n1(l - 1).map_coeffs(lambda p, c=c: p * c)
        total = term if total is None else total + term
    return total


def det_U_check(depth: int = 6) -> tuple:
    """(det U, -det U) to the requested depth."""
    d = build_U(depth).det()
    return d, -d


# -- zero curvature -----------------------------------------------------------


def _ds_mat(l: int, m: LaxMat) -> LaxMat:
    return m.map_coeffs(lambda p: d_s(l, p))


def _dx_mat(m: LaxMat) -> LaxMat:
    return m.map_coeffs(d_x)


def kdv_compat_residual(l: int) -> LaxMat:
    """Compatibility of the x and s_{2l+1} flows; zero exactly when u follows the KdV flow."""
    U1 = build_U2n1(0)
    Ul = build_U2n1(l)
    return _dx_mat(Ul) - _ds_mat(l, U1) + Ul.commutator(U1)


def string_compat_residual(g: int) -> LaxMat:
    """x-lambda compatibility of A^(g)."""
    U1 = build_U2n1(0)
    Ag = build_Ag(g)
    return _dx_mat(Ag) - U1.d_lambda() + Ag.commutator(U1)


def string_compat_constant(g: int):
    """kappa with residual[2,1] = kappa * d_x(string_lhs(g)) and other entries zero; None if no such constant."""
    res = string_compat_residual(g)
    if any(res[i, j].coeffs for i, j in ((0, 0), (0, 1), (1, 1))):
        return None
    r21 = res[1, 0]
    if set(r21.coeffs) - {0}:
        return None
    entry = r21[0]
    target = d_x(string_lhs(g))
    mono, coef = next(iter(target.terms.items()))
    kappa = entry.coeff_of(mono) / coef
    if entry != target * kappa:
        return None
    return kappa


def _reduce_mat(m: LaxMat, g: int) -> LaxMat:
    return m.map_coeffs(lambda p: reduce_mod_string(p, g))


def lambda_s_compat_residual(g: int, l: int, reduce: bool = True) -> LaxMat:
    """lambda-s_{2l+1} compatibility; with reduce=True, taken modulo the string equation."""
    Ag = build_Ag(g)
    Ul = build_U2n1(l)
    res = _ds_mat(l, Ag) - Ul.d_lambda() + Ag.commutator(Ul)
    return _reduce_mat(res, g) if reduce else res


def s_s_compat_residual(l: int, m: int) -> LaxMat:
    Ul = build_U2n1(l)
    Um = build_U2n1(m)
    return _ds_mat(m, Ul) - _ds_mat(l, Um) + Ul.commutator(Um)


@dataclass
class ZeroCurvatureReport:
    g: int
    kdv_compat: dict
    string_compat_constant: object
    lambda_s_compat: dict
    s_s_compat: dict

    @property
    def ok(self) -> bool:
        return (
            all(self.kdv_compat.values())
            and self.string_compat_constant == -2
            and all(self.lambda_s_compat.values())
            and all(self.s_s_compat.values())
        )


def zero_curvature_checks(g: int) -> ZeroCurvatureReport:
    A = {l: kdv_compat_residual(l).is_zero() for l in range(1, g)}
    kappa = string_compat_constant(g)
    C1 = {l: lambda_s_compat_residual(g, l).is_zero() for l in range(1, g)}
    C2 = {(l, m): s_s_compat_residual(l, m).is_zero() for l in range(1, g) for m in range(1, g) if l < m}
    return ZeroCurvatureReport(g, A, kappa, C1, C2)


# -- Toeplitz structure -------------------------------------------------------


def c_values(g: int, s: Mapping | None = None) -> dict:
    """{j: c_{2j-1}} for j = 0..g+1, symbolic or evaluated at s = {l: s_{2l+1}}."""
    out = {}
    for j in range(g + 2):
        c = c_coeff(g, j)
        if s is not None:
            c = c.evaluate({s_atom(l): v for l, v in s.items()}) if c.atoms() else c.constant_term()
        out[j] = c
    return out


def _cget(c: Mapping, j: int):
    return c.get(j, ZERO) if 0 <= j else ZERO


def toeplitz(c: Mapping, size: int, g: int) -> list:
    """[C]_{i,j} = c_{2g+1-2(i-j)} for j <= i (0-based), else 0."""
    return [[(_cget(c, g + 1 - (i - j)) if j <= i else ZERO) for j in range(size)] for i in range(size)]


def forward_solve_unit(M: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve a unit lower triangular system exactly by forward substitution."""
    out = []
    for i, b in enumerate(rhs):
        acc = b
        for j in range(i):
            if M[i][j]:
                acc = acc - M[i][j] * out[j]
        if M[i][i] != 1:
            raise ValueError("diagonal must be 1")
        out.append(acc)
    return out


def cconv(c: Mapping, g: int, k: int):
    """sum_{m=0}^{g+1-k} c_{2m-1} c_{2g-2k-2m+1}: the time-only part attached to I_k."""
    total = ZERO
    for m in range(0, g + 2 - k):
        a, b = _cget(c, m), _cget(c, g - k - m + 1)
        if a and b:
            total = total + a * b
    return total


def A_vector(c: Mapping, g: int) -> list:
    return [cconv(c, g, k) for k in range(1, g + 1)]


def I0_poly(c: Mapping, g: int, tilde: bool = False) -> LambdaSeries:
    """I_0(lambda), or its degree >= g part when tilde."""
    coeffs = {2 * g + 1: ONE}
    for k in range(g, 2 * g + 1):
        total = ZERO
        for m in range(k - g, g + 2):
            a, b = _cget(c, m), _cget(c, k - m + 1)
            if a and b:
                total = total + a * b
        coeffs[k] = total
    if not tilde:
        for k in range(0, g):
            total = ZERO
            for m in range(0, k + 2):
                a, b = _cget(c, m), _cget(c, k - m + 1)
                if a and b:
                    total = total + a * b
            coeffs[k] = total
    return LambdaSeries(coeffs)


# -- spectral data ------------------------------------------------------------


@dataclass
class SpectralData:
    g: int
    h: LambdaSeries
    xi: LambdaSeries
    I0: LambdaSeries
    I0_tilde: LambdaSeries
    I: list
    H: list
    c: dict

    def xi_coefficient(self, e):
        return self.xi[e]


def spectral_from_h(h: LambdaSeries, c: Mapping, g: int) -> SpectralData:
    """Invariants and Hamiltonians from h = -det of a genus-g Lax matrix."""
    xi = h.sqrt(Q(-2 * g - 1, 2))
    I0 = I0_poly(c, g)
    I = [h[g - k] - cconv(c, g, k) for k in range(1, g + 1)]
    H = [xi[Q(-2 * k - 1, 2)] for k in range(1, g + 1)]
    return SpectralData(g, h, xi, I0, I0_poly(c, g, tilde=True), I, H, dict(c))


def spectral_data(g: int, at: Mapping | None = None) -> SpectralData:
    """Spectral data of A^(g), symbolic or at a rational jet (atom -> value)."""
    Ag = build_Ag(g)
    if at is not None:
        Ag = Ag.map_coeffs(lambda p: p.evaluate(at) if isinstance(p, MultiPoly) else p)
        svals = {a.index: v for a, v in at.items() if a.tag == s_atom(0).tag}
        c = c_values(g, svals)
    else:
        c = c_values(g)
    h = -Ag.det()
    return spectral_from_h(h, c, g)


def I_equals_CH(sd: SpectralData, g: int, reduce: bool = False, factor=1) -> bool:
    """I = factor * C(s) H coefficientwise.

    Squaring xi produces every cross term c_{2m-1} H_j twice, so the identity
    that actually holds (modulo the string equation) has factor 2.
    """
    Cm = toeplitz(sd.c, g, g)
    for k in range(g):
        rhs = ZERO
        for j in range(k + 1):
            if Cm[k][j]:
                rhs = rhs + Cm[k][j] * sd.H[j]
        diff = sd.I[k] - rhs * factor
        if reduce and isinstance(diff, MultiPoly):
            diff = reduce_mod_string(diff, g)
        if diff:
            return False
    return True


def xi_matches_times(sd: SpectralData, g: int, reduce: bool = False) -> bool:
    """xi = lambda^{g+1/2} + sum_{l=1}^{g} c_{2l-1} lambda^{l-1/2} + (x/2) lambda^{-1/2} + O(lambda^{-3/2})."""
    for j in range(0, g + 2):
        e = Q(2 * j - 1, 2)
        diff = sd.xi[e] - _cget(sd.c, j)
        if reduce and isinstance(diff, MultiPoly):
            diff = reduce_mod_string(diff, g)
        if diff:
            return False
    return True


# -- beta polynomials ---------------------------------------------------------


def Rtilde(n: int) -> LambdaSeries:
    """R~_n = sum_{k=0}^n R_{2k-1} lambda^{n-k}."""
    return LambdaSeries({n - k: R(2 * k - 1) for k in range(n + 1)})


def beta_n(beta_g: LambdaSeries, n: int, g: int) -> LambdaSeries:
    """[lambda^{n-g} beta_g]_{inf,+}."""
    return beta_g.shift(n - g).plus_part()


def beta_family(g: int) -> tuple:
    bg = build_Ag(g)[0, 1]
    betas = [beta_n(bg, n, g) for n in range(g + 1)]
    return bg, betas, [Rtilde(n) for n in range(g + 1)]


def toeplitz_relation_check(g: int) -> bool:
    bg, betas, Rt = beta_family(g)
    c = c_values(g)
    Ct = toeplitz(c, g + 1, g)
    for n in range(g + 1):
        rhs = LambdaSeries()
        for j in range(n + 1):
            if Ct[n][j]:
                rhs = rhs + Rt[j].scale(Ct[n][j])
        if rhs != betas[n]:
            return False
        coef = ZERO
        for j in range(n + 1):
            cj = _cget(c, g - j + 1)
            if cj:
                coef = coef + cj * R(2 * n - 2 * j - 1)
        if bg[g - n] != coef:
            return False
    return bg.degree() == g and bg.leading() == 1


# -- Darboux-coordinate formulas ---------------------------------------------


def _prod(items):
    out = ONE
    for it in items:
        out = out * it
    return out


def poly_from_roots(roots: Sequence) -> LambdaSeries:
    out = LambdaSeries({0: ONE})
    for r in roots:
        out = out * LambdaSeries({1: ONE, 0: -r})
    return out


def node_denominators(lams: Sequence) -> list:
    out = []
    for j, lj in enumerate(lams):
        d = _prod(lj - li for i, li in enumerate(lams) if i != j)
        if not d:
            raise ZeroDivisionError("coincident spectral coordinates")
        out.append(d)
    return out


def Rtilde_from_coordinates(g: int, lams: Sequence, c: Mapping) -> list:
    """R~_0..R~_{g-1} recovered from beta = prod(lambda - lambda_j) through C~^{-1}."""
    bg = poly_from_roots(lams)
    betas = [beta_n(bg, n, g) for n in range(g)]
    Ct = toeplitz(c, g, g)
    out = []
    for n in range(g):
        acc = betas[n]
        for j in range(n):
            if Ct[n][j]:
                acc = acc - out[j].scale(Ct[n][j])
        out.append(acc)
    return out


def correction_terms(g: int, lams: Sequence, mus: Sequence, c: Mapping) -> list:
    """sum_j mu_j R~'_{k-1}(lambda_j)/prod_{i!=j}(lambda_j - lambda_i), k = 1..g."""
    Rt = Rtilde_from_coordinates(g, lams, c)
    den = node_denominators(lams)
    out = []
    for k in range(1, g + 1):
        dR = Rt[k - 1].d_lambda()
        out.append(sum((mus[j] * dR.evaluate(lams[j]) / den[j] for j in range(g)), ZERO))
    return out


def H_coordinate_sum(g: int, lams: Sequence, mus: Sequence, c: Mapping) -> list:
    """sum_j (mu_j^2 - I~_0(lambda_j)) R~_{k-1}(lambda_j)/prod_{i!=j}(lambda_j-lambda_i)."""
    Rt = Rtilde_from_coordinates(g, lams, c)
    I0t = I0_poly(c, g, tilde=True)
    den = node_denominators(lams)
    out = []
    for k in range(1, g + 1):
        total = ZERO
        for j in range(g):
            total = total + (mus[j] ** 2 - I0t.evaluate(lams[j])) * Rt[k - 1].evaluate(lams[j]) / den[j]
        out.append(total)
    return out


def K_hamiltonian(g: int, k: int, lams: Sequence, mus: Sequence, s: Mapping) -> object:
    """K_{2k-1} = H_k - sum_j mu_j R~'_{k-1}(lambda_j)/prod(...), H_k from the I~_0 sum."""
    c = c_values(g, s)
    return H_coordinate_sum(g, lams, mus, c)[k - 1] - correction_terms(g, lams, mus, c)[k - 1]


def lagrange_poly(xs: Sequence, ys: Sequence) -> LambdaSeries:
    """The polynomial of degree < len(xs) through (xs, ys)."""
    total = LambdaSeries()
    den = node_denominators(xs)
    for j, (xj, yj) in enumerate(zip(xs, ys)):
        basis = poly_from_roots([x for i, x in enumerate(xs) if i != j])
        total = total + basis.scale(yj / den[j])
    return total


def coordinate_lax(g: int, lams: Sequence, mus: Sequence, s: Mapping) -> LaxMat:
    """The traceless matrix (alpha beta; gamma -alpha) with beta = prod(lambda-lambda_j),
    alpha(lambda_j) = mu_j and -det = I_0 + sum_k I_k lambda^{g-k}."""
    c = c_values(g, s)
    alpha = lagrange_poly(lams, mus)
    beta = poly_from_roots(lams)
    I0 = I0_poly(c, g)
    low = lagrange_poly(lams, [mus[j] ** 2 - I0.evaluate(lams[j]) for j in range(g)])
    h = I0 + low
    num = h - alpha * alpha
    gamma = div(num, beta, 0)
    rem = num - gamma.plus_part() * beta
    if rem.coeffs:
        raise ArithmeticError("gamma is not polynomial")
    gamma = gamma.plus_part()
    return LaxMat(alpha, beta, gamma, -alpha)


def spectral_H_from_coordinates(g: int, lams: Sequence, mus: Sequence, s: Mapping) -> list:
    """H_k read off sqrt(-det) of the coordinate-built Lax matrix."""
    L = coordinate_lax(g, lams, mus, s)
    return spectral_from_h(-L.det(), c_values(g, s), g).H


def f_vector(g: int, s: Mapping) -> list:
    """f = C(s)^{-1} A(s): the time-only offset between Hamiltonian normalizations."""
    c = c_values(g, s)
    return forward_solve_unit(toeplitz(c, g, g), A_vector(c, g))


def K_two_path(g: int, k: int, lams: Sequence, mus: Sequence, s: Mapping) -> tuple:
    """(K from the I~_0 sum, K rebuilt as 2*H_k(sqrt path) + f_{2k-1} - correction)."""
    c = c_values(g, s)
    corr = correction_terms(g, lams, mus, c)[k - 1]
    K_sum = H_coordinate_sum(g, lams, mus, c)[k - 1] - corr
    H_sqrt = spectral_H_from_coordinates(g, lams, mus, s)[k - 1]
    return K_sum, 2 * H_sqrt + f_vector(g, s)[k - 1] - corr


def correction_residue_sides(g: int, k: int, lams: Sequence, mus: Sequence) -> tuple:
    """Both sides of the residue identity for the correction term."""
    den = node_denominators(lams)
    depth = -(g + 3)
    F = LambdaSeries(lowest=depth)
    for j in range(g):
        basis = poly_from_roots([x for i, x in enumerate(lams) if i != j]).scale(mus[j] / den[j])
        pole = LambdaSeries({1: ONE, 0: -lams[j]}).reciprocal(depth - g)
        F = F + basis * pole
    lhs = F.shift(-(g + 1 - k)).residue()
    bg = poly_from_roots(lams)
    bk = beta_n(bg, k - 1, g).d_lambda()
    rhs = -sum((mus[j] * bk.evaluate(lams[j]) / den[j] for j in range(g)), ZERO)
    return lhs, rhs
