"""Solutions of the cohomological quantum differential equation and their
order-by-order verification, all Gamma-free.

Every Gamma ratio is replaced by a rising factorial: with a = (x - u_l)/eps,
Gamma(a + 1 + d)/Gamma(a + 1) = (a+1)(a+2)...(a+d).  The normalized z^d
coefficient of the projective-space column for a single-row partition p is

    c_d = s_p(x + d*eps) * eps^(-n d) / prod_l RF((x - u_l)/eps + 1, d)

and the general column carries the extra sign and cross-ratio prefactor

    (-1)^((k+1)|d|) prod_{i<j} ((x_i-x_j)/eps + d_i-d_j) / ((x_i-x_j)/eps).

Each fixed-point component also carries the formal prefactor z^{(sum u_r)/eps},
kept as metadata: the Euler operator eps*z*d/dz acts on the z^m coefficient as
multiplication by (sum_b u_{r_b} + m*eps).  The differential equation couples
partition labels exactly as in the K-theory case:

    (sum_b u_{r_b} + m*eps) c_m(r, lam)
        = sum_mu [ M0[mu][lam] c_m(r, mu) + M1[mu][lam] c_{m-1}(r, mu) ]

with M(z) = M0 + z*M1 the quantum multiplication matrix in cohomology.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import boxes, pieri, schubert
from .algebra import (MultiPoly, RatFunc, SeriesZ, U, X, poly_eps, poly_u,
                      poly_x)
from .errors import DegenerateFixedPoint, DegenerateWeights, ZeroEpsilon

EXACT = "exact"
NUMERIC = "numeric"


@dataclass(frozen=True)
class RisingFactorial:
    base: object
    length: int
    value: object


@dataclass(frozen=True)
class PsiColumnC:
    lam: tuple
    frame: tuple
    exponent_base: object  # (sum_b u_{r_b}) / eps, the formal z-exponent
    series: SeriesZ


def rising_factorial(a, d):
    """a (a+1) ... (a+d-1); empty product for d = 0."""
    if d < 0:
        raise ValueError("rising factorial needs d >= 0")
    val = None
    for j in range(d):
        f = a + j
        val = f if val is None else val * f
    return RisingFactorial(a, d, val if val is not None else 1)


def _rf_value(a, d):
    return rising_factorial(a, d).value


def _schur_at(lam, k, n, assign):
    return schubert.factorial_schur(tuple(lam), k, n).eval(assign)


def coeff_1n(p, d, n, x, u_values, eps):
    """Normalized z^d coefficient of the projective-space column for (p)."""
    if eps == 0:
        raise ZeroEpsilon("eps must be nonzero")
    num = 1
    for m in range(1, p + 1):
        num = num * (x + d * eps - u_values[m - 1])
    den = eps ** (n * d)
    for l in range(n):
        rf = _rf_value((x - u_values[l]) / eps + 1, d)
        if rf == 0:
            raise DegenerateWeights(
                f"(x-u_{l+1})/eps hits a negative integer <= -1 at depth {d}")
        den = den * rf
    return num / den


def coeff_kn(lam, dvec, k, n, x_values, u_values, eps):
    """Normalized z-coefficient for the general box partition lam.

    x_values may be exact scalars (fixed points) or symbolic RatFuncs; the
    cross-ratio prefactor needs pairwise distinct coordinates.
    """
    if eps == 0:
        raise ZeroEpsilon("eps must be nonzero")
    dvec = tuple(dvec)
    total = sum(dvec)
    pref = 1 if ((k + 1) * total) % 2 == 0 else -1
    val = pref
    for i in range(k):
        for j in range(i + 1, k):
            diff = (x_values[i] - x_values[j]) / eps
            if diff == 0:
                raise DegenerateFixedPoint("coincident fixed-point coordinates")
            val = val * (diff + (dvec[i] - dvec[j])) / diff
    assign = {X(b + 1): x_values[b] + dvec[b] * eps for b in range(k)}
    assign.update({U(l): u_values[l - 1] for l in range(1, n + 1)})
    val = val * _schur_at(lam, k, n, assign)
    val = val / eps ** (n * total)
    for b in range(k):
        for l in range(n):
            rf = _rf_value((x_values[b] - u_values[l]) / eps + 1, dvec[b])
            if rf == 0:
                raise DegenerateWeights(
                    "(x-u)/eps hits a negative integer in the rising factorial")
            val = val / rf
    return val


def compositions(m, k):
    if k == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in compositions(m - first, k - 1):
            yield (first,) + rest


def psi_column_c(lam, r, D, k, n, u_values, eps):
    """Column of lam restricted to the fixed point of frame r."""
    xs = [u_values[r[b] - 1] for b in range(k)]
    coeffs = []
    for m in range(D + 1):
        tot = None
        for d in compositions(m, k):
            term = coeff_kn(lam, d, k, n, xs, u_values, eps)
            tot = term if tot is None else tot + term
        coeffs.append(tot)
    base = sum(xs) / eps
    return PsiColumnC(tuple(lam), tuple(r), base, SeriesZ(D, coeffs))


def assignment_is_pole_free(u_values, eps, n, D):
    """No (u_i - u_j)/eps may be a negative integer in [-D, -1]."""
    if eps == 0:
        return False
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ratio = Fraction(u_values[i] - u_values[j]) / Fraction(eps)
            if ratio.denominator == 1 and -D <= ratio <= -1:
                return False
    return True


def random_u_eps(n, D, rng, lo=2, hi=1000):
    """Distinct rational u and a nonzero eps avoiding rising-factorial poles."""
    while True:
        vals = set()
        while len(vals) < n:
            vals.add(Fraction(rng.randint(lo, hi)))
        u = sorted(vals)
        eps = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        if assignment_is_pole_free(u, eps, n, D):
            return u, eps


def _residual_report(theory_label, k, n, D, mode, u_values, eps, seed, tol):
    t0 = time.time()
    parts = boxes.enumerate_partitions(k, n)
    frames = [boxes.partition_to_subset(p, k, n) for p in parts]
    idx = {p: i for i, p in enumerate(parts)}
    pm = pieri.pieri_matrix_coh(k, n, u_values=u_values)
    columns = {}
    for r in frames:
        for mu in parts:
            columns[(r, mu)] = psi_column_c(mu, r, D, k, n, u_values, eps).series.coeffs
    checks = []
    all_zero = True
    worst = 0.0
    for lam in parts:
        col = idx[lam]
        for m in range(D + 1):
            exact = True
            max_res = 0.0
            for r in frames:
                euler = sum(u_values[i - 1] for i in r) + m * eps
                lhs = euler * columns[(r, lam)][m]
                rhs = None
                for mu in parts:
                    row = idx[mu]
                    e0 = pm.m0[row][col]
                    if not pieri._is_entry_zero(e0):
                        t = e0 * columns[(r, mu)][m]
                        rhs = t if rhs is None else rhs + t
                    if m >= 1:
                        e1 = pm.m1[row][col]
                        if not pieri._is_entry_zero(e1):
                            t = e1 * columns[(r, mu)][m - 1]
                            rhs = t if rhs is None else rhs + t
                diff = lhs - (rhs if rhs is not None else 0)
                if mode == NUMERIC:
                    res = abs(diff)
                    max_res = max(max_res, res)
                    if res > tol:
                        exact = False
                elif diff != 0:
                    exact = False
            all_zero = all_zero and exact
            worst = max(worst, max_res)
            checks.append({
                "lambda": list(lam),
                "m": m,
                "status": ("exact-zero" if mode != NUMERIC else "residual")
                          if exact else "fail",
                "max_residual": max_res if mode == NUMERIC else None,
            })
    return {
        "theory": theory_label,
        "k": k, "n": n, "order": D, "mode": mode,
        "seed": seed,
        "u": [str(v) for v in u_values],
        "eps": str(eps),
        "checks": checks,
        "all_zero": all_zero,
        "max_residual": worst if mode == NUMERIC else None,
        "wall_s": round(time.time() - t0, 3),
    }


def qde_residual_1n(n, D, u_values=None, eps=None, mode=EXACT, seed=None,
                    tol=1e-10):
    """Projective-space verification (k = 1); the full-width column exercises
    the telescoping path through the quantum term."""
    rng = random.Random(seed)
    if u_values is None or eps is None:
        if mode == NUMERIC:
            u_values = sorted(rng.uniform(1.0, 10.0) for _ in range(n))
            eps = rng.uniform(0.3, 1.7)
        else:
            u_values, eps = random_u_eps(n, D, rng)
    if mode != NUMERIC:
        u_values = [Fraction(v) for v in u_values]
        eps = Fraction(eps)
        if not assignment_is_pole_free(u_values, eps, n, D):
            raise DegenerateWeights("(u_i-u_j)/eps hits a small negative integer")
    if len(set(u_values)) != n:
        raise DegenerateWeights("u values must be distinct")
    return _residual_report("coh", 1, n, D, mode, u_values, eps, seed, tol)


def qde_residual_kn(k, n, D, u_values=None, eps=None, mode=EXACT, seed=None,
                    tol=1e-10):
    """General-box verification through the rising-factorial closed forms."""
    rng = random.Random(seed)
    if u_values is None or eps is None:
        if mode == NUMERIC:
            u_values = sorted(rng.uniform(1.0, 10.0) for _ in range(n))
            eps = rng.uniform(0.3, 1.7)
        else:
            u_values, eps = random_u_eps(n, D, rng)
    if mode != NUMERIC:
        u_values = [Fraction(v) for v in u_values]
        eps = Fraction(eps)
        if not assignment_is_pole_free(u_values, eps, n, D):
            raise DegenerateWeights("(u_i-u_j)/eps hits a small negative integer")
    if len(set(u_values)) != n:
        raise DegenerateWeights("u values must be distinct")
    return _residual_report("coh", k, n, D, mode, u_values, eps, seed, tol)


def satake_wedge(lam, D, k, n, x_values, u_values, eps):
    """Wedge of projective-space columns: determinant of shifted single-row
    columns at z -> (-1)^(k-1) z, divided by the Vandermonde of x_values.

    Every entry shares the formal exponent x_j/eps, so the determinant's
    prefactor is uniform and drops out of the normalized series.
    """
    lam = boxes.check_partition(lam)
    rows = [lam[i] + k - (i + 1) for i in range(k)]
    van = 1
    for i in range(k):
        for j in range(i + 1, k):
            dx = x_values[i] - x_values[j]
            if dx == 0:
                raise DegenerateFixedPoint("repeated x value in the wedge")
            van = van * dx
    sign = -1 if (k - 1) % 2 else 1
    # f[i][j][d]: z^d coefficient of the row_i column at x_j
    f = [[[coeff_1n(rows[i], d, n, x_values[j], u_values, eps)
           for d in range(D + 1)] for j in range(k)] for i in range(k)]
    coeffs = []
    for m in range(D + 1):
        tot = None
        for d in compositions(m, k):
            det = _numeric_det([[f[i][j][d[j]] for j in range(k)]
                                for i in range(k)])
            term = det * sign ** m
            tot = term if tot is None else tot + term
        coeffs.append(tot / van)
    return SeriesZ(D, coeffs)


def _numeric_det(mat):
    k = len(mat)
    if k == 1:
        return mat[0][0]
    total = None
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _numeric_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def check_gamma_ratio(k, dvec):
    """Pairwise Gamma-ratio collapse, fully symbolic in x and eps.

    prod over ordered pairs of Gamma-ratios (as rising factorials) equals
    (-1)^((k+1)|d|) prod_{i<j} ((x_i-x_j)/eps + d_i-d_j) / ((x_i-x_j)/eps).
    """
    dvec = tuple(dvec)
    xs = [RatFunc.from_poly(poly_x(i)) for i in range(1, k + 1)]
    ep = RatFunc.from_poly(poly_eps())
    one = RatFunc(1)
    lhs = one
    for b in range(k):
        for c in range(b + 1, k):
            A = (xs[c] - xs[b]) / ep
            delta = dvec[c] - dvec[b]
            if delta >= 0:
                lhs = lhs * _rf_value(A + 1, delta) / _rf_value(-A - delta + 1, delta)
            else:
                lhs = lhs * _rf_value(-A + 1, -delta) / _rf_value(A + delta + 1, -delta)
    total = sum(dvec)
    rhs = one if ((k + 1) * total) % 2 == 0 else -one
    for i in range(k):
        for j in range(i + 1, k):
            A = (xs[i] - xs[j]) / ep
            rhs = rhs * (A + (dvec[i] - dvec[j])) / A
    return (lhs - rhs).is_zero()


def nonequiv_psi_c(lam, D, k, n, x_values, eps):
    """Nonequivariant column: all u set to 0, ordinary Schur numerators."""
    zeros = [Fraction(0)] * n
    coeffs = []
    for m in range(D + 1):
        tot = None
        for d in compositions(m, k):
            term = coeff_kn(lam, d, k, n, x_values, zeros, eps)
            tot = term if tot is None else tot + term
        coeffs.append(tot)
    return SeriesZ(D, coeffs)


def equivariant_column_at_x_c(lam, D, k, n, x_values, u_values, eps):
    """Equivariant column at free coordinates; u may be symbolic RatFuncs."""
    coeffs = []
    for m in range(D + 1):
        tot = None
        for d in compositions(m, k):
            term = coeff_kn(lam, d, k, n, x_values, u_values, eps)
            tot = term if tot is None else tot + term
        coeffs.append(tot)
    return SeriesZ(D, coeffs)
