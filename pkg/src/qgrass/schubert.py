"""Factorial Schur and double Grothendieck polynomials via bialternant
determinants, plus fixed-point localization tables.

Cohomology representatives are polynomials in x_1..x_k, u_1..u_n; K-theory
representatives are rational functions whose denominators are monomials in
the u's.  Both are symmetric in the x block.  Restriction to the torus fixed
point labelled by a frame r substitutes x_b = u_{r_b}.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import boxes
from .algebra import (MultiPoly, ONE, RatFunc, U, X, poly_u, poly_x)
from .errors import InvalidShape, SingularLocalization

COHOMOLOGY = "cohomology"
KTHEORY = "ktheory"


def falling_factorial(x_index, b, theory, ref_var=None):
    """(x|u)^b: prod (x - u_l) in cohomology, prod (1 - x/u_l) in K-theory.

    K-theory returns a RatFunc with denominator u_1...u_b.
    """
    if b < 0:
        raise InvalidShape("falling factorial needs b >= 0")
    xv = poly_x(x_index) if ref_var is None else ref_var
    if theory == COHOMOLOGY:
        out = ONE
        for l in range(1, b + 1):
            out = out * (xv - poly_u(l))
        return out
    num = ONE
    den = ONE
    for l in range(1, b + 1):
        num = num * (poly_u(l) - xv)
        den = den * poly_u(l)
    return RatFunc(num, den)


def _det(rows):
    """Determinant of a small square matrix of MultiPoly entries.

    Laplace expansion along the first remaining row, memoized on column
    subsets; fine for the k <= 5 sizes used here.
    """
    k = len(rows)
    cache = {}

    def minor(i, cols):
        if i == k:
            return MultiPoly.const(1)
        key = (i, cols)
        if key in cache:
            return cache[key]
        total = MultiPoly.const(0)
        for pos, j in enumerate(cols):
            term = rows[i][j] * minor(i + 1, cols[:pos] + cols[pos + 1:])
            total = total + term if pos % 2 == 0 else total - term
        cache[key] = total
        return total

    return minor(0, tuple(range(k)))


def _vandermonde_div(poly, k, order):
    """Divide by prod over i<j of (x_i - x_j) ("coh") or (x_j - x_i) ("k")."""
    out = poly
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            if order == "coh":
                out = out.exact_div(poly_x(i) - poly_x(j))
            else:
                out = out.exact_div(poly_x(j) - poly_x(i))
    return out


@lru_cache(maxsize=None)
def factorial_schur(lam, k, n):
    """Equivariant cohomology representative of the class of lam."""
    lam = boxes.check_partition(lam)
    if len(lam) != k:
        raise InvalidShape(f"expected {k} parts: {lam}")
    if k == 1:
        return falling_factorial(1, lam[0], COHOMOLOGY)
    # common row factor: every column exponent is >= lam_k, so each row i
    # shares prod_{l<=lam_k}(x_i - u_l)
    base = lam[k - 1]
    rows = []
    for i in range(1, k + 1):
        xv = poly_x(i)
        row = []
        pref = ONE
        for l in range(1, base + 1):
            pref = pref * (xv - poly_u(l))
        for j in range(1, k + 1):
            b = lam[j - 1] + k - j
            cur = ONE
            for l in range(base + 1, b + 1):
                cur = cur * (xv - poly_u(l))
            row.append(cur)
        rows.append((pref, row))
    det = _det([r for _, r in rows])
    quot = _vandermonde_div(det, k, "coh")
    for pref, _ in rows:
        quot = quot * pref
    return quot


@lru_cache(maxsize=None)
def double_grothendieck(lam, k, n):
    """Equivariant K-theory representative of the class of lam.

    Assembled as (polynomial bialternant)/(u-monomial): each matrix row i
    clears its denominator u_1...u_{b_i} with b_i = lam_i + k - i.
    """
    lam = boxes.check_partition(lam)
    if len(lam) != k:
        raise InvalidShape(f"expected {k} parts: {lam}")
    den = ONE
    base = lam[k - 1]  # b_k = lam_k: common column factor exponent
    rows = []
    for i in range(1, k + 1):
        b = lam[i - 1] + k - i
        for l in range(1, b + 1):
            den = den * poly_u(l)
        row = []
        for j in range(1, k + 1):
            xv = poly_x(j)
            e = MultiPoly.variable(X(j), i - 1) if i > 1 else ONE
            for l in range(base + 1, b + 1):
                e = e * (poly_u(l) - xv)
            row.append(e)
        rows.append(row)
    det = _det(rows)
    if k > 1:
        det = _vandermonde_div(det, k, "k")
    for j in range(1, k + 1):
        xv = poly_x(j)
        for l in range(1, base + 1):
            det = det * (poly_u(l) - xv)
    return RatFunc(det, den)


def representative(theory, lam, k, n):
    if theory == COHOMOLOGY:
        return RatFunc.from_poly(factorial_schur(tuple(lam), k, n))
    if theory == KTHEORY:
        return double_grothendieck(tuple(lam), k, n)
    raise ValueError(f"unknown theory {theory!r}")


def nonequivariant_limit(theory, lam, k, n):
    """u -> 0 (cohomology: ordinary Schur) or u -> 1 (K: stable Grothendieck)."""
    rep = representative(theory, lam, k, n)
    target = Fraction(0) if theory == COHOMOLOGY else Fraction(1)
    subs = {U(l): target for l in range(1, n + 1)}
    return rep.subs_scalars(subs)


def restrict_at_frame(rep, r, u_values=None):
    """Evaluate a representative at the fixed point x_b = u_{r_b}.

    With u_values the result is an exact scalar; without, a RatFunc in u.
    """
    if u_values is not None:
        assign = {U(l): Fraction(u_values[l - 1])
                  for l in range(1, len(u_values) + 1)}
        assign.update({X(b + 1): Fraction(u_values[r[b] - 1])
                       for b in range(len(r))})
        return rep.eval(assign)
    subs = {X(b + 1): RatFunc.from_poly(poly_u(r[b])) for b in range(len(r))}
    num = _subs_ratfunc_vars(rep.num, subs)
    den = _subs_ratfunc_vars(rep.den, subs)
    return num / den


def _subs_ratfunc_vars(poly, subs):
    """Substitute RatFunc values for some variables of a MultiPoly."""
    total = RatFunc(0)
    for m, c in poly.terms.items():
        val = RatFunc(MultiPoly.const(c))
        kept = []
        for v, e in m:
            if v in subs:
                val = val * subs[v] ** e
            else:
                kept.append((v, e))
        if kept:
            val = val * RatFunc(MultiPoly({tuple(kept): 1}))
        total = total + val
    return total


def localization_matrix(k, n, theory, u_values=None):
    """Matrix entry[lam][r] = representative of lam evaluated at x = u_r.

    Rows and columns both follow the lexicographic partition order (columns
    through the frame bijection).  Exact scalars when u_values is given,
    RatFunc in the u's otherwise.
    """
    parts = boxes.enumerate_partitions(k, n)
    frames = [boxes.partition_to_subset(p, k, n) for p in parts]
    table = []
    for lam in parts:
        rep = representative(theory, lam, k, n)
        if u_values is not None:
            rep = rep.subs_scalars(
                {U(l): Fraction(u_values[l - 1]) for l in range(1, n + 1)})
        row = []
        for r in frames:
            if u_values is not None:
                assign = {X(b + 1): Fraction(u_values[r[b] - 1])
                          for b in range(k)}
                row.append(rep.eval(assign))
            else:
                row.append(restrict_at_frame(rep, r))
        table.append(row)
    return table


def matrix_inverse(mat, zero, one):
    """Gauss-Jordan inverse over an exact field (Fraction or RatFunc)."""
    n = len(mat)
    a = [list(row) for row in mat]
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for row in range(col, n):
            if not _is_zero(a[row][col]):
                piv = row
                break
        if piv is None:
            raise SingularLocalization("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        scale = a[col][col]
        a[col] = [x / scale for x in a[col]]
        inv[col] = [x / scale for x in inv[col]]
        for row in range(n):
            if row == col:
                continue
            f = a[row][col]
            if _is_zero(f):
                continue
            a[row] = [x - f * y for x, y in zip(a[row], a[col])]
            inv[row] = [x - f * y for x, y in zip(inv[row], inv[col])]
    return inv


def _is_zero(x):
    if isinstance(x, RatFunc):
        return x.is_zero()
    return x == 0
