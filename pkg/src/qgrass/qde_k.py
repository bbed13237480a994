"""Solutions of the K-theory quantum difference equation restricted to torus
fixed points, and their order-by-order verification.

Each solution column is normalized by its own z-independent fixed-point
prefactor, so only finite tail ratios of q-Pochhammer products ever appear:
with T(a) = prod_{m>=1}(1 - a q^m), the ratio T(a q^j)/T(a) collapses to a
finite product for every integer j.  The normalized coefficient of z^m at the
fixed point of frame r is

    c_m(r, mu) = sum_{|d| = m} phi_ratio(d, r) * G_mu(u_r q^d)

summed over d in N^k, where phi_ratio multiplies tail ratios over the
numerator pairs (b, l) with shift d_b and denominator pairs (b, c) with shift
d_b - d_c.

The difference equation couples the partition labels of the solution family:
at every fixed point r, every order m, and every column lam,

    q^m * prod_b u_{r_b} * c_m(r, lam)
        = sum_mu [ M0[mu][lam] c_m(r, mu) + M1[mu][lam] c_{m-1}(r, mu) ]

where M(z) = M0 + z M1 is the quantum multiplication matrix.  The shared
per-point normalization cancels from both sides because the matrix acts on
the partition index.  In exact_q mode everything lives in Q(q) and the
residual is checked to be identically zero.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import boxes, pieri, schubert
from .algebra import (MultiPoly, RatFunc, SeriesZ, U, X, poly_q, poly_u,
                      poly_x)
from .errors import DegenerateWeights

EXACT_Q = "exact_q"
SYMBOLIC = "exact"
NUMERIC = "numeric"


@dataclass(frozen=True)
class QPochRatio:
    """Finite tail ratio T(a q^shift)/T(a) of Pochhammer products."""
    argument: object
    shift: int
    value: object


@dataclass(frozen=True)
class PsiColumnK:
    lam: tuple
    frame: tuple
    series: SeriesZ


class FieldContext:
    """Carries the scalar field of a verification run.

    exact_q: q is a polynomial variable, u are exact rationals.
    exact:   both q and u symbolic (small cases only).
    numeric: floats/complex throughout.
    """

    def __init__(self, mode, k, n, u_values=None, q_value=None):
        self.mode = mode
        self.k = k
        self.n = n
        if mode == NUMERIC:
            self.q = complex(q_value)
            self.one = 1.0 + 0j
            self.u = [complex(v) for v in u_values]
        elif mode == EXACT_Q:
            self.q = RatFunc.from_poly(poly_q())
            self.one = RatFunc(1)
            self.u = [Fraction(v) for v in u_values]
        elif mode == SYMBOLIC:
            self.q = RatFunc.from_poly(poly_q())
            self.one = RatFunc(1)
            self.u = [RatFunc.from_poly(poly_u(l)) for l in range(1, n + 1)]
        else:
            raise ValueError(f"unknown mode {mode!r}")
        if mode != SYMBOLIC and len(set(self.u)) != len(self.u):
            raise DegenerateWeights(f"u values must be distinct: {self.u}")
        if mode != SYMBOLIC and any(v == 0 for v in self.u):
            raise DegenerateWeights("u values must be nonzero")

    def u_elem(self, l):
        """u_l as a field element (1-based)."""
        v = self.u[l - 1]
        return v if self.mode != EXACT_Q else RatFunc(MultiPoly.const(v))

    def is_zero(self, x, tol=0.0):
        if self.mode == NUMERIC:
            return abs(x) <= tol
        if isinstance(x, RatFunc):
            return x.is_zero()
        return x == 0


def qpoch_value(a, shift, q):
    """T(a q^shift)/T(a) as a finite product; shift may be negative."""
    one = q ** 0
    out = one
    if shift >= 0:
        for m in range(1, shift + 1):
            out = out / (one - a * q ** m)
    else:
        for m in range(shift + 1, 1):
            out = out * (one - a * q ** m)
    return out


def qpoch_ratio(a, shift, q=None):
    """Public wrapper keeping the argument and shift with the value."""
    if q is None:
        q = RatFunc.from_poly(poly_q())
    return QPochRatio(a, shift, qpoch_value(a, shift, q))


def phi_ratio_x(d, x_elems, ctx, base_shift=None):
    """Prefactor ratio at shifted arguments, for free fixed-point coordinates.

    Numerator pairs (b, l) use base x_b/u_l with tail shift d_b; denominator
    pairs (b, c) use base x_b/x_c with shift d_b - d_c.  base_shift, when
    given, moves every base by the corresponding q-powers first (used by the
    cocycle property check).
    """
    k, n, q = ctx.k, ctx.n, ctx.q
    e = base_shift or (0,) * k
    num = ctx.one
    den = ctx.one
    for b in range(k):
        for l in range(1, n + 1):
            base = (x_elems[b] / ctx.u_elem(l)) * q ** e[b]
            num = num * qpoch_value(base, d[b] - e[b], q)
    for b in range(k):
        for c in range(k):
            base = (x_elems[b] / x_elems[c]) * q ** (e[b] - e[c])
            den = den * qpoch_value(base, (d[b] - d[c]) - (e[b] - e[c]), q)
    return num / den


def phi_ratio(d, r, ctx, base_shift=None):
    """phi_ratio at the fixed point of frame r (x_b = u_{r_b})."""
    x_elems = [ctx.u_elem(r[b]) for b in range(ctx.k)]
    return phi_ratio_x(d, x_elems, ctx, base_shift)


def compositions(m, k):
    """All d in N^k with |d| = m."""
    if k == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in compositions(m - first, k - 1):
            yield (first,) + rest


def _g_at_shifted_frame(mu, r, d, ctx, cache):
    """G_mu evaluated at x_b = u_{r_b} q^{d_b}, as a field element."""
    k, n = ctx.k, ctx.n
    if ctx.mode == EXACT_Q:
        key = mu
        if key not in cache:
            rep = schubert.double_grothendieck(mu, k, n)
            spec = rep.subs_scalars(
                {U(l): ctx.u[l - 1] for l in range(1, n + 1)})
            cache[key] = (spec.num, spec.den.constant_value())
        num, den = cache[key]
        acc = {}
        for mono, c in num.terms.items():
            qexp = 0
            val = Fraction(c)
            for (v, e) in mono:
                b = v[1]  # x-index
                val *= ctx.u[r[b - 1] - 1] ** e
                qexp += e * d[b - 1]
            acc[qexp] = acc.get(qexp, 0) + val
        terms = {(((2, 0), e),) if e else (): c for e, c in acc.items() if c}
        return RatFunc(MultiPoly(terms), MultiPoly.const(den))
    if ctx.mode == NUMERIC:
        key = mu
        if key not in cache:
            rep = schubert.double_grothendieck(mu, k, n)
            cache[key] = rep
        rep = cache[key]
        assign = {U(l): ctx.u[l - 1] for l in range(1, n + 1)}
        assign.update({X(b + 1): ctx.u[r[b] - 1] * ctx.q ** d[b]
                       for b in range(k)})
        return rep.eval(assign)
    # symbolic
    rep = schubert.double_grothendieck(mu, k, n)
    subs = {X(b + 1): RatFunc.from_poly(poly_u(r[b])) *
            RatFunc.from_poly(poly_q()) ** d[b] for b in range(k)}
    num = schubert._subs_ratfunc_vars(rep.num, subs)
    den = schubert._subs_ratfunc_vars(rep.den, subs)
    return num / den


def psi_column(lam, r, D, ctx, _caches=None):
    """Normalized solution column of lam restricted to the fixed point of r.

    The z^0 coefficient is G_lam(u_r); higher coefficients sum phi_ratio
    times G at q-shifted arguments over all degree vectors of each size.
    """
    caches = _caches if _caches is not None else ({}, {})
    gcache, prcache = caches
    coeffs = []
    for m in range(D + 1):
        tot = None
        for d in compositions(m, ctx.k):
            key = (tuple(r), d)
            if key not in prcache:
                prcache[key] = phi_ratio(d, r, ctx)
            term = prcache[key] * _g_at_shifted_frame(lam, r, d, ctx, gcache)
            tot = term if tot is None else tot + term
        coeffs.append(tot)
    return PsiColumnK(tuple(lam), tuple(r), SeriesZ(D, coeffs))


def random_distinct_rationals(n, rng, lo=2, hi=1000):
    """Distinct rationals for randomized identity checking."""
    vals = set()
    while len(vals) < n:
        vals.add(Fraction(rng.randint(lo, hi)))
    return sorted(vals)


def qde_residual_k(k, n, D, mode=EXACT_Q, u_values=None, seed=None,
                   q_value=None, tol=1e-10):
    """Verify the difference equation order by order; see the module docstring.

    Returns a JSON-ready report with one entry per (lambda, order).
    """
    t0 = time.time()
    rng = random.Random(seed)
    if u_values is None:
        if mode == NUMERIC:
            u_values = sorted(rng.uniform(1.0, 10.0) for _ in range(n))
        elif mode == EXACT_Q:
            u_values = random_distinct_rationals(n, rng)
    if mode == NUMERIC and q_value is None:
        q_value = rng.uniform(0.15, 0.45)
    ctx = FieldContext(mode, k, n, u_values=u_values, q_value=q_value)
    parts = boxes.enumerate_partitions(k, n)
    frames = [boxes.partition_to_subset(p, k, n) for p in parts]
    pm = pieri.pieri_matrix_k(
        k, n, u_values=None if mode == SYMBOLIC else ctx.u)
    idx = {p: i for i, p in enumerate(parts)}
    caches = ({}, {})
    columns = {}
    for r in frames:
        for mu in parts:
            columns[(r, mu)] = psi_column(mu, r, D, ctx, caches).series.coeffs

    def lift(entry):
        if mode == NUMERIC:
            return complex(entry)
        if isinstance(entry, MultiPoly):
            return RatFunc.from_poly(entry)
        return entry

    checks = []
    worst = 0.0
    all_zero = True
    for lam in parts:
        col = idx[lam]
        for m in range(D + 1):
            max_res = 0.0
            exact = True
            for r in frames:
                du = ctx.one
                for i in r:
                    du = du * ctx.u_elem(i)
                lhs = ctx.q ** m * du * columns[(r, lam)][m]
                rhs = None
                for mu in parts:
                    row = idx[mu]
                    e0 = pm.m0[row][col]
                    if not pieri._is_entry_zero(e0):
                        t = lift(e0) * columns[(r, mu)][m]
                        rhs = t if rhs is None else rhs + t
                    if m >= 1:
                        e1 = pm.m1[row][col]
                        if not pieri._is_entry_zero(e1):
                            t = lift(e1) * columns[(r, mu)][m - 1]
                            rhs = t if rhs is None else rhs + t
                diff = lhs - rhs
                if mode == NUMERIC:
                    res = abs(diff)
                    max_res = max(max_res, res)
                    if res > tol:
                        exact = False
                else:
                    if not ctx.is_zero(diff):
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
        "theory": "k",
        "k": k, "n": n, "order": D, "mode": mode,
        "seed": seed,
        "u": [str(v) for v in ctx.u],
        "q": "symbolic" if mode != NUMERIC else repr(q_value),
        "checks": checks,
        "all_zero": all_zero,
        "max_residual": worst if mode == NUMERIC else None,
        "wall_s": round(time.time() - t0, 3),
    }


def check_pochsplit(k, dvec, mode=SYMBOLIC, seed=0):
    """Vandermonde factorization of shifted coordinates into tail ratios.

    prod_{i<j}(x_j q^{d_j} - x_i q^{d_i})
        = W(d)^{-1} prod_{b,c} T(x_b/x_c) / T(x_b q^{d_b} / (x_c q^{d_c}))
    with W(d) = prod_{i<j} (x_j-x_i)^{-1} (-x_j/x_i)^{d_j-d_i}
                q^{(d_j-d_i)(d_j-d_i-1)/2 - d_i}.
    """
    dvec = tuple(dvec)
    if mode == NUMERIC:
        rng = random.Random(seed)
        xs = [rng.uniform(1.0, 3.0) for _ in range(k)]
        qv = rng.uniform(0.2, 0.5)
        one = 1.0
    else:
        xs = [RatFunc.from_poly(poly_x(i)) for i in range(1, k + 1)]
        qv = RatFunc.from_poly(poly_q())
        one = RatFunc(1)
    lhs = one
    for i in range(k):
        for j in range(i + 1, k):
            lhs = lhs * (xs[j] * qv ** dvec[j] - xs[i] * qv ** dvec[i])
    rhs = one
    for i in range(k):
        for j in range(i + 1, k):
            delta = dvec[j] - dvec[i]
            w = (xs[j] - xs[i]) ** (-1) * (-xs[j] / xs[i]) ** delta \
                * qv ** ((delta * (delta - 1)) // 2 - dvec[i])
            rhs = rhs / w
    for b in range(k):
        for c in range(k):
            rhs = rhs / qpoch_value(xs[b] / xs[c], dvec[b] - dvec[c], qv)
    if mode == NUMERIC:
        return abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
    return (lhs - rhs).is_zero()


def nonequiv_psi_k(lam, D, k, n, x_values):
    """Stable-limit solution column: all u set to 1, coordinates free.

    x_values are exact rationals; coefficients live in Q(q).  The z^0
    coefficient is the stable Grothendieck polynomial at x_values.
    """
    q = RatFunc.from_poly(poly_q())
    one = RatFunc(1)
    xs = [RatFunc(MultiPoly.const(Fraction(v))) for v in x_values]
    rep = schubert.nonequivariant_limit(schubert.KTHEORY, lam, k, n)
    coeffs = []
    for m in range(D + 1):
        tot = None
        for d in compositions(m, k):
            num = one
            for b in range(k):
                num = num * qpoch_value(xs[b], d[b], q) ** n
            den = one
            for b in range(k):
                for c in range(k):
                    den = den * qpoch_value(xs[b] / xs[c], d[b] - d[c], q)
            assign = {X(b + 1): xs[b] * q ** d[b] for b in range(k)}
            gval = rep.eval(assign)
            term = (num / den) * gval
            tot = term if tot is None else tot + term
        coeffs.append(tot)
    return SeriesZ(D, coeffs)


def equivariant_column_at_x(lam, D, k, n, x_values, u_values):
    """Normalized equivariant column at free rational coordinates.

    Used as the specialization oracle for the stable limit: evaluating at
    u = (1,...,1) must reproduce nonequiv_psi_k at the same x_values.
    """
    q = RatFunc.from_poly(poly_q())
    one = RatFunc(1)
    xs = [RatFunc(MultiPoly.const(Fraction(v))) for v in x_values]
    us = [Fraction(v) for v in u_values]
    rep = schubert.double_grothendieck(tuple(lam), k, n).subs_scalars(
        {U(l): us[l - 1] for l in range(1, n + 1)})
    coeffs = []
    for m in range(D + 1):
        tot = None
        for d in compositions(m, k):
            num = one
            for b in range(k):
                for l in range(n):
                    num = num * qpoch_value(xs[b] / us[l], d[b], q)
            den = one
            for b in range(k):
                for c in range(k):
                    den = den * qpoch_value(xs[b] / xs[c], d[b] - d[c], q)
            assign = {X(b + 1): xs[b] * q ** d[b] for b in range(k)}
            gval = rep.eval(assign)
            term = (num / den) * gval
            tot = term if tot is None else tot + term
        coeffs.append(tot)
    return SeriesZ(D, coeffs)
