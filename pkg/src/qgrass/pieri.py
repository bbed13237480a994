"""Quantum multiplication operators in the Schubert basis, as matrices affine
in the quantum parameter z, plus exact checks of the combinatorial
multiplication identities for double Grothendieck polynomials.

A PieriMatrix stores M(z) = M0 + z*M1 column-major in the lexicographic
partition order: column lam lists the coefficients of M(z) applied to the
basis class of lam.  Entries are exact scalars when numeric u-values are
supplied and u-polynomials otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import boxes, schubert
from .algebra import MultiPoly, ONE, RatFunc, U, X, poly_u, poly_x
from .errors import NotFullWidth, SingularLocalization

COHOMOLOGY = schubert.COHOMOLOGY
KTHEORY = schubert.KTHEORY


@dataclass(frozen=True)
class PieriMatrix:
    theory: str
    k: int
    n: int
    partitions: tuple
    m0: tuple  # rows of M0, entries scalar or MultiPoly
    m1: tuple


def _exactify(v):
    return Fraction(v) if isinstance(v, (int, Fraction)) else v


def _u_factor(values, indices):
    if values is None:
        out = ONE
        for i in indices:
            out = out * poly_u(i)
        return out
    out = None
    for i in indices:
        v = _exactify(values[i - 1])
        out = v if out is None else out * v
    return out


def _u_sum(values, indices):
    if values is None:
        out = MultiPoly.const(0)
        for i in indices:
            out = out + poly_u(i)
        return out
    out = None
    for i in indices:
        v = _exactify(values[i - 1])
        out = v if out is None else out + v
    return out


def _is_entry_zero(entry):
    if isinstance(entry, (MultiPoly, RatFunc)):
        return entry.is_zero()
    return entry == 0


def pieri_matrix_k(k, n, u_values=None):
    """Quantum multiplication by the determinant line in K-theory.

    Column lam: prod(u_r) * sum over bounded rook-strip successors nu of
    (-1)^|nu/lam| (O_nu - z O_hatbar(nu)).  Cancellations among the z-terms
    happen arithmetically during assembly.
    """
    parts = boxes.enumerate_partitions(k, n)
    idx = {p: i for i, p in enumerate(parts)}
    N = len(parts)
    zero = Fraction(0) if u_values is not None else MultiPoly.const(0)
    m0 = [[zero] * N for _ in range(N)]
    m1 = [[zero] * N for _ in range(N)]
    for lam in parts:
        col = idx[lam]
        r = boxes.partition_to_subset(lam, k, n)
        pref = _u_factor(u_values, r)
        for nu, sign in boxes.rook_strip_successors(lam, k, n, bounded=True):
            m0[idx[nu]][col] = m0[idx[nu]][col] + sign * pref
            hb = boxes.hat_bar(nu, k)
            m1[idx[hb]][col] = m1[idx[hb]][col] - sign * pref
    return PieriMatrix(KTHEORY, k, n, tuple(parts),
                       tuple(tuple(row) for row in m0),
                       tuple(tuple(row) for row in m1))


def _interlacing_covers(mu, k, n):
    """Partitions lam with |lam| = |mu|+1 and n-k >= lam_1 >= mu_1 >= lam_2 >= ..."""
    out = []
    for i in range(k):
        lam = list(mu)
        lam[i] += 1
        if lam[0] > n - k:
            continue
        if i > 0 and lam[i] > mu[i - 1]:
            continue
        out.append(tuple(lam))
    return out


def _quantum_targets(mu, k, n):
    """Partitions nu with |nu| = |mu|+1-n and mu_1-1 >= nu_1 >= mu_2-1 >= ... >= nu_k >= 0.

    The interleaving chain already forces nu weakly decreasing.
    """
    want = boxes.size(mu) + 1 - n
    if want < 0:
        return []
    bounds = []
    for i in range(k):
        hi = mu[i] - 1
        lo = max(mu[i + 1] - 1, 0) if i + 1 < k else 0
        if hi < lo:
            return []
        bounds.append((lo, hi))
    out = []

    def rec(prefix, i, remaining):
        if i == k:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        lo, hi = bounds[i]
        for v in range(min(hi, remaining), lo - 1, -1):
            rec(prefix + [v], i + 1, remaining - v)

    rec([], 0, want)
    return out


def pieri_matrix_coh(k, n, u_values=None):
    """Quantum multiplication by the hyperplane-type class in cohomology.

    Column mu: all covers lam interlacing mu (coefficient 1), the diagonal
    term sum(u_{r_i}), and z times the quantum targets nu.
    """
    parts = boxes.enumerate_partitions(k, n)
    idx = {p: i for i, p in enumerate(parts)}
    N = len(parts)
    zero = Fraction(0) if u_values is not None else MultiPoly.const(0)
    one = Fraction(1) if u_values is not None else ONE
    m0 = [[zero] * N for _ in range(N)]
    m1 = [[zero] * N for _ in range(N)]
    for mu in parts:
        col = idx[mu]
        r = boxes.partition_to_subset(mu, k, n)
        m0[col][col] = m0[col][col] + _u_sum(u_values, r)
        for lam in _interlacing_covers(mu, k, n):
            m0[idx[lam]][col] = m0[idx[lam]][col] + one
        for nu in _quantum_targets(mu, k, n):
            m1[idx[nu]][col] = m1[idx[nu]][col] + one
    return PieriMatrix(COHOMOLOGY, k, n, tuple(parts),
                       tuple(tuple(row) for row in m0),
                       tuple(tuple(row) for row in m1))


def pieri_matrix(theory, k, n, u_values=None):
    if theory == KTHEORY:
        return pieri_matrix_k(k, n, u_values)
    if theory == COHOMOLOGY:
        return pieri_matrix_coh(k, n, u_values)
    raise ValueError(f"unknown theory {theory!r}")


def _as_ratfunc_over_common_den(terms):
    """Sum RatFuncs whose denominators are u-monomials without cross gcds."""
    total = RatFunc(0)
    for t in terms:
        total = total + t
    return total


def check_pieri_identity_k(lam, k, n):
    """x_1...x_k G_lam == prod(u_r) * sum over unbounded strips of +-G_nu.

    Exact polynomial identity; the strip sum ranges over successors that may
    leave the box.  Returns True when the two sides agree identically.
    """
    lam = boxes.check_partition(lam)
    r = boxes.partition_to_subset(lam, k, n) if boxes.in_box(lam, k, n) else \
        tuple(lam[k - i] + i for i in range(1, k + 1))
    g = schubert.double_grothendieck(lam, k, n)
    xs = ONE
    for b in range(1, k + 1):
        xs = xs * poly_x(b)
    lhs = RatFunc(g.num * xs, g.den)
    rhs_terms = []
    upref = _u_factor(None, r)
    for nu, sign in boxes.rook_strip_successors(lam, k, n, bounded=False):
        gnu = schubert.double_grothendieck(nu, k, n)
        rhs_terms.append(RatFunc(sign * upref * gnu.num, gnu.den))
    rhs = _as_ratfunc_over_common_den(rhs_terms)
    return (lhs - rhs).is_zero()


def check_gkpieri(lam, k, n):
    """Full-width variant: strips stay bounded and each nu pairs with nu^a.

    x_1...x_k G_lam == prod(u_r) sum_nu (-1)^|nu/lam| (G_nu - G_{nu^a}),
    required and checked only when lam_1 = n-k.
    """
    lam = boxes.check_partition(lam)
    if lam[0] != n - k:
        raise NotFullWidth(f"{lam} has first part != {n - k}")
    r = boxes.partition_to_subset(lam, k, n)
    g = schubert.double_grothendieck(lam, k, n)
    xs = ONE
    for b in range(1, k + 1):
        xs = xs * poly_x(b)
    lhs = RatFunc(g.num * xs, g.den)
    upref = _u_factor(None, r)
    rhs_terms = []
    for nu, sign in boxes.rook_strip_successors(lam, k, n, bounded=True):
        gnu = schubert.double_grothendieck(nu, k, n)
        gna = schubert.double_grothendieck(boxes.nu_a(nu), k, n)
        rhs_terms.append(RatFunc(sign * upref * gnu.num, gnu.den))
        rhs_terms.append(RatFunc(-sign * upref * gna.num, gna.den))
    rhs = _as_ratfunc_over_common_den(rhs_terms)
    return (lhs - rhs).is_zero()


def localize_operator(pm, loc, u_values=None):
    """Conjugate M(z) into the fixed-point basis: L^T (M0 + z M1) (L^T)^{-1}.

    loc is the localization table entry[lam][r]; returns (M0_loc, M1_loc).
    Restriction vectors of classes transform covariantly: the restriction of
    M(z) V equals M_loc(z) applied to the restriction vector of V.
    """
    N = len(pm.partitions)
    if u_values is not None:
        zero, one = Fraction(0), Fraction(1)
    else:
        zero, one = RatFunc(0), RatFunc(1)
    lt = [[_lift(loc[j][i], u_values) for j in range(N)] for i in range(N)]
    lt_inv = schubert.matrix_inverse(lt, zero, one)
    m0 = [[_lift(pm.m0[i][j], u_values) for j in range(N)] for i in range(N)]
    m1 = [[_lift(pm.m1[i][j], u_values) for j in range(N)] for i in range(N)]

    def mat_mul(a, b):
        return [[sum((a[i][l] * b[l][j] for l in range(N)), zero)
                 for j in range(N)] for i in range(N)]

    m0_loc = mat_mul(mat_mul(lt, m0), lt_inv)
    m1_loc = mat_mul(mat_mul(lt, m1), lt_inv)
    return m0_loc, m1_loc


def _lift(entry, u_values):
    if u_values is not None:
        if isinstance(entry, Fraction):
            return entry
        if isinstance(entry, MultiPoly):
            return entry.eval({U(l): Fraction(u_values[l - 1])
                               for l in range(1, len(u_values) + 1)})
        return Fraction(entry)
    if isinstance(entry, RatFunc):
        return entry
    if isinstance(entry, MultiPoly):
        return RatFunc.from_poly(entry)
    return RatFunc(MultiPoly.const(entry))
