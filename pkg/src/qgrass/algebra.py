"""Exact arithmetic substrate: sparse multivariate polynomials, reduced
rational functions, and truncated power series in the quantum parameter z.

Polynomials are dictionaries from monomials to exact coefficients.  A monomial
is a sorted tuple of (variable, exponent) pairs with nonzero exponents, and a
variable is a (kind, index) pair with kind in {"x", "u", "q", "eps"}.  The
quantum parameter z is never a polynomial variable; it is the series
coordinate of SeriesZ.

Coefficients are plain ints or fractions.Fraction; the two mix freely through
the Python numeric tower.  All values are immutable after construction, so
they can be shared across threads.

Monomial order is graded lexicographic: higher total degree wins, ties break
lexicographically with x1 > x2 > ... > u1 > ... > q > eps.  Negative exponents
(Laurent monomials in x or u) are representable, but exact division demands
honest polynomials.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionNotExact, PoleAtPoint, TruncationMismatch, ZeroDenominator

_KIND_RANK = {"x": 0, "u": 1, "q": 2, "eps": 3}


def var(kind, index=0):
    if kind not in _KIND_RANK:
        raise ValueError(f"unknown variable kind {kind!r}")
    return (_KIND_RANK[kind], index)


def X(i):
    return var("x", i)


def U(i):
    return var("u", i)


Q = var("q")
EPS = var("eps")

_KIND_NAME = {rank: kind for kind, rank in _KIND_RANK.items()}


def var_name(v):
    rank, index = v
    kind = _KIND_NAME[rank]
    return kind if kind in ("q", "eps") else f"{kind}{index}"


def var_from_name(name):
    if name == "q":
        return Q
    if name == "eps":
        return EPS
    return var(name[0], int(name[1:]))


def _mono_mul(m1, m2):
    """Merge two sorted monomials, adding exponents."""
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            e = e1 + e2
            if e:
                out.append((v1, e))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_div(m1, m2):
    """m1 / m2, or None when the quotient has a negative exponent."""
    quot = _mono_mul(m1, tuple((v, -e) for v, e in m2))
    if any(e < 0 for _, e in quot):
        return None
    return quot


def _mono_deg(m):
    return sum(e for _, e in m)


def _mono_cmp_key(m):
    """Sort key for graded lex order (larger key = larger monomial).

    Lexicographic part: walking variables in canonical order, a higher
    exponent on an earlier variable wins.  Encoded by listing (negated var,
    exponent) so tuple comparison does the walk. Works for sparse supports
    because a missing variable compares like exponent 0 only when degrees tie.
    """
    return (_mono_deg(m), tuple((-v[0], -v[1], e) for v, e in m))


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for m, c in terms.items():
                if c:
                    cleaned[m] = c
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls({(): Fraction(c)} if c else {})

    @classmethod
    def variable(cls, v, exp=1):
        if exp == 0:
            return cls.const(1)
        return cls({((v, exp),): 1})

    # -- predicates and views ---------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(): 1} or self.terms == {(): Fraction(1)}

    def variables(self):
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def total_degree(self):
        if not self.terms:
            return 0
        return max(_mono_deg(m) for m in self.terms)

    def leading(self):
        """(monomial, coefficient) maximal in graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=_mono_cmp_key)
        return m, self.terms[m]

    def constant_value(self):
        """The value of a constant polynomial."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        raise ValueError("polynomial is not constant")

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = MultiPoly.__new__(MultiPoly)
        object.__setattr__(p, "terms", out)
        return p

    __radd__ = __add__

    def __neg__(self):
        p = MultiPoly.__new__(MultiPoly)
        object.__setattr__(p, "terms", {m: -c for m, c in self.terms.items()})
        return p

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if not other:
                return MultiPoly.const(0)
            p = MultiPoly.__new__(MultiPoly)
            object.__setattr__(p, "terms", {m: c * other for m, c in self.terms.items()})
            return p
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        p = MultiPoly.__new__(MultiPoly)
        object.__setattr__(p, "terms", out)
        return p

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- division ----------------------------------------------------------
    def exact_div(self, divisor):
        """Exact polynomial quotient self/divisor.

        Raises DivisionNotExact when divisor does not divide self; both
        operands must be honest polynomials (no negative exponents).
        """
        if not isinstance(divisor, MultiPoly):
            divisor = MultiPoly.const(divisor)
        if divisor.is_zero():
            raise ZeroDenominator("division by the zero polynomial")
        for p in (self, divisor):
            for m in p.terms:
                if any(e < 0 for _, e in m):
                    raise ValueError("exact_div requires nonnegative exponents")
        lead_m, lead_c = divisor.leading()
        rem = dict(self.terms)
        quot = {}
        while rem:
            m = max(rem, key=_mono_cmp_key)
            qm = _mono_div(m, lead_m)
            if qm is None:
                raise DivisionNotExact(f"leading monomial {m} not divisible")
            qc = Fraction(rem[m]) / lead_c
            quot[qm] = qc
            for dm, dc in divisor.terms.items():
                t = _mono_mul(qm, dm)
                s = rem.get(t, 0) - qc * dc
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return MultiPoly(quot)

    # -- evaluation and substitution ----------------------------------------
    def eval(self, assignment):
        """Evaluate with every variable assigned a scalar (exact or float)."""
        missing = self.variables() - set(assignment)
        if missing:
            names = sorted(var_name(v) for v in missing)
            raise KeyError(f"assignment misses variables {names}")
        total = 0
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                val = val * assignment[v] ** e
            total = total + val
        return total

    def subs_scalars(self, partial):
        """Substitute exact scalars for some variables, keeping the rest."""
        out = {}
        for m, c in self.terms.items():
            kept = []
            val = c
            for v, e in m:
                if v in partial:
                    val = val * Fraction(partial[v]) ** e
                else:
                    kept.append((v, e))
            key = tuple(kept)
            s = out.get(key, 0) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return MultiPoly(out)

    def map_coeff(self, f):
        return MultiPoly({m: f(c) for m, c in self.terms.items()})

    # -- presentation -------------------------------------------------------
    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=_mono_cmp_key, reverse=True):
            c = self.terms[m]
            factors = "*".join(
                var_name(v) + (f"^{e}" if e != 1 else "") for v, e in m
            )
            if factors:
                bits.append(f"{c}*{factors}" if c != 1 else factors)
            else:
                bits.append(str(c))
        return " + ".join(bits)


ZERO = MultiPoly.const(0)
ONE = MultiPoly.const(1)


def poly_x(i):
    return MultiPoly.variable(X(i))


def poly_u(i):
    return MultiPoly.variable(U(i))


def poly_q():
    return MultiPoly.variable(Q)


def poly_eps():
    return MultiPoly.variable(EPS)


def _single_variable(*polys):
    """The unique variable of the given polynomials, or None."""
    vs = set()
    for p in polys:
        vs |= p.variables()
        if len(vs) > 1:
            return None
    return next(iter(vs)) if vs else None


def _to_dense(p, v):
    deg = max((dict(m).get(v, 0) for m in p.terms), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for m, c in p.terms.items():
        coeffs[dict(m).get(v, 0)] += c
    return coeffs


def _from_dense(coeffs, v):
    terms = {}
    for e, c in enumerate(coeffs):
        if c:
            terms[((v, e),) if e else ()] = c
    return MultiPoly(terms)


def _dense_divmod(a, b):
    """Polynomial divmod on dense Fraction coefficient lists."""
    a = list(a)
    db = len(b) - 1
    while len(b) > 1 and b[-1] == 0:
        b = b[:-1]
        db -= 1
    inv = Fraction(1) / b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        shift = len(a) - 1 - db
        f = a[-1] * inv
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _int_primitive(coeffs):
    """Clear Fraction denominators and strip integer content."""
    from math import gcd as _igcd
    den = 1
    for c in coeffs:
        d = Fraction(c).denominator
        den = den * d // _igcd(den, d)
    arr = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for v in arr:
        g = _igcd(g, v)
    if g > 1:
        arr = [v // g for v in arr]
    return arr


def _dense_gcd(a, b):
    """Monic gcd of dense coefficient lists via primitive pseudo-remainders.

    Integer arithmetic with content stripping at every step keeps
    coefficient growth tame compared to Fraction Euclid.
    """
    from math import gcd as _igcd
    A = _int_primitive(a)
    B = _int_primitive(b)
    while A and A[-1] == 0:
        A.pop()
    while B and B[-1] == 0:
        B.pop()
    if len(A) < len(B):
        A, B = B, A
    while B and any(B):
        # primitive pseudo-remainder of A by B
        R = list(A)
        lb = B[-1]
        db = len(B) - 1
        while len(R) - 1 >= db and any(R):
            while R and R[-1] == 0:
                R.pop()
            if len(R) - 1 < db:
                break
            shift = len(R) - 1 - db
            lr = R[-1]
            # scale R by lb so the leading terms cancel over the integers
            R = [c * lb for c in R]
            for i, bc in enumerate(B):
                R[shift + i] -= lr * bc
            while R and R[-1] == 0:
                R.pop()
        g = 0
        for v in R:
            g = _igcd(g, v)
        if g > 1:
            R = [v // g for v in R]
        A, B = B, R
    if not A or not any(A):
        return [Fraction(1)]
    lead = Fraction(A[-1])
    return [Fraction(c) / lead for c in A]


class RatFunc:
    """Reduced rational function num/den over MultiPoly.

    Canonical form is best effort: rational content and common monomial
    factors are always cleared, univariate operands get a full gcd reduction,
    and an exact polynomial quotient is attempted.  Equality is authoritative
    via cross multiplication regardless of the reduction achieved.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.const(num)
        if den is None:
            den = ONE
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.const(den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        num, den = _reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_poly(cls, p):
        return cls(p, ONE)

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def variables(self):
        return self.num.variables() | self.den.variables()

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFunc.__new__(RatFunc)
        object.__setattr__(r, "num", -self.num)
        object.__setattr__(r, "den", self.den)
        return r

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDenominator("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n):
        if n >= 0:
            return RatFunc(self.num ** n, self.den ** n)
        if self.num.is_zero():
            raise ZeroDenominator("negative power of zero")
        return RatFunc(self.den ** (-n), self.num ** (-n))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def eval(self, assignment):
        den = self.den.eval(assignment)
        if den == 0:
            raise PoleAtPoint("denominator vanishes at the assignment")
        return self.num.eval(assignment) / den

    def subs_scalars(self, partial):
        den = self.den.subs_scalars(partial)
        if den.is_zero():
            raise PoleAtPoint("denominator vanishes under substitution")
        return RatFunc(self.num.subs_scalars(partial), den)

    def __repr__(self):
        if self.den.is_one():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def _coerce(value):
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, MultiPoly):
        return RatFunc(value, ONE)
    if isinstance(value, (int, Fraction)):
        return RatFunc(MultiPoly.const(value), ONE)
    return NotImplemented


def _min_exponents(p):
    """Per-variable minimum exponent over all terms (absent counts as 0)."""
    mins = {}
    for v in p.variables():
        mins[v] = min(dict(m).get(v, 0) for m in p.terms)
    return mins


def _reduce(num, den):
    if num.is_zero():
        return ZERO, ONE
    # cancel the common monomial factor v^min and clear Laurent negatives:
    # multiplying num and den by the same monomial is always legal
    mn, md = _min_exponents(num), _min_exponents(den)
    shifts = {}
    for v in set(mn) | set(md):
        s = min(mn.get(v, 0), md.get(v, 0))
        if s:
            shifts[v] = s
    if shifts:
        mono = tuple(sorted((v, -e) for v, e in shifts.items()))
        factor = MultiPoly({mono: 1})
        num = num * factor
        den = den * factor
    # univariate: full gcd reduction
    v = _single_variable(num, den)
    if v is not None and not den.is_one():
        da = _to_dense(num, v)
        db = _to_dense(den, v)
        g = _dense_gcd(da, db)
        if len(g) > 1:
            qa, _ = _dense_divmod(da, g)
            qb, _ = _dense_divmod(db, g)
            num, den = _from_dense(qa, v), _from_dense(qb, v)
    elif not den.is_one():
        # cheap exact quotient attempt
        try:
            num = num.exact_div(den)
            den = ONE
        except (DivisionNotExact, ValueError):
            pass
    # normalize: leading coefficient of den is +1
    _, lc = den.leading()
    if lc != 1:
        inv = Fraction(1) / lc
        num = num.map_coeff(lambda c: c * inv)
        den = den.map_coeff(lambda c: c * inv)
    return num, den


RF_ZERO = RatFunc(0)
RF_ONE = RatFunc(1)


class SeriesZ:
    """Power series in z truncated at a fixed order, over a pluggable field.

    Coefficients may be Fraction, RatFunc, float, or complex; arithmetic is
    exact through the truncation order and discards anything beyond it.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs=None):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if coeffs is None:
            coeffs = [0] * (order + 1)
        if len(coeffs) != order + 1:
            raise ValueError("coefficient list must have length order+1")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("SeriesZ is immutable")

    @classmethod
    def const(cls, value, order):
        coeffs = [value] + [0] * order
        return cls(order, coeffs)

    def _check(self, other):
        if self.order != other.order:
            raise TruncationMismatch(
                f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        return SeriesZ(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return SeriesZ(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        if not isinstance(other, SeriesZ):
            return SeriesZ(self.order, [c * other for c in self.coeffs])
        self._check(other)
        n = self.order
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(0, n - i + 1):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return SeriesZ(n, out)

    __rmul__ = __mul__

    def scale(self, c):
        return SeriesZ(self.order, [c * a for a in self.coeffs])

    def qshift(self, q_elem):
        """Substitute z -> q z: multiply the z^m coefficient by q^m."""
        out = []
        power = 1
        for c in self.coeffs:
            out.append(c * power)
            power = power * q_elem
        return SeriesZ(self.order, out)

    def __eq__(self, other):
        if not isinstance(other, SeriesZ):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"SeriesZ(order={self.order}, coeffs={list(self.coeffs)!r})"


# -- JSON schema ------------------------------------------------------------
#
# MultiPoly: {"terms": [[{"x1": 2, "u3": 1}, "5", "3"], ...]}
#   each term is [exponent-map, numerator-string, denominator-string].
# RatFunc:  {"num": <poly>, "den": <poly>}


def poly_to_json(p):
    terms = []
    for m in sorted(p.terms, key=_mono_cmp_key):
        c = Fraction(p.terms[m])
        exp = {var_name(v): e for v, e in m}
        terms.append([exp, str(c.numerator), str(c.denominator)])
    return {"terms": terms}


def poly_from_json(obj):
    terms = {}
    for exp, snum, sden in obj["terms"]:
        m = tuple(sorted((var_from_name(name), e) for name, e in exp.items()))
        terms[m] = Fraction(int(snum), int(sden))
    return MultiPoly(terms)


def ratfunc_to_json(r):
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfunc_from_json(obj):
    return RatFunc(poly_from_json(obj["num"]), poly_from_json(obj["den"]))
