"""Partitions in the k x (n-k) box, frames (k-subsets), rook strips, and the
diagram surgeries used by the multiplication operators.

A partition is a plain tuple of k weakly decreasing nonnegative ints with
trailing zeros explicit, so the row index always runs 1..k.  The paired
k-subset ("frame") r satisfies r_i = lambda_{k+1-i} + i and labels a torus
fixed point.  Partitions of a box are listed lexicographically; that order
fixes the row/column order of every matrix in the package.
"""

from __future__ import annotations

from itertools import combinations

from .errors import InvalidShape, OutOfBox


def check_partition(lam):
    if any(a < b for a, b in zip(lam, lam[1:])) or (lam and lam[-1] < 0):
        raise InvalidShape(f"not weakly decreasing nonnegative: {lam}")
    return tuple(lam)


def in_box(lam, k, n):
    return len(lam) == k and (not lam or lam[0] <= n - k)


def size(lam):
    return sum(lam)


def enumerate_partitions(k, n):
    """All C(n,k) partitions of the k x (n-k) box in lexicographic order."""
    if not 1 <= k <= n:
        raise InvalidShape(f"need 1 <= k <= n, got k={k}, n={n}")
    out = []

    def rec(prefix, maxpart, rows):
        if rows == 0:
            out.append(tuple(prefix))
            return
        for p in range(0, maxpart + 1):
            rec(prefix + [p], p, rows - 1)

    rec([], n - k, k)
    out.sort()
    return out


def partition_to_subset(lam, k, n):
    """The frame of an in-box partition: r_i = lambda_{k+1-i} + i."""
    lam = check_partition(lam)
    if not in_box(lam, k, n):
        raise OutOfBox(f"{lam} does not fit in {k}x{n-k}")
    return tuple(lam[k - i] + i for i in range(1, k + 1))


def subset_to_partition(r, k, n):
    """Inverse of partition_to_subset."""
    r = tuple(r)
    if len(r) != k or any(a >= b for a, b in zip(r, r[1:])):
        raise InvalidShape(f"not a strictly increasing k-subset: {r}")
    if r[0] < 1 or r[-1] > n:
        raise OutOfBox(f"subset {r} not inside [1,{n}]")
    lam = tuple(r[k - 1 - i] - (k - i) for i in range(k))
    return check_partition(lam)


def all_subsets(k, n):
    return list(combinations(range(1, n + 1), k))


def is_rook_strip(lam, nu):
    """nu/lam has at most one box per row and per column (nu >= lam)."""
    if len(lam) != len(nu):
        return False
    cols = []
    for a, b in zip(lam, nu):
        if b < a or b - a > 1:
            return False
        if b == a + 1:
            cols.append(b)
    return len(set(cols)) == len(cols)


def rook_strip_successors(lam, k, n=None, bounded=False):
    """All nu >= lam with nu/lam a rook strip, each with sign (-1)^|nu/lam|.

    Includes nu = lam.  The bounded variant keeps nu inside the k x (n-k)
    box; the unbounded one lets the first row overflow by one.
    """
    lam = check_partition(lam)
    if len(lam) != k:
        raise InvalidShape(f"expected {k} parts, got {lam}")
    if bounded and n is None:
        raise InvalidShape("bounded enumeration needs n")
    out = []
    for mask in range(1 << k):
        inc = [(mask >> i) & 1 for i in range(k)]
        nu = tuple(lam[i] + inc[i] for i in range(k))
        if any(nu[i] < nu[i + 1] for i in range(k - 1)):
            continue
        cols = [lam[i] + 1 for i in range(k) if inc[i]]
        if len(set(cols)) != len(cols):
            continue
        if bounded and nu[0] > n - k:
            continue
        out.append((nu, -1 if sum(inc) % 2 else 1))
    out.sort(key=lambda pair: pair[0])
    return out


def hat_bar(nu, k):
    """Remove the first row and first column of nu, keeping k parts.

    Drop nu_1, subtract 1 from each remaining positive part, keep zeros,
    and pad with trailing zeros back to length k.
    """
    nu = check_partition(nu)
    rest = [p - 1 for p in nu[1:] if p >= 1]
    return tuple(rest + [0] * (k - len(rest)))


def nu_a(nu):
    """Increment the first part; the result may leave the box."""
    nu = check_partition(nu)
    return (nu[0] + 1,) + nu[1:]
