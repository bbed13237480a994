"""Five-vertex lattice side: R-matrices for both theories, Yang-Baxter
checks, attracting-matrix constants, monodromy and twisted-trace transfer
matrices, weight sectors, and the exploratory identification of the transfer
algebra with the quantum multiplication operators.

Spin-basis convention: site i in 1..n carries bit b_i; the state index is
sum_i b_i 2^(i-1).  A frame marks its member sites with b_i = 1, which
identifies the weight-k sector with the fixed-point basis in the
lexicographic partition order.  The auxiliary space is tensor slot 0 and the
A/D blocks of the monodromy are the upper-left/lower-right auxiliary blocks;
the transfer matrix is the twisted trace T(x) = z A(x) + D(x).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from . import bethe as bethe_mod
from . import boxes, schubert
from .algebra import MultiPoly, RatFunc, poly_u, poly_x
from .errors import GaugeNotFound, SizeLimit

COHOMOLOGY = schubert.COHOMOLOGY
KTHEORY = schubert.KTHEORY


def r_matrix(theory, param):
    """4x4 R matrix with the theory's middle block; param is u or t."""
    one = param ** 0
    zero = one - one
    if theory == COHOMOLOGY:
        mid = [[zero, one], [one, param]]
    else:
        mid = [[zero, param], [one, one - param]]
    return [
        [one, zero, zero, zero],
        [zero, mid[0][0], mid[0][1], zero],
        [zero, mid[1][0], mid[1][1], zero],
        [zero, zero, zero, one],
    ]


def attracting_matrices(theory):
    """The constant attracting matrices and their product (the middle block).

    Cohomology carries the additive weight u; K-theory the multiplicative
    character t, represented here by the first weight variable.
    """
    if theory == COHOMOLOGY:
        u = RatFunc.from_poly(poly_u(1))
        one = RatFunc(1)
        zero = RatFunc(0)
        t_plus = [[one, zero], [one, u]]
        t_minus = [[-u, one], [zero, one]]
    else:
        t = RatFunc.from_poly(poly_u(1))
        one = RatFunc(1)
        zero = RatFunc(0)
        t_plus = [[one, zero], [one, one - t]]
        t_minus = [[one - one / t, one], [zero, one]]
    product = _mat2_mul(_mat2_inv(t_minus), t_plus)
    return t_plus, t_minus, product


def _mat2_inv(m):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return [[m[1][1] / det, -m[0][1] / det],
            [-m[1][0] / det, m[0][0] / det]]


def _mat2_mul(a, b):
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)]
            for i in range(2)]


def _act_on_slots(r4, slots, total, zero, one):
    """Lift a 4x4 matrix acting on two tensor slots to the full chain."""
    a, b = slots
    dim = 1 << total
    out = [[zero] * dim for _ in range(dim)]
    for row in range(dim):
        rb = [(row >> s) & 1 for s in range(total)]
        for col in range(dim):
            cb = [(col >> s) & 1 for s in range(total)]
            if any(rb[s] != cb[s] for s in range(total) if s not in (a, b)):
                continue
            out[row][col] = r4[2 * rb[a] + rb[b]][2 * cb[a] + cb[b]]
    return out


def _mat_mul(a, b, zero):
    n = len(a)
    bt = list(zip(*b))
    out = [[zero] * n for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for j in range(n):
            s = zero
            for l in range(n):
                if _nonzero(ai[l]) and _nonzero(bt[j][l]):
                    s = s + ai[l] * bt[j][l]
            out[i][j] = s
    return out


def _nonzero(v):
    if isinstance(v, (MultiPoly, RatFunc)):
        return not v.is_zero()
    return v != 0


def check_ybe(theory, middle_block=None):
    """Exact 8x8 Yang-Baxter identity over symbolic parameters.

    Cohomology uses additive spectral arguments, K-theory multiplicative
    ones.  A custom middle_block substitutes a perturbed R for negative
    controls.
    """
    x = RatFunc.from_poly(poly_x(1))
    u1 = RatFunc.from_poly(poly_u(1))
    u2 = RatFunc.from_poly(poly_u(2))
    one = RatFunc(1)
    zero = RatFunc(0)

    def rmat(param):
        if middle_block is not None:
            mid = middle_block(param)
            return [
                [one, zero, zero, zero],
                [zero, mid[0][0], mid[0][1], zero],
                [zero, mid[1][0], mid[1][1], zero],
                [zero, zero, zero, one],
            ]
        return r_matrix(theory, param)

    if theory == COHOMOLOGY:
        args = (u1 - x, u2 - x, u2 - u1)
    else:
        args = (u1 / x, u2 / x, u2 / u1)
    ra1 = _act_on_slots(rmat(args[0]), (0, 1), 3, zero, one)
    ra2 = _act_on_slots(rmat(args[1]), (0, 2), 3, zero, one)
    r12 = _act_on_slots(rmat(args[2]), (1, 2), 3, zero, one)
    lhs = _mat_mul(_mat_mul(ra1, ra2, zero), r12, zero)
    rhs = _mat_mul(_mat_mul(r12, ra2, zero), ra1, zero)
    for i in range(8):
        for j in range(8):
            if not (lhs[i][j] - rhs[i][j]).is_zero():
                return False
    return True


@dataclass(frozen=True)
class Monodromy:
    theory: str
    n: int
    a: object
    b: object
    c: object
    d: object
    exact: bool


def monodromy(n, theory=KTHEORY, x_value=None, u_values=None):
    """Ordered product of R matrices over the chain sites.

    Spectral arguments are x/u_i (K-theory) or u_i - x (cohomology).
    Numeric with values supplied; exact over symbolic x, u otherwise (keep n
    small in that case: the chain operator is dense 2^n-dimensional).
    """
    if n > 8:
        raise SizeLimit("dense operators are limited to n <= 8")
    total = n + 1  # slot 0 is the auxiliary space
    if x_value is not None:
        x = complex(x_value)
        us = [complex(v) for v in u_values]
        L = np.eye(1 << total, dtype=complex)
        for i in range(1, n + 1):
            arg = x / us[i - 1] if theory == KTHEORY else us[i - 1] - x
            r4 = np.array(r_matrix(theory, arg), dtype=complex)
            L = L @ _act_numpy(r4, (0, i), total)
        dim = 1 << n
        # auxiliary bit is slot 0 => stride 1 in the index; reorder so the
        # chain indices are contiguous per auxiliary block
        idx0 = [2 * j for j in range(dim)]
        idx1 = [2 * j + 1 for j in range(dim)]
        A = L[np.ix_(idx0, idx0)]
        B = L[np.ix_(idx0, idx1)]
        C = L[np.ix_(idx1, idx0)]
        D = L[np.ix_(idx1, idx1)]
        return Monodromy(theory, n, A, B, C, D, exact=False)
    x = RatFunc.from_poly(poly_x(1))
    one = RatFunc(1)
    zero = RatFunc(0)
    dim_full = 1 << total
    L = [[one if i == j else zero for j in range(dim_full)]
         for i in range(dim_full)]
    for i in range(1, n + 1):
        u = RatFunc.from_poly(poly_u(i))
        arg = x / u if theory == KTHEORY else u - x
        site = _act_on_slots(r_matrix(theory, arg), (0, i), total, zero, one)
        L = _mat_mul(L, site, zero)
    dim = 1 << n
    blocks = {}
    for aux_r, aux_c, name in ((0, 0, "a"), (0, 1, "b"), (1, 0, "c"), (1, 1, "d")):
        blocks[name] = [[L[2 * r + aux_r][2 * c + aux_c] for c in range(dim)]
                        for r in range(dim)]
    return Monodromy(theory, n, blocks["a"], blocks["b"], blocks["c"],
                     blocks["d"], exact=True)


def _act_numpy(r4, slots, total):
    a, b = slots
    dim = 1 << total
    out = np.zeros((dim, dim), dtype=complex)
    for row in range(dim):
        ra = (row >> a) & 1
        rbit = (row >> b) & 1
        rest = row & ~((1 << a) | (1 << b))
        for ca in (0, 1):
            for cb in (0, 1):
                col = rest | (ca << a) | (cb << b)
                out[row, col] = r4[2 * ra + rbit, 2 * ca + cb]
    return out


def transfer_matrix(mono, z):
    """Twisted trace z A(x) + D(x)."""
    if mono.exact:
        zr = z if isinstance(z, RatFunc) else RatFunc(MultiPoly.const(z))
        dim = len(mono.a)
        return [[zr * mono.a[i][j] + mono.d[i][j] for j in range(dim)]
                for i in range(dim)]
    return complex(z) * mono.a + mono.d


def weight_sector(n, k):
    """Indices of k-particle states ordered by the partition bijection,
    plus the orthogonal projector onto their span."""
    parts = boxes.enumerate_partitions(k, n)
    frames = [boxes.partition_to_subset(p, k, n) for p in parts]
    indices = [sum(1 << (i - 1) for i in r) for r in frames]
    dim = 1 << n
    proj = np.zeros((dim, dim))
    for i in indices:
        proj[i, i] = 1.0
    return indices, proj


def commuting_family_check(n, k, samples=5, tol=1e-12, seed=0,
                           theory=KTHEORY):
    """Max commutator norm of transfer matrices at random parameter pairs,
    on the full chain space and restricted to the weight-k sector."""
    rng = random.Random(seed)
    indices, _ = weight_sector(n, k)
    worst_full = 0.0
    worst_sector = 0.0
    results = []
    for _ in range(samples):
        us = [rng.uniform(1.0, 4.0) for _ in range(n)]
        z = rng.uniform(0.1, 2.0)
        x1 = rng.uniform(0.5, 3.0)
        x2 = rng.uniform(0.5, 3.0) + 0.61
        t1 = transfer_matrix(monodromy(n, theory, x1, us), z)
        t2 = transfer_matrix(monodromy(n, theory, x2, us), z)
        comm = t1 @ t2 - t2 @ t1
        full = float(np.max(np.abs(comm)))
        sector = float(np.max(np.abs(comm[np.ix_(indices, indices)])))
        worst_full = max(worst_full, full)
        worst_sector = max(worst_sector, sector)
        results.append({"x1": x1, "x2": x2, "z": z,
                        "full": full, "sector": sector})
    # z = 0 degenerate variant: commutator of the D blocks alone, reported
    # but not asserted
    us = [rng.uniform(1.0, 4.0) for _ in range(n)]
    d1 = monodromy(n, theory, 1.3, us).d
    d2 = monodromy(n, theory, 0.7, us).d
    d_comm = float(np.max(np.abs(d1 @ d2 - d2 @ d1)))
    return {
        "n": n, "k": k, "theory": theory, "samples": samples, "seed": seed,
        "max_commutator_full": worst_full,
        "max_commutator_sector": worst_sector,
        "z0_d_block_commutator": d_comm,
        "within_tol": worst_full <= tol,
        "details": results,
    }


def particle_number_conserved(n, theory=KTHEORY, seed=0):
    """Each monodromy block maps fixed down-spin number to itself.

    Checked as a sparsity pattern at random numeric parameters.
    """
    rng = random.Random(seed)
    us = [rng.uniform(1.0, 4.0) for _ in range(n)]
    mono = monodromy(n, theory, rng.uniform(0.5, 3.0), us)
    for block, shift in ((mono.a, 0), (mono.b, -1), (mono.c, 1), (mono.d, 0)):
        dim = 1 << n
        for r in range(dim):
            wr = bin(r).count("1")
            for c in range(dim):
                if abs(block[r, c]) > 1e-12 and bin(c).count("1") != wr + shift:
                    return False
    return True


def bethe_algebra_probe(n, k, z, u, tol=1e-8, seed=0, x_value=None):
    """Exploratory identification of the transfer algebra with quantum
    multiplication on the weight-k sector.

    Reports the commutator with the localized multiplication matrix under
    the identity gauge, the best diagonal gauge found (from eigenvector
    component ratios), and the overlap of transfer eigenvectors with
    transported off-shell vectors.
    """
    t0 = time.time()
    rng = random.Random(seed)
    if x_value is None:
        x_value = rng.uniform(0.5, 3.0)
    indices, _ = weight_sector(n, k)
    T = transfer_matrix(monodromy(n, KTHEORY, x_value, u), z)
    t_sector = T[np.ix_(indices, indices)]
    mloc, parts = bethe_mod.numeric_localized(KTHEORY, k, n, u, z)

    def rel_comm(a, b):
        denom = np.linalg.norm(a) * np.linalg.norm(b)
        return float(np.linalg.norm(a @ b - b @ a) / denom) if denom else 0.0

    identity_res = rel_comm(t_sector, mloc)
    # candidate diagonal gauges from eigenvector component ratios
    _, vt = np.linalg.eig(t_sector)
    _, vm = np.linalg.eig(mloc)
    best_gauge = None
    best_res = identity_res
    for jt in range(vt.shape[1]):
        tvec = vt[:, jt]
        for jm in range(vm.shape[1]):
            mvec = vm[:, jm]
            if np.min(np.abs(mvec)) < 1e-12:
                continue
            g = tvec / mvec
            if np.min(np.abs(g)) < 1e-12:
                continue
            G = np.diag(g)
            m_spin = G @ mloc @ np.linalg.inv(G)
            res = rel_comm(t_sector, m_spin)
            if res < best_res:
                best_res = res
                best_gauge = g
    gauge_found = best_res <= tol
    # eigenvector overlap with transported off-shell vectors
    system = bethe_mod.build_bethe(KTHEORY, k, n, u, z)
    frames = [boxes.partition_to_subset(p, k, n) for p in parts]
    lt = _numeric_lt(k, n, u)
    overlaps = []
    for r in frames:
        roots = bethe_mod.solve_bethe(system, r)
        v = bethe_mod.offshell_vector(KTHEORY, np.asarray(roots.roots), k, n, u)
        w = np.linalg.solve(lt, v)
        best = 1.0
        for jt in range(vt.shape[1]):
            tvec = vt[:, jt]
            cos = abs(np.vdot(tvec, w)) / (np.linalg.norm(tvec) * np.linalg.norm(w))
            best = min(best, 1.0 - cos)
        overlaps.append({"frame": list(r), "min_cosine_distance": float(best)})
    report = {
        "n": n, "k": k, "z": repr(complex(z)), "x": x_value, "seed": seed,
        "identity_gauge_residual": identity_res,
        "best_gauge_residual": best_res,
        "gauge_found": bool(gauge_found),
        "gauge": [repr(v) for v in best_gauge] if best_gauge is not None else None,
        "eigenvector_overlaps": overlaps,
        "wall_s": round(time.time() - t0, 3),
    }
    if not gauge_found:
        report["warning"] = (
            f"no diagonal gauge reached {tol}; best {best_res:.3e} "
            "(GaugeNotFound, reported not fatal)")
    return report


def _numeric_lt(k, n, u):
    parts = boxes.enumerate_partitions(k, n)
    N = len(parts)
    loc = schubert.localization_matrix(k, n, KTHEORY, u_values=None)
    assign = {schubert.U(l): complex(u[l - 1]) for l in range(1, n + 1)}
    lt = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            entry = loc[j][i]
            lt[i, j] = entry.eval(assign) if hasattr(entry, "eval") else complex(entry)
    return lt
