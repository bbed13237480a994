"""Bethe systems attached to the quantum multiplication operators: build the
saddle-point equations, track their roots from z = 0, and cross-check the
eigenvalues and eigenvectors of the localized operators.

Cohomology: every coordinate independently satisfies
    (x - u_1)...(x - u_n) = (-1)^(k-1) z,
so the C(n,k) spectra come from k-subsets of the n roots of one polynomial.

K-theory: the coupled system, with denominators cleared by prod_{i != j} x_i,
    prod_l (1 - x_j/u_l) * prod_{i != j} x_i = z (-x_j)^(k-1).

Roots are tracked by Newton continuation in z from the exact z = 0 seeds
x_j = u_{r_j}.  At z = 0 quantum multiplication restricts at the fixed point
of r to multiplication by the class value, so the eigenvalue normalizations
are pinned there: sum of roots (cohomology) and product of roots (K-theory).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import numpy as np

from . import boxes, pieri, schubert
from .errors import (DegenerateWeights, NonConvergence, PathCollision,
                     SingularLocalization, UnmatchedSpectrum)

COHOMOLOGY = schubert.COHOMOLOGY
KTHEORY = schubert.KTHEORY

# continuation-safe |z| ranges, recorded empirically per case
Z_MAX = {
    (1, 2): 1e-1,
    (1, 3): 1e-1,
    (2, 3): 1e-2,
    (2, 4): 1e-2,
}


@dataclass(frozen=True)
class BetheSystem:
    theory: str
    k: int
    n: int
    u: tuple
    z: complex

    def equations_text(self):
        if self.theory == COHOMOLOGY:
            sign = "" if (self.k - 1) % 2 == 0 else "-"
            return [f"prod_l (x_{j} - u_l) - {sign}z = 0"
                    for j in range(1, self.k + 1)]
        return [f"prod_l (1 - x_{j}/u_l) * prod_(i!={j}) x_i"
                f" - z*(-x_{j})^{self.k - 1} = 0"
                for j in range(1, self.k + 1)]

    def residual(self, x):
        """Cleared-denominator residual vector at the point x."""
        x = np.asarray(x, dtype=complex)
        u = np.asarray(self.u, dtype=complex)
        out = np.zeros(self.k, dtype=complex)
        sign = (-1) ** (self.k - 1)
        for j in range(self.k):
            if self.theory == COHOMOLOGY:
                out[j] = np.prod(x[j] - u) - sign * self.z
            else:
                others = np.prod(np.delete(x, j)) if self.k > 1 else 1.0
                out[j] = np.prod(1 - x[j] / u) * others \
                    - self.z * (-x[j]) ** (self.k - 1)
        return out

    def jacobian(self, x):
        x = np.asarray(x, dtype=complex)
        u = np.asarray(self.u, dtype=complex)
        J = np.zeros((self.k, self.k), dtype=complex)
        for j in range(self.k):
            if self.theory == COHOMOLOGY:
                J[j, j] = sum(np.prod(x[j] - np.delete(u, l))
                              for l in range(self.n))
            else:
                others = np.prod(np.delete(x, j)) if self.k > 1 else 1.0
                aprime = sum((-1 / u[l]) * np.prod(1 - x[j] / np.delete(u, l))
                             for l in range(self.n))
                J[j, j] = aprime * others
                if self.k >= 2:
                    J[j, j] -= self.z * (self.k - 1) * \
                        (-1) ** (self.k - 1) * x[j] ** (self.k - 2)
                avalue = np.prod(1 - x[j] / u)
                for i in range(self.k):
                    if i == j:
                        continue
                    rest = np.prod(np.delete(x, [i, j])) if self.k > 2 else 1.0
                    J[j, i] = avalue * rest
        return J


@dataclass(frozen=True)
class BetheRoots:
    roots: tuple
    residuals: tuple
    provenance: dict = field(default_factory=dict)


def build_bethe(theory, k, n, u, z):
    u = tuple(complex(v) for v in u)
    if theory == KTHEORY and any(v == 0 for v in u):
        raise DegenerateWeights("K-theory Bethe equations need nonzero u")
    return BetheSystem(theory, k, n, u, complex(z))


def _newton(system, x, tol, max_iter=60):
    for _ in range(max_iter):
        f = system.residual(x)
        if np.max(np.abs(f)) < tol:
            return x
        J = system.jacobian(x)
        try:
            dx = np.linalg.solve(J, f)
        except np.linalg.LinAlgError as exc:
            raise NonConvergence(f"singular Jacobian: {exc}") from exc
        x = x - dx
    f = system.residual(x)
    if np.max(np.abs(f)) < tol:
        return x
    raise NonConvergence(f"Newton stalled, |f| = {np.max(np.abs(f)):.3e}")


def solve_bethe(system, frame, tol=1e-12, steps=32):
    """Track the frame's root vector from z = 0 to the system's z.

    Seeds are the exact z = 0 roots x_j = u_{r_j}.  Steps are halved
    adaptively when Newton fails; coincident tracked roots raise
    PathCollision.  Coincident seeds (nonequivariant cohomology) fall back to
    direct polynomial roots with a deterministic sorted assignment.
    """
    k, n = system.k, system.n
    u = np.asarray(system.u, dtype=complex)
    seeds = np.array([u[frame[b] - 1] for b in range(k)], dtype=complex)
    if len(set(np.round(seeds, 12))) != k or len(set(np.round(u, 12))) != n:
        if system.theory == COHOMOLOGY:
            roots = _direct_coh_roots(system, frame)
            res = system.residual(roots)
            return BetheRoots(tuple(roots), tuple(abs(v) for v in res),
                              {"frame": tuple(frame), "path": "direct-roots"})
        raise PathCollision("coincident seeds; cannot track separately")
    x = seeds.copy()
    z_target = system.z
    done = 0.0
    step = 1.0 / steps
    halvings = 0
    while done < 1.0 - 1e-15:
        t = min(1.0, done + step)
        sub = BetheSystem(system.theory, k, n, system.u, z_target * t)
        try:
            x_new = _newton(sub, x, tol)
        except NonConvergence:
            step /= 2
            halvings += 1
            if halvings > 40:
                raise NonConvergence(
                    f"continuation stalled at t={done:.4f} "
                    f"(cond J ~ {np.linalg.cond(system.jacobian(x)):.2e})")
            continue
        x = x_new
        done = t
    if k > 1:
        for i in range(k):
            for j in range(i + 1, k):
                if abs(x[i] - x[j]) < 1e-9 * max(1.0, abs(x[i])):
                    raise PathCollision(f"roots {i} and {j} coalesced")
    res = system.residual(x)
    return BetheRoots(tuple(x), tuple(abs(v) for v in res),
                      {"frame": tuple(frame), "path": "newton", "steps": steps,
                       "halvings": halvings})


def _direct_coh_roots(system, frame):
    """All roots of prod(x - u_l) = (-1)^(k-1) z, sorted deterministically,
    assigned to the frame positionally."""
    n = system.n
    coeffs = np.poly(np.asarray(system.u, dtype=complex)).astype(complex)
    coeffs[-1] -= (-1) ** (system.k - 1) * system.z
    roots = sorted(np.roots(coeffs), key=lambda w: (round(w.real, 10),
                                                    round(w.imag, 10)))
    return np.array([roots[i - 1] for i in frame], dtype=complex)


def coh_global_roots(k, n, u, z):
    """The n roots of the single cohomology polynomial; k-subsets of them
    enumerate all C(n,k) spectra."""
    coeffs = np.poly(np.asarray(u, dtype=complex)).astype(complex)
    coeffs[-1] -= (-1) ** (k - 1) * complex(z)
    return np.roots(coeffs)


def numeric_localized(theory, k, n, u, z):
    """M_loc(z) = L^T (M0 + z M1) (L^T)^{-1} as a dense complex matrix."""
    parts = boxes.enumerate_partitions(k, n)
    N = len(parts)
    loc = schubert.localization_matrix(k, n, theory, u_values=None)
    uassign = {schubert.U(l): complex(u[l - 1]) for l in range(1, n + 1)}
    lt = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            entry = loc[j][i]
            lt[i, j] = entry.eval(uassign) if hasattr(entry, "eval") else complex(entry)
    pm = pieri.pieri_matrix(theory, k, n, u_values=[complex(v) for v in u])
    m = np.array([[complex(pm.m0[i][j]) + complex(z) * complex(pm.m1[i][j])
                   for j in range(N)] for i in range(N)])
    if abs(np.linalg.det(lt)) < 1e-12:
        raise SingularLocalization("localization matrix numerically singular")
    return lt @ m @ np.linalg.inv(lt), parts


def offshell_vector(theory, x, k, n, u):
    """Representatives of all box partitions evaluated at the point x."""
    parts = boxes.enumerate_partitions(k, n)
    assign = {schubert.U(l): complex(u[l - 1]) for l in range(1, n + 1)}
    assign.update({schubert.X(b + 1): complex(x[b]) for b in range(k)})
    out = []
    for lam in parts:
        rep = schubert.representative(theory, lam, k, n)
        out.append(rep.eval(assign))
    return np.array(out, dtype=complex)


def match_multisets(a, b, tol):
    """Greedy nearest pairing of two eigenvalue multisets."""
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise UnmatchedSpectrum(f"sizes differ: {len(a)} vs {len(b)}")
    pairs = []
    used = [False] * len(b)
    for va in a:
        best, best_d = None, None
        for i, vb in enumerate(b):
            if used[i]:
                continue
            d = abs(va - vb)
            if best_d is None or d < best_d:
                best, best_d = i, d
        used[best] = True
        pairs.append((va, b[best], best_d))
    worst = max(d for _, _, d in pairs)
    return pairs, worst


def eigen_compare(theory, k, n, u, z, tol=1e-8, newton_tol=1e-12):
    """Spectrum of the localized operator vs Bethe-root predictions.

    Candidate eigenvalues: sum of the frame's roots (cohomology) or their
    product (K-theory), the normalization pinned by the z = 0 spectrum.
    Also probes which basis makes the off-shell vector an eigenvector.
    """
    t0 = time.time()
    mloc, parts = numeric_localized(theory, k, n, u, z)
    eigvals = np.linalg.eigvals(mloc)
    frames = [boxes.partition_to_subset(p, k, n) for p in parts]
    system = build_bethe(theory, k, n, u, z)
    candidates = []
    vec_reports = []
    pm = pieri.pieri_matrix(theory, k, n, u_values=[complex(v) for v in u])
    N = len(parts)
    mmat = np.array([[complex(pm.m0[i][j]) + complex(z) * complex(pm.m1[i][j])
                      for j in range(N)] for i in range(N)])
    variants = {
        "multiplication-matrix": mmat,
        "multiplication-matrix-transpose": mmat.T,
        "localized": mloc,
        "localized-transpose": mloc.T,
    }
    tallies = {name: 0.0 for name in variants}
    for r in frames:
        roots = solve_bethe(system, r, tol=newton_tol)
        xs = np.asarray(roots.roots)
        lam_val = np.sum(xs) if theory == COHOMOLOGY else np.prod(xs)
        candidates.append(lam_val)
        v = offshell_vector(theory, xs, k, n, u)
        nv = np.linalg.norm(v)
        residuals = {
            name: float(np.linalg.norm(mat @ v - lam_val * v) / nv)
            for name, mat in variants.items()
        }
        for name, res in residuals.items():
            tallies[name] = max(tallies[name], res)
        vec_reports.append({
            "frame": list(r),
            "roots": [repr(w) for w in xs],
            "max_equation_residual": max(roots.residuals),
            "eigvec_residuals": residuals,
        })
    pairs, worst = match_multisets(eigvals, candidates, tol)
    matched = worst <= tol
    if not matched:
        raise UnmatchedSpectrum(
            f"spectra differ by {worst:.3e} > {tol:.1e}; "
            f"operator={sorted(eigvals, key=abs)} bethe={sorted(candidates, key=abs)}")
    best = min(tallies, key=tallies.get)
    return {
        "theory": theory, "k": k, "n": n, "z": repr(complex(z)),
        "matched": matched,
        "max_pairing_distance": float(worst),
        "eigenvalue_normalization": "sum of roots" if theory == COHOMOLOGY
                                     else "product of roots",
        "eigenvector_action": best,
        "eigenvector_residual": tallies[best],
        "frames": vec_reports,
        "wall_s": round(time.time() - t0, 3),
    }
