"""Jacobians, minors, completed square matrices and the smooth-locus ideal."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from neron.groebner import Ideal, colon, exact_quotient


def jacobian(f, yvars):
    """``r x n`` matrix of formal partials ``d f_i / d Y_j``."""
    return [[fi.diff(y) for y in yvars] for fi in f]


def _zero_like(M):
    for row in M:
        for x in row:
            return x.ring.zero()
    raise ValueError("empty matrix")


def matmul(A, B):
    zero = _zero_like(A)
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = zero
            for k in range(m):
                a = A[i][k]
                if a.is_zero():
                    continue
                b = B[k][j]
                if b.is_zero():
                    continue
                acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def matvec(A, v):
    zero = _zero_like(A)
    out = []
    for row in A:
        acc = zero
        for a, x in zip(row, v):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out


def submatrix(M, rows, cols):
    return [[M[i][j] for j in cols] for i in rows]


def det(M):
    """Determinant; Laplace on rows/columns with <= 1 nonzero, else Bareiss."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    return _det(M, _zero_like(M))


def _det(M, zero):
    n = len(M)
    if n == 0:
        return zero.ring.one()
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    for i, row in enumerate(M):
        nz = [j for j, x in enumerate(row) if not x.is_zero()]
        if len(nz) <= 1:
            if not nz:
                return zero
            j = nz[0]
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(M) if k != i]
            s = _det(minor, zero)
            v = row[j] * s
            return -v if (i + j) % 2 else v
    for j in range(n):
        nz = [i for i in range(n) if not M[i][j].is_zero()]
        if len(nz) <= 1:
            if not nz:
                return zero
            i = nz[0]
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(M) if k != i]
            s = _det(minor, zero)
            v = M[i][j] * s
            return -v if (i + j) % 2 else v
    return _bareiss(M, zero)


def _bareiss(M, zero):
    n = len(M)
    A = [list(r) for r in M]
    sign = 1
    prev = zero.ring.one()
    for k in range(n - 1):
        if A[k][k].is_zero():
            for i in range(k + 1, n):
                if not A[i][k].is_zero():
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = exact_quotient(num, prev) if not num.is_zero() else zero
            A[i][k] = zero
        prev = A[k][k]
    return A[n - 1][n - 1] if sign > 0 else -A[n - 1][n - 1]


def adjugate(H):
    """Transpose of the cofactor matrix: ``adj(H) H = H adj(H) = det(H) Id``."""
    n = len(H)
    zero = _zero_like(H)
    if n == 1:
        return [[zero.ring.one()]]
    out = [[zero] * n for _ in range(n)]
    for i in range(n):
        rows = [r for k, r in enumerate(H) if k != i]
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for r in rows]
            c = _det(minor, zero)
            out[j][i] = -c if (i + j) % 2 else c
    return out


def identity(n, ring):
    return [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        while seq[i] != i:
            j = seq[i]
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


def complete_to_square(Jf, cols):
    """Complete the ``r x n`` matrix ``Jf`` by signed unit rows so that
    ``det H`` equals the minor of ``Jf`` on ``cols`` (taken in increasing order).
    """
    r, n = len(Jf), len(Jf[0])
    cols = sorted(cols)
    if len(set(cols)) != r:
        raise ValueError("need r distinct columns")
    ring = Jf[0][0].ring
    rest = [j for j in range(n) if j not in cols]
    sign = _perm_sign(cols + rest)
    H = [list(row) for row in Jf]
    for t, j in enumerate(rest):
        row = [ring.zero()] * n
        row[j] = ring.one() if (t > 0 or sign > 0) else -ring.one()
        H.append(row)
    return H


def minor(Jf, cols):
    return det(submatrix(Jf, range(len(Jf)), sorted(cols)))


@dataclass
class MinorSystem:
    """One minor of a system: ``det H = M`` and ``G = N adj(H)``."""

    cols: tuple
    M: object
    N: object
    H: list
    G: list
    rows: tuple = None

    @property
    def P(self):
        return self.N * self.M


def minor_system(f, yvars, cols, N):
    Jf = jacobian(f, yvars)
    H = complete_to_square(Jf, cols)
    Gp = adjugate(H)
    M = minor(Jf, cols)
    G = [[N * g for g in row] for row in Gp]
    return MinorSystem(tuple(sorted(cols)), M, N, H, G, tuple(range(len(f))))


@dataclass
class IdentityReport:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_identity1(sys, f, yvars):
    """Check ``G H = H G = M N Id`` and ``(df/dY) G = (M N Id_r | 0)`` exactly."""
    failures = []
    n = len(yvars)
    r = len(f)
    mn = sys.M * sys.N
    GH = matmul(sys.G, sys.H)
    HG = matmul(sys.H, sys.G)
    for name, P in (("GH", GH), ("HG", HG)):
        for i in range(n):
            for j in range(n):
                want = mn if i == j else mn.ring.zero()
                if not (P[i][j] - want).is_zero():
                    failures.append((name, i, j))
    JG = matmul(jacobian(f, yvars), sys.G)
    for i in range(r):
        for j in range(n):
            want = mn if i == j else mn.ring.zero()
            if not (JG[i][j] - want).is_zero():
                failures.append(("JG", i, j))
    return IdentityReport(not failures, failures)


def colon_system(f, I):
    """``((f) : I)`` as an ideal of the ambient polynomial ring."""
    ring = I.ring
    for g in f:
        ring = ring.union(g.ring)
    return colon(Ideal(ring, list(f)), Ideal(ring, I.gens))


def delta_ideal(f, I, yvars):
    """``((f):I) * Delta_f`` with ``Delta_f`` the ideal of ``r x r`` minors."""
    r, n = len(f), len(yvars)
    if r > n:
        raise ValueError("need r <= n")
    Jf = jacobian(f, yvars)
    minors = []
    for cols in combinations(range(n), r):
        m = minor(Jf, cols)
        if not m.is_zero():
            minors.append(m)
    col = colon_system(f, I)
    gens = [a * m for a in col.gens for m in minors]
    ring = I.ring.union(f[0].ring)
    return Ideal(ring, gens)


def smooth_locus_ideal(I, yvars, max_size=None):
    """Non-radical Elkik ideal: sum of ``delta_ideal`` over subsets of generators."""
    gens = I.gens
    n = len(yvars)
    top = min(n, len(gens)) if max_size is None else min(max_size, n, len(gens))
    out = []
    for r in range(1, top + 1):
        for sub in combinations(gens, r):
            out.extend(delta_ideal(list(sub), I, yvars).gens)
    return Ideal(I.ring, out)


def verify_standard_smooth(pres):
    """Check a smooth presentation; returns a report with ``ok`` and ``first``."""
    from neron.desing import verify_standard_smooth as check
    return check(pres)


__all__ = [
    "jacobian", "matmul", "matvec", "det", "adjugate", "complete_to_square", "minor",
    "MinorSystem", "minor_system", "verify_identity1", "IdentityReport",
    "delta_ideal", "colon_system", "smooth_locus_ideal", "identity", "submatrix",
    "verify_standard_smooth",
]
