"""Small dense linear-algebra kernels: numerical rank and a Jacobi eigensolver."""

import numpy as np

__all__ = ["matrix_rank", "rank_tolerance", "jacobi_eigh", "symmetric_eigvals"]

# Jacobi is used up to this size; larger matrices go to LAPACK (numpy.linalg.eigh).
JACOBI_MAX_N = 64


def rank_tolerance(a):
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return 1e-8 * max(a.shape) * float(np.max(np.abs(a)))


def matrix_rank(a, tol=None):
    """Rank by row reduction with partial pivoting.

    A column whose best remaining pivot has magnitude ``<= tol`` is skipped.
    The default ``tol`` is ``1e-8 * N * max|A|``.
    """
    m = np.array(a, dtype=float, copy=True)
    if m.size == 0:
        return 0
    if tol is None:
        tol = rank_tolerance(m)
    n_rows, n_cols = m.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        piv = rank + int(np.argmax(np.abs(m[rank:, col])))
        if abs(m[piv, col]) <= tol:
            continue
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        below = m[rank + 1 :, col] / m[rank, col]
        if below.size:
            m[rank + 1 :, col:] -= np.outer(below, m[rank, col:])
        rank += 1
    return rank


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Returns ``(w, q)`` with eigenvalues sorted descending and orthonormal
    eigenvectors in the columns of ``q``, so ``a ~= q @ diag(w) @ q.T``.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    q = np.eye(n)
    if n < 2:
        return np.diag(a).copy(), q
    scale = max(float(np.max(np.abs(a))), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if abs(apr) <= tol * scale / n:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                ar = a[:, r].copy()
                a[:, p] = c * ap - s * ar
                a[:, r] = s * ap + c * ar
                rp = a[p, :].copy()
                rr = a[r, :].copy()
                a[p, :] = c * rp - s * rr
                a[r, :] = s * rp + c * rr
                a[p, r] = a[r, p] = 0.0
                qp = q[:, p].copy()
                qr = q[:, r].copy()
                q[:, p] = c * qp - s * qr
                q[:, r] = s * qp + c * qr
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], q[:, order]


def symmetric_eigvals(a, method="auto"):
    """Eigenvalues of a symmetric matrix, sorted descending."""
    a = np.asarray(a, dtype=float)
    if method == "jacobi" or (method == "auto" and a.shape[0] <= JACOBI_MAX_N):
        return jacobi_eigh(a)[0]
    return np.linalg.eigh(a)[0][::-1].copy()
