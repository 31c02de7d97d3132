"""Lowest eigenpairs of a real symmetric tridiagonal matrix.

Eigenvalues come from Sturm-sequence bisection, eigenvectors from shifted
inverse iteration.  The matrix is always passed as ``(d, e)``: the diagonal
of length n and the off-diagonal of length n - 1.
"""
import numpy as np
from numba import njit
from scipy.linalg import solve_banded

from .errors import NumericError

_EPS = np.finfo(float).eps
_SAFEMIN = np.finfo(float).tiny

#: eigenvalues closer than this are treated as one cluster during inverse iteration
CLUSTER_GAP = 1e-8
#: offset added to each eigenvalue to form the inverse-iteration shift
SHIFT_OFFSET = 1e-12


@njit(cache=True)
def _sturm_count(d, e2, x, pivmin):
    """Number of eigenvalues strictly below ``x``."""
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect(d, e2, indices, lower, upper, pivmin):
    out = np.empty(indices.shape[0])
    for k in range(indices.shape[0]):
        j = indices[k]
        lo = lower
        hi = upper
        # invariant: count(lo) <= j < count(hi)
        for _ in range(2000):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _sturm_count(d, e2, mid, pivmin) > j:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
    return out


def gershgorin_bounds(d, e):
    d = np.asarray(d, dtype=float)
    e = np.abs(np.asarray(e, dtype=float))
    radius = np.zeros_like(d)
    radius[:-1] += e
    radius[1:] += e
    lower = float(np.min(d - radius))
    upper = float(np.max(d + radius))
    pad = 2 * _EPS * max(abs(lower), abs(upper)) + _SAFEMIN
    return lower - pad, upper + pad


def sturm_count(d, e, x):
    """Return how many eigenvalues of the tridiagonal ``(d, e)`` lie below ``x``."""
    d = np.ascontiguousarray(d, dtype=float)
    e2 = np.ascontiguousarray(e, dtype=float) ** 2
    pivmin = _SAFEMIN * max(1.0, float(e2.max(initial=0.0)))
    return int(_sturm_count(d, e2, float(x), pivmin))


def bisection_eigenvalues(d, e, k):
    """The ``k`` smallest eigenvalues, ascending, to full working precision."""
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    n = d.shape[0]
    if e.shape[0] != n - 1:
        raise ValueError(f"off-diagonal must have length {n - 1}, got {e.shape[0]}")
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    e2 = e**2
    pivmin = _SAFEMIN * max(1.0, float(e2.max(initial=0.0)))
    lower, upper = gershgorin_bounds(d, e)
    return _bisect(d, e2, np.arange(k), lower, upper, pivmin)


def matvec(d, e, v):
    """Apply the tridiagonal matrix to ``v``."""
    out = d * v
    out[:-1] += e * v[1:]
    out[1:] += e * v[:-1]
    return out


def bilinear(d, e, u, v):
    """Symmetric bilinear form u^T H v, accumulated in extended precision.

    Evaluated in difference form,
        sum_i r_i u_i v_i - sum_i e_i (u_{i+1} - u_i)(v_{i+1} - v_i),
    with r_i = d_i + e_{i-1} + e_i, which avoids the cancellation between
    the large diagonal and off-diagonal stencil entries.  The result is
    symmetric in ``u`` and ``v`` term by term.
    """
    d = np.asarray(d, dtype=np.longdouble)
    e = np.asarray(e, dtype=np.longdouble)
    u = np.asarray(u, dtype=np.longdouble)
    v = np.asarray(v, dtype=np.longdouble)
    r = d.copy()
    r[:-1] += e
    r[1:] += e
    total = np.sum(r * (u * v)) - np.sum(e * (np.diff(u) * np.diff(v)))
    return float(total)


def _banded(d, e, shift):
    n = d.shape[0]
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1] = d - shift
    ab[2, :-1] = e
    return ab


def inverse_iteration(d, e, eigenvalue, *, against=(), max_iter=12, tol=None,
                      index=None, seed=0):
    """Unit-norm eigenvector (Euclidean) for an already converged eigenvalue.

    Iterates until the residual stops improving (roundoff floor) and returns
    the best iterate; fails if that residual still exceeds ``tol``.
    ``against`` holds unit vectors of the same eigenvalue cluster that the
    result is kept orthogonal to.
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    n = d.shape[0]
    scale = max(float(np.max(np.abs(d))), float(np.max(np.abs(e), initial=0.0)), 1.0)
    if tol is None:
        tol = 64 * n**0.5 * _EPS * scale
    shift = eigenvalue + SHIFT_OFFSET * max(1.0, abs(eigenvalue))
    ab = _banded(d, e, shift)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, n)
    x /= np.linalg.norm(x)
    best, best_residual = None, np.inf
    for _ in range(max_iter):
        for q in against:
            x -= np.dot(q, x) * q
        try:
            y = solve_banded((1, 1), ab, x, check_finite=False)
        except np.linalg.LinAlgError:
            shift += 16 * _EPS * scale
            ab = _banded(d, e, shift)
            continue
        for q in against:
            y -= np.dot(q, y) * q
        norm = np.linalg.norm(y)
        if not np.isfinite(norm) or norm == 0.0:
            raise NumericError("inverse iteration produced a degenerate vector",
                               index=index)
        x = y / norm
        residual = np.linalg.norm(matvec(d, e, x) - eigenvalue * x)
        if residual < best_residual:
            improved = residual < 0.5 * best_residual
            best, best_residual = x, residual
            if improved or best_residual > tol:
                continue
        if best_residual <= tol:
            break
    if best_residual > tol:
        raise NumericError(
            f"inverse iteration did not converge (residual {best_residual:.3e} > {tol:.3e})",
            index=index,
        )
    return best


def is_mirror_symmetric(d, e):
    """True if the matrix commutes exactly with index reversal."""
    d = np.asarray(d)
    e = np.asarray(e)
    return bool(np.array_equal(d, d[::-1]) and np.array_equal(e, e[::-1]))


def _clusters(values):
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] < CLUSTER_GAP * max(1.0, abs(values[i])):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def resolve_parity(vectors, groups):
    """Rotate each cluster onto mirror eigenvectors and project out the
    opposite-parity residue.

    Only valid for a mirror-symmetric matrix.  Inverse iteration leaves an
    opposite-parity admixture of order eps*||H||/gap, which is large for
    tunneling doublets.
    """
    out = vectors.copy()
    for group in groups:
        q = out[:, group]
        m = q.T @ q[::-1]
        m = 0.5 * (m + m.T)
        _, rot = np.linalg.eigh(m)
        q = q @ rot
        for col in range(q.shape[1]):
            v = q[:, col]
            sign = 1.0 if np.dot(v, v[::-1]) >= 0 else -1.0
            v = 0.5 * (v + sign * v[::-1])
            q[:, col] = v / np.linalg.norm(v)
        out[:, group] = q
    return out


def lowest_eigenpairs(d, e, k, *, mirror=None):
    """Bisection eigenvalues plus inverse-iteration eigenvectors.

    Returns ``(values, vectors)`` with ``vectors[:, i]`` of unit Euclidean norm.
    Vectors whose eigenvalues are within ``CLUSTER_GAP`` of each other are
    explicitly orthogonalized.  For a mirror-symmetric matrix (detected
    unless ``mirror`` is given) every vector is returned with exact parity.
    """
    values = bisection_eigenvalues(d, e, k)
    n = len(d)
    vectors = np.empty((n, k))
    groups = _clusters(values)
    for group in groups:
        for i in group:
            against = [vectors[:, j] for j in group if j < i]
            vectors[:, i] = inverse_iteration(d, e, values[i], against=against,
                                              index=i, seed=i)
    if mirror is None:
        mirror = is_mirror_symmetric(d, e)
    if mirror:
        vectors = resolve_parity(vectors, groups)
    return values, vectors
