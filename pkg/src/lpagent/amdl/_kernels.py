"""Lattice-enumeration kernels for the brute-force oracle.

The numba-compiled kernel is selected by default; setting LPAGENT_NO_NUMBA=1
(or a missing numba install) switches to the pure-numpy chunked path. Both
report (found, best objective, best point) and must agree exactly.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("LPAGENT_NO_NUMBA", "").lower() not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - environment without numba
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):  # type: ignore[misc]
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


@njit(cache=True)
def _lattice_kernel(lo, sizes, A, senses, b, ind_bin, ind_val, ind_A, ind_senses,
                    ind_b, c, maximize, tol):  # pragma: no cover - jit-compiled
    n = lo.shape[0]
    m = A.shape[0]
    k = ind_A.shape[0]
    total = 1
    for j in range(n):
        total *= sizes[j]
    x = np.empty(n, dtype=np.float64)
    best_x = np.zeros(n, dtype=np.float64)
    best_obj = -np.inf if maximize else np.inf
    found = False
    for point in range(total):
        rem = point
        for j in range(n - 1, -1, -1):
            x[j] = lo[j] + rem % sizes[j]
            rem //= sizes[j]
        feasible = True
        for i in range(m):
            lhs = 0.0
            for j in range(n):
                lhs += A[i, j] * x[j]
            if senses[i] < 0:
                ok = lhs <= b[i] + tol
            elif senses[i] > 0:
                ok = lhs >= b[i] - tol
            else:
                ok = abs(lhs - b[i]) <= tol
            if not ok:
                feasible = False
                break
        if feasible:
            for i in range(k):
                if abs(x[ind_bin[i]] - ind_val[i]) > tol:
                    continue
                lhs = 0.0
                for j in range(n):
                    lhs += ind_A[i, j] * x[j]
                if ind_senses[i] < 0:
                    ok = lhs <= ind_b[i] + tol
                elif ind_senses[i] > 0:
                    ok = lhs >= ind_b[i] - tol
                else:
                    ok = abs(lhs - ind_b[i]) <= tol
                if not ok:
                    feasible = False
                    break
        if not feasible:
            continue
        obj = 0.0
        for j in range(n):
            obj += c[j] * x[j]
        if not found or (maximize and obj > best_obj) or (not maximize and obj < best_obj):
            found = True
            best_obj = obj
            for j in range(n):
                best_x[j] = x[j]
    return found, best_obj, best_x


def _lattice_numpy(lo, sizes, A, senses, b, ind_bin, ind_val, ind_A, ind_senses,
                   ind_b, c, maximize, tol, chunk=65536):
    n = lo.shape[0]
    total = int(np.prod(sizes)) if n else 1
    radix = np.ones(n, dtype=np.int64)
    for j in range(n - 2, -1, -1):
        radix[j] = radix[j + 1] * sizes[j + 1]
    best_obj = -np.inf if maximize else np.inf
    best_x = np.zeros(n, dtype=np.float64)
    found = False
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = lo[None, :] + (idx[:, None] // radix[None, :]) % sizes[None, :]
        X = X.astype(np.float64)
        feas = np.ones(len(idx), dtype=bool)
        if A.shape[0]:
            lhs = X @ A.T
            le = senses < 0
            ge = senses > 0
            eq = senses == 0
            feas &= np.all(lhs[:, le] <= b[le] + tol, axis=1)
            feas &= np.all(lhs[:, ge] >= b[ge] - tol, axis=1)
            feas &= np.all(np.abs(lhs[:, eq] - b[eq]) <= tol, axis=1)
        for i in range(ind_A.shape[0]):
            active = np.abs(X[:, ind_bin[i]] - ind_val[i]) <= tol
            lhs_i = X @ ind_A[i]
            if ind_senses[i] < 0:
                ok = lhs_i <= ind_b[i] + tol
            elif ind_senses[i] > 0:
                ok = lhs_i >= ind_b[i] - tol
            else:
                ok = np.abs(lhs_i - ind_b[i]) <= tol
            feas &= ~active | ok
        if not feas.any():
            continue
        objs = X[feas] @ c
        pick = int(np.argmax(objs)) if maximize else int(np.argmin(objs))
        obj = float(objs[pick])
        if not found or (maximize and obj > best_obj) or (not maximize and obj < best_obj):
            found = True
            best_obj = obj
            best_x = X[feas][pick].copy()
    return found, best_obj, best_x


def enumerate_lattice(lo, sizes, A, senses, b, ind_bin, ind_val, ind_A, ind_senses,
                      ind_b, c, maximize, tol=1e-9, force_numpy=False):
    args = (
        np.ascontiguousarray(lo, dtype=np.int64),
        np.ascontiguousarray(sizes, dtype=np.int64),
        np.ascontiguousarray(A, dtype=np.float64),
        np.ascontiguousarray(senses, dtype=np.int8),
        np.ascontiguousarray(b, dtype=np.float64),
        np.ascontiguousarray(ind_bin, dtype=np.int64),
        np.ascontiguousarray(ind_val, dtype=np.float64),
        np.ascontiguousarray(ind_A, dtype=np.float64),
        np.ascontiguousarray(ind_senses, dtype=np.int8),
        np.ascontiguousarray(ind_b, dtype=np.float64),
        np.ascontiguousarray(c, dtype=np.float64),
        bool(maximize),
        float(tol),
    )
    if USE_NUMBA and not force_numpy:
        return _lattice_kernel(*args)
    return _lattice_numpy(*args)
