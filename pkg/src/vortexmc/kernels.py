"""Mollified Biot-Savart and strain kernels.

Index conventions: physics indices i, j, k run 1..3 in the formulas below,
array storage is 0-based. ``K(z)`` is the 3x3 matrix kernel mapping a
vorticity vector to a velocity, ``u_i = K[i, k] w_k``, with

    K[i, k](z) = -eps_{ilk} z_l / (4 pi (|z|^2 + delta^2)^(3/2)).

``H(z)`` is the rank-3 strain kernel producing the symmetric velocity
gradient, ``S[k, j] = H[k, j, i] w_i``, stored (k, j)-symmetric:

    H[k, j, i](z) = (3/2) z_l (eps_{kli} z_j + eps_{jli} z_k)
                    / (4 pi (|z|^2 + delta^2)^(5/2)).

Mollification replaces |z|^p by (|z|^2 + delta^2)^(p/2) in the kernel
denominators. Because the regularization is radial, H stays the exact
symmetric z-gradient of K at every delta (the terms produced by
differentiating the regularized denominator cancel when symmetrized over
(k, j)), K stays antisymmetric in (i, k) and divergence-free in its first
index, and both kernels remain odd in z.

The pair-sum routines below evaluate the kernels contracted against a set
of weighted sources; they are pure functions, chunk their targets with a
fixed chunk size, and sum sources in a fixed order, so results are
bit-identical for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

FOUR_PI = 4.0 * np.pi

# Fixed target chunk size: chunk boundaries must not depend on the thread
# count, or determinism across thread counts is lost.
_CHUNK = 512

_EPS = np.zeros((3, 3, 3))
_EPS[0, 1, 2] = _EPS[1, 2, 0] = _EPS[2, 0, 1] = 1.0
_EPS[0, 2, 1] = _EPS[2, 1, 0] = _EPS[1, 0, 2] = -1.0


def levi_civita(i: int, j: int, k: int) -> int:
    """Permutation symbol for 1-based indices in {1, 2, 3}."""
    for idx in (i, j, k):
        if idx not in (1, 2, 3):
            raise ValueError(f"levi_civita index out of range: {idx}")
    return int(_EPS[i - 1, j - 1, k - 1])


def _as_point(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite displacement")
    return z


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not np.isfinite(delta) or delta < 0.0:
        raise ValueError(f"delta must be finite and >= 0, got {delta}")
    return delta


def biot_savart_kernel(z, delta: float = 0.0) -> np.ndarray:
    """Velocity kernel matrix K(z), shape (3, 3).

    Raises ValueError at z = 0 with delta = 0 (the unmollified singularity).
    """
    z = _as_point(z)
    delta = _check_delta(delta)
    q = float(z @ z) + delta * delta
    if q == 0.0:
        raise ValueError("singular kernel evaluation: z = 0 with delta = 0")
    den = FOUR_PI * q * np.sqrt(q)
    return -np.einsum("ilk,l->ik", _EPS, z) / den


def strain_kernel(z, delta: float = 0.0) -> np.ndarray:
    """Strain kernel tensor H(z), shape (3, 3, 3), symmetric in its
    first two axes."""
    z = _as_point(z)
    delta = _check_delta(delta)
    q = float(z @ z) + delta * delta
    if q == 0.0:
        raise ValueError("singular kernel evaluation: z = 0 with delta = 0")
    den = FOUR_PI * q * q * np.sqrt(q)
    # a[k, i] = eps_{kli} z_l, the cross-product matrix of z
    a = np.einsum("kli,l->ki", _EPS, z)
    h = a[:, None, :] * z[None, :, None] + a[None, :, :] * z[:, None, None]
    return 1.5 * h / den


def _prepare_pair_args(targets, sources, vorticity, delta,
                       target_ids, source_ids):
    targets = np.asarray(targets, dtype=float)
    sources = np.asarray(sources, dtype=float)
    vorticity = np.asarray(vorticity, dtype=float)
    if targets.ndim != 2 or targets.shape[1] != 3:
        raise ValueError(f"targets must have shape (M, 3), got {targets.shape}")
    if sources.shape != vorticity.shape or sources.ndim != 2 or sources.shape[1] != 3:
        raise ValueError("sources and vorticity must both have shape (S, 3)")
    delta = _check_delta(delta)
    if (target_ids is None) != (source_ids is None):
        raise ValueError("target_ids and source_ids must be given together")
    if target_ids is not None:
        target_ids = np.asarray(target_ids)
        source_ids = np.asarray(source_ids)
        if target_ids.shape != (targets.shape[0],) or source_ids.shape != (sources.shape[0],):
            raise ValueError("id arrays must match targets/sources in length")
    return targets, sources, vorticity, delta, target_ids, source_ids


def _run_chunks(work, n_targets: int, threads: int) -> None:
    chunks = [slice(lo, min(lo + _CHUNK, n_targets))
              for lo in range(0, n_targets, _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        # Chunks write disjoint output slices; numpy releases the GIL
        # inside the vectorized ops.
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, chunks))
    else:
        for sl in chunks:
            work(sl)


def velocity_pair_sum(targets, sources, vorticity, delta: float, *,
                      target_ids=None, source_ids=None,
                      threads: int = 1) -> np.ndarray:
    """Sum of velocity-kernel contractions over all (target, source) pairs.

    u[t] = -sum_s (targets[t] - sources[s]) x vorticity[s]
           / (4 pi (|targets[t] - sources[s]|^2 + delta^2)^(3/2))

    Pairs whose ``target_ids``/``source_ids`` entries match are skipped
    (self-exclusion by particle index). With delta = 0, any surviving
    coincident pair raises ValueError.
    """
    targets, sources, vorticity, delta, target_ids, source_ids = \
        _prepare_pair_args(targets, sources, vorticity, delta, target_ids, source_ids)
    out = np.empty_like(targets)
    d2 = delta * delta

    def work(sl: slice) -> None:
        z = targets[sl, None, :] - sources[None, :, :]
        q = np.einsum("msi,msi->ms", z, z) + d2
        excl = None
        if target_ids is not None:
            excl = target_ids[sl, None] == source_ids[None, :]
            q = np.where(excl, 1.0, q)
        if delta == 0.0 and np.any(q == 0.0):
            raise ValueError("singular pair sum: coincident points with delta = 0")
        f = 1.0 / (FOUR_PI * q * np.sqrt(q))
        if excl is not None:
            f = np.where(excl, 0.0, f)
        c = np.cross(z, vorticity[None, :, :])
        out[sl] = -np.einsum("ms,msi->mi", f, c)

    _run_chunks(work, targets.shape[0], threads)
    return out


def strain_pair_sum(targets, sources, vorticity, delta: float, *,
                    target_ids=None, source_ids=None,
                    threads: int = 1) -> np.ndarray:
    """Sum of strain-kernel contractions over all (target, source) pairs,
    shape (M, 3, 3); each summand, hence the result, is symmetric.

    S[t] = (3/2) sum_s g_s (z ox c + c ox z),  z = targets[t] - sources[s],
    c = z x vorticity[s], g_s = 1 / (4 pi (|z|^2 + delta^2)^(5/2)).
    """
    targets, sources, vorticity, delta, target_ids, source_ids = \
        _prepare_pair_args(targets, sources, vorticity, delta, target_ids, source_ids)
    out = np.empty((targets.shape[0], 3, 3))
    d2 = delta * delta

    def work(sl: slice) -> None:
        z = targets[sl, None, :] - sources[None, :, :]
        q = np.einsum("msi,msi->ms", z, z) + d2
        excl = None
        if target_ids is not None:
            excl = target_ids[sl, None] == source_ids[None, :]
            q = np.where(excl, 1.0, q)
        if delta == 0.0 and np.any(q == 0.0):
            raise ValueError("singular pair sum: coincident points with delta = 0")
        g = 1.0 / (FOUR_PI * q * q * np.sqrt(q))
        if excl is not None:
            g = np.where(excl, 0.0, g)
        c = np.cross(z, vorticity[None, :, :])
        t1 = np.einsum("ms,msa,msb->mab", g, c, z)
        out[sl] = 1.5 * (t1 + t1.transpose(0, 2, 1))

    _run_chunks(work, targets.shape[0], threads)
    return out
