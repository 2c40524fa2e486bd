"""Dense complex-matrix kernel.

Hermitian eigendecomposition, functional calculus, Schatten norms and the
clipped off-diagonal truncation that drives every lifting corrector.  All
matrices are plain numpy complex arrays; every function here is pure and
safe to call from multiple threads.

Tolerances are relative to ``1 + norm(input)`` so that checks are scale
invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import NonFinite, NonHermitian, NonPositiveC, NonSquare

__all__ = [
    "HermitianEig",
    "herm_eig",
    "mat_func",
    "hard_clip",
    "clip_remainder",
    "truncate_offdiag",
    "op_norm",
    "trace_norm",
    "psd_ge",
]


def _as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise NonSquare(f"{name}: expected a 2-d array, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise NonFinite(f"{name}: NaN or Inf entries")
    return a


def _as_square(m, name: str = "matrix") -> np.ndarray:
    a = _as_complex_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"{name}: expected square, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class HermitianEig:
    """Eigendecomposition ``H = U diag(lam) U*`` with ``lam`` ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def herm_eig(h) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(H + H*)/2`` first, which silently absorbs
    ulp-level asymmetry produced by upstream arithmetic.  Eigenvalues are
    returned in ascending order.
    """
    a = _as_square(h, "herm_eig")
    a = 0.5 * (a + a.conj().T)
    lam, u = np.linalg.eigh(a)
    return HermitianEig(eigenvalues=lam, eigenvectors=u)


def mat_func(h, f: Callable) -> np.ndarray:
    """Apply a real scalar map to a Hermitian matrix by functional calculus.

    Returns ``U diag(f(lam)) U*``.  ``f`` may be vectorized (preferred) or a
    plain scalar callable.
    """
    eig = herm_eig(h)
    lam = eig.eigenvalues
    try:
        flam = np.asarray(f(lam), dtype=float)
        if flam.shape != lam.shape:
            raise ValueError
    except (TypeError, ValueError):
        flam = np.array([float(f(t)) for t in lam])
    u = eig.eigenvectors
    return (u * flam) @ u.conj().T


def hard_clip(t, c: float):
    """Clamp ``t`` (scalar or array) to the band ``[-c, c]``."""
    if not c > 0:
        raise NonPositiveC(f"clip level must be > 0, got {c}")
    return np.clip(t, -c, c)


def clip_remainder(t, c: float):
    """Part of ``t`` removed by :func:`hard_clip`; ``t - hard_clip(t, c)``.

    Satisfies ``|clip_remainder(t, c)| <= t**2 / (4c)`` for all real ``t``.
    """
    return np.asarray(t, dtype=float) - hard_clip(t, c)


def truncate_offdiag(y, c: float) -> np.ndarray:
    """Clip a (possibly rectangular) block through its Hermitian dilation.

    Builds ``D = [[0, Y*], [Y, 0]]``, clamps its spectrum to ``[-c, c]`` by
    functional calculus and returns the lower-left block ``Z`` of the result,
    which satisfies ``op_norm(Z) <= c``.

    A leading batch axis is allowed: input of shape ``(m, p, q)`` is
    truncated blockwise and returns shape ``(m, p, q)``.
    """
    if not c > 0:
        raise NonPositiveC(f"clip level must be > 0, got {c}")
    a = np.asarray(y, dtype=complex)
    if a.ndim == 2:
        return _truncate_batch(a[None, :, :], c)[0]
    if a.ndim == 3:
        return _truncate_batch(a, c)
    raise NonSquare(f"truncate_offdiag: expected 2-d or 3-d input, got shape {a.shape}")


def _truncate_batch(blocks: np.ndarray, c: float) -> np.ndarray:
    if not np.isfinite(blocks).all():
        raise NonFinite("truncate_offdiag: NaN or Inf entries")
    m, p, q = blocks.shape
    dil = np.zeros((m, p + q, p + q), dtype=complex)
    dil[:, :q, q:] = blocks.conj().transpose(0, 2, 1)
    dil[:, q:, :q] = blocks
    lam, u = np.linalg.eigh(dil)
    lam = np.clip(lam, -c, c)
    clipped = np.einsum("mij,mj,mkj->mik", u, lam, u.conj())
    return clipped[:, q:, :q]


def op_norm(m) -> float:
    """Largest singular value."""
    a = _as_complex_matrix(m, "op_norm")
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def trace_norm(m) -> float:
    """Sum of singular values (Schatten-1 norm)."""
    a = _as_complex_matrix(m, "trace_norm")
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False).sum())


def psd_ge(a, b, tol: float = 1e-9) -> bool:
    """Whether ``A - B`` is positive semidefinite up to a relative slack.

    True iff the smallest eigenvalue of ``A - B`` is at least
    ``-tol * (1 + op_norm(A) + op_norm(B))``.  Both inputs must be Hermitian.
    """
    am = _as_square(a, "psd_ge")
    bm = _as_square(b, "psd_ge")
    if am.shape != bm.shape:
        raise NonSquare(f"psd_ge: shape mismatch {am.shape} vs {bm.shape}")
    scale = 1.0 + op_norm(am) + op_norm(bm)
    for name, m in (("A", am), ("B", bm)):
        if op_norm(m - m.conj().T) > 1e-9 * scale:
            raise NonHermitian(f"psd_ge: argument {name} is not Hermitian")
    diff = 0.5 * (am + am.conj().T) - 0.5 * (bm + bm.conj().T)
    lam_min = float(np.linalg.eigvalsh(diff)[0])
    return lam_min >= -tol * scale
