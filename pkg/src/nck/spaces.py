"""Finite probability spaces carrying the classical random families.

Four kinds of space are provided:

``rademacher``
    The uniform measure on the sign strings ``{+1, -1}^d``; every moment of
    every order is exact.

``steinhauss``
    Independent variables uniform on the unit circle, discretized by m-th
    roots of unity (``m >= 5``).  Every moment identity used here involves
    exponent sums in ``[-2, 2]`` per variable, and those root-of-unity sums
    vanish exactly.

``lacunary``
    The exponentials ``t -> exp(i 2^j t)``, ``j = 1..d``, integrated on a
    uniform grid of ``2**(d+3)`` points.  Frequencies in degree-four
    products are bounded by ``2**(d+2)``, so the quadrature is exact.

``gaussian-mc``
    Independent standard complex Gaussians, sampled: equal-weight atoms from
    a seeded generator.  Estimates carry a standard error and nothing is
    exact.

A tuple of coefficients ``y`` (shape ``(d, n, n)``) embeds as the random
matrix ``Y(w) = sum_i y_i * family[i, w]``; conditional expectation against
the family recovers the coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import caps
from .exceptions import (
    DimensionMismatch,
    DTooLarge,
    IdentityViolation,
    SpaceTooLarge,
)
from .norms import as_matrix_tuple
from .reports import CheckReport

__all__ = [
    "DiscreteProbabilitySpace",
    "RandomElement",
    "rademacher_space",
    "steinhauss_space",
    "lacunary_space",
    "gaussian_space",
    "element_from_tuple",
    "l1_s1_norm",
    "gamma_ratio",
    "conditional_expectation",
    "sup_norm",
    "moment_identity_check",
]

EXACT_KINDS = ("rademacher", "steinhauss", "lacunary")


@dataclass(frozen=True)
class DiscreteProbabilitySpace:
    """Finitely many atoms with weights plus the variable values per atom.

    ``family[i, w]`` is the value of variable ``i`` at atom ``w``.
    """

    kind: str
    weights: np.ndarray   # (atoms,)
    family: np.ndarray    # (d, atoms)
    seed: int | None = None

    def __post_init__(self):
        w, fam = self.weights, self.family
        if w.ndim != 1 or fam.ndim != 2 or fam.shape[1] != w.shape[0]:
            raise DimensionMismatch(
                f"family shape {fam.shape} incompatible with {w.shape[0]} atoms"
            )
        if w.min(initial=0.0) < 0.0 or abs(w.sum() - 1.0) > 1e-12:
            raise DimensionMismatch("weights must be nonnegative and sum to 1")
        w.setflags(write=False)
        fam.setflags(write=False)

    @property
    def d(self) -> int:
        return self.family.shape[0]

    @property
    def atoms(self) -> int:
        return self.weights.shape[0]

    @property
    def is_exact(self) -> bool:
        return self.kind in EXACT_KINDS


@dataclass(frozen=True)
class RandomElement:
    """A matrix-valued random variable: one ``n x n`` block per atom."""

    space: DiscreteProbabilitySpace
    blocks: np.ndarray    # (atoms, n, n)

    def __post_init__(self):
        b = self.blocks
        if b.ndim != 3 or b.shape[1] != b.shape[2]:
            raise DimensionMismatch(f"blocks must be (atoms, n, n), got {b.shape}")
        if b.shape[0] != self.space.atoms:
            raise DimensionMismatch(
                f"{b.shape[0]} blocks for {self.space.atoms} atoms"
            )

    @property
    def n(self) -> int:
        return self.blocks.shape[1]


def rademacher_space(d: int) -> DiscreteProbabilitySpace:
    """Uniform measure on ``{+1, -1}^d``, enumerated with +1 first."""
    cap = caps.rademacher_dim_cap()
    if not 1 <= d <= cap:
        raise DTooLarge(f"rademacher dimension {d} outside [1, {cap}]")
    atoms = np.array(list(itertools.product([1.0, -1.0], repeat=d)))
    family = atoms.T.astype(complex)
    weights = np.full(2**d, 2.0**-d)
    return DiscreteProbabilitySpace("rademacher", weights, family)


def steinhauss_space(d: int, order: int = 5) -> DiscreteProbabilitySpace:
    """Product of independent uniform ``order``-th roots of unity."""
    if order < 5:
        raise ValueError(f"root-of-unity order must be >= 5, got {order}")
    if d < 1:
        raise DTooLarge(f"need d >= 1, got {d}")
    if order**d > caps.STEINHAUSS_ATOM_CAP:
        raise SpaceTooLarge(
            f"{order}**{d} atoms exceed the {caps.STEINHAUSS_ATOM_CAP} budget"
        )
    exponents = np.indices((order,) * d).reshape(d, -1)
    roots = np.exp(2j * np.pi * np.arange(order) / order)
    family = roots[exponents]
    weights = np.full(order**d, float(order) ** -d)
    return DiscreteProbabilitySpace("steinhauss", weights, family)


def lacunary_space(d: int, grid: int | None = None) -> DiscreteProbabilitySpace:
    """Exponentials with frequencies ``2, 4, ..., 2**d`` on a uniform grid.

    The default grid of ``2**(d+3)`` points integrates every trigonometric
    monomial occurring in degree-at-most-four products exactly.
    """
    if d < 1:
        raise DTooLarge(f"need d >= 1, got {d}")
    n_grid = 2 ** (d + 3) if grid is None else int(grid)
    if n_grid * d > caps.LACUNARY_VALUE_CAP:
        raise SpaceTooLarge(f"{n_grid} grid points at d={d} exceed the budget")
    t = 2.0 * np.pi * np.arange(n_grid) / n_grid
    freqs = 2 ** np.arange(1, d + 1)
    family = np.exp(1j * np.outer(freqs, t))
    weights = np.full(n_grid, 1.0 / n_grid)
    return DiscreteProbabilitySpace("lacunary", weights, family)


def gaussian_space(d: int, samples: int, seed: int = 0) -> DiscreteProbabilitySpace:
    """Sampled standard complex Gaussians as equal-weight atoms.

    Reproducible: equal seeds give bit-identical spaces.  Estimates are
    Monte Carlo quality; use at least a few thousand samples.
    """
    if d < 1 or samples < 1:
        raise DTooLarge(f"need d >= 1 and samples >= 1, got d={d}, samples={samples}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2, d, samples))
    family = (z[0] + 1j * z[1]) / np.sqrt(2.0)
    weights = np.full(samples, 1.0 / samples)
    return DiscreteProbabilitySpace("gaussian-mc", weights, family, seed=seed)


def element_from_tuple(y, space: DiscreteProbabilitySpace) -> RandomElement:
    """The random matrix ``Y(w) = sum_i y_i * family[i, w]``."""
    ya = as_matrix_tuple(y)
    if ya.shape[0] != space.d:
        raise DimensionMismatch(
            f"tuple has d={ya.shape[0]} but space carries d={space.d} variables"
        )
    blocks = np.einsum("im,iab->mab", space.family, ya)
    return RandomElement(space, blocks)


def _batched_trace_norms(blocks: np.ndarray) -> np.ndarray:
    return np.linalg.svd(blocks, compute_uv=False).sum(axis=1)


def l1_s1_norm(x, space: DiscreteProbabilitySpace, with_stderr: bool = False):
    """Expected trace norm of ``sum_i x_i * family[i]``.

    Exact for the finite kinds.  With ``with_stderr=True`` returns
    ``(value, stderr)``; the standard error is zero for exact kinds.
    """
    elem = element_from_tuple(x, space)
    tn = _batched_trace_norms(elem.blocks)
    value = float(space.weights @ tn)
    if not with_stderr:
        return value
    if space.kind == "gaussian-mc" and space.atoms > 1:
        stderr = float(tn.std(ddof=1) / np.sqrt(space.atoms))
    else:
        stderr = 0.0
    return value, stderr


def gamma_ratio(d) -> float:
    """``Gamma(d + 1/2) / Gamma(d)`` via log-gamma differences.

    Equals the expected Euclidean length of a standard complex Gaussian
    vector in dimension ``d``; grows like ``sqrt(d)``.
    """
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    return float(np.exp(gammaln(d + 0.5) - gammaln(d)))


def conditional_expectation(elem: RandomElement) -> np.ndarray:
    """Recover the coefficient tuple: ``x_i = E(conj(family_i) * X)``."""
    return np.einsum(
        "m,im,mab->iab", elem.space.weights, elem.space.family.conj(), elem.blocks
    )


def sup_norm(elem: RandomElement) -> float:
    """Largest operator norm over atoms.

    For ``gaussian-mc`` this is a lower estimate of the essential supremum,
    since only sampled atoms are seen.
    """
    if elem.blocks.size == 0:
        return 0.0
    return float(np.linalg.svd(elem.blocks, compute_uv=False)[:, 0].max())


def _fourth_forms(y: np.ndarray, kind: str):
    d = y.shape[0]
    col2 = np.einsum("iab,iac->bc", y.conj(), y)
    row2 = np.einsum("iab,icb->ac", y, y.conj())
    ystar = y.conj().transpose(0, 2, 1)
    # pairwise products t_ij = y_i^* y_j and s_ij = y_i y_j^*
    t = np.einsum("iab,jbc->ijac", ystar, y)
    s = np.einsum("iab,jbc->ijac", y, ystar)
    tt = np.einsum("ijab,ijbc->ijac", t.conj().transpose(0, 1, 3, 2), t)
    ss = np.einsum("ijab,ijbc->ijac", s, s.conj().transpose(0, 1, 3, 2))
    offdiag = ~np.eye(d, dtype=bool)
    if kind == "gaussian-mc":
        col4 = tt.sum(axis=(0, 1)) + col2 @ col2
        row4 = ss.sum(axis=(0, 1)) + row2 @ row2
    elif kind in ("steinhauss", "lacunary"):
        col4 = tt[offdiag].sum(axis=0) + col2 @ col2
        row4 = ss[offdiag].sum(axis=0) + row2 @ row2
    elif kind == "rademacher":
        t2 = np.einsum("ijab,ijbc->ijac", t, t)
        s2 = np.einsum("ijab,ijbc->ijac", s, s)
        col4 = col2 @ col2 + t2[offdiag].sum(axis=0) + tt[offdiag].sum(axis=0)
        row4 = row2 @ row2 + s2[offdiag].sum(axis=0) + ss[offdiag].sum(axis=0)
    else:
        raise DimensionMismatch(f"unknown kind {kind!r}")
    return col2, row2, col4, row4


def _rel_dev(actual: np.ndarray, expected: np.ndarray) -> float:
    scale = 1.0 + float(np.abs(expected).max(initial=0.0))
    return float(np.abs(actual - expected).max(initial=0.0)) / scale


def _psd_violation(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """Positive amount by which ``lhs <= rhs`` fails, scale normalized."""
    diff = rhs - lhs
    diff = 0.5 * (diff + diff.conj().T)
    lam_min = float(np.linalg.eigvalsh(diff)[0])
    scale = 1.0 + float(np.abs(lhs).max(initial=0.0)) + float(np.abs(rhs).max(initial=0.0))
    return max(0.0, -lam_min) / scale


def moment_identity_check(y, space: DiscreteProbabilitySpace, tol: float | None = None) -> CheckReport:
    """Verify second/fourth moment identities of ``Y = sum y_i (x) family_i``.

    Moments are evaluated by direct atom summation and compared with the
    kind-specific closed forms; the fourth moments must also sit below the
    second moments scaled by the appropriate norm factor (factor
    ``||col2|| + ||row2||`` for circularly symmetric families, factor
    ``3 * triple_norm(y)**2`` for signs).

    Deviations are normalized by ``1 + norm(target)``.  Raises
    :class:`IdentityViolation` when the worst deviation exceeds ``tol``
    (default ``1e-11`` for exact kinds, ``50/sqrt(atoms)`` for sampled
    Gaussians).
    """
    ya = as_matrix_tuple(y)
    elem = element_from_tuple(ya, space)
    blocks = elem.blocks
    w = space.weights

    g_col = np.einsum("mba,mbc->mac", blocks.conj(), blocks)
    g_row = np.einsum("mab,mcb->mac", blocks, blocks.conj())
    m2_col = np.einsum("m,mac->ac", w, g_col)
    m2_row = np.einsum("m,mac->ac", w, g_row)
    m4_col = np.einsum("m,mab,mbc->ac", w, g_col, g_col)
    m4_row = np.einsum("m,mab,mbc->ac", w, g_row, g_row)

    col2, row2, col4, row4 = _fourth_forms(ya, space.kind)

    if tol is None:
        tol = 1e-11 if space.is_exact else 50.0 / np.sqrt(space.atoms)

    report = CheckReport(name=f"moments[{space.kind}]", tolerance=tol)
    report.record("second-moment-column", _rel_dev(m2_col, col2))
    report.record("second-moment-row", _rel_dev(m2_row, row2))
    report.record("fourth-moment-column", _rel_dev(m4_col, col4))
    report.record("fourth-moment-row", _rel_dev(m4_row, row4))

    if space.kind == "rademacher":
        tn2 = max(
            float(np.linalg.eigvalsh(0.5 * (col2 + col2.conj().T))[-1]),
            float(np.linalg.eigvalsh(0.5 * (row2 + row2.conj().T))[-1]),
        )
        factor = 3.0 * tn2
    else:
        factor = float(
            np.linalg.eigvalsh(0.5 * (col2 + col2.conj().T))[-1]
            + np.linalg.eigvalsh(0.5 * (row2 + row2.conj().T))[-1]
        )
    report.record("fourth-psd-column", _psd_violation(m4_col, factor * m2_col))
    report.record("fourth-psd-row", _psd_violation(m4_row, factor * m2_row))

    if not report.passed:
        tag, dev = report.worst()
        raise IdentityViolation(
            f"moment identity {tag!r} deviates by {dev:.3e} (tol {tol:.1e})",
            max_deviation=dev,
            report=report,
        )
    return report
