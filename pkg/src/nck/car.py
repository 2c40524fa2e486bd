"""Fermionic (CAR) machinery over a weighted d-dimensional space.

Generators are realized concretely inside ``(2 x 2)^(tensor d)``:

    a_1 = e (x) 1 (x) ... (x) 1,
    a_i = u (x) ... (x) u (x) e (x) 1 (x) ... (x) 1,

with ``e = [[0, 1], [0, 0]]`` and ``u = diag(1, -1)``.  They satisfy the
anticommutation relations ``a_i a_j* + a_j* a_i = delta_ij I`` and
``a_i a_j + a_j a_i = 0`` exactly in floating point (all entries are 0 or
+-1).

The reference state for weights ``nu`` is ``b -> Tr(rho b)`` with the
product density ``rho = (x)_i diag(1 - nu_i, nu_i)``; its n-point values
are determinants of the diagonal two-point function.  The coefficient
functionals ``phi_i(b) = state(a_i* b + b a_i*)`` satisfy ``phi_i(a_j) =
delta_ij`` and assemble into the map that reads a coefficient tuple off an
algebra element; that map is the exact analogue of conditional expectation
on the probability spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from . import caps
from .exceptions import (
    DimensionMismatch,
    DTooLarge,
    IdentityViolation,
    NotOrthonormal,
    SizeMismatch,
)
from .norms import as_matrix_tuple, as_weights
from .reports import CheckReport

__all__ = [
    "SubspaceModel",
    "CarSystem",
    "subspace_to_weights",
    "jordan_wigner",
    "car_system",
    "state_eval",
    "coefficient_functional",
    "npoint_function",
    "generator_monomial",
    "embed_tuple",
    "extract_coefficients",
    "anticommutation_check",
    "second_moment_check",
    "state_weight_check",
    "orthogonality_check",
    "fourth_moment_check",
]

_E = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_U = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class SubspaceModel:
    """A d-dimensional subspace of a row/column direct sum.

    ``basis_row[i]`` and ``basis_col[i]`` are the two halves of the i-th
    basis vector in an ambient space of dimension ``k``; orthonormality of
    the basis means ``Gram(basis_row) + Gram(basis_col) = I``.
    """

    basis_row: np.ndarray   # (d, k)
    basis_col: np.ndarray   # (d, k)

    def __post_init__(self):
        r, c = self.basis_row, self.basis_col
        if r.ndim != 2 or r.shape != c.shape:
            raise DimensionMismatch(
                f"row/column parts must share shape (d, k): {r.shape} vs {c.shape}"
            )

    @property
    def d(self) -> int:
        return self.basis_row.shape[0]


def _gram(v: np.ndarray) -> np.ndarray:
    # G[i, j] = <v_i, v_j> with the inner product linear in the first slot
    return v @ v.conj().T


def subspace_to_weights(model: SubspaceModel, tol: float = 1e-10):
    """Diagonalize the column-part Gram operator of an orthonormal basis.

    Returns ``(nu, rotation)`` where ``nu`` (ascending, in ``[0, 1]``) is the
    spectrum of the operator measuring the column content of the subspace
    and ``rotation`` is the unitary change of basis that diagonalizes it.
    """
    g_row = _gram(model.basis_row)
    g_col = _gram(model.basis_col)
    eye = np.eye(model.d)
    if np.abs(g_row + g_col - eye).max() > tol:
        raise NotOrthonormal(
            "basis is not orthonormal: row and column Grams do not sum to I "
            f"(deviation {np.abs(g_row + g_col - eye).max():.3e})"
        )
    nu, rotation = np.linalg.eigh(g_col)
    nu = np.clip(nu, 0.0, 1.0)
    return nu, rotation


@lru_cache(maxsize=8)
def _jordan_wigner_cached(d: int):
    gens = []
    for i in range(d):
        factors = [_U] * i + [_E] + [_I2] * (d - 1 - i)
        g = reduce(np.kron, factors)
        g.setflags(write=False)
        gens.append(g)
    return tuple(gens)


def jordan_wigner(d: int):
    """The ``d`` fermionic generators as ``2**d`` square matrices (cached)."""
    cap = caps.car_dim_cap()
    if not 1 <= d <= cap:
        raise DTooLarge(f"fermionic dimension {d} outside [1, {cap}]")
    return _jordan_wigner_cached(d)


@lru_cache(maxsize=64)
def _density_cached(key: tuple) -> np.ndarray:
    rho = reduce(np.kron, [np.diag([1.0 - v, v]).astype(complex) for v in key])
    rho.setflags(write=False)
    return rho


@dataclass(frozen=True)
class CarSystem:
    """Generators plus the product density for one weight vector."""

    nu: np.ndarray
    generators: tuple
    density: np.ndarray

    @property
    def d(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return self.density.shape[0]

    @property
    def functional_kernels(self) -> tuple:
        """Matrices ``K_i = rho a_i* + a_i* rho`` so that ``phi_i(b) = Tr(K_i b)``."""
        return _kernels_for(self)


_KERNEL_CACHE: dict = {}


def _kernels_for(sys: CarSystem) -> tuple:
    key = (sys.d, tuple(np.round(sys.nu, 15)))
    kern = _KERNEL_CACHE.get(key)
    if kern is None:
        rho = sys.density
        kern = tuple(rho @ g.conj().T + g.conj().T @ rho for g in sys.generators)
        for k in kern:
            k.setflags(write=False)
        if len(_KERNEL_CACHE) > 64:
            _KERNEL_CACHE.clear()
        _KERNEL_CACHE[key] = kern
    return kern


def car_system(nu) -> CarSystem:
    """Build the system for a weight vector ``nu`` in ``[0, 1]^d``."""
    w = as_weights(nu)
    gens = jordan_wigner(w.shape[0])
    # quantize the cache key so that reruns with reconstructed weights hit
    rho = _density_cached(tuple(np.round(w, 15)))
    return CarSystem(nu=w, generators=gens, density=rho)


def _check_size(sys: CarSystem, b) -> np.ndarray:
    a = np.asarray(b, dtype=complex)
    if a.shape != (sys.dim, sys.dim):
        raise SizeMismatch(f"expected {sys.dim} x {sys.dim}, got {a.shape}")
    return a


def state_eval(sys: CarSystem, b) -> complex:
    """The reference state ``Tr(rho b)``."""
    a = _check_size(sys, b)
    return complex(np.einsum("ab,ba->", sys.density, a))


def coefficient_functional(sys: CarSystem, i: int, b) -> complex:
    """``phi_i(b) = state(a_i* b + b a_i*)``; satisfies ``phi_i(a_j) = delta_ij``."""
    a = _check_size(sys, b)
    if not 0 <= i < sys.d:
        raise DimensionMismatch(f"index {i} outside range(0, {sys.d})")
    return complex(np.einsum("ab,ba->", sys.functional_kernels[i], a))


def npoint_function(sys: CarSystem, create, annihilate) -> complex:
    """Determinant form of the state on a normal-ordered monomial.

    ``create`` lists the starred generators left to right, ``annihilate``
    the unstarred ones, i.e. the monomial is
    ``a*_{create[0]} ... a*_{create[-1]} a_{annihilate[0]} ... a_{annihilate[-1]}``.
    Zero when the two lists differ in length; otherwise the determinant of
    the diagonal two-point matrix.
    """
    create = list(create)
    annihilate = list(annihilate)
    if len(create) != len(annihilate):
        return 0.0 + 0.0j
    if not create:
        return 1.0 + 0.0j
    f = list(reversed(create))
    g = annihilate
    m = np.zeros((len(g), len(f)), dtype=complex)
    for a, gi in enumerate(g):
        for b, fj in enumerate(f):
            if gi == fj:
                m[a, b] = sys.nu[gi]
    return complex(np.linalg.det(m))


def generator_monomial(sys: CarSystem, create, annihilate) -> np.ndarray:
    """Matrix of ``a*_{create[0]} ... a_{annihilate[-1]}`` (for cross-checks)."""
    out = np.eye(sys.dim, dtype=complex)
    for i in create:
        out = out @ sys.generators[i].conj().T
    for i in annihilate:
        out = out @ sys.generators[i]
    return out


def embed_tuple(sys: CarSystem, y) -> np.ndarray:
    """The element ``Y = sum_i y_i (x) a_i`` in ``M_n (x) M_{2**d}``."""
    ya = as_matrix_tuple(y)
    if ya.shape[0] != sys.d:
        raise DimensionMismatch(f"tuple d={ya.shape[0]} vs system d={sys.d}")
    gens = np.stack(sys.generators)
    return np.einsum("iab,icd->acbd", ya, gens).reshape(
        ya.shape[1] * sys.dim, ya.shape[1] * sys.dim
    )


def extract_coefficients(sys: CarSystem, x) -> np.ndarray:
    """Apply the coefficient functionals blockwise: ``x_i = (Id (x) phi_i)(X)``.

    Inverts :func:`embed_tuple` on its range; even monomials map to zero.
    """
    a = np.asarray(x, dtype=complex)
    q = sys.dim
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % q != 0:
        raise SizeMismatch(
            f"expected a square matrix with side divisible by {q}, got {a.shape}"
        )
    n = a.shape[0] // q
    ar = a.reshape(n, q, n, q)
    kernels = np.stack(sys.functional_kernels)
    return np.einsum("iab,pbqa->ipq", kernels, ar)


def _id_otimes_state(sys: CarSystem, w: np.ndarray, n: int) -> np.ndarray:
    q = sys.dim
    wr = w.reshape(n, q, n, q)
    return np.einsum("ab,pbqa->pq", sys.density, wr)


# --- identity checks --------------------------------------------------------


def anticommutation_check(sys: CarSystem, tol: float = 1e-12) -> CheckReport:
    """``a_i a_j* + a_j* a_i = delta_ij I`` and ``a_i a_j + a_j a_i = 0``."""
    report = CheckReport(name="anticommutation", tolerance=tol)
    eye = np.eye(sys.dim)
    dev_mixed = 0.0
    dev_plain = 0.0
    for i, gi in enumerate(sys.generators):
        for j, gj in enumerate(sys.generators):
            mixed = gi @ gj.conj().T + gj.conj().T @ gi - (eye if i == j else 0.0)
            dev_mixed = max(dev_mixed, float(np.abs(mixed).max()))
            plain = gi @ gj + gj @ gi
            dev_plain = max(dev_plain, float(np.abs(plain).max()))
    report.record("anticommutator-mixed", dev_mixed)
    report.record("anticommutator-plain", dev_plain)
    _raise_if_failed(report)
    return report


def second_moment_check(sys: CarSystem, tol: float = 1e-12) -> CheckReport:
    """``state(a_i* a_j) = nu_i delta_ij`` and ``state(a_i a_j*) = (1-nu_i) delta_ij``."""
    report = CheckReport(name="second-moments", tolerance=tol)
    dev_c = 0.0
    dev_a = 0.0
    for i, gi in enumerate(sys.generators):
        for j, gj in enumerate(sys.generators):
            target = sys.nu[i] if i == j else 0.0
            dev_c = max(dev_c, abs(state_eval(sys, gi.conj().T @ gj) - target))
            target = (1.0 - sys.nu[i]) if i == j else 0.0
            dev_a = max(dev_a, abs(state_eval(sys, gi @ gj.conj().T) - target))
    report.record("two-point-creation", dev_c)
    report.record("two-point-annihilation", dev_a)
    _raise_if_failed(report)
    return report


def state_weight_check(sys: CarSystem, tol: float = 1e-12) -> CheckReport:
    """One-sided products split through the coefficient functionals.

    Verifies ``state(a_i* b) = nu_i phi_i(b)`` and
    ``state(b a_i*) = (1 - nu_i) phi_i(b)`` for every ``b``; checking the
    kernel matrices entrywise covers all matrix units at once.
    """
    report = CheckReport(name="state-weights", tolerance=tol)
    rho = sys.density
    dev_left = 0.0
    dev_right = 0.0
    for i, gi in enumerate(sys.generators):
        k = sys.functional_kernels[i]
        # Tr(rho a_i* b) = nu_i Tr(K_i b) for all b  <=>  rho a_i* = nu_i K_i
        dev_left = max(dev_left, float(np.abs(rho @ gi.conj().T - sys.nu[i] * k).max()))
        dev_right = max(
            dev_right,
            float(np.abs(gi.conj().T @ rho - (1.0 - sys.nu[i]) * k).max()),
        )
    report.record("weight-split-left", dev_left)
    report.record("weight-split-right", dev_right)
    _raise_if_failed(report)
    return report


def orthogonality_check(sys: CarSystem, tol: float = 1e-12) -> CheckReport:
    """Centered quadratic monomials form orthogonal families.

    ``f_ij = a_i* a_j - delta_ij nu_i I`` are orthogonal for the form
    ``(c, d) -> state(d* c)`` with squared norms ``nu_j (1 - nu_i)``;
    ``g_ij = a_i a_j* - delta_ij (1 - nu_i) I`` are orthogonal for
    ``(c, d) -> state(c d*)`` with the same squared norms.  Both families
    are orthogonal to the identity (their state values vanish).
    """
    d, q = sys.d, sys.dim
    gens = sys.generators
    rho_diag = np.real(np.diag(sys.density))
    eye = np.eye(q, dtype=complex)

    f = np.stack(
        [
            gens[i].conj().T @ gens[j] - (sys.nu[i] if i == j else 0.0) * eye
            for i in range(d)
            for j in range(d)
        ]
    )
    g = np.stack(
        [
            gens[i] @ gens[j].conj().T - ((1.0 - sys.nu[i]) if i == j else 0.0) * eye
            for i in range(d)
            for j in range(d)
        ]
    )
    norms = np.array(
        [sys.nu[j] * (1.0 - sys.nu[i]) for i in range(d) for j in range(d)]
    )

    report = CheckReport(name="orthogonality", tolerance=tol)
    # state values: orthogonality to the identity
    mean_f = np.einsum("a,kaa->k", rho_diag, f)
    mean_g = np.einsum("a,kaa->k", rho_diag, g)
    report.record("centered-mean-creation", float(np.abs(mean_f).max()))
    report.record("centered-mean-annihilation", float(np.abs(mean_g).max()))

    # Gram of the f family under (c, d) -> state(d* c): weight columns by rho
    fw = f * np.sqrt(rho_diag)[None, None, :]
    gram_f = np.einsum("kab,lab->kl", fw, fw.conj())
    # Gram of the g family under (c, d) -> state(c d*): weight rows by rho
    gw = g * np.sqrt(rho_diag)[None, :, None]
    gram_g = np.einsum("kab,lab->kl", gw, gw.conj())

    off = ~np.eye(d * d, dtype=bool)
    report.record("pairwise-orthogonality-creation", float(np.abs(gram_f[off]).max(initial=0.0)))
    report.record("pairwise-orthogonality-annihilation", float(np.abs(gram_g[off]).max(initial=0.0)))
    report.record("squared-norms-creation", float(np.abs(np.diag(gram_f) - norms).max()))
    report.record("squared-norms-annihilation", float(np.abs(np.diag(gram_g) - norms).max()))
    _raise_if_failed(report)
    return report


def fourth_moment_check(sys: CarSystem, y, tol: float = 1e-11) -> CheckReport:
    """Second and fourth moments of ``Y = sum y_i (x) a_i`` in closed form.

    Compares the direct evaluation in the big algebra against

        (Id (x) state)(Y*Y)   = sum nu_i y_i* y_i
        (Id (x) state)(YY*)   = sum (1-nu_i) y_i y_i*
        (Id (x) state)((Y*Y)^2) = sum_ij nu_j (1-nu_i) (y_i* y_j)*(y_i* y_j)
                                  + (sum nu_i y_i* y_i)^2
        (Id (x) state)((YY*)^2) = sum_ij nu_j (1-nu_i) (y_i y_j*)(y_i y_j*)*
                                  + (sum (1-nu_i) y_i y_i*)^2

    and then checks the quadratic domination of the fourth moments by the
    second moments times the sum of the two weighted Gram norms.
    """
    ya = as_matrix_tuple(y)
    if ya.shape[0] != sys.d:
        raise DimensionMismatch(f"tuple d={ya.shape[0]} vs system d={sys.d}")
    n = ya.shape[1]
    big = embed_tuple(sys, ya)
    bstar = big.conj().T
    cc = bstar @ big
    rr = big @ bstar

    m2_col = _id_otimes_state(sys, cc, n)
    m2_row = _id_otimes_state(sys, rr, n)
    m4_col = _id_otimes_state(sys, cc @ cc, n)
    m4_row = _id_otimes_state(sys, rr @ rr, n)

    nu = sys.nu
    col2 = np.einsum("i,iab,iac->bc", nu, ya.conj(), ya)
    row2 = np.einsum("i,iab,icb->ac", 1.0 - nu, ya, ya.conj())
    ystar = ya.conj().transpose(0, 2, 1)
    t = np.einsum("iab,jbc->ijac", ystar, ya)       # t_ij = y_i* y_j
    s = np.einsum("iab,jbc->ijac", ya, ystar)       # s_ij = y_i y_j*
    wij = np.einsum("j,i->ij", nu, 1.0 - nu)
    col4 = (
        np.einsum("ij,ijba,ijbc->ac", wij, t.conj(), t) + col2 @ col2
    )
    row4 = (
        np.einsum("ij,ijab,ijcb->ac", wij, s, s.conj()) + row2 @ row2
    )

    report = CheckReport(name="fourth-moments", tolerance=tol)
    report.record("second-moment-column", _rel_dev(m2_col, col2))
    report.record("second-moment-row", _rel_dev(m2_row, row2))
    report.record("fourth-moment-column", _rel_dev(m4_col, col4))
    report.record("fourth-moment-row", _rel_dev(m4_row, row4))

    factor = float(
        np.linalg.eigvalsh(0.5 * (col2 + col2.conj().T))[-1]
        + np.linalg.eigvalsh(0.5 * (row2 + row2.conj().T))[-1]
    )
    report.record("fourth-psd-column", _psd_violation(m4_col, factor * m2_col))
    report.record("fourth-psd-row", _psd_violation(m4_row, factor * m2_row))
    _raise_if_failed(report)
    return report


def _rel_dev(actual: np.ndarray, expected: np.ndarray) -> float:
    scale = 1.0 + float(np.abs(expected).max(initial=0.0))
    return float(np.abs(actual - expected).max(initial=0.0)) / scale


def _psd_violation(lhs: np.ndarray, rhs: np.ndarray) -> float:
    diff = rhs - lhs
    diff = 0.5 * (diff + diff.conj().T)
    lam_min = float(np.linalg.eigvalsh(diff)[0])
    scale = 1.0 + float(np.abs(lhs).max(initial=0.0)) + float(np.abs(rhs).max(initial=0.0))
    return max(0.0, -lam_min) / scale


def _raise_if_failed(report: CheckReport):
    if not report.passed:
        tag, dev = report.worst()
        raise IdentityViolation(
            f"{report.name}: identity {tag!r} deviates by {dev:.3e} "
            f"(tol {report.tolerance:.1e})",
            max_deviation=dev,
            report=report,
        )
