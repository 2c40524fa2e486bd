"""Constructive lifting with explicit norm budgets.

Given a coefficient tuple ``x``, the lift builds an element ``X`` of the
big algebra (functions on a probability space, or the fermionic matrix
algebra) whose coefficient read-out equals ``x`` while ``norm(X)`` stays
within a factor ``K`` of the primal norm of ``x``.

The engine is a geometric-series iteration driven by a one-step truncation
corrector: embed the current residual tuple, clip the embedded element
through its Hermitian dilation at level ``C``, and read the corrected
coefficients back off.  For a normalized input the corrected residual has
primal norm at most ``delta = 1/2``, so the accumulated element converges
with norm at most ``C / (1 - delta)``:

    commutative circular families  C = 1/sqrt(2)  ->  K = sqrt(2)
    sign families                  C = sqrt(3)/2  ->  K = sqrt(3)
    fermionic (weighted) setting   C = 1/sqrt(2)  ->  K = sqrt(2)

Sampled Gaussian spaces carry no exact moment identities, so the one-step
contraction can fail there; such steps raise :class:`StalledIteration`
instead of silently looping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .car import CarSystem, embed_tuple, extract_coefficients
from .exceptions import DimensionMismatch, IdentityViolation, StalledIteration
from .linalg import truncate_offdiag
from .norms import as_matrix_tuple, triple_norm, weighted_triple_norm
from .spaces import (
    DiscreteProbabilitySpace,
    RandomElement,
    conditional_expectation,
    element_from_tuple,
    sup_norm,
)

__all__ = [
    "LiftConfig",
    "LiftReport",
    "preset_config",
    "corrector_commutative",
    "corrector_car",
    "lift",
    "quotient_norm_bracket",
]

#: slack over the nominal contraction factor before a step counts as stalled;
#: distinguishes genuine corrector failure (Monte Carlo noise) from rounding
STALL_SLACK = 0.05


@dataclass(frozen=True)
class LiftConfig:
    """Truncation level, contraction factor and stopping controls.

    ``clip_level / (1 - contraction)`` is the norm bound ``K`` the lift
    guarantees.
    """

    clip_level: float
    contraction: float = 0.5
    max_iter: int = 64
    tol: float = 1e-10

    @property
    def bound(self) -> float:
        return self.clip_level / (1.0 - self.contraction)


_PRESETS = {
    "gaussian-mc": 1.0 / math.sqrt(2.0),
    "steinhauss": 1.0 / math.sqrt(2.0),
    "lacunary": 1.0 / math.sqrt(2.0),
    "rademacher": math.sqrt(3.0) / 2.0,
    "car": 1.0 / math.sqrt(2.0),
}


def preset_config(family: str, max_iter: int = 64, tol: float = 1e-10) -> LiftConfig:
    """The clip level achieving the sharp bound for each family."""
    key = {"gaussian": "gaussian-mc"}.get(family, family)
    if key not in _PRESETS:
        raise DimensionMismatch(
            f"no preset for family {family!r}; known: {sorted(_PRESETS)}"
        )
    return LiftConfig(clip_level=_PRESETS[key], contraction=0.5, max_iter=max_iter, tol=tol)


@dataclass
class LiftReport:
    """Iterate history and the norm bookkeeping of one lift."""

    lifted: object                 # RandomElement or fermionic matrix
    residual_history: np.ndarray   # primal norms of the residual tuples
    achieved_norm: float
    target_norm: float
    iterations: int
    converged: bool
    config: LiftConfig

    @property
    def ratio(self) -> float:
        if self.target_norm == 0.0:
            return 0.0
        return self.achieved_norm / self.target_norm


def corrector_commutative(y, space: DiscreteProbabilitySpace, clip_level: float):
    """One truncation step over a probability space.

    Embeds ``y``, clips every atom through the Hermitian dilation at
    ``clip_level`` and reads back the corrected tuple.  Returns
    ``(Z, z)`` with ``sup_norm(Z) <= clip_level`` and, for exact kinds and
    ``triple_norm(y) = 1`` at the preset level, ``triple_norm(y - z) <= 1/2``.
    """
    ya = as_matrix_tuple(y)
    elem = element_from_tuple(ya, space)
    clipped = RandomElement(space, truncate_offdiag(elem.blocks, clip_level))
    return clipped, conditional_expectation(clipped)


def corrector_car(y, sys: CarSystem, clip_level: float):
    """One truncation step in the fermionic algebra.

    Same contract as :func:`corrector_commutative` with the weighted primal
    norm; returns ``(Z, z)`` with ``op_norm(Z) <= clip_level``.
    """
    ya = as_matrix_tuple(y)
    big = embed_tuple(sys, ya)
    clipped = truncate_offdiag(big, clip_level)
    return clipped, extract_coefficients(sys, clipped)


def _setting_ops(setting):
    if isinstance(setting, DiscreteProbabilitySpace):
        return (
            lambda t: triple_norm(t),
            lambda t, c: corrector_commutative(t, setting, c),
            lambda e: sup_norm(e),
            setting.kind,
        )
    if isinstance(setting, CarSystem):
        return (
            lambda t: weighted_triple_norm(t, setting.nu),
            lambda t, c: corrector_car(t, setting, c),
            lambda m: float(np.linalg.norm(m, 2)),
            "car",
        )
    raise DimensionMismatch(
        f"setting must be a DiscreteProbabilitySpace or CarSystem, got {type(setting)!r}"
    )


def lift(x, setting, config: LiftConfig | None = None) -> LiftReport:
    """Build an element with prescribed coefficients and controlled norm.

    Iterates ``w_0 = x``, ``w_{k+1} = w_k - readout(corrector(w_k))``,
    accumulating the clipped elements; the corrector acts on the normalized
    residual and is rescaled back, so each step contracts the residual norm
    by the configured factor.  Stops when the residual falls below
    ``tol * norm(x)``.

    Raises :class:`StalledIteration` when a step fails to contract by
    ``contraction + 0.05`` (corrector precondition violated, e.g. noisy
    sampled moments).
    """
    primal, corrector, big_norm, family = _setting_ops(setting)
    if config is None:
        config = preset_config(family)

    xa = as_matrix_tuple(x)
    target = primal(xa)
    history = [target]

    if isinstance(setting, DiscreteProbabilitySpace):
        accum = np.zeros((setting.atoms, xa.shape[1], xa.shape[1]), dtype=complex)
        wrap = lambda blocks: RandomElement(setting, blocks)
    else:
        side = xa.shape[1] * setting.dim
        accum = np.zeros((side, side), dtype=complex)
        wrap = lambda m: m

    if target == 0.0:
        return LiftReport(
            lifted=wrap(accum),
            residual_history=np.array(history),
            achieved_norm=0.0,
            target_norm=0.0,
            iterations=0,
            converged=True,
            config=config,
        )

    w = xa.copy()
    norm_w = target
    iterations = 0
    converged = False
    for k in range(config.max_iter):
        if norm_w <= config.tol * target:
            converged = True
            break
        iterations = k + 1
        clipped, z = corrector(w / norm_w, config.clip_level)
        if isinstance(clipped, RandomElement):
            accum += norm_w * clipped.blocks
        else:
            accum += norm_w * clipped
        w = w - norm_w * z
        norm_next = primal(w)
        if norm_next > (config.contraction + STALL_SLACK) * norm_w:
            raise StalledIteration(
                f"residual contracted only to {norm_next / norm_w:.4f} of the "
                f"previous norm at step {iterations} "
                f"(allowed {config.contraction + STALL_SLACK})",
                step=iterations,
            )
        history.append(norm_next)
        norm_w = norm_next
    else:
        converged = norm_w <= config.tol * target

    lifted = wrap(accum)
    achieved = big_norm(lifted)
    return LiftReport(
        lifted=lifted,
        residual_history=np.array(history),
        achieved_norm=achieved,
        target_norm=target,
        iterations=iterations,
        converged=converged,
        config=config,
    )


def quotient_norm_bracket(x, setting, config: LiftConfig | None = None):
    """Two-sided bracket on the quotient norm of a coefficient tuple.

    The primal norm of ``x`` is a lower bound (no representative beats it);
    the lifted element's norm is an upper bound.  Returns
    ``(lower, upper)`` and checks ``lower <= upper <= K * lower`` up to the
    configured tolerance.
    """
    report = lift(x, setting, config)
    lower = report.target_norm
    upper = report.achieved_norm
    k = report.config.bound
    slack = 1.0 + 10.0 * report.config.tol
    if upper > k * lower * slack + 1e-12:
        raise IdentityViolation(
            f"lift norm {upper:.6e} exceeds {k:.6f} x lower bound {lower:.6e}"
        )
    if upper < lower * (1.0 - 10.0 * report.config.tol) - 1e-12:
        raise IdentityViolation(
            f"lift norm {upper:.6e} fell below the lower bound {lower:.6e}"
        )
    return lower, upper
