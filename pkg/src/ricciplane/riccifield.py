"""Verification of the field equation nabla V = Q.

A frame field V = V1 E1 + V2 E2 satisfies the equation exactly when the
four covariant-derivative entries g(nabla_{E_i} V, E_j) match the Ricci
entries (rho, rho, 0, 0).  The verdict is always decided on sampled
residual maxima, never on the symbolic shape of the residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import (
    Add,
    Div,
    Domain,
    Expr,
    Mul,
    Sub,
    denominators,
    simplify,
)
from .geometry import (
    DiagonalMetric,
    channel_coefficients,
    frame_derivative,
    ricci,
    validate_metric,
)
from .numeric import DomainTooSingularError, SamplingConfig, sample_points, sampled_max_abs


@dataclass(frozen=True)
class FrameField:
    """Orthonormal-frame components of a vector field V = V1 E1 + V2 E2."""

    V1: Expr
    V2: Expr


@dataclass(frozen=True)
class ResidualReport:
    """Residuals of the four field equations with their sampled maxima."""

    residuals: tuple[Expr, Expr, Expr, Expr]
    max_abs: tuple[float, float, float, float]
    verdict: str  # "pass" | "fail"
    points_used: int
    seed: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def covariant_matrix(m: DiagonalMetric, V: FrameField) -> dict[tuple[int, int], Expr]:
    """g(nabla_{E_i} V, E_j) for (i, j) in {1,2}^2.

    (1,1): E1(V1) - h12 V2    (1,2): E1(V2) + h12 V1
    (2,2): E2(V2) - h21 V1    (2,1): E2(V1) + h21 V2
    """
    h12, h21 = channel_coefficients(m)
    return {
        (1, 1): simplify(Sub(frame_derivative(m, V.V1, 1), Mul(h12, V.V2))),
        (2, 2): simplify(Sub(frame_derivative(m, V.V2, 2), Mul(h21, V.V1))),
        (1, 2): simplify(Add(frame_derivative(m, V.V2, 1), Mul(h12, V.V1))),
        (2, 1): simplify(Add(frame_derivative(m, V.V1, 2), Mul(h21, V.V2))),
    }


def residual_system(m: DiagonalMetric, V: FrameField) -> tuple[Expr, Expr, Expr, Expr]:
    """R1..R4: the four entries of nabla V - Q in the frame.

    R1 and R2 compare both diagonal entries to rho directly, which is
    strictly stronger than equating them to each other; R3 and R4 are
    the off-diagonal entries (the Ricci off-diagonal entry is zero).
    """
    cov = covariant_matrix(m, V)
    rho = ricci(m).rho
    return (
        simplify(Sub(cov[(1, 1)], rho)),
        simplify(Sub(cov[(2, 2)], rho)),
        cov[(1, 2)],
        cov[(2, 1)],
    )


def equation_guards(m: DiagonalMetric, exprs) -> list[Expr]:
    """Sampling guards: the metric components plus every denominator
    appearing in the expressions to be sampled."""
    guards: dict[Expr, None] = {m.f1: None, m.f2: None}
    for e in exprs:
        for g in denominators(e):
            guards.setdefault(g)
    return list(guards)


def verify(m: DiagonalMetric, V: FrameField, d: Domain, cfg: SamplingConfig) -> ResidualReport:
    """Sample the four residuals of nabla V = Q over `d`.

    The metric is sample-validated first.  Pass iff every residual's
    max |value| over the accepted points is <= cfg.tolerance.
    """
    validate_metric(m, d, cfg)
    residuals = residual_system(m, V)
    points = sample_points(d, cfg, equation_guards(m, residuals))
    maxima, used = sampled_max_abs(residuals, points)
    if used < max(1, cfg.samples // 2):
        raise DomainTooSingularError(
            f"residuals were evaluable at only {used} of {cfg.samples} requested points"
        )
    verdict = "pass" if all(v <= cfg.tolerance for v in maxima) else "fail"
    return ResidualReport(
        residuals=residuals,
        max_abs=tuple(maxima),
        verdict=verdict,
        points_used=used,
        seed=cfg.seed,
        tolerance=cfg.tolerance,
    )


def from_coordinates(m: DiagonalMetric, A: Expr, B: Expr) -> FrameField:
    """Convert a coordinate field A d/dx1 + B d/dx2 to frame components
    (A/f1, B/f2)."""
    return FrameField(V1=simplify(Div(A, m.f1)), V2=simplify(Div(B, m.f2)))


def divergence(m: DiagonalMetric, V: FrameField) -> Expr:
    """div(V) = g(nabla_{E1}V, E1) + g(nabla_{E2}V, E2)."""
    cov = covariant_matrix(m, V)
    return simplify(Add(cov[(1, 1)], cov[(2, 2)]))


def closedness_defect(m: DiagonalMetric, V: FrameField) -> Expr:
    """(d eta)(E1, E2) for the dual 1-form eta of V:
    g(nabla_{E1}V, E2) - g(nabla_{E2}V, E1)."""
    cov = covariant_matrix(m, V)
    return simplify(Sub(cov[(1, 2)], cov[(2, 1)]))
