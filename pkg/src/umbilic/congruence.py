"""Congruence testing and classification of umbilical immersions.

Two immersions of the same chart domain are congruent (equal up to a
linear isometry of the embedding space) iff paired image samples have
identical Gram matrices *and* identical linear-dependence relations; the
second condition is what separates maps that agree on all inner products
but span subspaces of different dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bilinear as B
from .analysis import (DEFAULT_TOL, DEFAULT_ZERO_TOL, analyze_point,
                       reduction_report)
from .catalog import instantiate
from .charts import ImmersionChart
from .errors import InputError

AMBIGUITY_FACTOR = 10.0


@dataclass
class CongruenceVerdict:
    congruent: bool
    gram_residual: float
    rank_a: int
    rank_b: int
    rank_joint: int
    reason: str = ""


def congruence_test(chart_a: ImmersionChart, chart_b: ImmersionChart,
                    count: int = 40, seed: int = 42,
                    tol: float = DEFAULT_TOL) -> CongruenceVerdict:
    """Numerical congruence of two immersions over paired samples.

    Samples are drawn from the first chart's box; both charts must have
    the same number of variables.  Gram matrices are compared entrywise;
    kernels are compared through rank(A) = rank(B) = rank([A | B]).
    """
    if chart_a.nvars != chart_b.nvars:
        raise InputError("charts must share a domain to be compared")
    points = chart_a.sample_points(count, seed)
    Ya = np.stack([chart_a.value(p) for p in points])
    Yb = np.stack([chart_b.value(p) for p in points])
    Ga = B.gram_matrix(Ya, chart_a.ambient.signature)
    Gb = B.gram_matrix(Yb, chart_b.ambient.signature)
    gram_res = float(np.max(np.abs(Ga - Gb)))
    ra = B.numerical_rank(Ya)
    rb = B.numerical_rank(Yb)
    rj = B.numerical_rank(np.hstack([Ya, Yb]))
    if gram_res > tol:
        return CongruenceVerdict(False, gram_res, ra, rb, rj,
                                 "Gram matrices differ")
    if not (ra == rb == rj):
        return CongruenceVerdict(False, gram_res, ra, rb, rj,
                                 "spans have different dependence relations")
    return CongruenceVerdict(True, gram_res, ra, rb, rj, "")


# ---------------------------------------------------------------------------
# Classification of non-degenerate umbilical immersions
# ---------------------------------------------------------------------------

@dataclass
class ClassificationResult:
    label: str | None
    epsilon: int
    h_norm: float | None
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def _near(x: float, value: float, tol: float) -> bool:
    return abs(x - value) <= tol


def _boundary_note(h: float, boundaries, tol: float, notes: list):
    for b in boundaries:
        if tol < abs(h - b) <= AMBIGUITY_FACTOR * tol:
            notes.append(
                f"mean curvature norm {h!r} is within {AMBIGUITY_FACTOR:g}x "
                f"tolerance of the classification boundary {b:g}")


def _geodesic_item(chart: ImmersionChart, seed: int) -> int:
    """Distinguish the two totally geodesic hypersurface inclusions.

    Item 1 keeps the full negative index of the embedding in the hull
    direction space (spacelike normal); item 2 drops one (timelike normal).
    """
    red = reduction_report(chart, seed=seed)
    return 1 if red.direction_signature.neg == chart.ambient.signature.neg else 2


def classify(chart: ImmersionChart, samples: int = 5, seed: int = 42,
             tol: float = DEFAULT_TOL,
             tol_zero: float = DEFAULT_ZERO_TOL) -> ClassificationResult:
    """Identify which classification item an umbilical chart realizes.

    Covers immersions with non-degenerate induced metric; the squared
    norm of the mean curvature and the sign pattern of the hull direction
    space determine the item, and the curvature radius parameter is
    recovered from the norm where the item has one.
    """
    eps = chart.ambient.epsilon
    reports = [analyze_point(chart, p, order=2, tol_zero=tol_zero)
               for p in chart.sample_points(samples, seed)]
    umb = max(r.umbilicity_residual for r in reports)
    result = ClassificationResult(None, eps, None)
    if any(r.metric_signature.degenerate for r in reports):
        result.notes.append("induced metric is degenerate; outside the "
                            "non-degenerate classification")
        return result
    if umb > tol:
        result.notes.append(
            f"not totally umbilical (residual {umb:.3e}); no item applies")
        return result
    h = float(np.median([r.h_norm for r in reports]))
    minimal = max(r.minimal_residual for r in reports) <= tol
    result.h_norm = h

    if eps == 1:
        _boundary_note(h, (0.0, -1.0), tol, result.notes)
        if minimal:
            result.label = f"main1-{_geodesic_item(chart, seed)}"
            result.params["r"] = 1.0
        elif h > tol:
            result.label, result.params["r"] = "main1-3", 1 / math.sqrt(1 + h)
        elif _near(h, 0.0, tol):
            result.label = "main1-5"
        elif h > -1.0 + tol:
            result.label, result.params["r"] = "main1-4", 1 / math.sqrt(1 + h)
        elif _near(h, -1.0, tol):
            result.label = "main1-7"
        else:
            result.label, result.params["r"] = "main1-6", 1 / math.sqrt(-1 - h)
    elif eps == -1:
        _boundary_note(h, (0.0, 1.0), tol, result.notes)
        if minimal:
            result.label = f"main2-{_geodesic_item(chart, seed)}"
            result.params["r"] = 1.0
        elif h < -tol:
            result.label, result.params["r"] = "main2-3", 1 / math.sqrt(1 - h)
        elif _near(h, 0.0, tol):
            result.label = "main2-5"
        elif h < 1.0 - tol:
            result.label, result.params["r"] = "main2-4", 1 / math.sqrt(1 - h)
        elif _near(h, 1.0, tol):
            result.label = "main2-7"
        else:
            result.label, result.params["r"] = "main2-6", 1 / math.sqrt(h - 1)
    else:
        _boundary_note(h, (0.0,), tol, result.notes)
        if minimal:
            result.label = "akk-1"
        elif h > tol:
            result.label, result.params["r"] = "akk-2", 1 / math.sqrt(h)
        elif h < -tol:
            result.label, result.params["r"] = "akk-3", 1 / math.sqrt(-h)
        else:
            result.label = "akk-4"
    return result


# ---------------------------------------------------------------------------
# Moduli demonstration
# ---------------------------------------------------------------------------

@dataclass
class ModuliRecord:
    """One member of the constant-null-offset family, compared to its limit."""

    a: float
    cls: str               # "u" (umbilical, not geodesic) or "g" (geodesic)
    distance: float        # sup Euclidean distance to the a=0 member
    geodesic_residual: float


def moduli_demo(a_values, m: int = 2, s: int = 0, samples: int = 25,
                seed: int = 42, tol: float = DEFAULT_TOL) -> list[ModuliRecord]:
    """Walk the null-offset family towards its geodesic limit.

    Each member with a != 0 is umbilical but not geodesic, yet its image
    converges uniformly to the geodesic member as a -> 0: the family
    splits into two classes whose closure relation is visible in the
    distance column (the "u" class degenerates onto "g" with no motion
    inside "g" reaching back).
    """
    base = instantiate("psi-a", {"m": m, "s": s, "a": 0.0})
    points = base.sample_points(samples, seed)
    records = []
    for a in a_values:
        chart = instantiate("psi-a", {"m": m, "s": s, "a": float(a)})
        geo = max(analyze_point(chart, p, order=2).geodesic_residual
                  for p in chart.sample_points(3, seed))
        dist = max(float(np.linalg.norm(chart.value(p) - base.value(p)))
                   for p in points)
        records.append(ModuliRecord(float(a), "g" if geo <= tol else "u",
                                    dist, geo))
    return records
