"""Measurements behind the classical inequalities on variable Lebesgue spaces.

Each function returns a measured ratio (or a small result record).  Whether
the ratio is held against a fixed bound or only tracked for resolution
stability is the caller's decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, DomainError, ShapeError
from ..grid import ScalarField
from ..spectral import riesz_transform
from .exponent import Exponent, conjugate_exponent, embedding_class_check, harmonic_sum
from .norms import classical_lp_norm, luxemburg_norm, variable_norm
from .operators import maximal_function, riesz_potential_2d

EMBEDDING_RTOL = 1e-8
DUALITY_SLACK = 1e-6


def holder_product_check(f: ScalarField, g: ScalarField, p1: Exponent, p2: Exponent) -> float:
    """``||fg||_p / (||f||_p1 ||g||_p2)`` with ``1/p = 1/p1 + 1/p2``."""
    p = harmonic_sum(p1, p2)
    if p.p_minus <= 1.0:
        raise DomainError("combined exponent must stay above 1")
    fg = f * g
    num = variable_norm(fg, p)
    if num == 0.0:
        return 0.0
    return num / (variable_norm(f, p1) * variable_norm(g, p2))


def canonical_witness(f: ScalarField, p: Exponent) -> ScalarField:
    """``|f / ||f|||^(p-1)``, which has unit dual modular and pairs to ``||f||``."""
    lam = variable_norm(f, p)
    if lam == 0.0:
        return ScalarField(f.grid, np.zeros(f.grid.shape))
    return ScalarField(f.grid, np.abs(f.values / lam) ** (p.values - 1.0))


@dataclass
class DualityResult:
    sup_pairing: float
    norm: float
    witness_included: bool
    best_index: int

    @property
    def lower_ratio(self) -> float:
        return self.sup_pairing / self.norm if self.norm > 0 else 0.0

    @property
    def upper_ratio(self) -> float:
        return self.lower_ratio

    @property
    def vacuous(self) -> bool:
        return self.norm == 0.0

    @property
    def upper_ok(self) -> bool:
        return self.vacuous or self.upper_ratio <= 2.0 + DUALITY_SLACK

    @property
    def lower_ok(self) -> bool:
        if self.vacuous or not self.witness_included:
            return True
        return self.lower_ratio >= 0.5 - DUALITY_SLACK

    @property
    def passed(self) -> bool:
        return self.upper_ok and self.lower_ok


def dual_sandwich_check(f: ScalarField, p: Exponent, dictionary, include_witness: bool = False) -> DualityResult:
    """Largest ``int |f g|`` over a dictionary of dual fields normalised in ``L^{p'}``."""
    dictionary = list(dictionary)
    if include_witness:
        dictionary.append(canonical_witness(f, p))
    if not dictionary:
        raise ConfigurationError("the dual dictionary is empty")
    norm = variable_norm(f, p)
    p_dual = conjugate_exponent(p)
    best, best_index = 0.0, -1
    for i, g in enumerate(dictionary):
        if g.grid != f.grid:
            raise ShapeError("dictionary field lives on a different grid")
        g_norm = variable_norm(g, p_dual)
        if g_norm == 0.0:
            continue
        pairing = float(np.sum(p.weights * np.abs(f.values * g.values))) / g_norm
        if pairing > best:
            best, best_index = pairing, i
    return DualityResult(best, norm, include_witness, best_index)


@dataclass
class EmbeddingResult:
    applicable: bool
    ratio: float
    bound: float
    reason: str = ""

    @property
    def passed(self) -> bool:
        return not self.applicable or self.ratio <= self.bound


def embedding_check(f: ScalarField, p1: Exponent, p2: Exponent, omega_area: float | None = None) -> EmbeddingResult:
    """``||f||_p1 / ||f||_p2`` against ``1 + |Omega|`` when ``p1 <= p2`` pointwise."""
    if not p1.same_domain(p2):
        raise ShapeError("exponents live on different domains")
    area = p1.measure if omega_area is None else float(omega_area)
    bound = (1.0 + area) * (1.0 + EMBEDDING_RTOL)
    if np.any(p1.values > p2.values):
        return EmbeddingResult(False, float("nan"), bound, "embedding not applicable: p1 > p2 somewhere")
    n2 = variable_norm(f, p2)
    if n2 == 0.0:
        return EmbeddingResult(True, 0.0, bound)
    return EmbeddingResult(True, variable_norm(f, p1) / n2, bound)


def embedding_class_ratio(f: ScalarField, p: float, p_bar: Exponent) -> float:
    """``||f||_p / ||f||_{p_bar(.)}`` for ``p_bar`` in the embedding class of ``p``."""
    report = embedding_class_check(p, p_bar)
    if not report.member:
        raise DomainError(f"p_bar is not in the embedding class: {report.reason}")
    den = variable_norm(f, p_bar)
    return classical_lp_norm(f, p) / den if den > 0 else 0.0


def maximal_ratio(f: ScalarField, p: Exponent) -> float:
    den = variable_norm(f, p)
    return variable_norm(maximal_function(f), p) / den if den > 0 else 0.0


def riesz_transform_ratio(f: ScalarField, p: Exponent, j: int = 1) -> float:
    den = variable_norm(f, p)
    return variable_norm(riesz_transform(f, j), p) / den if den > 0 else 0.0


def potential_target_exponent(p: Exponent, beta: float, dim: int = 2) -> Exponent:
    """``q`` with ``1/q = 1/p - beta/dim``; needs ``beta < dim / p^+``."""
    if not beta * p.p_plus < dim:
        raise DomainError(f"Riesz potential order {beta} needs beta < {dim}/p^+ = {dim / p.p_plus:.4g}")
    inv = 1.0 / p.values - beta / dim
    p_inf = None if p.p_infinity is None else 1.0 / (1.0 / p.p_infinity - beta / dim)
    return p.with_values(1.0 / inv, p_infinity=p_inf)


def riesz_potential_ratio(f: ScalarField, p: Exponent, beta: float) -> float:
    """``||I_beta f||_q / ||f||_p`` with the exponent relation of the potential bound."""
    q = potential_target_exponent(p, beta)
    den = variable_norm(f, p)
    return variable_norm(riesz_potential_2d(f, beta), q) / den if den > 0 else 0.0


def norm_axioms(f: ScalarField, g: ScalarField, p: Exponent, scale: float) -> dict:
    """Homogeneity and triangle defects plus the unit-modular value for one pair."""
    nf = luxemburg_norm(f, p)
    ng = variable_norm(g, p)
    ncf = variable_norm(f * scale, p)
    nfg = variable_norm(f + g, p)
    return {
        "homogeneity_rel": abs(ncf - abs(scale) * nf.norm_value) / max(abs(scale) * nf.norm_value, 1e-300),
        "triangle_excess": nfg - (nf.norm_value + ng),
        "unit_modular": nf.modular_at_norm,
    }
