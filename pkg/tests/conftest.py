"""Shared fixtures: seeded random system generators.

Generators keep a safety margin on both sides of every decision boundary
(ellipticity margin, span residual) so boolean assertions cannot flip on
rounding.
"""

import math

import numpy as np
import pytest

from interpen.systems import (
    EllipticSystem,
    Mixing,
    SymMat2,
    apply_mixing,
    classify,
    is_elliptic,
)


def random_spd(rng, lo=0.4, hi=2.5) -> SymMat2:
    """Random symmetric positive definite 2x2 via rotated eigenvalues."""
    phi = rng.uniform(0.0, math.pi)
    l1, l2 = rng.uniform(lo, hi, size=2)
    c, s = math.cos(phi), math.sin(phi)
    return SymMat2(
        l1 * c * c + l2 * s * s,
        (l1 - l2) * c * s,
        l1 * s * s + l2 * c * c,
    )


def random_sym(rng, scale=1.0) -> SymMat2:
    vals = rng.uniform(-scale, scale, size=3)
    return SymMat2(vals[0], vals[1], vals[2])


def random_generic_elliptic(rng) -> EllipticSystem:
    """Random elliptic system that is clearly not of decoupled type."""
    while True:
        a = random_spd(rng)
        d = random_spd(rng)
        b = random_sym(rng, 0.8)
        c = random_sym(rng, 0.8)
        system = EllipticSystem(a, b, c, d)
        for _ in range(12):
            verdict = is_elliptic(system, n_samples=2000)
            if verdict.margin > 2.0 * verdict.cert_slack + 1e-3:
                break
            b = b.scaled(0.5)
            c = c.scaled(0.5)
            system = EllipticSystem(a, b, c, d)
        else:
            continue
        result = classify(system)
        if not result.diagonalizable and min(result.residuals.values()) > 1e-3:
            return system


def random_diagonalizable(rng) -> EllipticSystem:
    """Mix a random decoupled pair (A, 0; 0, A) by a random invertible mixing
    chosen to keep the result elliptic."""
    base = random_spd(rng)
    while True:
        alpha, delta = rng.uniform(0.5, 2.0, size=2)
        beta, gamma = rng.uniform(-0.8, 0.8, size=2)
        if (beta + gamma) ** 2 >= 3.6 * alpha * delta:
            continue
        if abs(alpha * delta - beta * gamma) < 0.05:
            continue
        mixing = Mixing(alpha, beta, gamma, delta)
        decoupled = EllipticSystem(base, SymMat2.zero(), SymMat2.zero(), base)
        system = apply_mixing(decoupled, mixing)
        if is_elliptic(system, n_samples=2000).margin > 1e-6:
            return system


def random_non_elliptic(rng) -> EllipticSystem:
    """Random quadruple failing the ellipticity condition with margin."""
    while True:
        system = EllipticSystem(
            random_sym(rng, 1.5), random_sym(rng, 1.5),
            random_sym(rng, 1.5), random_sym(rng, 1.5),
        )
        verdict = is_elliptic(system, n_samples=2000)
        if verdict.margin < -1e-3:
            return system


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
