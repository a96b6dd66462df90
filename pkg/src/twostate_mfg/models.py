"""Catalog of the three benchmark games.

* ``shock_model`` -- symmetric congestion costs with a product potential;
  smooth terminal data that steepen into a shock of the value difference.
* ``paradigm_model`` -- two scientific paradigms coupled through CES
  productivity functions.
* ``consumer_model`` -- two consumption goods priced by adoption: minimum
  price less an isoelastic utility of the good's share, singular at
  ``theta_i = 0`` and handled by a clamp.

The paradigm and consumer games share the terminal cost ``1 - theta_i``
(one minus the own-state share), which both solvers read off ``psi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ModelSpec, PotentialPair, SimplexPoint, _check_state


@dataclass(frozen=True)
class CesParams:
    """Constant-elasticity-of-substitution productivity parameters.

    ``a1, a2`` weigh a field's own share against the other; ``r`` is the
    elasticity of substitution.
    """

    a1: float = 0.5
    a2: float = 0.9
    r: float = 0.75

    def __post_init__(self):
        if not (0.0 <= self.a1 <= 1.0 and 0.0 <= self.a2 <= 1.0):
            raise ValueError("a1 and a2 must lie in [0, 1]")
        if self.r == 0.0:
            raise ValueError("elasticity r must be nonzero")


@dataclass(frozen=True)
class IsoParams:
    """Isoelastic utility parameters: elasticity ``eta`` and minimum prices."""

    eta: float = 1.0
    s1: float = 0.1
    s2: float = 0.075

    def __post_init__(self):
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        if self.s1 < 0.0 or self.s2 < 0.0:
            raise ValueError("minimum prices must be nonnegative")


def shock_model() -> ModelSpec:
    """Symmetric two-state game whose value difference develops a shock.

    ``f(1) = 1 - theta1``, ``f(2) = theta1``; terminal values
    ``theta_i - 1/2``.  The coupling is the gradient of ``F = theta1 theta2``,
    so the game is potential with terminal potential
    ``Psi0 = ((theta1 - 1/2)^2 + (theta2 - 1/2)^2) / 2``.
    """

    def f(i, theta: SimplexPoint):
        _check_state(i)
        if i == 1:
            return 1.0 - theta.theta1
        return theta.theta1

    def psi(i, theta: SimplexPoint):
        _check_state(i)
        if i == 1:
            return theta.theta1 - 0.5
        return theta.theta2 - 0.5

    def potential_f(theta1, theta2):
        return theta1 * theta2

    def terminal_potential(theta1, theta2):
        return 0.5 * (theta1 - 0.5) ** 2 + 0.5 * (theta2 - 0.5) ** 2

    return ModelSpec(
        name="shock",
        f=f,
        psi=psi,
        potential=PotentialPair(F=potential_f, Psi0=terminal_potential),
    )


def ces_productivity(i, theta: SimplexPoint, p: CesParams):
    """CES productivity of a researcher working in field ``i``."""
    _check_state(i)
    if i == 1:
        inner = p.a1 * theta.theta1 ** p.r + (1.0 - p.a1) * (1.0 - theta.theta1) ** p.r
    else:
        inner = p.a2 * (1.0 - theta.theta2) ** p.r + (1.0 - p.a2) * theta.theta2 ** p.r
    return inner ** (1.0 / p.r)


def _terminal_own_share(i, theta: SimplexPoint):
    """Terminal cost ``1 - theta_i``: cheapest where the own state is full."""
    _check_state(i)
    if i == 1:
        return 1.0 - theta.theta1
    return 1.0 - theta.theta2


def paradigm_model(p: CesParams) -> ModelSpec:
    """Paradigm-shift game with CES productivity coupling.

    With the reference parameters (``a1 = 1/2``, ``a2 = 9/10``, ``r = 3/4``)
    the equilibrium inverts the terminal preference of state 1: the state-1
    value ends up cheapest where nobody works on paradigm 1 any more.
    """

    def f(i, theta: SimplexPoint):
        return ces_productivity(i, theta, p)

    return ModelSpec(name="paradigm", f=f, psi=_terminal_own_share)


def isoelastic_utility(theta_i, p: IsoParams):
    """Isoelastic utility of consuming a good with adoption share ``theta_i``:
    ``(theta^(1-eta) - 1) / (1-eta)``, or ``log(theta)`` at ``eta = 1``."""
    if p.eta == 1.0:
        return np.log(theta_i)
    return (theta_i ** (1.0 - p.eta) - 1.0) / (1.0 - p.eta)


def consumer_model(p: IsoParams, clamp_eps: float = 1e-3) -> ModelSpec:
    """Consumer-choice game: cost of a good is its minimum price less the
    isoelastic utility of the good's adoption share.

    Wide adoption makes a good cheap, so with ``s1 > s2`` the pricier good 1
    is only competitive above a critical share, visible as a jump in both
    values.  The utility diverges at ``theta_i = 0``; the share is clamped to
    ``[clamp_eps, 1]`` before evaluation, with the default matching one tenth
    of a cell on the reference 100-point grid (``1 / (10 N)``).
    """
    if clamp_eps <= 0.0 or clamp_eps >= 1.0:
        raise ValueError("clamp_eps must lie in (0, 1)")

    def f(i, theta: SimplexPoint):
        _check_state(i)
        share = theta.theta1 if i == 1 else theta.theta2
        share = np.clip(share, clamp_eps, 1.0)
        s = p.s1 if i == 1 else p.s2
        return s - isoelastic_utility(share, p)

    return ModelSpec(name="consumer", f=f, psi=_terminal_own_share)
