"""Evaluation kernels shared by every solver in the suite.

A two-state game is described by the fraction ``zeta`` of players in state 1,
so the population distribution is ``theta = (zeta, 1 - zeta)``.  All functions
here are pure; scalars and numpy arrays both work for ``zeta`` and the value
components, which is what the grid solvers rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

STATES = (1, 2)


def positive_part(x):
    """``(x)+`` with value 0 at ``x = 0``."""
    return np.maximum(x, 0.0)


def other_state(i: int) -> int:
    _check_state(i)
    return 2 if i == 1 else 1


def _check_state(i: int) -> None:
    if i not in STATES:
        raise ValueError(f"state must be 1 or 2, got {i!r}")


class SimplexPoint(NamedTuple):
    """Point of the one-dimensional simplex, theta = (zeta, 1 - zeta)."""

    zeta: float

    @property
    def theta1(self):
        return self.zeta

    @property
    def theta2(self):
        return 1.0 - self.zeta


class ValuePair(NamedTuple):
    """Values (u1, u2) of the two states at one point in time and space."""

    u1: float
    u2: float


@dataclass(frozen=True)
class PotentialPair:
    """Potential ``F`` and terminal potential ``Psi0`` of a potential game.

    Both callables take the two coordinates ``(theta1, theta2)`` separately so
    that the partial derivatives can be checked by centred differences off the
    line ``theta1 + theta2 = 1``.
    """

    F: Callable
    Psi0: Callable


@dataclass(frozen=True)
class ModelSpec:
    """A two-state game: coupling cost, terminal values, optional potential.

    ``f(i, theta)`` is the running-cost coupling and ``psi(i, theta)`` the
    terminal value for state ``i`` at a :class:`SimplexPoint` ``theta``.  When
    ``potential`` is present, ``f(i, .)`` must agree with the gradient of
    ``potential.F`` (checked numerically on the grid by the test suite).
    """

    name: str
    f: Callable
    psi: Callable
    potential: PotentialPair | None = None

    @property
    def is_potential(self) -> bool:
        return self.potential is not None


def hamiltonian_h(z: ValuePair, theta: SimplexPoint, i: int, model: ModelSpec):
    """Hamiltonian of the quadratic switching cost.

    ``h(z, theta, i) = f(i, theta) - ((z^i - z^j)+)^2 / 2`` with ``j`` the
    other state; depends on ``z`` only through ``z.u1 - z.u2``.
    """
    _check_state(i)
    diff = z.u1 - z.u2 if i == 1 else z.u2 - z.u1
    return model.f(i, theta) - 0.5 * positive_part(diff) ** 2


def optimal_rate(z: ValuePair, theta: SimplexPoint, i: int):
    """Optimal switching rates ``(alpha*_1, alpha*_2)`` for a player in state ``i``.

    The off-diagonal component is the clipped value difference; the diagonal
    one is fixed by the convention that the components sum to zero.
    """
    _check_state(i)
    if i == 1:
        a = positive_part(z.u1 - z.u2)
        return (-a, a)
    a = positive_part(z.u2 - z.u1)
    return (a, -a)


def drift_g(U: ValuePair, theta: SimplexPoint):
    """Mean-field drift ``g1``; the second component is ``g2 = -g1``."""
    return -theta.theta1 * positive_part(U.u1 - U.u2) + theta.theta2 * positive_part(
        U.u2 - U.u1
    )
