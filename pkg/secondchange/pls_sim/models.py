"""Filter definitions of the simulation models.

Every model produces errors e_i = s(t_i) * H(t_i, F_i) with a geometric filter
H(t, F_i) = sum_j c(t)^j eps_{i-j}. Autoregressive models ("ar") have a
piecewise constant coefficient and are run as a warm-started recursion; moving
average models ("ma") have a smoothly varying coefficient and are evaluated
as a truncated series.
"""
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

MODEL_ID = Literal["I", "II", "III", "IV", "V", "VI", "I'", "II'", "III'", "IV'"]
TEST_KIND = Literal["variance", "correlation", "relevant-variance", "relevant-correlation"]

BREAK = 0.5


def mean_function(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return 8.0 * (-((t - 0.5) ** 2) + 0.25)


def _a(t):
    return 0.25 + t / 2.0


def _b(t):
    return 0.5 - (t - 0.5) ** 2


def _bell(t):
    return 1.0 - (t - 0.5) ** 2


def _before(t):
    return np.asarray(t, dtype=float) <= BREAK


@dataclass(frozen=True)
class FilterDefinition:
    kind: Literal["ar", "ma"]
    coefficient: Callable[[np.ndarray, float], np.ndarray]
    scale: Callable[[np.ndarray, float], np.ndarray]
    test: TEST_KIND
    break_point: Optional[float]
    variance_break: bool
    delta: Optional[float] = None
    lambda_range: Optional[tuple] = None


def _piecewise(before, after):
    return lambda t, lam: np.where(_before(t), before(t, lam), after(t, lam))


def _const(value):
    return lambda t, lam: np.full(np.shape(t), float(value))


MODELS: dict = {
    "I": FilterDefinition(
        kind="ar",
        coefficient=_piecewise(_const(0.5), _const(-0.5)),
        scale=_const(0.25),
        test="variance",
        break_point=BREAK,
        variance_break=False,
    ),
    "II": FilterDefinition(
        kind="ma",
        coefficient=lambda t, lam: _a(t),
        scale=lambda t, lam: np.sqrt(1.0 - _a(t) ** 2) / 4.0,
        test="variance",
        break_point=None,
        variance_break=False,
    ),
    "III": FilterDefinition(
        kind="ma",
        coefficient=_piecewise(lambda t, lam: _a(t), lambda t, lam: _b(t)),
        scale=_piecewise(
            lambda t, lam: np.sqrt(1.0 - _a(t) ** 2) / 8.0,
            lambda t, lam: np.sqrt(2.0 * (1.0 - _b(t) ** 2)) / 8.0,
        ),
        test="relevant-variance",
        break_point=BREAK,
        variance_break=True,
        delta=1.0 / 64.0,
    ),
    "IV": FilterDefinition(
        kind="ar",
        coefficient=_const(0.3),
        scale=lambda t, lam: np.sqrt(_bell(t)) / 4.0,
        test="correlation",
        break_point=None,
        variance_break=False,
    ),
    "V": FilterDefinition(
        kind="ar",
        coefficient=_const(0.3),
        scale=_piecewise(
            lambda t, lam: np.sqrt(_bell(t)) / 4.0,
            lambda t, lam: np.sqrt(1.0 - 0.5 * np.sin(t)) / 4.0,
        ),
        test="correlation",
        break_point=BREAK,
        variance_break=True,
    ),
    "VI": FilterDefinition(
        kind="ar",
        coefficient=_piecewise(_const(0.5), _const(0.7)),
        scale=lambda t, lam: np.sqrt(_bell(t)) / 8.0,
        test="relevant-correlation",
        break_point=BREAK,
        variance_break=True,
        delta=0.2,
    ),
    "I'": FilterDefinition(
        kind="ar",
        coefficient=_piecewise(_const(0.5), _const(-0.5)),
        scale=_piecewise(_const(0.25), lambda t, lam: np.full(np.shape(t), np.sqrt(1.0 + lam) / 4.0)),
        test="variance",
        break_point=BREAK,
        variance_break=True,
        lambda_range=(-1.0, np.inf),
    ),
    "II'": FilterDefinition(
        kind="ma",
        coefficient=_piecewise(lambda t, lam: _a(t), lambda t, lam: _b(t)),
        scale=_piecewise(
            lambda t, lam: np.sqrt(1.0 - _a(t) ** 2) / 8.0,
            lambda t, lam: np.sqrt((2.0 + lam) * (1.0 - _b(t) ** 2)) / 8.0,
        ),
        test="relevant-variance",
        break_point=BREAK,
        variance_break=True,
        delta=1.0 / 64.0,
        lambda_range=(-2.0, np.inf),
    ),
    "III'": FilterDefinition(
        kind="ar",
        coefficient=_piecewise(_const(0.3), lambda t, lam: np.full(np.shape(t), 0.3 - lam)),
        scale=lambda t, lam: np.sqrt(_bell(t)) / 4.0,
        test="correlation",
        break_point=BREAK,
        variance_break=True,
        lambda_range=(-0.7, 1.3),
    ),
    "IV'": FilterDefinition(
        kind="ar",
        coefficient=_piecewise(lambda t, lam: np.full(np.shape(t), 0.5 - lam), _const(0.7)),
        scale=lambda t, lam: np.sqrt(_bell(t)) / 8.0,
        test="relevant-correlation",
        break_point=BREAK,
        variance_break=True,
        delta=0.2,
        lambda_range=(-0.5, 1.5),
    ),
}
