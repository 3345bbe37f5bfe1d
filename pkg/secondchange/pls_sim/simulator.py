import numpy as np
from loguru import logger
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import lfilter

from secondchange.core.series import TimeSeries
from secondchange.pls_sim.dc import PlsModelSpec, SecondOrderOracle
from secondchange.pls_sim.exception import SimulationError
from secondchange.pls_sim.innovations import InnovationStream
from secondchange.pls_sim.models import mean_function

MIN_LENGTH = 8


def _constant_runs(values: np.ndarray):
    """Yield (start, stop) of maximal runs of equal values (0-based, stop exclusive)."""
    edges = np.flatnonzero(np.diff(values) != 0) + 1
    bounds = np.concatenate([[0], edges, [values.shape[0]]])
    return zip(bounds[:-1], bounds[1:])


def _ar_filter(coefficient: np.ndarray, eps: np.ndarray, history: int, burn_in: int) -> np.ndarray:
    n = coefficient.shape[0]
    out = np.empty(n)
    for start, stop in _constant_runs(coefficient):
        phi = coefficient[start]
        # eps index of observation i (0-based) is i + history
        first = start + history - burn_in
        path = lfilter([1.0], [1.0, -phi], eps[first:stop + history])
        out[start:stop] = path[burn_in:]
    return out


def _ma_filter(coefficient: np.ndarray, eps: np.ndarray, history: int, terms: int) -> np.ndarray:
    n = coefficient.shape[0]
    windows = sliding_window_view(eps, terms)[history - terms + 1:history - terms + 1 + n]
    lagged = windows[:, ::-1]
    powers = coefficient[:, None] ** np.arange(terms)[None, :]
    return np.sum(powers * lagged, axis=1)


def simulate(spec: PlsModelSpec, n: int, seed: int) -> TimeSeries:
    """Draw Y_1..Y_n from a piecewise locally stationary model.

    Args:
        spec (PlsModelSpec): The model.
        n (int): Sample size, at least 8.
        seed (int): Master seed of the innovation stream.

    Returns:
        TimeSeries: The simulated observations.

    Raises:
        SimulationError: If n is too small.
    """
    if n < MIN_LENGTH:
        raise SimulationError(f"Sample size must be at least {MIN_LENGTH}, got {n}")
    definition = spec.definition
    t = np.arange(1, n + 1) / n
    history = max(spec.burn_in, spec.ma_truncation)
    eps = InnovationStream(seed).window(history, n)
    coefficient = definition.coefficient(t, spec.lam)
    if definition.kind == "ar":
        filtered = _ar_filter(coefficient, eps, history, spec.burn_in)
    else:
        filtered = _ma_filter(coefficient, eps, history, spec.ma_truncation)
    errors = definition.scale(t, spec.lam) * filtered
    values = errors + mean_function(t) if spec.include_mean else errors
    logger.debug(f"Simulated model {spec.model_id} (lambda={spec.lam}) n={n} seed={seed}")
    return TimeSeries(values, name=f"model_{spec.model_id}", meta={"model": spec.model_id, "lam": spec.lam, "seed": seed})


def oracle(spec: PlsModelSpec) -> SecondOrderOracle:
    """Closed-form local variance and lag-k correlation of the error process.

    Autoregressive filters use the stationary AR(1) moments; moving average
    filters use the series truncated at ``spec.ma_truncation`` terms.
    """
    definition = spec.definition
    terms = spec.ma_truncation

    def variance(t):
        t = np.asarray(t, dtype=float)
        c2 = definition.coefficient(t, spec.lam) ** 2
        s2 = definition.scale(t, spec.lam) ** 2
        if definition.kind == "ar":
            return s2 / (1.0 - c2)
        return s2 * (1.0 - c2 ** terms) / (1.0 - c2)

    def lag_correlation(t, k: int):
        t = np.asarray(t, dtype=float)
        c = definition.coefficient(t, spec.lam)
        if definition.kind == "ar":
            return c ** k
        if k >= terms:
            return np.zeros_like(c)
        return c ** k * (1.0 - c ** (2 * (terms - k))) / (1.0 - c ** (2 * terms))

    return SecondOrderOracle(variance=variance, lag_correlation=lag_correlation)
