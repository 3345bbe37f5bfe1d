import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from secondchange.bandwidth.tuning import Choice, resolve_tuning
from secondchange.cli.dc import StudyRow, StudyTable
from secondchange.core.exception import DataError, UsageError
from secondchange.core.numeric import derive_seed, level_key
from secondchange.cusum_tests.dc import BootstrapConfig
from secondchange.cusum_tests.procedures import classical_correlation_test, classical_variance_test
from secondchange.pls_sim.dc import PlsModelSpec
from secondchange.pls_sim.simulator import simulate
from secondchange.relevant_tests.procedures import relevant_correlation_test, relevant_variance_test

DATA_STREAM = 2
BOOTSTRAP_STREAM = 3


@dataclass(frozen=True)
class StudyCell:
    spec: PlsModelSpec
    bandwidth: Choice
    delta: Optional[float]


def bandwidth_label(choice: Choice) -> str:
    return choice if isinstance(choice, str) else repr(float(choice))


class SimulationStudy:
    """Monte Carlo rejection frequencies of the test a model is built for.

    Run r of every cell sees the same simulated sample (seed stream 2, r) and the
    same bootstrap multipliers (stream 3, r), so cells differ only in their tuning.
    """

    def __init__(
            self,
            runs: int,
            n: int,
            B: int,
            seed: int,
            alphas: Sequence[float],
            threads: int = 1,
            lag: int = 1,
            logger: logging.Logger = logging.getLogger(__name__),
    ) -> None:
        self.runs = runs
        self.n = n
        self.B = B
        self.seed = seed
        self.alphas = tuple(alphas)
        self.threads = threads
        self.lag = lag
        self.logger = logger

    def _one_run(self, cell: StudyCell, r: int) -> Optional[Tuple[bool, ...]]:
        definition = cell.spec.definition
        series = simulate(cell.spec, self.n, derive_seed(self.seed, DATA_STREAM, r))
        cfg = BootstrapConfig(B=self.B, seed=derive_seed(self.seed, BOOTSTRAP_STREAM, r), alphas=self.alphas)
        test = definition.test
        variant = "piecewise" if definition.variance_break else "smooth"
        try:
            tuning = resolve_tuning(series, test, cell.bandwidth, k=self.lag, variance_variant=variant)
            if test == "variance":
                report = classical_variance_test(series, tuning, cfg)
            elif test == "correlation":
                report = classical_correlation_test(series, self.lag, variant, tuning, cfg)
            elif test == "relevant-variance":
                report = relevant_variance_test(series, cell.delta, tuning, cfg)
            else:
                report = relevant_correlation_test(series, self.lag, cell.delta, tuning, cfg)
        except DataError as ex:
            self.logger.debug(f"Run {r} of model {cell.spec.model_id} failed: {ex}")
            return None
        return tuple(report.decisions[level_key(alpha)] for alpha in self.alphas)

    def run_cell(self, cell: StudyCell) -> List[StudyRow]:
        definition = cell.spec.definition
        if definition.test.startswith("relevant") and cell.delta is None:
            raise UsageError(f"Model {cell.spec.model_id} runs a relevant test and needs a delta")
        outcomes = Parallel(n_jobs=self.threads, prefer="threads")(
            delayed(self._one_run)(cell, r) for r in range(self.runs)
        )
        completed = [outcome for outcome in outcomes if outcome is not None]
        rows = []
        for position, alpha in enumerate(self.alphas):
            rejections = sum(outcome[position] for outcome in completed)
            done = len(completed)
            rate = rejections / done if done else None
            rows.append(
                StudyRow(
                    model=cell.spec.model_id,
                    lam=cell.spec.lam,
                    n=self.n,
                    test=definition.test,
                    bandwidth=bandwidth_label(cell.bandwidth),
                    delta=cell.delta,
                    alpha=alpha,
                    runs=self.runs,
                    failed=self.runs - done,
                    rejections=rejections,
                    rate=rate,
                    se=math.sqrt(rate * (1.0 - rate) / done) if done else None,
                )
            )
        self.logger.info(
            f"Model {cell.spec.model_id} lambda={cell.spec.lam:g} bandwidth={bandwidth_label(cell.bandwidth)} "
            f"delta={cell.delta}: "
            + ", ".join(f"{row.alpha:g}->{row.rate}" for row in rows)
        )
        return rows

    def run(
            self, model: str, lambdas: Sequence[float], bandwidths: Sequence[Choice], deltas: Sequence[float] = ()
    ) -> StudyTable:
        """Rows for every (lambda, bandwidth, delta) cell, in that nesting order.

        ``deltas`` only applies to models built for a relevant test; they fall
        back to the registry threshold when it is empty.
        """
        self.logger.info(f"{self.__class__.__name__} start: model {model}, {self.runs} runs, n={self.n}, B={self.B}")
        rows = []
        for lam in lambdas:
            spec = PlsModelSpec.build(model_id=model, lam=lam)
            if spec.definition.test.startswith("relevant"):
                cell_deltas = tuple(deltas) or (spec.definition.delta,)
            else:
                cell_deltas = (None,)
            for bandwidth in bandwidths:
                for delta in cell_deltas:
                    rows.extend(self.run_cell(StudyCell(spec=spec, bandwidth=bandwidth, delta=delta)))
        self.logger.info(f"{self.__class__.__name__} finish.")
        return StudyTable(B=self.B, rows=rows)
