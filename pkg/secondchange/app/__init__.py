import logging
from datetime import datetime, timezone
from typing import Callable, Dict

import pandas as pd

from secondchange import __version__
from secondchange.bandwidth.selectors import default_mv_grid, gcv_select, gcv_select_variance, mv_select
from secondchange.bandwidth.tuning import resolve_tuning, statistic_path
from secondchange.cli.dc import BandwidthReport, LocateReport, Provenance, ReportDocument, SelectionRecord
from secondchange.cli.ingest import ingest
from secondchange.cli.report import write_bytes, write_report
from secondchange.cli.run_config import RunConfig
from secondchange.cli.simstudy import SimulationStudy
from secondchange.core.series import TimeSeries
from secondchange.core.settings import RuntimeSettings
from secondchange.cusum_tests.dc import BootstrapConfig, LocatorRecord
from secondchange.cusum_tests.procedures import (
    classical_correlation_test,
    classical_variance_test,
    fit_residuals,
    fit_variance,
)
from secondchange.cusum_tests.segments import segment_analysis
from secondchange.pls_sim.dc import PlsModelSpec
from secondchange.pls_sim.simulator import simulate
from secondchange.relevant_tests.estimators import correlation_cp_argmax, variance_cp_argmax
from secondchange.relevant_tests.procedures import (
    decide,
    p_value_curve,
    run_relevant_correlation,
    run_relevant_variance,
)
from secondchange.smoothing.kernel import get_kernel
from secondchange.smoothing.local_linear import local_linear_fit, residuals


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class MainApp:
    """Runs one subcommand and writes its report."""

    def __init__(self, settings: RuntimeSettings = None, logger: logging.Logger = logging.getLogger(__name__)) -> None:
        self.settings = settings or RuntimeSettings()
        self.logger = logger
        self.handlers: Dict[str, Callable[[RunConfig, ReportDocument], None]] = {
            "test-variance": self.test_variance,
            "test-correlation": self.test_correlation,
            "test-relevant-variance": self.test_relevant,
            "test-relevant-correlation": self.test_relevant,
            "locate": self.locate,
            "bandwidth": self.bandwidth,
            "simstudy": self.simstudy,
        }

    def run(self, cfg: RunConfig) -> None:
        self.logger.info(f"{self.__class__.__name__} start: {cfg.subcommand}")
        if cfg.subcommand == "schema":
            write_bytes(ReportDocument.schema_bytes(), cfg.out)
        elif cfg.subcommand == "simulate":
            self.simulate(cfg)
        else:
            document = ReportDocument(provenance=self._provenance(cfg))
            self.handlers[cfg.subcommand](cfg, document)
            if self.settings.report_timestamps:
                document.provenance.finished = _now()
            write_report(document, cfg.out, cfg.format)
        self.logger.info(f"{self.__class__.__name__} finish: {cfg.subcommand}")

    def _provenance(self, cfg: RunConfig) -> Provenance:
        return Provenance(
            version=__version__,
            subcommand=cfg.subcommand,
            seed=cfg.seed,
            input=str(cfg.input) if cfg.input is not None else None,
            column=cfg.column,
            started=_now() if self.settings.report_timestamps else None,
        )

    @staticmethod
    def _bootstrap(cfg: RunConfig) -> BootstrapConfig:
        return BootstrapConfig(
            m=cfg.window_m, B=cfg.B, seed=cfg.seed, alphas=cfg.alphas, threads=cfg.threads, chunk_size=cfg.chunk_size
        )

    def _series(self, cfg: RunConfig) -> TimeSeries:
        series = ingest(cfg.input, cfg.column)
        self.logger.info(f"Loaded {series.n} observations of {series.name!r}")
        return series

    def _tuning(self, cfg: RunConfig, series: TimeSeries, test: str, variant: str = "piecewise"):
        tuning = resolve_tuning(
            series,
            test,
            cfg.bandwidth_for(test),
            cfg.variance_bandwidth,
            kernel=cfg.kernel,
            k=cfg.lag,
            variance_variant=variant,
            L=cfg.L,
            zeta=cfg.zeta,
            threads=cfg.threads,
        )
        self.logger.info(f"Bandwidths: b={tuning.b:.6g} ({tuning.bandwidth_source}), c={tuning.c}")
        return tuning

    def test_variance(self, cfg: RunConfig, document: ReportDocument) -> None:
        series = self._series(cfg)
        tuning = self._tuning(cfg, series, "variance")
        if cfg.segments:
            document.segments = segment_analysis(series, "variance", tuning, self._bootstrap(cfg), logger=self.logger)
        else:
            document.report = classical_variance_test(series, tuning, self._bootstrap(cfg), self.logger)

    def test_correlation(self, cfg: RunConfig, document: ReportDocument) -> None:
        series = self._series(cfg)
        variant = "smooth" if cfg.assume_no_variance_break else "piecewise"
        tuning = self._tuning(cfg, series, "correlation", variant)
        if cfg.segments:
            document.segments = segment_analysis(
                series, "correlation", tuning, self._bootstrap(cfg), cfg.lag, variant, self.logger
            )
        else:
            document.report = classical_correlation_test(
                series, cfg.lag, variant, tuning, self._bootstrap(cfg), self.logger
            )

    def test_relevant(self, cfg: RunConfig, document: ReportDocument) -> None:
        series = self._series(cfg)
        test = cfg.subcommand.replace("test-", "")
        tuning = self._tuning(cfg, series, test)
        if test == "relevant-variance":
            run = run_relevant_variance(series, tuning, self._bootstrap(cfg), self.logger)
        else:
            run = run_relevant_correlation(
                series, cfg.lag, tuning, self._bootstrap(cfg), cfg.assume_no_variance_break, self.logger
            )
        if cfg.delta is not None:
            document.relevant = decide(run, cfg.delta, cfg.alphas)
        if cfg.delta_grid:
            document.curve = p_value_curve(run, cfg.delta_grid, cfg.alphas)

    def locate(self, cfg: RunConfig, document: ReportDocument) -> None:
        series = self._series(cfg)
        tuning = self._tuning(cfg, series, "correlation")
        res = fit_residuals(series, tuning)
        var_fit, window, _, _ = fit_variance(res, tuning, "piecewise")
        tilde = variance_cp_argmax(res)
        hat = correlation_cp_argmax(res, var_fit, cfg.lag)
        document.locate = LocateReport(
            n=series.n,
            b_n=tuning.b,
            c_n=tuning.c,
            lag=cfg.lag,
            locators=[
                window,
                LocatorRecord(method="cusum-argmax-variance", index=tilde.index, fraction=tilde.fraction, value=tilde.objective),
                LocatorRecord(method="cusum-argmax-correlation", index=hat.index, fraction=hat.fraction, value=hat.objective),
            ],
        )

    def bandwidth(self, cfg: RunConfig, document: ReportDocument) -> None:
        series = self._series(cfg)
        kernel = get_kernel(cfg.kernel)
        mean = gcv_select(series, kernel)
        pilot = residuals(series, local_linear_fit(series, mean.bandwidth, kernel))
        variance = gcv_select_variance(pilot, kernel)
        base = resolve_tuning(
            series, cfg.target, mean.bandwidth, variance.bandwidth, kernel=cfg.kernel, k=cfg.lag, L=cfg.L, zeta=cfg.zeta
        )
        mv = mv_select(default_mv_grid(series.n), statistic_path(series, cfg.target, base, cfg.lag), cfg.threads)
        document.bandwidth = BandwidthReport(
            n=series.n,
            target=cfg.target,
            selections=[
                SelectionRecord(
                    method="gcv", smoother="mean", bandwidth=mean.bandwidth,
                    grid=mean.grid.tolist(), values=mean.criterion.tolist(),
                ),
                SelectionRecord(
                    method="gcv", smoother="variance", bandwidth=variance.bandwidth,
                    grid=variance.grid.tolist(), values=variance.criterion.tolist(),
                ),
                SelectionRecord(
                    method="mv", smoother="mean", bandwidth=mv.bandwidth, grid=mv.grid.tolist(),
                    values=mv.statistics.tolist(), sd_profile=mv.sd_profile.tolist(),
                ),
            ],
        )

    def simulate(self, cfg: RunConfig) -> None:
        spec = PlsModelSpec.build(model_id=cfg.model, lam=cfg.lambdas[0])
        series = simulate(spec, cfg.n, cfg.seed)
        payload = pd.DataFrame({"y": series.values}).to_csv(index=False, lineterminator="\n")
        write_bytes(payload.encode("utf-8"), cfg.out)
        self.logger.info(f"Simulated model {spec.model_id} n={cfg.n} seed={cfg.seed}")

    def simstudy(self, cfg: RunConfig, document: ReportDocument) -> None:
        study = SimulationStudy(
            runs=cfg.runs, n=cfg.n, B=cfg.B, seed=cfg.seed, alphas=cfg.alphas, threads=cfg.threads, lag=cfg.lag,
            logger=self.logger,
        )
        document.study = study.run(cfg.model, cfg.lambdas, cfg.bandwidths or ("mv", "gcv"), cfg.deltas)
