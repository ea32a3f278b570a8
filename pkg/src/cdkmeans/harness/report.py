"""CSV output for experiment results."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import astuple, dataclass, fields

from ..theory import (
    StepErrorInputs,
    assignment_error_prob,
    assignment_error_prob_convolved,
    centroid_error_prob,
)
from .config import ErrorEstimate, ExperimentConfig, RateEstimate

EXPERIMENTS = ("assign", "centroid", "kmeans", "theory-assign", "theory-centroid")


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    N: int
    M: int
    d_v: int
    d_c: int
    rate: float
    K: int
    J: int
    p: float
    p_c: float
    Nt: int
    p_hat: float | None
    ci_lo: float | None
    ci_hi: float | None
    theory_literal: float | None
    theory_convolved: float | None
    seed: int


COLUMNS = tuple(f.name for f in fields(ResultRow))


def theory_values(experiment: str, cfg: ExperimentConfig, p: float):
    code, src = cfg.ldpc, cfg.source
    inp = StepErrorInputs(M=code.M, K=src.K, d_c=code.d_c, p=p, p_c=src.p_c, J_k=cfg.J_k)
    if experiment in ("assign", "theory-assign"):
        return assignment_error_prob(inp), assignment_error_prob_convolved(inp)
    if experiment in ("centroid", "theory-centroid"):
        # the centroid approximation does not involve p_c, so both variants agree
        v = centroid_error_prob(inp)
        return v, v
    return None, None


def result_rows(experiment: str, cfg: ExperimentConfig, estimates=None) -> list[ResultRow]:
    """One row per sweep point.  ``estimates=None`` gives theory-only rows."""
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}")
    code, src = cfg.ldpc, cfg.source
    J = cfg.J_k if experiment.endswith("centroid") else src.J
    rows = []
    points = cfg.points
    ests: list[ErrorEstimate | None] = list(estimates) if estimates is not None else [None] * len(points)
    for p, est in zip(points, ests):
        lit, conv = theory_values(experiment, cfg, p)
        rows.append(
            ResultRow(
                experiment=experiment,
                N=code.N,
                M=code.M,
                d_v=code.d_v,
                d_c=code.d_c,
                rate=code.rate,
                K=src.K,
                J=J,
                p=p,
                p_c=src.p_c,
                Nt=cfg.trials if est is not None else 0,
                p_hat=est.p_hat if est is not None else None,
                ci_lo=est.ci95[0] if est is not None else None,
                ci_hi=est.ci95[1] if est is not None else None,
                theory_literal=lit,
                theory_convolved=conv,
                seed=cfg.master_seed,
            )
        )
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _sort_key(row: ResultRow):
    return (row.experiment, row.N, row.M, row.d_v, row.K, row.J, row.p_c, row.p, row.seed)


def _write(text: str, sink) -> None:
    if isinstance(sink, (str, os.PathLike)):
        try:
            with open(sink, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write {os.fspath(sink)}: {exc.strerror}") from exc
    else:
        sink.write(text)


def dumps_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in sorted(rows, key=_sort_key):
        w.writerow([_fmt(v) for v in astuple(row)])
    return buf.getvalue()


def write_csv(rows, sink) -> None:
    """Write result rows with a header, sorted deterministically, to a path or stream."""
    _write(dumps_csv(rows), sink)


RATE_COLUMNS = (
    "J", "N", "K", "p", "p_c", "columns", "r_hat", "stderr", "conditional_rate",
    "lower_bound", "centroid_overhead", "assignment_overhead", "upper_bound", "seed",
)


def dumps_rate_csv(entries) -> str:
    """``entries`` is an iterable of ``(SourceParams, RateEstimate, seed)``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RATE_COLUMNS)
    for params, est, seed in entries:
        est: RateEstimate
        w.writerow([_fmt(v) for v in (
            params.J, params.N, params.K, params.p, params.p_c, est.columns_sampled,
            est.r_hat, est.stderr, est.conditional_rate, est.lower_bound,
            est.centroid_overhead, est.assignment_overhead, est.upper_bound, seed,
        )])
    return buf.getvalue()


def write_rate_csv(entries, sink) -> None:
    _write(dumps_rate_csv(entries), sink)
