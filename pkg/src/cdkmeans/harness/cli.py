"""Command-line entry point: ``cdkmeans <subcommand> [flags]``.

Exit codes: 0 success, 2 configuration error, 3 code construction failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..exceptions import ConstructionError, UsageError
from ..kmeans import INIT_METHODS, KMeansConfig
from ..ldpc import LdpcCode, build_peg, dumps_alist, load_alist
from ..source import SourceParams
from .config import CodeSpec, ExperimentConfig
from .montecarlo import run_assignment_mc, run_centroid_mc, run_kmeans_mc
from .rate import estimate_rate_mc
from .report import dumps_csv, dumps_rate_csv, result_rows

log = logging.getLogger("cdkmeans")

EXIT_OK, EXIT_CONFIG, EXIT_BUILD, EXIT_IO = 0, 2, 3, 4

REPRO_SWEEP = (0.02, 0.04, 0.06, 0.08, 0.10, 0.12, 0.14, 0.16)
REPRO_CODES = ((1000, 250, 2), (1000, 500, 2))


def _p_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _flatten(groups) -> list[float]:
    return [p for g in groups or [] for p in g]


def _add_code_flags(ap):
    ap.add_argument("--n", type=int, default=1000, help="source block length N")
    ap.add_argument("--m", type=int, default=500, help="syndrome length M")
    ap.add_argument("--dv", type=int, default=2, help="ones per row of H")
    ap.add_argument("--code", metavar="ALIST", help="load H from an alist file instead of PEG")
    ap.add_argument("--code-seed", type=int, default=0, help="PEG construction seed")


def _add_source_flags(ap, j_help="number of sensors J"):
    ap.add_argument("--k", type=int, default=4, help="number of clusters K")
    ap.add_argument("--j", type=int, default=200, help=j_help)
    ap.add_argument("--p", type=_p_list, action="append", help="noise probability, comma list allowed")
    ap.add_argument("--pc", type=float, default=0.1, help="centroid bit probability p_c")


def _add_run_flags(ap):
    ap.add_argument("--trials", type=int, default=1000, help="Monte Carlo trials Nt")
    ap.add_argument("--seed", type=int, default=0, help="master seed")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="output CSV (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    ap = argparse.ArgumentParser(prog="cdkmeans", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    peg = add("peg-build", help="build a regular PEG code and write it as alist")
    peg.add_argument("--n", type=int, default=1000)
    peg.add_argument("--m", type=int, default=500)
    peg.add_argument("--dv", type=int, default=2)
    peg.add_argument("--seed", type=int, default=0)
    peg.add_argument("--out", help="alist output path (default: stdout)")

    th = add("theory-sweep", help="tabulate the approximate step error probabilities")
    _add_code_flags(th)
    _add_source_flags(th, j_help="cluster size J_k for the centroid step")
    th.add_argument("--seed", type=int, default=0)
    th.add_argument("--out")

    for name, j_help, text in (
        ("sim-assign", "number of sensors J (reported only)", "Monte Carlo of the assignment step"),
        ("sim-centroid", "cluster size J_k", "Monte Carlo of the centroid step"),
        ("sim-kmeans", "number of sensors J", "Monte Carlo of the full K-means pipeline"),
    ):
        sp = add(name, help=text)
        _add_code_flags(sp)
        _add_source_flags(sp, j_help=j_help)
        _add_run_flags(sp)
        if name == "sim-kmeans":
            sp.add_argument("--iters", type=int, default=10, help="iteration cap L")
            sp.add_argument("--init", choices=INIT_METHODS, default="kmeans++")
            sp.add_argument("--restarts", type=int, default=1)
            sp.add_argument("--equal-sizes", action="store_true")

    rt = add("rate", help="estimate the joint-entropy rate R_d")
    rt.add_argument("--n", type=int, default=1000)
    _add_source_flags(rt)
    rt.add_argument("--columns", type=int, default=10000)
    rt.add_argument("--seed", type=int, default=0)
    rt.add_argument("--out")

    rp = add("repro-paper", help="run every experiment family at a chosen scale")
    rp.add_argument("--trials", type=int, default=1000, help="trials for the step experiments")
    rp.add_argument("--kmeans-trials", type=int, default=None, help="default: trials // 20")
    rp.add_argument("--columns", type=int, default=10000)
    rp.add_argument("--restarts", type=int, default=1)
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--workers", type=int, default=1)
    rp.add_argument("--out", required=True, help="results CSV; rates go to <stem>-rate.csv")
    return ap


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {out}: {exc.strerror}") from None


def _code_from_args(args) -> CodeSpec | LdpcCode:
    if args.code:
        try:
            return load_alist(args.code)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot read {args.code}: {exc.strerror}") from None
    return CodeSpec(args.n, args.m, args.dv, args.code_seed)


def _config(args, *, kmeans=None, cluster_size=None, trials=None) -> ExperimentConfig:
    code = _code_from_args(args)
    n = code.N if isinstance(code, LdpcCode) else args.n
    sweep = _flatten(args.p) or [0.1]
    src = SourceParams(J=max(args.j, args.k), N=n, K=args.k, p=sweep[0], p_c=args.pc)
    return ExperimentConfig(
        source=src,
        code=code,
        trials=trials if trials is not None else getattr(args, "trials", 1),
        kmeans=kmeans,
        sweep=tuple(sweep),
        master_seed=args.seed,
        cluster_size=cluster_size,
        equal_sizes=getattr(args, "equal_sizes", False),
        workers=getattr(args, "workers", 1),
    )


def _cmd_peg(args) -> None:
    code = build_peg(args.n, args.m, args.dv, args.seed)
    log.info("built %s, girth %s", code.code_id, code.girth())
    _emit(dumps_alist(code), args.out)


def _cmd_theory(args) -> None:
    cfg = _config(args, cluster_size=args.j, trials=1)
    rows = result_rows("theory-assign", cfg) + result_rows("theory-centroid", cfg)
    _emit(dumps_csv(rows), args.out)


def _cmd_sim(args) -> None:
    if args.command == "sim-assign":
        cfg = _config(args)
        rows = result_rows("assign", cfg, run_assignment_mc(cfg))
    elif args.command == "sim-centroid":
        cfg = _config(args, cluster_size=args.j)
        rows = result_rows("centroid", cfg, run_centroid_mc(cfg))
    else:
        km = KMeansConfig(K=args.k, L=args.iters, init=args.init, restarts=args.restarts)
        cfg = _config(args, kmeans=km)
        rows = result_rows("kmeans", cfg, run_kmeans_mc(cfg))
    _emit(dumps_csv(rows), args.out)


def _cmd_rate(args) -> None:
    entries = []
    for p in _flatten(args.p) or [0.1]:
        params = SourceParams(J=args.j, N=args.n, K=args.k, p=p, p_c=args.pc)
        entries.append((params, estimate_rate_mc(params, args.columns, args.seed), args.seed))
    _emit(dumps_rate_csv(entries), args.out)


def repro_paper(trials=1000, kmeans_trials=None, columns=10000, restarts=1, seed=0, workers=1):
    """Every experiment family on both codes.  Returns ``(result_rows, rate_entries)``."""
    kmeans_trials = kmeans_trials or max(1, trials // 20)
    rows = []
    for N, M, d_v in REPRO_CODES:
        code = build_peg(N, M, d_v, 0)
        for p_c in (0.1, 0.05):
            src = SourceParams(J=200, N=N, K=4, p=0.1, p_c=p_c)
            km = KMeansConfig(K=4, L=10, init="kmeans++", restarts=restarts)
            base = dict(source=src, code=code, master_seed=seed, workers=workers)
            if p_c == 0.1:
                step = ExperimentConfig(trials=trials, sweep=REPRO_SWEEP, cluster_size=50, **base)
                rows += result_rows("assign", step, run_assignment_mc(step))
                rows += result_rows("centroid", step, run_centroid_mc(step))
            kcfg = ExperimentConfig(trials=kmeans_trials, kmeans=km, sweep=REPRO_SWEEP, **base)
            rows += result_rows("kmeans", kcfg, run_kmeans_mc(kcfg))
            log.info("finished code M=%d, p_c=%s", M, p_c)
    entries = []
    # both ways of pairing 0.05 with 0.1
    for p_c, p in ((0.1, 0.1), (0.05, 0.1), (0.1, 0.05)):
        params = SourceParams(J=200, N=1000, K=4, p=p, p_c=p_c)
        entries.append((params, estimate_rate_mc(params, columns, seed), seed))
    return rows, entries


def _cmd_repro(args) -> None:
    rows, entries = repro_paper(
        args.trials, args.kmeans_trials, args.columns, args.restarts, args.seed, args.workers
    )
    out = Path(args.out)
    _emit(dumps_csv(rows), out)
    _emit(dumps_rate_csv(entries), out.with_name(out.stem + "-rate" + out.suffix))


COMMANDS = {
    "peg-build": _cmd_peg,
    "theory-sweep": _cmd_theory,
    "sim-assign": _cmd_sim,
    "sim-centroid": _cmd_sim,
    "sim-kmeans": _cmd_sim,
    "rate": _cmd_rate,
    "repro-paper": _cmd_repro,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        COMMANDS[args.command](args)
    except ConstructionError as exc:
        print(f"cdkmeans: construction failed: {exc}", file=sys.stderr)
        return EXIT_BUILD
    except (UsageError, ValueError) as exc:
        print(f"cdkmeans: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cdkmeans: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
