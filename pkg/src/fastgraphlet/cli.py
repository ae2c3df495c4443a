"""Command-line front end.

Exit codes: 0 success, 1 parse error (input or arguments), 2 structural
error, 3 count overflow, 4 conversion inconsistency or failed oracle check,
5 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from .dictionary import parse_dictionary, warn_incomplete_family
from .errors import FastGraphletError
from .fields import FrequencyField
from .graph import SanitizeOptions, build_adjacency, parse_edge_list, parse_matrix_market, read_graph
from .kernels import TransformStats
from .transform import graphlet_transform

log = logging.getLogger("fastgraphlet")

EXIT_OK, EXIT_PARSE, EXIT_STRUCTURE, EXIT_OVERFLOW, EXIT_INCONSISTENT, EXIT_IO = range(6)


@dataclass
class RunConfig:
    input_path: str
    format: str = "auto"
    dict_spec: str = "all"
    output_path: str | None = None
    emit: str = "net"
    separator: str = "tab"
    header: bool = True
    symmetrize: bool = True
    lenient: bool = False
    complete_family: bool = False
    threads: str | None = None
    timing: bool = False
    oracle: bool = False


def format_table(field: FrequencyField, labels: np.ndarray, sep: str, header: bool) -> str:
    delim = "\t" if sep == "tab" else ","
    lines = []
    if header:
        lines.append(delim.join(["v"] + field.column_names()))
    for label, row in zip(labels.tolist(), field.values.tolist()):
        lines.append(delim.join(map(str, [label] + row)))
    return "\n".join(lines) + "\n"


def _load(cfg: RunConfig):
    if cfg.input_path == "-":
        text = sys.stdin.read()
        fmt = cfg.format
        if fmt == "auto":
            fmt = "mtx" if text.lstrip().lower().startswith("%%matrixmarket") else "edgelist"
        ec = parse_matrix_market(text) if fmt == "mtx" else parse_edge_list(text)
    else:
        ec = read_graph(cfg.input_path, cfg.format)
    return build_adjacency(ec, SanitizeOptions(symmetrize=cfg.symmetrize))


def _write(path, text):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        d = parse_dictionary(cfg.dict_spec)
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    for note in [] if cfg.complete_family else warn_incomplete_family(d):
        print(f"advisory: {note}", file=stderr)

    try:
        g = _load(cfg)
        stats = TransformStats() if cfg.timing else None
        raw, net = graphlet_transform(
            g, d, threads=cfg.threads, lenient=cfg.lenient, stats=stats, complete_family=cfg.complete_family
        )
        if cfg.oracle:
            from .oracle import cross_check

            report = cross_check(g, raw, net, induced=cfg.complete_family)
            print(report, file=stderr)
            if not report.passed:
                return EXIT_INCONSISTENT
        tables = []
        if cfg.emit in ("raw", "both"):
            tables.append(("raw", format_table(raw, g.labels, cfg.separator, cfg.header)))
        if cfg.emit in ("net", "both"):
            tables.append(("net", format_table(net, g.labels, cfg.separator, cfg.header)))
        if cfg.output_path is None:
            stdout.write("\n".join(text for _, text in tables))
        elif len(tables) == 1:
            _write(cfg.output_path, tables[0][1])
        else:
            for kind, text in tables:
                _write(f"{cfg.output_path}.{kind}", text)
        if stats is not None:
            print(f"n={g.n} m={g.m} dmax={g.d_max} dictionary={list(d.selected)}", file=stderr)
            print(stats.report(), file=stderr)
    except FastGraphletError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fastgraphlet", description="Per-vertex graphlet frequencies of a sparse undirected graph.")
    p.add_argument("input", help="edge list or Matrix Market file ('-' for stdin)")
    p.add_argument("--format", choices=("auto", "edgelist", "mtx"), default="auto")
    p.add_argument("--dict", dest="dict_spec", default="all", help="graphlet ids, e.g. 'all', '0-4', '0,1,4,15'")
    p.add_argument("-o", "--output", dest="output_path", help="output file; with --emit both, writes PATH.raw and PATH.net")
    p.add_argument("--emit", choices=("raw", "net", "both"), default="net")
    p.add_argument("--sep", dest="separator", choices=("tab", "comma"), default="tab")
    p.add_argument("--header", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument(
        "--symmetrize",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="take the union with reversed edges; --no-symmetrize rejects one-sided input",
    )
    p.add_argument("--lenient", action="store_true", help="clamp negative net counts to 0 instead of failing")
    p.add_argument(
        "--complete-family",
        action="store_true",
        help="also compute left-out supergraphs so every net column is an induced count",
    )
    p.add_argument(
        "--threads",
        default=os.environ.get("FASTGRAPHLET_THREADS"),
        help="worker count or 'auto' (default $FASTGRAPHLET_THREADS or 1)",
    )
    p.add_argument("--timing", action="store_true", help="report per-kernel times and memory counters on stderr")
    p.add_argument("--oracle", action="store_true", help="cross-check against brute-force enumeration (small graphs)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    verbose = args.pop("verbose")
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = RunConfig(input_path=args.pop("input"), **args)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
