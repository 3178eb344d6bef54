"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import io as wio
from .analysis import compare_heights, topology_equal
from .core import DataMatrix, DissimilarityMatrix, LinkageMethod, Scale, ScaleError, ValidationError
from .engine import agglomerate, transform_heights
from .experiments import run_experiments, uniform_data

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    input: Optional[str] = None
    kind: str = "data"
    method: str = "ward.D2"
    square_input: bool = False
    sqrt_heights: bool = False
    force_scale: bool = False
    algorithm: str = "nnchain"
    seed: Optional[int] = None
    n: int = 20
    p: int = 4
    dissim_scale: str = "plain"
    formats: list = field(default_factory=lambda: ["merge-table"])
    backend: Optional[str] = None


def _load(config: RunConfig):
    if config.input is None:
        if config.seed is None:
            raise UsageError("give --input, or --seed to cluster synthetic uniform data")
        return uniform_data(config.n, config.p, config.seed), ["uniform_data(seed=%d,n=%d,p=%d)"
                                                              % (config.seed, config.n, config.p)]
    return wio.ingest(config.input, config.kind, Scale(config.dissim_scale)), [f"read {config.kind}"]


def run_cluster(config: RunConfig):
    """Run the ingest -> distances -> (square) -> agglomerate -> (sqrt) pipeline.

    Returns the dendrogram and a mapping of format name to exported bytes.
    """
    method = LinkageMethod.parse(config.method)
    for fmt in config.formats:
        if fmt not in wio.FORMATS:
            raise UsageError(f"unknown format {fmt!r}; choose from {', '.join(wio.FORMATS)}")
    obj, transforms = _load(config)
    if isinstance(obj, DataMatrix):
        dissim = obj.dissimilarities()
        transforms.append("euclidean_distances")
    else:
        dissim = obj
    if config.square_input:
        if dissim.scale is not Scale.PLAIN:
            raise UsageError("--square-input needs a data matrix or plain-scale dissimilarities")
        dissim = dissim.squared()
        transforms.append("squared_input")
    masses = obj.masses if isinstance(obj, DataMatrix) else None
    dend = agglomerate(dissim, method, masses, algorithm=config.algorithm, force=config.force_scale,
                       backend=config.backend)
    dend.metadata["transforms"] = transforms + dend.metadata.get("transforms", [])
    if config.sqrt_heights:
        dend = transform_heights(dend, "sqrt")
    dend.metadata["classification"] = classify(dend.metadata)
    return dend, {fmt: wio.export(dend, fmt) for fmt in config.formats}


def classify(meta: dict) -> str:
    """Name the run the way the Ward1/Ward2 taxonomy would."""
    method, scale, tr = meta["method"], meta["input_scale"], meta.get("transforms", [])
    if meta.get("forced_scale"):
        return f"non-Ward hierarchy ({method} on {scale} dissimilarities)"
    if method == "ward.D":
        return "Ward (squared-distance heights)" + (", square-rooted to distance scale" if "sqrt_heights" in tr else "")
    if method == "ward.D2":
        return "Ward (distance-scale heights)" + (", then square-rooted" if "sqrt_heights" in tr else "")
    return f"{method} linkage on {scale} dissimilarities"


def _formats(values):
    out = []
    for v in values or []:
        out.extend(f.strip() for f in v.split(",") if f.strip())
    return out


def _write(outputs: dict, out: Optional[str]):
    if out is None:
        for data in outputs.values():
            sys.stdout.write(data.decode())
        return
    if len(outputs) == 1:
        Path(out).write_bytes(next(iter(outputs.values())))
        return
    for fmt, data in outputs.items():
        Path(out + wio.EXTENSIONS[fmt]).write_bytes(data)


def cmd_cluster(args) -> int:
    config = RunConfig(input=args.input, kind=args.kind, method=args.method, square_input=args.square_input,
                       sqrt_heights=args.sqrt_heights, force_scale=args.force_scale, algorithm=args.algorithm,
                       seed=args.seed, n=args.n, p=args.p, dissim_scale=args.dissim_scale,
                       formats=_formats(args.format) or ["merge-table"], backend=args.backend)
    dend, outputs = run_cluster(config)
    warning = dend.metadata.get("warning")
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    _write(outputs, args.out)
    return EXIT_OK


def cmd_experiments(args) -> int:
    report = run_experiments(args.n, args.p, args.seed, backend=args.backend)
    print(f"experiments: n={report.n} p={report.p} seed={report.seed}")
    for c in report.checks:
        print(c.line())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_compare(args) -> int:
    a = wio.from_json(Path(args.first).read_text())
    b = wio.from_json(Path(args.second).read_text())
    if a.n != b.n:
        raise UsageError(f"leaf-count mismatch: {a.n} vs {b.n}")
    same = topology_equal(a, b)
    print(f"topology_equal: {same}")
    if not same:
        return EXIT_VERIFY
    dev = compare_heights(a, b, args.map)
    print(f"max_relative_height_deviation ({args.map}): {dev:.3e}")
    return EXIT_OK if dev <= args.tol else EXIT_VERIFY


def cmd_export_formats(args) -> int:
    if args.input is None:
        for fmt in wio.FORMATS:
            print(fmt)
        return EXIT_OK
    dend = wio.from_json(Path(args.input).read_text())
    fmts = _formats(args.format) or ["merge-table"]
    for fmt in fmts:
        if fmt not in wio.FORMATS:
            raise UsageError(f"unknown format {fmt!r}")
    _write({fmt: wio.export(dend, fmt) for fmt in fmts}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wardclust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    methods = [m.value for m in LinkageMethod]
    c = sub.add_parser("cluster", help="cluster a data or dissimilarity file")
    c.add_argument("--input", help="CSV file; omit with --seed for synthetic data")
    c.add_argument("--kind", choices=["data", "dissim"], default="data")
    c.add_argument("--dissim-scale", choices=["plain", "squared"], default="plain",
                   help="scale of the values in a --kind dissim file")
    c.add_argument("--method", choices=methods, default="ward.D2")
    c.add_argument("--square-input", action="store_true", help="square the dissimilarities first")
    c.add_argument("--sqrt-heights", action="store_true", help="square-root the merge heights")
    c.add_argument("--force-scale", action="store_true",
                   help="allow a method on the wrong input scale (non-Ward result)")
    c.add_argument("--algorithm", choices=["naive", "nnchain"], default="nnchain")
    c.add_argument("--seed", type=int)
    c.add_argument("--n", type=int, default=20, help="synthetic observations")
    c.add_argument("--p", type=int, default=4, help="synthetic attributes")
    c.add_argument("--backend", choices=["compiled", "python"])
    c.add_argument("--format", action="append", help=f"comma list of {', '.join(wio.FORMATS)}")
    c.add_argument("--out", help="output file, or path prefix when several formats are requested")
    c.set_defaults(func=cmd_cluster)

    e = sub.add_parser("experiments", help="run the Ward1/Ward2 equivalence checks")
    e.add_argument("--n", type=int, default=20)
    e.add_argument("--p", type=int, default=4)
    e.add_argument("--seed", type=int, default=19037561)
    e.add_argument("--backend", choices=["compiled", "python"])
    e.set_defaults(func=cmd_experiments)

    m = sub.add_parser("compare", help="compare two JSON dendrograms")
    m.add_argument("first")
    m.add_argument("second")
    m.add_argument("--map", choices=["identity", "sqrt", "square"], default="identity",
                   help="applied to the first tree's heights")
    m.add_argument("--tol", type=float, default=1e-9)
    m.set_defaults(func=cmd_compare)

    x = sub.add_parser("export-formats", help="list export formats, or convert a JSON dendrogram")
    x.add_argument("--input")
    x.add_argument("--format", action="append")
    x.add_argument("--out")
    x.set_defaults(func=cmd_export_formats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ScaleError, ValidationError, wio.ParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
