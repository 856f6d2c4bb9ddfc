"""Command line: generate or load instances, run a matching pipeline, report.

    geomatch --mode algebraic --n 200 --seed 7 --verify
    geomatch --mode sparsify-then-blossom --instance inst.json --format csv
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .errors import GeomatchError
from .generate import REGIMES, SHAPES, GeneratorSpec, Instance, generate, load_instance
from .geometry import density_estimate, depth
from .graph import build_graph
from .matching import algebraic_maximum_matching
from .oracle import blossom_maximum_matching, validate_matching
from .sparsify import depth_constant, sparsify
from .sparsify.core import combine_matchings

MODES = ("algebraic", "sparsify-then-algebraic", "sparsify-then-blossom", "blossom")
STAGES = ("build", "sparsify", "match", "verify")
CSV_COLUMNS = (["instance_id", "mode", "n", "edges", "depth", "density_est", "psi",
                "matching_size", "oracle_size"] + [f"{s}_ms" for s in STAGES] + ["seed"])


@dataclass
class RunConfig:
    mode: str = "algebraic"
    seed: int = 0
    spec: GeneratorSpec | None = None
    instance_path: str | None = None
    count: int = 1
    verify: bool = False
    structure: str = "naive"
    timings: bool = True


class StageError(Exception):
    def __init__(self, stage, err):
        super().__init__(f"{stage}: {type(err).__name__}: {err}")
        self.stage = stage


class _Clock:
    def __init__(self):
        self.ms = {}

    def run(self, stage, fn, *args, **kw):
        t = time.perf_counter()
        try:
            return fn(*args, **kw)
        except (GeomatchError, ValueError) as e:
            raise StageError(stage, e) from e
        finally:
            self.ms[stage] = self.ms.get(stage, 0.0) + 1000.0 * (time.perf_counter() - t)


def _match(mode, objects, seed, structure, clock, report):
    g = clock.run("build", build_graph, objects)
    report["edges"] = g.edge_count
    if mode == "blossom":
        return g, clock.run("match", blossom_maximum_matching, g)
    if mode == "algebraic":
        return g, clock.run("match", algebraic_maximum_matching, objects, seed, graph=g)
    res = clock.run("sparsify", sparsify, objects, structure)
    sub = [objects[i] for i in res.kept]
    report["kept"] = len(sub)
    report["depth_kept"] = depth(sub) if sub else 0
    report["lambda"] = res.lam
    report["depth_constant"] = depth_constant()
    if mode == "sparsify-then-blossom":
        local = clock.run("match", lambda: blossom_maximum_matching(build_graph(sub)))
    else:
        local = clock.run("match", algebraic_maximum_matching, sub, seed)
    pairs = [(res.kept[u], res.kept[v]) for u, v in local]
    return g, combine_matchings(pairs, res.residuals)


def run_instance(inst: Instance, mode: str, seed: int, *, instance_id=0, verify=False,
                 structure="naive", timings=True) -> dict:
    """Report for one instance; raises StageError with the failing stage."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    objs = inst.objects
    report = {"instance_id": instance_id, "mode": mode, "n": len(objs), "edges": 0,
              "depth": depth(objs) if objs else 0,
              "density_est": density_estimate(objs) if objs else 0,
              "psi": inst.psi, "seed": seed}
    clock = _Clock()
    g, pairs = _match(mode, objs, seed, structure, clock, report)
    pairs = clock.run("verify" if verify else "match", validate_matching, g, pairs)
    report["valid"] = True
    report["matching_size"] = len(pairs)
    report["oracle_size"] = None
    if verify:
        report["oracle_size"] = len(clock.run("verify", blossom_maximum_matching, g))
        report["match"] = report["oracle_size"] == report["matching_size"]
    report["matching"] = [list(p) for p in pairs]
    report["stage_times_ms"] = ({s: round(clock.ms.get(s, 0.0), 3) for s in STAGES}
                                if timings else None)
    return report


def run(config: RunConfig) -> list[dict]:
    if config.instance_path:
        jobs = [(0, load_instance(config.instance_path), config.seed)]
    else:
        spec = config.spec or GeneratorSpec()
        seqs = np.random.SeedSequence(config.seed).spawn(config.count) if config.count > 1 else None
        jobs = []
        for i in range(config.count):
            s = config.seed if seqs is None else int(seqs[i].generate_state(1, np.uint64)[0])
            jobs.append((i, generate(spec, s), s))
    reports = [run_instance(inst, config.mode, s, instance_id=i, verify=config.verify,
                            structure=config.structure, timings=config.timings)
               for i, inst, s in jobs]
    return sorted(reports, key=lambda r: r["instance_id"])


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        times = r["stage_times_ms"] or {}
        row = [r["instance_id"], r["mode"], r["n"], r["edges"], r["depth"], r["density_est"],
               r["psi"], r["matching_size"], "" if r["oracle_size"] is None else r["oracle_size"]]
        row += [times.get(s, "") for s in STAGES] + [r["seed"]]
        w.writerow(row)
    return buf.getvalue()


def to_json(reports) -> str:
    return json.dumps(reports, sort_keys=True, indent=1) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geomatch", description=__doc__.splitlines()[0])
    ap.add_argument("--mode", choices=MODES, default="algebraic")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--psi", type=float, default=1.0)
    ap.add_argument("--generator", choices=SHAPES, default="unit-disk")
    ap.add_argument("--regime", choices=REGIMES, default="uniform")
    ap.add_argument("--region", type=float, default=None, help="side of the sampling square")
    ap.add_argument("--avg-degree", type=float, default=4.0)
    ap.add_argument("--target", type=float, default=8.0,
                    help="density cap (low-density) or mean cluster size (clustered)")
    ap.add_argument("--count", type=int, default=1, help="number of generated instances")
    ap.add_argument("--instance", metavar="FILE")
    ap.add_argument("--verify", action="store_true", help="compare with the blossom oracle")
    ap.add_argument("--out", metavar="FILE")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--structure", choices=("naive", "unitdisk"), default="naive")
    ap.add_argument("--no-timings", action="store_true",
                    help="omit wall times so identical runs give identical bytes")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = None if args.instance else GeneratorSpec(
            shape=args.generator, n=args.n, psi=args.psi, regime=args.regime, region=args.region,
            avg_degree=args.avg_degree, target=args.target)
        cfg = RunConfig(args.mode, args.seed, spec, args.instance, max(args.count, 1), args.verify,
                        args.structure, not args.no_timings)
        reports = run(cfg)
    except (StageError, GeomatchError, ValueError, OSError) as e:
        print(f"geomatch: error: {e}", file=sys.stderr)
        return 3
    text = to_csv(reports) if args.format == "csv" else to_json(reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = [r["instance_id"] for r in reports if args.verify and not r.get("match", True)]
    if bad:
        print(f"geomatch: oracle mismatch on instances {bad}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
