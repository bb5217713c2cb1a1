"""Command-line front end.

    boasieve enumerate --n 9 --M 96 --tau 4 --set W [--out sets.json]
    boasieve run --n 9 --M 96 --tau 4 [--min-strength 2] [--report t.csv]
                 [--json r.json] [--cache DIR] [--threads T] [--schedule-seed S]
    boasieve verify-oa --file array.txt --tau 4 [--cache DIR]

``enumerate`` prints the size of the requested initial set, ``run`` prints
the target verdict, ``verify-oa`` checks a plain-text array's strength and,
when a cached final set matches its parameters, whether its empirical
distance distributions survive the sieve.  Exit codes: 0 success, 1 usage
error, 2 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .distributions import DistributionSet, ParameterTriple, enumerate_initial
from .oracle import empirical_distribution, failing_column_sets, parse_array_text
from .orchestrator import build_workbook, coexistence_propagate, run_fixed_point

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


@dataclass
class RunConfig:
    """Resolved options for one ``run`` invocation."""

    target: ParameterTriple
    min_strength: int = 2
    report_path: Path | None = None
    json_path: Path | None = None
    cache_dir: Path | None = None
    threads: int = 1
    schedule_seed: int | None = None


class SetCache:
    """Directory of canonical set files with a hash manifest.

    One JSON file per (triple, kind, stage); the manifest records the code
    version and a content hash per entry.  Entries from other code versions
    or with stale hashes are ignored and rebuilt with a warning.
    """

    MANIFEST = "manifest.json"

    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._entries: dict[str, dict] = {}
        self._load_manifest()

    def _load_manifest(self) -> None:
        path = self.directory / self.MANIFEST
        if not path.exists():
            return
        try:
            manifest = json.loads(path.read_text())
            if manifest.get("version") != __version__:
                print(
                    f"warning: cache at {self.directory} was written by version "
                    f"{manifest.get('version')}; ignoring it",
                    file=sys.stderr,
                )
                return
            self._entries = dict(manifest["entries"])
        except (json.JSONDecodeError, KeyError, TypeError, OSError):
            print(f"warning: unreadable cache manifest at {path}; rebuilding", file=sys.stderr)
            self._entries = {}

    def _write_manifest(self) -> None:
        manifest = {"version": __version__, "entries": self._entries}
        (self.directory / self.MANIFEST).write_text(
            json.dumps(manifest, sort_keys=True, indent=1) + "\n"
        )

    @staticmethod
    def _key(triple: ParameterTriple, kind: str, stage: str) -> str:
        return f"{triple.n},{triple.M},{triple.tau},{kind},{stage}"

    def load(self, triple: ParameterTriple, kind: str, stage: str) -> DistributionSet | None:
        entry = self._entries.get(self._key(triple, kind, stage))
        if entry is None:
            return None
        path = self.directory / entry["file"]
        try:
            text = path.read_text()
        except OSError:
            print(f"warning: cache file {path} missing; rebuilding", file=sys.stderr)
            return None
        if hashlib.sha256(text.encode()).hexdigest() != entry["sha256"]:
            print(f"warning: cache file {path} corrupted; rebuilding", file=sys.stderr)
            return None
        try:
            stored = DistributionSet.from_json(text)
        except (json.JSONDecodeError, KeyError, ValueError):
            print(f"warning: cache file {path} malformed; rebuilding", file=sys.stderr)
            return None
        if stored.triple != triple or stored.kind != kind:
            print(f"warning: cache file {path} mismatched; rebuilding", file=sys.stderr)
            return None
        return stored

    def store(self, dist_set: DistributionSet, stage: str) -> None:
        key = self._key(dist_set.triple, dist_set.kind, stage)
        t = dist_set.triple
        name = f"{t.n}_{t.M}_{t.tau}_{dist_set.kind}_{stage}.json"
        text = dist_set.to_json() + "\n"
        (self.directory / name).write_text(text)
        self._entries[key] = {
            "file": name,
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
        self._write_manifest()

    def find_final(self, triple: ParameterTriple, kind: str = "W") -> DistributionSet | None:
        """Deepest-sieved cached final set for a triple, if any."""
        best: DistributionSet | None = None
        for key in sorted(self._entries):
            parts = key.split(",")
            if (
                len(parts) == 5
                and parts[:4] == [str(triple.n), str(triple.M), str(triple.tau), kind]
                and parts[4].startswith("final")
            ):
                loaded = self.load(triple, kind, parts[4])
                if loaded is not None and (best is None or len(loaded) < len(best)):
                    best = loaded
        return best


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boasieve", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"boasieve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    enum = sub.add_parser("enumerate", help="enumerate an initial set and print its size")
    enum.add_argument("--n", type=int, required=True)
    enum.add_argument("--M", type=int, required=True)
    enum.add_argument("--tau", type=int, required=True)
    enum.add_argument("--set", dest="kind", choices=("P", "Q", "W"), default="W")
    enum.add_argument("--out", type=Path, help="write the canonical JSON of the set here")

    runp = sub.add_parser("run", help="run a workbook to its fixed point and print the verdict")
    runp.add_argument("--n", type=int, required=True)
    runp.add_argument("--M", type=int, required=True)
    runp.add_argument("--tau", type=int, required=True)
    runp.add_argument("--min-strength", type=int, default=2)
    runp.add_argument("--report", type=Path, help="write the count table as CSV")
    runp.add_argument("--json", dest="json_path", type=Path, help="write the full report as JSON")
    runp.add_argument("--cache", type=Path, help="directory for initial/final set reuse")
    runp.add_argument("--threads", type=int, default=1)
    runp.add_argument("--schedule-seed", type=int, default=None)

    ver = sub.add_parser("verify-oa", help="verify a plain-text array's strength")
    ver.add_argument("--file", type=Path, required=True)
    ver.add_argument("--tau", type=int, required=True)
    ver.add_argument("--cache", type=Path, help="cache directory to spot-check distributions against")

    return parser


def _triple_from_args(args: argparse.Namespace) -> ParameterTriple:
    return ParameterTriple(n=args.n, M=args.M, tau=args.tau)


def cmd_enumerate(args: argparse.Namespace) -> int:
    try:
        triple = _triple_from_args(args)
        dist_set = enumerate_initial(triple, args.kind)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is not None:
        args.out.write_text(dist_set.to_json() + "\n")
    print(len(dist_set))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = RunConfig(
            target=_triple_from_args(args),
            min_strength=args.min_strength,
            report_path=args.report,
            json_path=args.json_path,
            cache_dir=args.cache,
            threads=args.threads,
            schedule_seed=args.schedule_seed,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    cache = SetCache(config.cache_dir) if config.cache_dir is not None else None

    def provider(triple: ParameterTriple) -> DistributionSet | None:
        if cache is None:
            return None
        cached = cache.load(triple, "W", "initial")
        if cached is not None:
            return cached
        computed = enumerate_initial(triple, "W")
        for kind in ("P", "Q", "W"):
            cache.store(enumerate_initial(triple, kind), "initial")
        return computed

    try:
        workbook = build_workbook(config.target, config.min_strength, set_provider=provider)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = run_fixed_point(
        workbook,
        threads=config.threads,
        order_seed=config.schedule_seed,
    )

    if cache is not None:
        stage = f"final-ms{config.min_strength}"
        for triple in workbook.triples():
            cache.store(workbook.distribution_set(triple, "W"), stage)

    if config.report_path is not None:
        config.report_path.write_text(report.to_csv())
    if config.json_path is not None:
        payload = report.to_json_dict()
        closed = coexistence_propagate([(config.target, report.verdict.status)])
        payload["implied"] = [
            {"n": t.n, "M": t.M, "tau": t.tau, "status": status}
            for t, status in closed
            if t != config.target
        ]
        config.json_path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")

    print(report.verdict.describe())
    return EXIT_OK


def cmd_verify_oa(args: argparse.Namespace) -> int:
    try:
        text = args.file.read_text()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        array = parse_array_text(text)
        if not 0 <= args.tau <= array.n:
            raise ValueError(f"strength {args.tau} outside 0..{array.n}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    failures = [] if array.M % (1 << args.tau) == 0 else None
    if failures is not None:
        failures = failing_column_sets(array, args.tau)
    if failures == []:
        print("strength OK")
    else:
        if failures is None:
            print(f"strength FAIL: 2^{args.tau} does not divide M={array.M}")
        else:
            shown = ", ".join(str(cols) for cols in failures[:8])
            more = f", +{len(failures) - 8} more" if len(failures) > 8 else ""
            print(f"strength FAIL at columns {{{shown}{more}}}")
        return EXIT_OK

    if args.cache is not None and args.tau >= 1:
        try:
            triple = ParameterTriple(n=array.n, M=array.M, tau=args.tau)
        except ValueError:
            triple = None
        final = SetCache(args.cache).find_final(triple) if triple is not None else None
        if final is not None:
            points = sorted(set(array.rows)) + [(0,) * array.n, (1,) * array.n]
            misses = []
            for point in dict.fromkeys(points):
                dist = empirical_distribution(array, point)
                if dist not in final:
                    misses.append((point, dist))
            if misses:
                print(f"distributions: {len(misses)} empirical distribution(s) NOT in cached final W")
                for point, dist in misses[:4]:
                    print(f"  point {''.join(map(str, point))}: {dist}")
            else:
                print("distributions: all checked points lie in cached final W")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "enumerate":
        return cmd_enumerate(args)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "verify-oa":
        return cmd_verify_oa(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE  # unreachable


if __name__ == "__main__":
    raise SystemExit(main())
