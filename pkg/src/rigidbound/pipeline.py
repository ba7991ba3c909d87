"""End-to-end runs: catalog enumeration, per-graph bounds, standalone mixed volumes."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import sys
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from .cayley_menger import MinorEquation
from .graph import Graph, canonical_form, from_graph6, to_graph6
from .mixed_volume import mixed_volume
from .reductions import MAX_EMBEDDINGS
from .rigidity import EXPECTED_COUNTS, HennebergStep, HennebergTrace, classify, enumerate_laman
from .subsystem import (
    CSV_HEADER, MIRROR_FACTOR, BoundReport, Budget, Rule, certify_finite, graph_bound,
    uniquely_determining,
)

log = logging.getLogger(__name__)

CACHE_ENV = "RIGIDBOUND_CACHE"
DEFAULT_CACHE = Path(".rigidbound-cache")


class VerificationError(RuntimeError):
    """Results disagree with an embedded reference table (exit status 1)."""


class InputError(ValueError):
    """Malformed or unreadable input (exit status 2)."""


@dataclass(frozen=True)
class PipelineConfig:
    n: int
    cache_dir: Path = DEFAULT_CACHE
    budget: Budget = field(default_factory=Budget)
    jobs: int = 1
    seed: int = 0
    verify: bool = True
    mirror_factor: int = MIRROR_FACTOR
    check_finite: bool = True

    def __post_init__(self):
        if not 3 <= self.n <= 10:
            raise InputError(f"n must be in 3..10, got {self.n}")
        if self.jobs < 1:
            raise InputError("jobs must be positive")
        object.__setattr__(self, "cache_dir", Path(self.cache_dir))

    @classmethod
    def from_env(cls, **kwargs) -> "PipelineConfig":
        """Like the constructor, but ``$RIGIDBOUND_CACHE`` overrides ``cache_dir``."""
        if os.environ.get(CACHE_ENV):
            kwargs["cache_dir"] = Path(os.environ[CACHE_ENV])
        return cls(**kwargs)


def graph_seed(master: int, code: bytes) -> int:
    """Per-graph random stream, independent of scheduling order."""
    digest = hashlib.blake2b(code, key=master.to_bytes(16, "big", signed=True), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _prepare(cache_dir: Path) -> None:
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create cache directory {cache_dir}: {exc}") from exc
    if not os.access(cache_dir, os.W_OK):
        raise InputError(f"cache directory {cache_dir} is not writable")


# -- enumeration ------------------------------------------------------------------

@dataclass
class Catalog:
    n: int
    graphs: list[Graph]
    traces: list[HennebergTrace]
    classes: list[str]

    def counts(self) -> tuple[int, int]:
        c = Counter(self.classes)
        return c["H1"], c["H2"]

    def summary(self) -> str:
        h1, h2 = self.counts()
        return f"{len(self.graphs)} graphs ({h1} H1, {h2} H2)"


def _catalog_paths(cfg: PipelineConfig) -> tuple[Path, Path]:
    return cfg.cache_dir / f"{cfg.n}.g6", cfg.cache_dir / f"{cfg.n}.traces.json"


def _load_catalog(n: int, g6: Path, tr: Path) -> Catalog | None:
    try:
        graphs = [from_graph6(line) for line in g6.read_text().splitlines() if line.strip()]
        entries = json.loads(tr.read_text())
        traces = [HennebergTrace(tuple(HennebergStep.from_json(s) for s in e["steps"])) for e in entries]
        classes = [e["class"] for e in entries]
        codes = [bytes.fromhex(e["code"]) for e in entries]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        log.warning("ignoring unreadable catalog cache: %s", exc)
        return None
    if len(graphs) != len(traces):
        log.warning("catalog cache inconsistent; rebuilding")
        return None
    for g, t, c in zip(graphs, traces, codes):
        if g.n != n or t.replay() != g or canonical_form(g) != c:
            log.warning("catalog entry does not match its trace or code; rebuilding")
            return None
    return Catalog(n, graphs, traces, classes)


def _dump_catalog(cat: Catalog, g6: Path, tr: Path) -> None:
    _atomic_write(g6, "".join(to_graph6(g) + "\n" for g in cat.graphs))
    entries = [{"code": canonical_form(g).hex(), "class": c, "steps": [s.to_json() for s in t.steps]}
               for g, t, c in zip(cat.graphs, cat.traces, cat.classes)]
    _atomic_write(tr, json.dumps(entries, indent=1) + "\n")


def run_enumerate(cfg: PipelineConfig, out: TextIO | None = None) -> Catalog:
    """Laman catalog for ``cfg.n``, read from the cache when present.

    Writes ``<n>.g6`` (one graph per line, labelled as its trace builds it)
    and ``<n>.traces.json``.  Raises ``VerificationError`` when counts differ
    from the reference table and ``cfg.verify`` is set.
    """
    _prepare(cfg.cache_dir)
    g6, tr = _catalog_paths(cfg)
    cat = _load_catalog(cfg.n, g6, tr) if g6.exists() and tr.exists() else None
    if cat is None:
        found = enumerate_laman(cfg.n)
        graphs = [g for g, _ in found.values()]
        cat = Catalog(cfg.n, graphs, [t for _, t in found.values()], [classify(g) for g in graphs])
        _dump_catalog(cat, g6, tr)
    else:
        log.info("catalog for n=%d loaded from %s", cfg.n, g6)
    if out is not None:
        print(cat.summary(), file=out)
    if cfg.verify and cfg.n in EXPECTED_COUNTS:
        expected = EXPECTED_COUNTS[cfg.n]
        if cat.counts() != expected:
            got = cat.counts()
            raise VerificationError(
                f"n={cfg.n}: expected {expected[0]} H1 / {expected[1]} H2, got {got[0]} H1 / {got[1]} H2")
    return cat


# -- bounds -----------------------------------------------------------------------

def _bound_task(args) -> BoundReport:
    g, cfg = args
    return graph_bound(g, MAX_EMBEDDINGS, cfg.budget, graph_seed(cfg.seed, canonical_form(g)),
                       cfg.mirror_factor, cfg.check_finite)


@dataclass
class BoundsRun:
    reports: list[BoundReport]

    @property
    def unbounded(self) -> list[BoundReport]:
        return [r for r in self.reports if r.bound is None]

    @property
    def max_bound(self) -> int | None:
        return max((r.bound for r in self.reports if r.bound is not None), default=None)

    def histogram(self) -> Counter:
        return Counter(r.rule for r in self.reports)

    def headline(self) -> str:
        top = self.max_bound
        hits = sum(r.bound == top for r in self.reports)
        hist = self.histogram()
        rules = " ".join(f"{rule.value}×{hist[rule]}" for rule in Rule if hist[rule])
        return f"max={top} achieved_by={hits} rules: {rules}"


def bounds_jsonl(reports) -> str:
    return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in reports)


def summary_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def run_bounds(cfg: PipelineConfig, out: TextIO | None = None) -> BoundsRun:
    """Bound every catalog graph and write ``<n>/bounds.jsonl`` and ``<n>/summary.csv``.

    Reports come out sorted by canonical code whatever the worker count.
    The headline goes to ``out``; graphs left without a bound are listed
    there too.
    """
    cat = run_enumerate(cfg)
    tasks = [(g, cfg) for g in cat.graphs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            reports = list(pool.map(_bound_task, tasks, chunksize=1))
    else:
        reports = []
        for k, t in enumerate(tasks):
            reports.append(_bound_task(t))
            log.debug("bounded %d/%d", k + 1, len(tasks))
    reports.sort(key=lambda r: r.code)
    run = BoundsRun(reports)
    outdir = cfg.cache_dir / str(cfg.n)
    outdir.mkdir(exist_ok=True)
    _atomic_write(outdir / "bounds.jsonl", bounds_jsonl(reports))
    _atomic_write(outdir / "summary.csv", summary_csv(reports))
    if out is not None:
        print(run.headline(), file=out)
        for r in run.unbounded:
            print(f"NOT_BOUNDED {r.code.hex()}", file=out)
    return run


# -- standalone mixed volume ------------------------------------------------------

@dataclass
class SupportFile:
    supports: list[list[tuple[int, ...]]]
    graph: Graph | None = None
    equations: list[MinorEquation] | None = None
    vars: list[int] | None = None


def _points(raw, where: str) -> list[tuple[int, ...]]:
    if not isinstance(raw, list) or not raw:
        raise InputError(f"{where}: expected a non-empty list of points")
    pts = []
    for p in raw:
        if not isinstance(p, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in p):
            raise InputError(f"{where}: points must be lists of integers")
        pts.append(tuple(p))
    return pts


def load_support_file(path) -> SupportFile:
    """Parse either raw supports or minor equations.

    Accepted shapes: ``{"supports": [[point, ...], ...]}``, a list of
    equation objects ``{"X", "vars", "points"}``, or an object with an
    ``"equations"`` list plus optional ``"vars"`` order and ``"graph6"``.
    """
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if isinstance(data, dict) and "supports" in data:
        raw = data["supports"]
        if not isinstance(raw, list) or not raw:
            raise InputError(f"{path}: 'supports' must be a non-empty list")
        sups = [_points(s, f"{path}: support {k}") for k, s in enumerate(raw)]
        dims = {len(p) for s in sups for p in s}
        if dims != {len(sups)}:
            raise InputError(f"{path}: need {len(sups)} supports of {len(sups)}-dimensional points")
        return SupportFile(sups)
    items = data.get("equations") if isinstance(data, dict) else data
    if not isinstance(items, list) or not items:
        raise InputError(f"{path}: expected 'supports' or a non-empty equation list")
    try:
        eqs = [MinorEquation.from_json(d) for d in items]
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed equation: {exc}") from exc
    for k, e in enumerate(eqs):
        _points([list(p) for p in e.support], f"{path}: equation {k}")
        if any(len(p) != len(e.vars) for p in e.support):
            raise InputError(f"{path}: equation {k} points do not match its vars")
    variables = sorted(set().union(*(e.vars for e in eqs)))
    if isinstance(data, dict) and "vars" in data:
        if sorted(data["vars"]) != variables:
            raise InputError(f"{path}: 'vars' disagrees with the equations")
        variables = list(data["vars"])
    if len(variables) != len(eqs):
        raise InputError(f"{path}: {len(eqs)} equations in {len(variables)} variables is not square")
    graph = None
    if isinstance(data, dict) and "graph6" in data:
        try:
            graph = from_graph6(data["graph6"])
        except ValueError as exc:
            raise InputError(f"{path}: bad graph6: {exc}") from exc
    return SupportFile([e.embed(variables) for e in eqs], graph, eqs, variables)


def run_mv(path, seed: int = 0, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    """Print the mixed volume of a support file.

    When the file names its graph, the two validity certificates for using
    the system as an embedding bound are reported on ``err``.
    """
    sf = load_support_file(path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value = mixed_volume(sf.supports, seed=seed)
    for w in caught:
        print(f"warning: {w.message}", file=err)
    print(value, file=out)
    if sf.graph is not None:
        from .cayley_menger import DistanceAssignment
        da = DistanceAssignment.from_graph(sf.graph)
        ud = uniquely_determining(sf.graph, [da.unknown[v] for v in sf.vars])
        fin = certify_finite(sf.graph, sf.equations, sf.vars, seed)
        print(f"uniquely_determining={str(ud).lower()} finite={str(fin).lower()}", file=err)
        if not fin:
            print("warning: the system has a positive-dimensional solution set for generic lengths; "
                  "its mixed volume is not an embedding bound", file=err)
    return value
