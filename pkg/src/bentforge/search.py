"""Exhaustive parameter-grid searches over the bent-function families.

A :class:`SearchJob` names a family, its fixed integer parameters and a finite
domain for every free coefficient slot.  :func:`enumerate_job` walks the grid
in lexicographic order of discrete logs and yields one :class:`SearchRecord`
per point, carrying the exact Walsh ground truth next to every criterion
verdict.  Records can be computed in worker processes; order is always the
enumeration order.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

from .cyclo import CycInt
from .dillon import (
    DEFAULT_TOL,
    FAMILY_CRITERIA,
    B1Params,
    B2Params,
    P1Params,
    P2Params,
    TraceSum,
    agreement,
    family_criteria,
    is_bent,
)
from .gf import FieldCtx, FieldSpec, build_field, field_from_spec

DEFAULT_CAP = 10**7
THREADS_ENV = "BENTFORGE_THREADS"

FAMILY_SLOTS = {
    "B1": ("a0", "a1", "b"),
    "B2": ("a",),
    "P1": ("a", "b"),
    "P2": ("a", "b"),
}
FAMILY_FIXED = {
    "B1": ("d", "l"),
    "B2": ("r", "s"),
    "P1": ("l",),
    "P2": ("r", "s"),
}


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class Domain:
    """alpha^shift * F_(p^degree), optionally without zero.

    Points are ordered by the discrete log of the subfield element, zero first.
    """

    degree: int
    nonzero: bool = True
    shift: int = 0

    def values(self, ctx: FieldCtx) -> list[int]:
        base = ctx.subfield(self.degree, self.nonzero)
        if not self.shift:
            return [int(x) for x in base]
        s = int(ctx.from_log(self.shift))
        return [ctx.mul(s, int(x)) for x in base]

    def describe(self, p: int) -> str:
        text = f"F_{p}^{self.degree}" + ("*" if self.nonzero else "")
        return text + (f"*alpha^{self.shift}" if self.shift else "")


@dataclass(frozen=True)
class SearchJob:
    """A family grid.

    ``fixed`` holds the family's integer parameters (d, l, r, s) and may also
    pin a slot to a field element given as an int encoding (e.g. ``b=0``).
    ``distinct`` lists slot pairs that must differ.  ``alt_exponent`` (P1
    only) additionally tests Tr(a x^e) + b-term with e in place of l(p^m-1).
    """

    field: FieldSpec
    family: str
    fixed: tuple[tuple[str, int], ...]
    slots: tuple[tuple[str, Domain], ...]
    distinct: tuple[tuple[str, str], ...] = ()
    dedupe: bool = False
    alt_exponent: int | None = None
    name: str = ""
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.family not in FAMILY_SLOTS:
            raise SearchError(f"unknown family {self.family!r}")
        known = FAMILY_SLOTS[self.family]
        fixed = dict(self.fixed)
        for key in FAMILY_FIXED[self.family]:
            if key not in fixed:
                raise SearchError(f"family {self.family} needs fixed parameter {key!r}")
        for name, _ in self.slots:
            if name not in known:
                raise SearchError(f"family {self.family} has no slot {name!r}")
            if name in fixed:
                raise SearchError(f"slot {name!r} is both fixed and free")
        for x, y in self.distinct:
            if x not in self.slot_names or y not in self.slot_names:
                raise SearchError(f"distinctness constraint on non-free slots {x!r}, {y!r}")
        if self.alt_exponent is not None and self.family != "P1":
            raise SearchError("alt_exponent is only defined for the P1 family")

    @property
    def slot_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.slots)

    @property
    def criteria(self) -> tuple[str, ...]:
        return FAMILY_CRITERIA[self.family]

    def ctx(self) -> FieldCtx:
        return field_from_spec(self.field)

    def grid_size(self) -> int:
        """Number of points before distinctness filtering."""
        size = 1
        for _, dom in self.slots:
            size *= self.field.p**dom.degree - (1 if dom.nonzero else 0)
        return size

    def points(self) -> Iterator[dict[str, int]]:
        ctx = self.ctx()
        names = self.slot_names
        axes = [dom.values(ctx) for _, dom in self.slots]
        for combo in itertools.product(*axes):
            point = dict(zip(names, combo))
            if any(point[x] == point[y] for x, y in self.distinct):
                continue
            yield point

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "field": self.field.to_json(),
            "family": self.family,
            "fixed": dict(self.fixed),
            "slots": {name: asdict(dom) for name, dom in self.slots},
            "distinct": [list(pair) for pair in self.distinct],
            "dedupe": self.dedupe,
            "alt_exponent": self.alt_exponent,
            "tol": self.tol,
        }


@dataclass
class SearchRecord:
    index: int
    family: str
    params: dict[str, int | None]  # discrete logs; None encodes zero
    bent: bool
    regular: bool
    criteria: dict[str, bool | None]
    agreement: bool
    side: dict[str, str] = field(default_factory=dict)
    alt_bent: bool | None = None
    alt_regular: bool | None = None

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "SearchRecord":
        return cls(**obj)


@dataclass
class SearchSummary:
    total: int = 0
    bent: int = 0
    regular: int = 0
    disagreements: int = 0
    disagreement_indices: list[int] = field(default_factory=list)
    alt_bent: int | None = None
    alt_regular: int | None = None
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "SearchSummary":
        return cls(**obj)


# ---------------------------------------------------------------------------
# evaluation


def build_params(job: SearchJob, ctx: FieldCtx, point: dict[str, int]):
    fixed = dict(job.fixed)
    vals = {name: fixed.get(name, 0) for name in FAMILY_SLOTS[job.family]}
    vals.update(point)
    if job.family == "B1":
        d = fixed["d"]
        coeffs = (vals["a0"],) + (vals["a1"],) * (d - 1)
        return B1Params(ctx, d, fixed["l"], coeffs, vals["b"])
    if job.family == "B2":
        return B2Params(ctx, fixed["r"], fixed["s"], vals["a"])
    if job.family == "P1":
        return P1Params(ctx, fixed["l"], vals["a"], vals["b"])
    return P2Params(ctx, fixed["r"], fixed["s"], vals["a"], vals["b"])


def _compact(v) -> str:
    if isinstance(v, CycInt):
        return str(int(v)) if v.is_integer() else "[" + ",".join(map(str, v.coeffs)) + "]"
    if isinstance(v, complex):
        re_, im = round(v.real, 9) + 0.0, round(v.imag, 9) + 0.0
        return f"{re_:.9f}" if im == 0 else f"{re_:.9f}{im:+.9f}i"
    if isinstance(v, float):
        return f"{round(v, 9) + 0.0:.9f}"
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


def evaluate_point(job: SearchJob, index: int, point: dict[str, int]) -> tuple[SearchRecord, tuple]:
    ctx = job.ctx()
    params = build_params(job, ctx, point)
    f = params.to_dillon()
    bent, regular, _ = is_bent(f)
    truth = bent if ctx.p == 2 else regular
    reports = family_criteria(params, f, job.tol)
    side = {}
    for rep in reports:
        if rep.verdict is not None and rep.name != "general":
            side[f"{rep.name}:lhs"] = _compact(rep.lhs)
            side[f"{rep.name}:rhs"] = _compact(rep.rhs)
    alt_bent = alt_regular = None
    if job.alt_exponent is not None:
        b_exp = (ctx.q - 1) // 4
        alt = TraceSum(ctx, ((job.alt_exponent, params.a, ctx.n), (b_exp, params.b, 2)))
        alt_bent, alt_regular, _ = is_bent(alt)
    record = SearchRecord(
        index=index,
        family=job.family,
        params={k: (None if v == 0 else ctx.log_of(v)) for k, v in point.items()},
        bent=bent,
        regular=regular,
        criteria={rep.name: rep.verdict for rep in reports},
        agreement=agreement(reports, truth),
        side=side,
        alt_bent=alt_bent,
        alt_regular=alt_regular,
    )
    return record, f.key()


def _evaluate_chunk(job: SearchJob, chunk: list[tuple[int, dict[str, int]]]):
    return [evaluate_point(job, i, pt) for i, pt in chunk]


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError as exc:
        raise SearchError(f"{THREADS_ENV}={raw!r} is not an integer") from exc
    if workers < 1:
        raise SearchError(f"{THREADS_ENV} must be >= 1")
    return workers


def check_feasible(job: SearchJob, cap: int = DEFAULT_CAP) -> None:
    """Reject grids whose points x field size exceeds ``cap``."""
    cost = job.grid_size() * job.field.p**job.field.n
    if cost > cap:
        raise SearchError(f"grid of {job.grid_size()} points over a field of {job.field.p}^{job.field.n} exceeds cap {cap}")


def enumerate_job(job: SearchJob, workers: int | None = None, cap: int = DEFAULT_CAP,
                  chunk: int = 16) -> Iterator[SearchRecord]:
    check_feasible(job, cap)
    workers = default_workers() if workers is None else workers
    indexed = list(enumerate(job.points()))
    if workers <= 1:
        results: Iterable = (evaluate_point(job, i, pt) for i, pt in indexed)
    else:
        chunks = [indexed[k : k + chunk] for k in range(0, len(indexed), chunk)]
        results = _parallel(job, chunks, workers)
    seen = set()
    for record, key in results:
        if job.dedupe:
            if key in seen:
                continue
            seen.add(key)
        yield record


def _parallel(job, chunks, workers):
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in pool.map(_evaluate_chunk, itertools.repeat(job), chunks):
            yield from batch


def summarize(records: Iterable[SearchRecord], wall_time: float = 0.0) -> SearchSummary:
    s = SearchSummary(wall_time=wall_time)
    for r in records:
        s.total += 1
        s.bent += r.bent
        s.regular += r.regular
        if not r.agreement:
            s.disagreements += 1
            s.disagreement_indices.append(r.index)
        if r.alt_bent is not None:
            s.alt_bent = (s.alt_bent or 0) + r.alt_bent
            s.alt_regular = (s.alt_regular or 0) + r.alt_regular
    return s


def run(job: SearchJob, workers: int | None = None, cap: int = DEFAULT_CAP) -> tuple[list[SearchRecord], SearchSummary]:
    start = time.perf_counter()
    records = list(enumerate_job(job, workers, cap))
    return records, summarize(records, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# persistence


def csv_columns(job: SearchJob | None = None, records: list[SearchRecord] | None = None) -> list[str]:
    if job is not None:
        slots, crit, alt = job.slot_names, job.criteria, job.alt_exponent is not None
    elif records:
        slots, crit = tuple(records[0].params), tuple(records[0].criteria)
        alt = records[0].alt_bent is not None
    else:
        slots, crit, alt = (), (), False
    cols = ["index", "family", *(f"log_{s}" for s in slots), "bent", "regular"]
    cols += [f"crit_{c}" for c in crit]
    cols += ["agreement"]
    if alt:
        cols += ["alt_bent", "alt_regular"]
    return cols + ["side"]


def _flag(v: bool | None) -> str:
    return "" if v is None else str(int(v))


def _unflag(s: str) -> bool | None:
    return None if s == "" else bool(int(s))


def records_to_csv(records: list[SearchRecord], job: SearchJob | None = None) -> str:
    cols = csv_columns(job, records)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        row = {"index": r.index, "family": r.family, "bent": _flag(r.bent), "regular": _flag(r.regular),
               "agreement": _flag(r.agreement), "alt_bent": _flag(r.alt_bent), "alt_regular": _flag(r.alt_regular),
               "side": ";".join(f"{k}={v}" for k, v in r.side.items())}
        for k, v in r.params.items():
            row[f"log_{k}"] = "" if v is None else v
        for k, v in r.criteria.items():
            row[f"crit_{k}"] = _flag(v)
        w.writerow([row[c] for c in cols])
    return buf.getvalue()


def records_from_csv(text: str) -> list[SearchRecord]:
    rows = csv.DictReader(io.StringIO(text))
    out = []
    for row in rows:
        side = dict(item.split("=", 1) for item in row["side"].split(";")) if row["side"] else {}
        out.append(SearchRecord(
            index=int(row["index"]),
            family=row["family"],
            params={k[4:]: (int(v) if v != "" else None) for k, v in row.items() if k.startswith("log_")},
            bent=bool(int(row["bent"])),
            regular=bool(int(row["regular"])),
            criteria={k[5:]: _unflag(v) for k, v in row.items() if k.startswith("crit_")},
            agreement=bool(int(row["agreement"])),
            side=side,
            alt_bent=_unflag(row.get("alt_bent", "")),
            alt_regular=_unflag(row.get("alt_regular", "")),
        ))
    return out


def persist(records: list[SearchRecord], summary: SearchSummary, fmt: str, path, job: SearchJob | None = None) -> None:
    """Write records as CSV (summary to ``<path>.summary``) or JSON (summary as footer)."""
    path = Path(path)
    try:
        if fmt == "csv":
            path.write_text(records_to_csv(records, job))
            Path(f"{path}.summary").write_text(json.dumps(summary.to_json(), indent=2) + "\n")
        elif fmt == "json":
            doc = {"job": job.to_json() if job else None,
                   "records": [r.to_json() for r in records],
                   "summary": summary.to_json()}
            path.write_text(json.dumps(doc, indent=1) + "\n")
        else:
            raise SearchError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def load(path, fmt: str | None = None) -> tuple[list[SearchRecord], SearchSummary | None]:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    try:
        text = path.read_text()
        if fmt == "json":
            doc = json.loads(text)
            return [SearchRecord.from_json(r) for r in doc["records"]], SearchSummary.from_json(doc["summary"])
        summary_path = Path(f"{path}.summary")
        summary = SearchSummary.from_json(json.loads(summary_path.read_text())) if summary_path.exists() else None
        return records_from_csv(text), summary
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# golden presets


@dataclass(frozen=True)
class Golden:
    job: SearchJob
    expect: dict[str, int]  # summary attribute -> count; empty means "no disagreements" only
    description: str


def _default_spec(p: int, n: int) -> FieldSpec:
    return build_field(p, n).spec


def golden(name: str) -> Golden:
    if name == "example1":
        job = SearchJob(_default_spec(2, 6), "B1", (("d", 9), ("l", 1), ("b", 0)),
                        (("a0", Domain(3)), ("a1", Domain(3))), name=name)
        return Golden(job, {"bent": 9}, "B1, n=6, d=9, l=1, a0 and a1 over F_8^*")
    if name == "example2":
        job = SearchJob(_default_spec(2, 4), "B1", (("d", 5), ("l", 5)),
                        (("a0", Domain(2)), ("a1", Domain(2)), ("b", Domain(4))),
                        distinct=(("a0", "a1"),), name=name)
        return Golden(job, {"bent": 60}, "B1, n=4, d=5, l=5, a0 != a1 over F_4^*, b over F_16^*")
    if name == "example3":
        job = SearchJob(_default_spec(2, 6), "B2", (("r", 3), ("s", 1)), (("a", Domain(6)),), name=name)
        return Golden(job, {"bent": 36, "regular": 36}, "B2, n=6, r=3, s=1, a over F_64^*")
    if name == "example4":
        job = SearchJob(_default_spec(3, 6), "P1", (("l", 4),),
                        (("a", Domain(3, shift=26)), ("b", Domain(2))), alt_exponent=144, name=name)
        return Golden(job, {"regular": 48}, "P1, p=3, n=6, l=4, a = abar*xi with abar over F_27^*, b over F_9^*")
    if name == "p3-r2":
        job = SearchJob(_default_spec(3, 6), "P2", (("r", 2), ("s", 1)),
                        (("a", Domain(6)), ("b", Domain(1, nonzero=False))), name=name)
        return Golden(job, {}, "P2, p=3, n=6, r=2, s=1, a over F_729^*, b over F_3")
    raise SearchError(f"unknown golden preset {name!r}; choose from {', '.join(GOLDEN_NAMES)}")


GOLDEN_NAMES = ("example1", "example2", "example3", "example4", "p3-r2")


def unordered_pairs(records: list[SearchRecord], x: str, y: str, attr: str = "bent") -> int:
    """Bent points counted once per unordered {x, y}."""
    seen = set()
    for r in records:
        if getattr(r, attr):
            seen.add(frozenset((r.params[x], r.params[y])))
    return len(seen)


def golden_verdict(g: Golden, records: list[SearchRecord], summary: SearchSummary) -> tuple[bool, list[str]]:
    """Compare a preset's run against its expected counts; returns (ok, report lines)."""
    lines = []
    ok = summary.disagreements == 0
    lines.append(f"disagreements={summary.disagreements}")
    for attr, want in g.expect.items():
        got = getattr(summary, attr)
        if g.job.alt_exponent is not None:
            alt = getattr(summary, f"alt_{attr}")
            ctx = g.job.ctx()
            primary = dict(g.job.fixed)["l"] * (ctx.p**ctx.m - 1)
            variants = ((f"x^{primary}", got), (f"x^{g.job.alt_exponent}", alt))
            matched = [label for label, v in variants if v == want]
            lines.append(f"{attr}: x^{primary}={got} x^{g.job.alt_exponent}={alt} expected={want} "
                         f"matched={','.join(matched) or 'none'}")
            ok &= bool(matched)
        else:
            lines.append(f"{attr}: got={got} expected={want}")
            ok &= got == want
    return ok, lines
