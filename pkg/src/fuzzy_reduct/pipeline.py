"""End-to-end selection runs, reporting, 1-NN LOOCV evaluation and scatter export."""

from __future__ import annotations

import contextlib
import csv
import io
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dataset import CsvSchema, DecisionSystem, FeatureKind, format_value, load_csv
from .discernibility import ClauseSet, Mode, generate_clause_set
from .errors import DatasetError, FuzzyReductError, InvariantError
from .fuzzy import Connectives, Kernel, TConorm, TNorm
from .reducer import SAT_TOL, Reduct, fjra, jra_crisp

log = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    input: str = ""
    delimiter: str = ","
    decision_column: str | None = None
    kind_overrides: dict[str, str] = field(default_factory=dict)
    mode: Mode = Mode.FUZZY_PROPOSED
    kernel: Kernel = Kernel.RANGE_LINEAR
    tnorm: TNorm = TNorm.MINIMUM
    tconorm: TConorm = TConorm.LUKASIEWICZ
    simplify: bool = True
    sigma_ddof: int = 0
    output_format: str = "json"
    evaluate: bool = False
    scatter_k: int | None = None
    seed: int | None = None  # reserved; every algorithm here is deterministic

    def __post_init__(self):
        self.mode = Mode(self.mode)
        self.kernel = Kernel(self.kernel)
        self.tnorm = TNorm(self.tnorm)
        self.tconorm = TConorm(self.tconorm)
        self.kind_overrides = {k: FeatureKind(v).value for k, v in self.kind_overrides.items()}

    @property
    def schema(self) -> CsvSchema:
        return CsvSchema(self.delimiter, self.decision_column,
                         {k: FeatureKind(v) for k, v in self.kind_overrides.items()})

    @property
    def connectives(self) -> Connectives:
        return Connectives(self.tnorm, self.tconorm)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("mode", "kernel", "tnorm", "tconorm"):
            out[key] = getattr(self, key).value
        return out


@dataclass
class SelectionReport:
    config: RunConfig
    dataset: dict
    clauses: dict
    reduct: Reduct
    timings: dict[str, float]
    warnings: list[str] = field(default_factory=list)
    evaluation: dict | None = None
    status: str = "ok"

    @property
    def degenerate(self) -> bool:
        return self.status != "ok"

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "status": self.status,
            "config": self.config.to_dict(),
            "dataset": self.dataset,
            "clauses": self.clauses,
            "reduct": self.reduct.as_dict(),
            "evaluation": self.evaluation,
            "warnings": list(self.warnings),
            "timings": self.timings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary(self) -> str:
        d = self.dataset
        c = self.clauses["stats"]
        lines = [
            f"objects={d['objects']} features={d['features']} labels={','.join(d['labels'])}",
            f"mode={self.config.mode.value} kernel={self.config.kernel.value} "
            f"tnorm={self.config.tnorm.value} tconorm={self.config.tconorm.value} "
            f"simplify={'on' if self.config.simplify else 'off'}",
            f"clauses: generated={c['generated']} decision_zero={c['decision_zero']} "
            f"vacuous={c['vacuous']} duplicate={c['duplicate']} subsumed={c['subsumed']} "
            f"retained={c['retained']}",
            f"reduct: {{{', '.join(self.reduct.features)}}}",
        ]
        for n, step in enumerate(self.reduct.steps, 1):
            why = (f"unit clause on pair ({step.pair[0]}, {step.pair[1]})" if step.pair is not None
                   else f"heuristic count={step.count} sum={step.total:.2f}")
            lines.append(f"  {n}. {step.feature}  ({why})")
        if self.evaluation:
            lines.append(f"loocv 1-NN accuracy: {self.evaluation['accuracy']:.2f}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        lines.append("timings: " + " ".join(f"{k}={v:.2f}s" for k, v in self.timings.items()))
        return "\n".join(lines)


@contextlib.contextmanager
def _stage(name: str, timings: dict[str, float]):
    t0 = time.perf_counter()
    try:
        yield
    except Exception as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise
    finally:
        timings[name] = time.perf_counter() - t0


def load_input(config: RunConfig) -> DecisionSystem:
    try:
        return load_csv(config.input, config.schema)
    except OSError as exc:
        raise DatasetError(f"cannot read {config.input}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise DatasetError(f"{config.input} is not UTF-8 text: {exc}") from exc


def build_clauses(ds: DecisionSystem, config: RunConfig) -> ClauseSet:
    return generate_clause_set(ds, config.mode, config.kernel, config.connectives,
                               config.simplify, config.sigma_ddof)


def reduce_clauses(cs: ClauseSet, config: RunConfig) -> Reduct:
    if cs.mode is Mode.CRISP:
        return jra_crisp(cs)
    return fjra(cs, config.connectives)


def audit_reduct(cs: ClauseSet, reduct: Reduct, conn: Connectives) -> None:
    """Raise :class:`InvariantError` unless ``reduct`` satisfies every clause of ``cs``."""
    if not len(cs):
        return
    cols = [cs.feature_names.index(f) for f in reduct.features]
    if len(set(cols)) != len(cols):
        raise InvariantError("reduct selects a feature twice")
    if cs.mode is Mode.CRISP:
        conn = Connectives()
    best = np.asarray(conn.s_fold(cs.memberships, axis=1))
    got = np.asarray(conn.s_fold(cs.memberships[:, cols], axis=1))
    bad = np.flatnonzero(got < best - SAT_TOL)
    if bad.size:
        raise InvariantError(f"reduct leaves clause {cs.pairs[bad[0]]} unsatisfied")


def run_select(config: RunConfig) -> SelectionReport:
    """Load, build clauses, reduce, audit, optionally evaluate."""
    timings: dict[str, float] = {}
    with _stage("load", timings):
        ds = load_input(config)
    with _stage("clauses", timings):
        cs = build_clauses(ds, config)
        if not cs.stats.reconciles():
            raise InvariantError(f"clause accounting does not reconcile: {cs.stats}")
    sub = cs.provenance.pop("seconds", {})
    timings["similarity"] = sub.get("similarity", 0.0)
    timings["clause_filter"] = sub.get("filter", 0.0)
    with _stage("reduce", timings):
        reduct = reduce_clauses(cs, config)
        audit_reduct(cs, reduct, config.connectives)

    warnings = list(cs.warnings)
    status = "ok"
    if not len(cs):
        status = "degenerate"

    evaluation = None
    if config.evaluate:
        with _stage("eval", timings):
            if reduct.features and ds.object_count >= 3:
                evaluation = {"method": "loocv_1nn", "accuracy": loocv_eval(ds, reduct.features)}
            else:
                warnings.append("evaluation skipped: needs a non-empty reduct and at least 3 objects")

    clauses = {"provenance": cs.provenance, "stats": asdict(cs.stats)}
    return SelectionReport(config, ds.summary(), clauses, reduct, timings, warnings,
                           evaluation, status)


# -- evaluation ------------------------------------------------------------------


def _normalized(ds: DecisionSystem, cols: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    x = ds.data[:, cols].astype(np.float64)
    real = ds.real_mask[cols]
    span = ds.feature_range[cols]
    lo = ds.feature_min[cols]
    for k in np.flatnonzero(real):
        x[:, k] = 0.0 if span[k] == 0 else (x[:, k] - lo[k]) / span[k]
    return x, real


def loocv_eval(ds: DecisionSystem, reduct: Iterable[str]) -> float:
    """Leave-one-out accuracy of a 1-nearest-neighbour classifier on ``reduct``.

    Real features are range-normalized and compared by Euclidean distance;
    nominal features contribute a 0/1 mismatch. Distance ties go to the lowest
    object index.
    """
    cols = [ds.feature_index(f) for f in reduct]
    if not cols:
        raise ValueError("loocv_eval needs a non-empty reduct")
    if ds.object_count < 3:
        raise ValueError("loocv_eval needs at least 3 objects")
    x, real = _normalized(ds, cols)
    diff = x[:, None, :] - x[None, :, :]
    diff[..., ~real] = diff[..., ~real] != 0
    dist = (diff ** 2).sum(axis=-1)
    np.fill_diagonal(dist, np.inf)
    nearest = dist.argmin(axis=1)
    codes = ds.decision_codes
    return float((codes[nearest] == codes).mean())


# -- scatter export ----------------------------------------------------------------


def export_scatter(ds: DecisionSystem, reduct: Sequence[str], k: int, delimiter: str = ",") -> str:
    """Project objects onto the first ``k`` reduct features, in selection order."""
    reduct = list(reduct)
    if k < 0 or k > len(reduct):
        raise ValueError(f"k={k} exceeds the reduct size {len(reduct)}")
    cols = [ds.feature_index(f) for f in reduct[:k]]
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["id", *(ds.feature_names[c] for c in cols), ds.decision_name])
    if k == 0:
        return buf.getvalue()
    for i in range(ds.object_count):
        writer.writerow([i, *(format_value(ds.value(i, c)) for c in cols), ds.labels[i]])
    return buf.getvalue()


# -- matrix dumps ------------------------------------------------------------------


def dump_similarity(ds: DecisionSystem, feature: str, kernel: Kernel, ddof: int = 0,
                    delimiter: str = ",") -> str:
    from .fuzzy import similarity_matrix

    sm = similarity_matrix(ds, feature, kernel, ddof)
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow([sm.feature, *range(ds.object_count)])
    for i, row in enumerate(sm.degrees):
        writer.writerow([i, *(repr(float(v)) for v in row)])
    return buf.getvalue()


def dump_clauses(cs: ClauseSet, delimiter: str = ",") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["i", "j", *cs.feature_names, "decision_degree", "max_sat"])
    for k, (i, j) in enumerate(cs.pairs):
        writer.writerow([i, j, *(repr(float(v)) for v in cs.memberships[k]),
                         repr(float(cs.decision_degrees[k])), repr(float(cs.max_sats[k]))])
    return buf.getvalue()


# -- report schema -----------------------------------------------------------------


def report_schema() -> dict:
    text = resources.files("fuzzy_reduct").joinpath("report_schema.json").read_text()
    return json.loads(text)


def validate_report(doc: dict) -> None:
    import jsonschema

    jsonschema.validate(doc, report_schema())


def write_text(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, FuzzyReductError):
        return exc.exit_code
    if isinstance(exc, (ValueError, KeyError, OSError)):
        return 1
    return 3
