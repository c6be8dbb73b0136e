"""Crisp and fuzzy discernibility clauses.

A clause for the object pair ``(i, j)`` lists, per conditional feature, how
strongly that feature tells the two objects apart. Clause sets are stored as
a dense ``(clauses, features)`` membership matrix so that wide tables
(thousands of features) stay vectorized; individual clauses are materialized
on demand.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .dataset import DecisionSystem
from .fuzzy import Connectives, Kernel, pair_degrees

DUPLICATE_TOL = 1e-9
SUBSUMPTION_TOL = 1e-9


class Mode(str, Enum):
    CRISP = "crisp"
    FUZZY_BASELINE = "fuzzy_baseline"
    FUZZY_PROPOSED = "fuzzy_proposed"


@dataclass(frozen=True)
class CrispClause:
    pair: tuple[int, int]
    features: frozenset[str]

    def __bool__(self):
        return bool(self.features)


@dataclass(frozen=True, eq=False)
class FuzzyClause:
    pair: tuple[int, int]
    memberships: np.ndarray
    decision_degree: float
    max_sat: float

    @classmethod
    def of(cls, memberships: Sequence[float], pair=(0, 1), decision_degree=1.0,
           conn: Connectives | None = None) -> "FuzzyClause":
        """Build a clause from raw degrees, computing its maxSAT under ``conn``."""
        conn = conn or Connectives()
        mu = np.asarray(memberships, dtype=np.float64)
        return cls(tuple(pair), mu, float(decision_degree), float(conn.s_fold(mu)))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.memberships > 0)

    @property
    def is_unit(self) -> bool:
        return self.support.size == 1

    def as_dict(self, feature_names: Sequence[str]) -> dict:
        return {
            "pair": list(self.pair),
            "memberships": dict(zip(feature_names, map(float, self.memberships))),
            "decision_degree": self.decision_degree,
            "max_sat": self.max_sat,
        }


@dataclass
class ClauseStats:
    """Where every generated pair clause ended up."""

    generated: int = 0
    decision_zero: int = 0
    vacuous: int = 0
    duplicate: int = 0
    subsumed: int = 0
    retained: int = 0

    def reconciles(self) -> bool:
        return self.generated == (self.retained + self.decision_zero + self.vacuous
                                  + self.duplicate + self.subsumed)


@dataclass(eq=False)
class ClauseSet:
    mode: Mode
    feature_names: tuple[str, ...]
    pairs: list[tuple[int, int]]
    memberships: np.ndarray
    decision_degrees: np.ndarray
    max_sats: np.ndarray
    provenance: dict = field(default_factory=dict)
    stats: ClauseStats = field(default_factory=ClauseStats)
    warnings: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, k: int):
        if self.mode is Mode.CRISP:
            names = frozenset(self.feature_names[f] for f in np.flatnonzero(self.memberships[k]))
            return CrispClause(self.pairs[k], names)
        return FuzzyClause(self.pairs[k], self.memberships[k],
                           float(self.decision_degrees[k]), float(self.max_sats[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def clauses(self) -> list:
        return list(self)

    def index_of(self, pair) -> int:
        return self.pairs.index(tuple(pair))

    @classmethod
    def from_clauses(cls, clauses: Iterable[FuzzyClause], feature_names: Sequence[str],
                     mode: Mode = Mode.FUZZY_PROPOSED, provenance: dict | None = None) -> "ClauseSet":
        clauses = list(clauses)
        m = len(feature_names)
        mu = np.array([c.memberships for c in clauses], dtype=np.float64).reshape(len(clauses), m)
        cs = cls(Mode(mode), tuple(feature_names), [tuple(c.pair) for c in clauses], mu,
                 np.array([c.decision_degree for c in clauses], dtype=np.float64),
                 np.array([c.max_sat for c in clauses], dtype=np.float64),
                 dict(provenance or {}))
        cs.stats = ClauseStats(generated=len(cs), retained=len(cs))
        return cs

    @classmethod
    def from_crisp(cls, clauses: Iterable[CrispClause], feature_names: Sequence[str]) -> "ClauseSet":
        clauses = list(clauses)
        mu = np.zeros((len(clauses), len(feature_names)))
        for k, clause in enumerate(clauses):
            for name in clause.features:
                mu[k, feature_names.index(name)] = 1.0
        ones = np.ones(len(clauses))
        cs = cls(Mode.CRISP, tuple(feature_names), [c.pair for c in clauses], mu,
                 ones.copy(), (mu.sum(axis=1) > 0).astype(np.float64))
        cs.stats = ClauseStats(generated=len(cs), retained=len(cs))
        return cs

    def subset(self, rows: Sequence[int]) -> "ClauseSet":
        rows = list(rows)
        return ClauseSet(self.mode, self.feature_names, [self.pairs[r] for r in rows],
                         self.memberships[rows], self.decision_degrees[rows],
                         self.max_sats[rows], dict(self.provenance),
                         ClauseStats(**asdict(self.stats)), list(self.warnings))

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "features": list(self.feature_names),
            "provenance": self.provenance,
            "stats": asdict(self.stats),
            "warnings": list(self.warnings),
            "clauses": [
                {
                    "pair": list(self.pairs[k]),
                    "memberships": dict(zip(self.feature_names, map(float, self.memberships[k]))),
                    "decision_degree": float(self.decision_degrees[k]),
                    "max_sat": float(self.max_sats[k]),
                }
                for k in range(len(self))
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "ClauseSet":
        names = tuple(doc["features"])
        rows = doc["clauses"]
        mu = np.array([[c["memberships"][n] for n in names] for c in rows],
                      dtype=np.float64).reshape(len(rows), len(names))
        return cls(Mode(doc["mode"]), names, [tuple(c["pair"]) for c in rows], mu,
                   np.array([c["decision_degree"] for c in rows], dtype=np.float64),
                   np.array([c["max_sat"] for c in rows], dtype=np.float64),
                   dict(doc.get("provenance", {})), ClauseStats(**doc.get("stats", {})),
                   list(doc.get("warnings", [])))


# -- crisp discernibility ------------------------------------------------------


def crisp_dm(ds: DecisionSystem) -> list[list[CrispClause]]:
    """Decision-relative discernibility matrix as a symmetric grid of clauses."""
    n = ds.object_count
    codes = ds.decision_codes
    grid = [[CrispClause((min(i, j), max(i, j)), frozenset()) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if codes[i] == codes[j]:
                continue
            differ = ds.data[i] != ds.data[j]
            feats = frozenset(ds.feature_names[f] for f in np.flatnonzero(differ))
            grid[i][j] = grid[j][i] = CrispClause((i, j), feats)
    return grid


def crisp_clauses(ds: DecisionSystem) -> list[CrispClause]:
    """Upper-triangle clauses of :func:`crisp_dm` in ascending pair order."""
    grid = crisp_dm(ds)
    n = ds.object_count
    return [grid[i][j] for i in range(n) for j in range(i + 1, n)]


def crisp_simplify(clauses: Iterable[CrispClause]) -> list[CrispClause]:
    """Drop empty and duplicate clauses, then every clause that contains another."""
    unique: list[CrispClause] = []
    seen: set[frozenset] = set()
    for clause in clauses:
        if clause.features and clause.features not in seen:
            seen.add(clause.features)
            unique.append(clause)
    return [c for c in unique
            if not any(o.features < c.features for o in unique)]


# -- fuzzy clauses ---------------------------------------------------------------


def fuzzy_clause(ds: DecisionSystem, i: int, j: int, mode: Mode = Mode.FUZZY_PROPOSED,
                 kernel: Kernel = Kernel.RANGE_LINEAR, conn: Connectives | None = None,
                 ddof: int = 0) -> FuzzyClause:
    if i == j:
        raise ValueError("a clause needs two distinct objects")
    mode = Mode(mode)
    if mode is Mode.CRISP:
        raise ValueError("fuzzy_clause builds fuzzy_baseline or fuzzy_proposed clauses only")
    conn = conn or Connectives()
    i, j = min(i, j), max(i, j)
    sim = pair_degrees(ds, np.array([i]), np.array([j]), kernel, ddof)[0]
    same = ds.labels[i] == ds.labels[j]
    if mode is Mode.FUZZY_PROPOSED:
        mu = sim if same else conn.negation(sim)
        decision = 1.0
    else:
        mu = conn.negation(sim)
        decision = conn.negation(float(same))
    return FuzzyClause((i, j), mu, decision, float(conn.s_fold(mu)))


def _as_vector(clause) -> np.ndarray:
    if isinstance(clause, FuzzyClause):
        return clause.memberships
    return np.asarray(clause, dtype=np.float64)


def max_sat(clause, conn: Connectives | None = None) -> float:
    """Largest degree to which ``clause`` can be satisfied: the t-conorm fold."""
    return float((conn or Connectives()).s_fold(_as_vector(clause)))


def subsumption_degree(c1, c2, conn: Connectives | None = None) -> float:
    """Graded degree to which ``c1`` subsumes ``c2``.

    ``sum_a T(c1[a], c2[a]) / sum_a c1[a]``; a value of 1 means ``c2`` is redundant.
    """
    conn = conn or Connectives()
    x, y = _as_vector(c1), _as_vector(c2)
    denom = x.sum()
    if denom <= 0:
        raise ValueError("subsumption degree is undefined for an all-zero subsumer")
    return float(conn.t(x, y).sum() / denom)


def _deficit(x: np.ndarray, y: np.ndarray, conn: Connectives) -> np.ndarray:
    # sum over features of x - T(x, y) >= 0; zero iff x fully subsumes y
    return (x - conn.t(x, y)).sum(axis=-1)


def _first_chunk(width: int) -> int:
    return min(width, 16)


class _ClauseFilter:
    """Online duplicate and subsumption filter over a growing clause store.

    Every unique clause stays in the store (so later duplicates of an evicted
    clause are still recognized as duplicates); ``alive`` marks the ones
    currently retained.
    """

    def __init__(self, width: int, conn: Connectives, simplify: bool, stats: ClauseStats):
        self.width = width
        self.conn = conn
        self.simplify = simplify
        self.stats = stats
        self.rows = np.empty((64, width))
        self.sums = np.empty(64)
        self.alive = np.zeros(64, dtype=bool)
        self.pairs: list[tuple[int, int]] = []

    def _grow(self):
        cap = 2 * self.rows.shape[0]
        for name in ("rows", "sums", "alive"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=old.dtype)
            new[: len(old)] = old
            setattr(self, name, new)

    def _prune(self, cand: np.ndarray, keep_fn) -> np.ndarray:
        """Narrow ``cand`` chunk by chunk over features while ``keep_fn`` holds."""
        acc = np.zeros(cand.size)
        start, step = 0, _first_chunk(self.width)
        while cand.size and start < self.width:
            stop = min(self.width, start + step)
            acc, keep = keep_fn(cand, start, stop, acc)
            cand, acc = cand[keep], acc[keep]
            start, step = stop, step * 4
        return cand

    def _duplicates(self, row: np.ndarray, total: float) -> np.ndarray:
        n = len(self.pairs)
        cand = np.flatnonzero(np.abs(self.sums[:n] - total) <= self.width * DUPLICATE_TOL)

        def close(cand, a, b, acc):
            gap = np.abs(self.rows[cand, a:b] - row[a:b]).max(axis=1, initial=0.0)
            acc = np.maximum(acc, gap)
            return acc, acc <= DUPLICATE_TOL

        return self._prune(cand, close)

    def _subsumers(self, row: np.ndarray) -> np.ndarray:
        cand = np.flatnonzero(self.alive[: len(self.pairs)])
        limit = SUBSUMPTION_TOL * self.sums

        def keep(cand, a, b, acc):
            acc = acc + _deficit(self.rows[cand, a:b], row[a:b], self.conn)
            return acc, acc <= limit[cand]

        return self._prune(cand, keep)

    def _subsumed_by(self, row: np.ndarray, total: float) -> np.ndarray:
        cand = np.flatnonzero(self.alive[: len(self.pairs)])
        limit = SUBSUMPTION_TOL * total

        def keep(cand, a, b, acc):
            acc = acc + _deficit(row[a:b], self.rows[cand, a:b], self.conn)
            return acc, acc <= limit

        return self._prune(cand, keep)

    def offer(self, pair: tuple[int, int], row: np.ndarray) -> None:
        total = row.sum()
        if self._duplicates(row, total).size:
            self.stats.duplicate += 1
            return
        alive = True
        if self.simplify:
            if self._subsumers(row).size:
                self.stats.subsumed += 1
                alive = False
            else:
                evicted = self._subsumed_by(row, total)
                self.alive[evicted] = False
                self.stats.subsumed += evicted.size
        k = len(self.pairs)
        if k == self.rows.shape[0]:
            self._grow()
        self.rows[k] = row
        self.sums[k] = total
        self.alive[k] = alive
        self.pairs.append(pair)

    def retained(self) -> tuple[list[tuple[int, int]], np.ndarray]:
        idx = np.flatnonzero(self.alive[: len(self.pairs)])
        return [self.pairs[k] for k in idx], self.rows[idx].copy()


def generate_clause_set(ds: DecisionSystem, mode: Mode = Mode.FUZZY_PROPOSED,
                        kernel: Kernel = Kernel.RANGE_LINEAR, conn: Connectives | None = None,
                        simplify: bool = True, ddof: int = 0, block: int = 256) -> ClauseSet:
    """Build the discernibility clause set of ``ds``.

    Pairs ``i < j`` are visited in ascending order. Clauses with a zero decision
    component (crisp and baseline modes, same-label pairs) and all-zero clauses
    are dropped, duplicates are dropped, and with ``simplify`` every clause is
    checked against the retained ones in both directions so the final set is
    pairwise non-subsuming.
    """
    mode, kernel = Mode(mode), Kernel(kernel)
    conn = conn or Connectives()
    n, m = ds.object_count, ds.feature_count
    rows_i, rows_j = np.triu_indices(n, 1)
    codes = ds.decision_codes
    stats = ClauseStats(generated=rows_i.size)
    filt = _ClauseFilter(m, conn, simplify, stats)
    t_sim = t_filter = 0.0

    for start in range(0, rows_i.size, block):
        bi, bj = rows_i[start:start + block], rows_j[start:start + block]
        same = codes[bi] == codes[bj]
        t0 = time.perf_counter()
        if mode is Mode.CRISP:
            mu = (ds.data[bi] != ds.data[bj]).astype(np.float64)
            decision = (~same).astype(np.float64)
        else:
            sim = pair_degrees(ds, bi, bj, kernel, ddof)
            if mode is Mode.FUZZY_BASELINE:
                mu = conn.negation(sim)
                decision = conn.negation(same.astype(np.float64))
            else:
                mu = np.where(same[:, None], sim, conn.negation(sim))
                decision = np.ones(bi.size)
        t1 = time.perf_counter()
        nonzero = mu.any(axis=1)
        for r in range(bi.size):
            if decision[r] == 0:
                stats.decision_zero += 1
            elif not nonzero[r]:
                stats.vacuous += 1
            else:
                filt.offer((int(bi[r]), int(bj[r])), mu[r])
        t_sim += t1 - t0
        t_filter += time.perf_counter() - t1

    pairs, mu = filt.retained()
    stats.retained = len(pairs)
    cs = ClauseSet(mode, ds.feature_names, pairs, mu, np.ones(len(pairs)),
                   np.asarray(conn.s_fold(mu, axis=1), dtype=np.float64).reshape(len(pairs)),
                   _provenance(mode, kernel, conn, simplify, ddof), stats)
    cs.provenance["seconds"] = {"similarity": t_sim, "filter": t_filter}
    if len(ds.label_set) < 2:
        cs.warnings.append("single decision label: no pair has differing decisions")
    if not len(cs) and rows_i.size:
        cs.warnings.append("empty clause set: nothing to discern")
    return cs


def _provenance(mode, kernel, conn, simplify, ddof) -> dict:
    return {
        "mode": mode.value,
        "kernel": kernel.value if mode is not Mode.CRISP else "crisp_equality",
        "connectives": conn.as_dict(),
        "simplify": bool(simplify),
        "sigma_ddof": ddof,
        "duplicate_tolerance": DUPLICATE_TOL,
        "subsumption_tolerance": SUBSUMPTION_TOL,
    }


def simplify_clause_set(cs: ClauseSet, conn: Connectives | None = None) -> ClauseSet:
    """Full pairwise subsumption pass over an existing clause set.

    A clause is removed when some other clause subsumes it; between two clauses
    that subsume each other the earlier one is kept. Quadratic in the number of
    clauses; meant for desk-scale sets and cross-checking.
    """
    conn = conn or Connectives()
    mu = cs.memberships
    sums = mu.sum(axis=1)
    if np.any(sums <= 0):
        raise ValueError("cannot simplify a clause set containing all-zero clauses")
    keep = []
    for k in range(len(cs)):
        # rows j that subsume clause k, and whether k subsumes them back
        over_k = _deficit(mu, mu[k], conn) <= SUBSUMPTION_TOL * sums
        k_over = _deficit(mu[k], mu, conn) <= SUBSUMPTION_TOL * sums[k]
        others = np.arange(len(cs)) != k
        beats = over_k & others & (~k_over | (np.arange(len(cs)) < k))
        if not beats.any():
            keep.append(k)
    out = cs.subset(keep)
    out.stats.subsumed += len(cs) - len(keep)
    out.stats.retained = len(keep)
    out.provenance["simplify"] = True
    return out
