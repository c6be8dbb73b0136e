"""Johnson-style greedy reducers and a brute-force reduct oracle.

Both reducers share one engine. A clause is satisfied once the t-conorm fold
of the memberships of the selected features reaches that clause's own maxSAT
degree (not 1). Unit clauses (a single nonzero membership) are propagated
first, in ascending pair order; otherwise the feature that appears with
nonzero membership in the most unsatisfied clauses is chosen, ties broken by
larger membership sum and then by lower column index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .discernibility import ClauseSet, CrispClause, FuzzyClause, Mode
from .errors import UnsatisfiableError
from .fuzzy import Connectives

SAT_TOL = 1e-9
BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class Step:
    feature: str
    cause: str  # "unit_clause" or "heuristic"
    pair: tuple[int, int] | None = None
    count: int | None = None
    total: float | None = None

    def as_dict(self) -> dict:
        out = {"feature": self.feature, "cause": self.cause}
        if self.pair is not None:
            out["pair"] = list(self.pair)
        else:
            out["score"] = {"count": self.count, "sum": self.total}
        return out


@dataclass(frozen=True)
class Reduct:
    features: tuple[str, ...]
    steps: tuple[Step, ...] = ()
    satisfied_at: tuple[tuple[tuple[int, int], int], ...] = field(default=())

    @property
    def as_set(self) -> frozenset[str]:
        return frozenset(self.features)

    def __len__(self):
        return len(self.features)

    def as_dict(self) -> dict:
        return {
            "features": list(self.features),
            "steps": [s.as_dict() for s in self.steps],
            "clause_satisfied_at": [{"pair": list(p), "step": k} for p, k in self.satisfied_at],
        }


def _fold(mu: np.ndarray, cols, conn: Connectives) -> float:
    return float(conn.s_fold(mu[list(cols)])) if len(cols) else 0.0


def is_satisfied(clause, selected, conn: Connectives | None = None) -> bool:
    """True when ``selected`` features satisfy ``clause`` up to its maxSAT degree.

    Crisp clauses take feature names; fuzzy clauses take column indices.
    """
    if isinstance(clause, CrispClause):
        return bool(clause.features & set(selected))
    conn = conn or Connectives()
    mu = clause.memberships
    return _fold(mu, sorted(set(selected)), conn) >= float(conn.s_fold(mu)) - SAT_TOL


def _matrix(clauses) -> np.ndarray:
    if isinstance(clauses, ClauseSet):
        return clauses.memberships
    if isinstance(clauses, np.ndarray):
        return np.atleast_2d(clauses).astype(np.float64)
    clauses = list(clauses)
    if clauses and isinstance(clauses[0], FuzzyClause):
        return np.array([c.memberships for c in clauses], dtype=np.float64)
    return np.atleast_2d(np.asarray(clauses, dtype=np.float64))


def _score(mu: np.ndarray, selected: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
    positive = mu > 0
    counts = positive.sum(axis=0)
    sums = np.where(positive, mu, 0.0).sum(axis=0)
    counts[selected] = -1
    if not (counts > 0).any():
        raise UnsatisfiableError("unsatisfiable residue: no unselected feature discerns any open clause")
    # most clauses, then largest membership sum, then lowest column
    order = np.lexsort((np.arange(mu.shape[1]), -sums, -counts))
    return int(order[0]), counts, sums


def select_literal(clauses, selected=(), conn: Connectives | None = None) -> int:
    """Column index of the best unselected feature over the given open clauses."""
    mu = _matrix(clauses)
    mask = np.zeros(mu.shape[1], dtype=bool)
    mask[list(selected)] = True
    return _score(mu, mask)[0]


def _johnson(cs: ClauseSet, conn: Connectives, unit_threshold: float = 0.0) -> Reduct:
    mu = cs.memberships
    k, m = mu.shape
    if k == 0:
        return Reduct(())
    best = np.asarray(conn.s_fold(mu, axis=1))
    target = best - SAT_TOL
    if np.any(best <= 0):
        bad = cs.pairs[int(np.flatnonzero(best <= 0)[0])]
        raise UnsatisfiableError(f"clause {bad} cannot be satisfied by any feature")
    unit_cols = np.full(k, -1)
    support = mu > unit_threshold
    single = support.sum(axis=1) == 1
    unit_cols[single] = support[single].argmax(axis=1)

    acc = np.zeros(k)
    open_ = np.ones(k, dtype=bool)
    done_at = np.full(k, -1)
    chosen = np.zeros(m, dtype=bool)
    order: list[int] = []
    steps: list[Step] = []

    def take(f: int, step: Step):
        nonlocal acc
        chosen[f] = True
        order.append(f)
        steps.append(step)
        acc = np.where(open_, conn.s(acc, mu[:, f]), acc)
        newly = open_ & (acc >= target)
        done_at[newly] = len(steps) - 1
        open_[newly] = False

    while open_.any():
        units = np.flatnonzero(open_ & (unit_cols >= 0) & ~chosen[np.maximum(unit_cols, 0)])
        if units.size:
            r = units[0]
            f = int(unit_cols[r])
            take(f, Step(cs.feature_names[f], "unit_clause", pair=cs.pairs[r]))
            continue
        f, counts, sums = _score(mu[open_], chosen)
        take(f, Step(cs.feature_names[f], "heuristic", count=int(counts[f]), total=float(sums[f])))

    names = tuple(cs.feature_names[f] for f in order)
    satisfied = tuple((cs.pairs[r], int(done_at[r])) for r in range(k))
    return Reduct(names, tuple(steps), satisfied)


def jra_crisp(cs: ClauseSet) -> Reduct:
    """Johnson reducer over a crisp clause set."""
    if cs.mode is not Mode.CRISP:
        raise ValueError(f"jra_crisp needs a crisp clause set, got {cs.mode.value}")
    if len(cs) and not cs.memberships.any(axis=1).all():
        raise UnsatisfiableError("empty clause in crisp clause set")
    return _johnson(cs, Connectives())


def fjra(cs: ClauseSet, conn: Connectives | None = None, unit_threshold: float = 0.0) -> Reduct:
    """Fuzzy Johnson reducer.

    ``unit_threshold`` widens what counts as a unit clause (a single membership
    above the threshold); the default reads it as a single nonzero membership.
    """
    if cs.mode is Mode.CRISP:
        raise ValueError("fjra needs a fuzzy clause set; use jra_crisp for crisp mode")
    return _johnson(cs, conn or Connectives(), unit_threshold)


def brute_force_reducts(cs: ClauseSet, conn: Connectives | None = None) -> list[frozenset[str]]:
    """All inclusion-minimal feature subsets satisfying every clause of ``cs``."""
    conn = conn or Connectives()
    m = len(cs.feature_names)
    if m > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force refused: {m} features exceeds the limit of {BRUTE_FORCE_LIMIT}")
    clauses = list(cs)

    def satisfies(subset) -> bool:
        if cs.mode is Mode.CRISP:
            names = {cs.feature_names[f] for f in subset}
            return all(is_satisfied(c, names) for c in clauses)
        return all(is_satisfied(c, subset, conn) for c in clauses)

    satisfying = [frozenset(subset)
                  for size in range(m + 1)
                  for subset in itertools.combinations(range(m), size)
                  if satisfies(subset)]
    # by nondecreasing size, so any proper satisfying subset was seen first
    found: list[frozenset[int]] = []
    for s in satisfying:
        if not any(prev < s for prev in found):
            found.append(s)
    return sorted((frozenset(cs.feature_names[f] for f in s) for s in found),
                  key=lambda s: (len(s), sorted(s)))
