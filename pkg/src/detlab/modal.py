"""Determinism definitions and counterfactuals over finite model sets.

Worlds are discrete trajectories (integer times, symbolic state labels);
agreement is exact label equality.  The checkers decide, for a finite set
of law-satisfying worlds: determinism (agreement at one time propagates to
all times), its future- and past-directed halves, and strong determinism
(the set is a singleton).  The counterfactual evaluator uses standard
closest-worlds semantics with a caller-supplied similarity order and keeps
vacuous truth as a distinct verdict, because in singleton model sets every
counterfactual with a false antecedent is vacuously true and whole theories
of causation turn on noticing that.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import ValidationError

__all__ = [
    "FiniteWorld",
    "ModelSet",
    "Proposition",
    "SimilarityOrder",
    "CounterfactualVerdict",
    "DeterminismVerdict",
    "DependenceResult",
    "agree_at",
    "check_determinism",
    "check_futuristic_determinism",
    "check_historical_determinism",
    "check_strong_determinism",
    "counterfactual",
    "counterfactual_dependence",
    "load_model_set",
    "model_set_to_json",
    "load_proposition",
    "load_similarity",
]


@dataclass(frozen=True)
class FiniteWorld:
    """A possible world: a total map from time indices to state labels."""

    id: str
    trajectory: Mapping[int, str]

    def label_at(self, t: int) -> str:
        try:
            return self.trajectory[t]
        except KeyError:
            raise ValidationError(f"world {self.id!r} undefined at time {t}") from None


@dataclass(frozen=True)
class ModelSet:
    """The worlds a theory's laws allow, over a shared contiguous time domain."""

    worlds: tuple[FiniteWorld, ...]
    times: range
    actual_id: str | None = None

    def __post_init__(self):
        if not self.worlds:
            raise ValidationError("model set must be nonempty")
        if len(self.times) == 0:
            raise ValidationError("time domain must be nonempty")
        ids = [w.id for w in self.worlds]
        if len(set(ids)) != len(ids):
            raise ValidationError("world ids must be unique")
        for w in self.worlds:
            missing = [t for t in self.times if t not in w.trajectory]
            if missing:
                raise ValidationError(f"world {w.id!r} undefined at times {missing}")
        if self.actual_id is not None and self.actual_id not in ids:
            raise ValidationError(f"actual world {self.actual_id!r} not in the model set")

    def world(self, world_id: str) -> FiniteWorld:
        for w in self.worlds:
            if w.id == world_id:
                return w
        raise ValidationError(f"no world with id {world_id!r}")

    def __len__(self) -> int:
        return len(self.worlds)


@dataclass(frozen=True)
class Proposition:
    """An event (set of label/time pairs it occurs at) or a set of worlds.

    An event proposition holds in a world iff the world's trajectory passes
    through one of its (label, time) pairs.
    """

    event_pairs: frozenset[tuple[str, int]] | None = None
    world_ids: frozenset[str] | None = None
    name: str = ""

    def __post_init__(self):
        if (self.event_pairs is None) == (self.world_ids is None):
            raise ValidationError("exactly one of event_pairs / world_ids must be given")

    def holds_in(self, w: FiniteWorld) -> bool:
        if self.world_ids is not None:
            return w.id in self.world_ids
        assert self.event_pairs is not None
        return any(w.trajectory.get(t) == lbl for lbl, t in self.event_pairs)

    def validate_against(self, m: ModelSet) -> None:
        if self.world_ids is not None:
            known = {w.id for w in m.worlds}
            stray = self.world_ids - known
            if stray:
                raise ValidationError(f"proposition names unknown worlds {sorted(stray)}")
            return
        assert self.event_pairs is not None
        labels = {lbl for w in m.worlds for lbl in w.trajectory.values()}
        for lbl, t in self.event_pairs:
            if t not in m.times:
                raise ValidationError(f"proposition references time {t} outside the domain")
            if lbl not in labels:
                raise ValidationError(f"proposition references unknown label {lbl!r}")


@dataclass(frozen=True)
class SimilarityOrder:
    """Per-world total preorder over worlds; rank 0 means 'is that world'.

    Strong centering is built in: each world must be uniquely most similar
    to itself.
    """

    ranks: Mapping[str, Mapping[str, int]]

    def validate_against(self, m: ModelSet) -> None:
        ids = {w.id for w in m.worlds}
        for v in ids:
            row = self.ranks.get(v)
            if row is None or not ids <= set(row):
                raise ValidationError(f"similarity order incomplete at world {v!r}")
            if row[v] != 0 or any(row[u] == 0 for u in ids if u != v):
                raise ValidationError(f"world {v!r} must be uniquely most similar to itself")

    def rank_from(self, eval_id: str, other_id: str) -> int:
        return self.ranks[eval_id][other_id]


class CounterfactualVerdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    VACUOUS_TRUE = "vacuous-true"

    @property
    def holds(self) -> bool:
        return self is not CounterfactualVerdict.FALSE


@dataclass(frozen=True)
class DeterminismVerdict:
    """Checker outcome plus a counterexample (w, v, t_agree, t_disagree)."""

    holds: bool
    counterexample: tuple[str, str, int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def agree_at(w: FiniteWorld, v: FiniteWorld, t: int) -> bool:
    """Exact label agreement of two worlds at one time."""
    return w.label_at(t) == v.label_at(t)


def _pairwise_check(m: ModelSet, propagates_to) -> DeterminismVerdict:
    for w, v in itertools.combinations(m.worlds, 2):
        for t in m.times:
            if not agree_at(w, v, t):
                continue
            for u in propagates_to(m.times, t):
                if not agree_at(w, v, u):
                    return DeterminismVerdict(False, (w.id, v.id, t, u))
    return DeterminismVerdict(True)


def check_determinism(m: ModelSet) -> DeterminismVerdict:
    """Agreement at any time propagates to all times (trajectories never cross)."""
    return _pairwise_check(m, lambda times, t: times)


def check_futuristic_determinism(m: ModelSet) -> DeterminismVerdict:
    """Agreement propagates to all later times only."""
    return _pairwise_check(m, lambda times, t: (u for u in times if u > t))


def check_historical_determinism(m: ModelSet) -> DeterminismVerdict:
    """Agreement propagates to all earlier times only."""
    return _pairwise_check(m, lambda times, t: (u for u in times if u < t))


def check_strong_determinism(m: ModelSet) -> bool:
    """Exactly one nomologically possible world."""
    return len(m.worlds) == 1


def _closest_satisfying(m: ModelSet, sim: SimilarityOrder, eval_id: str,
                        holds: Callable[[FiniteWorld], bool]) -> list[FiniteWorld]:
    candidates = [w for w in m.worlds if holds(w)]
    if not candidates:
        return []
    best = min(sim.rank_from(eval_id, w.id) for w in candidates)
    return [w for w in candidates if sim.rank_from(eval_id, w.id) == best]


def _eval_counterfactual(m: ModelSet, sim: SimilarityOrder, eval_id: str,
                         antecedent: Callable[[FiniteWorld], bool],
                         consequent: Callable[[FiniteWorld], bool]) -> CounterfactualVerdict:
    closest = _closest_satisfying(m, sim, eval_id, antecedent)
    if not closest:
        return CounterfactualVerdict.VACUOUS_TRUE
    if all(consequent(w) for w in closest):
        return CounterfactualVerdict.TRUE
    return CounterfactualVerdict.FALSE


def counterfactual(m: ModelSet, sim: SimilarityOrder, a: Proposition, c: Proposition,
                   eval_world: str) -> CounterfactualVerdict:
    """'If A were the case, C would be' at ``eval_world``.

    Standard semantics over the finite model set: C must hold at every
    most-similar A-world; with no A-world in the set the conditional is
    vacuously true, the inevitable situation in a singleton model set
    whenever A fails at the one world there is.
    """
    m.world(eval_world)
    sim.validate_against(m)
    a.validate_against(m)
    c.validate_against(m)
    return _eval_counterfactual(m, sim, eval_world, a.holds_in, c.holds_in)


@dataclass(frozen=True)
class DependenceResult:
    """Both conjuncts of counterfactual dependence, plus the verdict.

    ``degenerate`` flags dependence that holds only through vacuity: the
    pathology that, under a singleton model set, makes every event
    counterfactually depend on every other.
    """

    depends: bool
    a_then_c: CounterfactualVerdict
    not_a_then_not_c: CounterfactualVerdict

    @property
    def degenerate(self) -> bool:
        return self.depends and CounterfactualVerdict.VACUOUS_TRUE in (
            self.a_then_c, self.not_a_then_not_c
        )

    def __bool__(self) -> bool:
        return self.depends


def counterfactual_dependence(m: ModelSet, sim: SimilarityOrder, a: Proposition,
                              c: Proposition, eval_world: str) -> DependenceResult:
    """C depends on A iff (A []-> C) and (not-A []-> not-C) both hold."""
    m.world(eval_world)
    sim.validate_against(m)
    a.validate_against(m)
    c.validate_against(m)
    first = _eval_counterfactual(m, sim, eval_world, a.holds_in, c.holds_in)
    second = _eval_counterfactual(
        m, sim, eval_world,
        lambda w: not a.holds_in(w),
        lambda w: not c.holds_in(w),
    )
    return DependenceResult(first.holds and second.holds, first, second)


def load_model_set(obj: dict) -> ModelSet:
    """Parse {"times": [t0, t1], "worlds": [{"id", "trajectory"}], "actual"}."""
    try:
        t0, t1 = (int(x) for x in obj["times"])
        worlds = tuple(
            FiniteWorld(str(w["id"]), {int(t): str(lbl) for t, lbl in w["trajectory"].items()})
            for w in obj["worlds"]
        )
        actual = obj.get("actual")
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed model-set JSON: {exc}") from exc
    if t1 < t0:
        raise ValidationError(f"empty time domain [{t0}, {t1}]")
    return ModelSet(worlds, range(t0, t1 + 1), None if actual is None else str(actual))


def model_set_to_json(m: ModelSet) -> dict:
    return {
        "times": [m.times.start, m.times[-1]],
        "worlds": [
            {"id": w.id, "trajectory": {str(t): w.label_at(t) for t in m.times}}
            for w in m.worlds
        ],
        "actual": m.actual_id,
    }


def load_proposition(obj: dict) -> Proposition:
    """Parse {"pairs": [[label, t], ...]} or {"worlds": [id, ...]}."""
    try:
        if "pairs" in obj:
            return Proposition(
                event_pairs=frozenset((str(lbl), int(t)) for lbl, t in obj["pairs"]),
                name=str(obj.get("name", "")),
            )
        return Proposition(
            world_ids=frozenset(str(i) for i in obj["worlds"]),
            name=str(obj.get("name", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed proposition JSON: {exc}") from exc


def load_similarity(obj: dict) -> SimilarityOrder:
    """Parse {world_id: {world_id: rank, ...}, ...}."""
    try:
        ranks = {
            str(v): {str(u): int(r) for u, r in row.items()} for v, row in obj.items()
        }
    except (AttributeError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed similarity JSON: {exc}") from exc
    return SimilarityOrder(ranks)
