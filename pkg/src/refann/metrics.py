"""Evaluation quantities over stored annotations: inter-annotator
agreement rate and per-annotation time."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .errors import InsufficientAnnotators
from .model import Annotation, EventKind, RefactoringTypeDefinition, TextRange

TIMED_EVENTS = frozenset({
    EventKind.SET_PARAMETER,
    EventKind.AUTOFILL,
    EventKind.CLEAR_PARAMETER,
})


def parameter_match(a: Iterable[TextRange], b: Iterable[TextRange]) -> bool:
    """Exact set equality of the two bound range sets. Empty-vs-empty
    counts as a match: both annotators agree the parameter is absent."""
    return set(a) == set(b)


@dataclass(frozen=True)
class PairComparison:
    annotator_a: str
    annotator_b: str
    matched: int
    total: int
    parameters: tuple[tuple[str, str, bool], ...]  # (side, name, matched)

    @property
    def rate(self) -> float:
        return self.matched / self.total

    def to_json(self) -> dict:
        return {
            "annotators": [self.annotator_a, self.annotator_b],
            "matched": self.matched,
            "total": self.total,
            "rate": self.rate,
            "parameters": [
                {"side": side, "name": name, "matched": ok}
                for side, name, ok in self.parameters
            ],
        }


@dataclass(frozen=True)
class InstanceAgreement:
    repository: str
    sha: str
    type_name: str
    pairs: tuple[PairComparison, ...]

    @property
    def rate(self) -> float:
        return sum(p.rate for p in self.pairs) / len(self.pairs)

    def to_json(self) -> dict:
        return {
            "commit": {"repository": self.repository, "sha": self.sha},
            "type": self.type_name,
            "rate": self.rate,
            "pairs": [p.to_json() for p in self.pairs],
        }


@dataclass(frozen=True)
class AgreementReport:
    instances: tuple[InstanceAgreement, ...]
    per_type: dict = field(default_factory=dict)
    overall: float = 0.0

    def to_json(self) -> dict:
        return {
            "overall": self.overall,
            "perType": dict(sorted(self.per_type.items())),
            "instances": [inst.to_json() for inst in self.instances],
        }


def _compare_pair(a: Annotation, b: Annotation,
                  type_def: RefactoringTypeDefinition) -> PairComparison:
    rows = []
    matched = 0
    for schema in type_def.all_parameters():
        ok = parameter_match(a.ranges(schema.side, schema.name),
                             b.ranges(schema.side, schema.name))
        matched += ok
        rows.append((schema.side.value, schema.name, ok))
    return PairComparison(
        annotator_a=a.annotator, annotator_b=b.annotator,
        matched=matched, total=len(rows), parameters=tuple(rows))


def agreement_rate(annotations: Iterable[Annotation],
                   lookup_type) -> AgreementReport:
    """Group annotations into instances (commit, type) and compare every
    unordered pair of annotators; instance rate is the mean pair rate,
    overall the mean instance rate."""
    groups: dict[tuple[str, str, str], list[Annotation]] = {}
    for ann in annotations:
        key = (ann.commit.repository, ann.commit.sha, ann.type_name)
        groups.setdefault(key, []).append(ann)

    instances = []
    for (repo, sha, type_name), anns in sorted(groups.items()):
        anns = sorted(anns, key=lambda a: (a.annotator, a.id))
        pairs = [
            _compare_pair(a, b, lookup_type(type_name))
            for a, b in combinations(anns, 2)
            if a.annotator != b.annotator
        ]
        if pairs:
            instances.append(InstanceAgreement(
                repository=repo, sha=sha, type_name=type_name,
                pairs=tuple(pairs)))
    if not instances:
        raise InsufficientAnnotators(
            "no instance is annotated by two or more annotators")

    per_type: dict[str, list[float]] = {}
    for inst in instances:
        per_type.setdefault(inst.type_name, []).append(inst.rate)
    return AgreementReport(
        instances=tuple(instances),
        per_type={name: sum(rates) / len(rates)
                  for name, rates in per_type.items()},
        overall=sum(i.rate for i in instances) / len(instances),
    )


def annotation_time(annotation: Annotation) -> Optional[int]:
    """Milliseconds between the first and the last parameter-touching
    event; None when the annotation has no such event."""
    stamps = [e.timestamp for e in annotation.events if e.kind in TIMED_EVENTS]
    if not stamps:
        return None
    return max(stamps) - min(stamps)
