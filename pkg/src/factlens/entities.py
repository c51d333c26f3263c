"""Entity canonicalization, political filtering, and set overlap.

Surface forms map through a curated alias table to canonical names
(canonical names are fixed points); unmapped surfaces canonicalize to
themselves. Overlap between organizations is the Jaccard similarity of
their top-k political-entity sets, either globally or recomputed per
+/-w day window around each publication day.
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .annotation import Annotation
from .corpus import Corpus

logger = logging.getLogger(__name__)


def _lookup_key(surface: str) -> str:
    return " ".join(surface.split()).casefold()


@dataclass(frozen=True)
class AliasMap:
    """surface form -> canonical name, plus the political-name whitelist.

    ``political=None`` means no curated list was supplied and every
    canonical name passes the political filter.
    """

    mapping: Mapping[str, str]  # keys are casefolded, whitespace-collapsed
    political: frozenset[str] | None = None

    @classmethod
    def empty(cls) -> "AliasMap":
        return cls(mapping={}, political=None)

    def is_political(self, canonical: str) -> bool:
        if self.political is None:
            return True
        return canonical in self.political


def canonicalize(surface: str, aliases: AliasMap) -> str:
    """Canonical name for a surface form; unmapped surfaces are their own."""
    trimmed = " ".join(surface.split())
    return aliases.mapping.get(_lookup_key(trimmed), trimmed)


def build_alias_map(
    pairs: Iterable[tuple[str, str]], political: Iterable[str] | None = None
) -> AliasMap:
    """Build an AliasMap from (surface, canonical) pairs.

    Canonical names are forced to be fixed points; the political set, if
    given, holds canonical names.
    """
    mapping: dict[str, str] = {}
    for surface, canonical in pairs:
        canonical = " ".join(canonical.split())
        mapping[_lookup_key(surface)] = canonical
        mapping.setdefault(_lookup_key(canonical), canonical)
    pol = None if political is None else frozenset(political)
    return AliasMap(mapping=mapping, political=pol)


def load_aliases_csv(path: str | Path) -> AliasMap:
    """Read the alias sidecar: columns surface, canonical, political.

    The political yes/no flag is meaningful on canonical rows (surface
    equal to canonical) but is honored wherever it appears.
    """
    pairs: list[tuple[str, str]] = []
    political: set[str] = set()
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            surface = (row.get("surface") or "").strip()
            canonical = (row.get("canonical") or "").strip()
            if not surface or not canonical:
                continue
            pairs.append((surface, canonical))
            flag = (row.get("political") or "").strip().lower()
            if flag == "yes":
                political.add(" ".join(canonical.split()))
    return build_alias_map(pairs, political)


@dataclass(frozen=True)
class EntitySet:
    org: str
    k: int
    entities: tuple[tuple[str, int], ...]  # (canonical name, frequency)

    def names(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.entities)


def _article_entity_sets(
    annotations: Iterable[Annotation], aliases: AliasMap, political_only: bool
) -> list[frozenset[str]]:
    sets = []
    for ann in annotations:
        if "entities" in ann.failed_tags:
            continue
        names = {canonicalize(surface, aliases) for surface in ann.entities}
        if political_only:
            names = {n for n in names if aliases.is_political(n)}
        sets.append(frozenset(names))
    return sets


def _top_k(counter: Counter, k: int) -> tuple[tuple[str, int], ...]:
    ranked = sorted(counter.items(), key=lambda item: (-item[1], item[0]))
    return tuple(ranked[:k])


def top_k_entities(
    annotations: Iterable[Annotation],
    aliases: AliasMap,
    k: int,
    political_only: bool = True,
    org: str = "",
) -> EntitySet:
    """Most frequent canonical entities; one count per mentioning article."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counter: Counter = Counter()
    for names in _article_entity_sets(annotations, aliases, political_only):
        counter.update(names)
    return EntitySet(org=org, k=k, entities=_top_k(counter, k))


def jaccard(a: frozenset | set, b: frozenset | set) -> float | None:
    """Intersection over union; None when both sets are empty."""
    if not a and not b:
        return None
    return len(a & b) / len(a | b)


@dataclass(frozen=True)
class WindowedJaccard:
    org_x: str
    org_y: str
    k: int
    window_days: int
    days: tuple[dt.date, ...]
    values: tuple[float, ...]
    median: float | None


def org_mentions(
    corpus: Corpus,
    annotations: Mapping[str, Annotation],
    aliases: AliasMap,
    org: str,
    political_only: bool = True,
) -> list[tuple[dt.date, frozenset[str]]]:
    """Dated political-entity sets per article, sorted by date."""
    out = []
    for article in corpus.by_org(org):
        ann = annotations.get(article.id)
        if ann is None or "entities" in ann.failed_tags:
            continue
        names = {canonicalize(surface, aliases) for surface in ann.entities}
        if political_only:
            names = {n for n in names if aliases.is_political(n)}
        out.append((article.published_at, frozenset(names)))
    out.sort(key=lambda item: item[0])
    return out


def _window_counter(
    mentions: Sequence[tuple[dt.date, frozenset[str]]], lo: dt.date, hi: dt.date
) -> Counter:
    counter: Counter = Counter()
    for date, names in mentions:
        if lo <= date <= hi:
            counter.update(names)
    return counter


def windowed_jaccard(
    x_mentions: Sequence[tuple[dt.date, frozenset[str]]],
    y_mentions: Sequence[tuple[dt.date, frozenset[str]]],
    k: int,
    window_days: int,
    org_x: str = "X",
    org_y: str = "Y",
) -> WindowedJaccard:
    """Per-day overlap of windowed top-k entity sets.

    For each calendar day carrying at least one X article, both
    organizations' top-k sets are rebuilt over [d-w, d+w]; days where
    either set is empty are skipped.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    window = dt.timedelta(days=window_days)
    days = sorted({date for date, _ in x_mentions})
    kept_days: list[dt.date] = []
    values: list[float] = []
    for day in days:
        lo, hi = day - window, day + window
        set_x = frozenset(
            name for name, _ in _top_k(_window_counter(x_mentions, lo, hi), k)
        )
        set_y = frozenset(
            name for name, _ in _top_k(_window_counter(y_mentions, lo, hi), k)
        )
        if not set_x or not set_y:
            continue
        js = jaccard(set_x, set_y)
        assert js is not None
        kept_days.append(day)
        values.append(js)
    if not values:
        logger.warning("windowed jaccard %s-%s: no qualifying days", org_x, org_y)
        median = None
    else:
        ordered = sorted(values)
        mid = len(ordered) // 2
        median = (
            ordered[mid]
            if len(ordered) % 2
            else (ordered[mid - 1] + ordered[mid]) / 2.0
        )
    return WindowedJaccard(
        org_x=org_x,
        org_y=org_y,
        k=k,
        window_days=window_days,
        days=tuple(kept_days),
        values=tuple(values),
        median=median,
    )
