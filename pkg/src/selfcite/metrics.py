"""Per-researcher impact metrics, traditional and self-citation-adjusted.

The headline quantity is the self-citation-adjusted index

    SCAI = h - alpha * (SCR - beta)^gamma * h

where SCR is the researcher's self-citation ratio. The penalty is a
one-sided hinge: SCR at or below the threshold beta costs nothing, so
moderate self-citation leaves the score untouched, and the fractional
exponent stays well defined. The result is clamped at zero from below
(unreachable with default parameters, reachable with a large alpha).

Alongside SCAI this module computes the h-index over all citations and
over external-only citations, the i10-index, the s-index (an h-style
index over per-publication self-citation counts), and the inflation of
h attributable to self-citation, measured against the external-only
baseline. All arithmetic is 64-bit float; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .corpus import Corpus
from .identity import CitationCounts, SelfCitationMode, count_citations

DEFAULT_ALPHA = 0.5
DEFAULT_BETA = 0.1
DEFAULT_GAMMA = 1.5


class InvalidParams(ValueError):
    """Metric parameters outside their legal ranges."""


class SelfExceedsTotal(ValueError):
    """More self-citations than total citations."""


class ExternalExceedsAll(ValueError):
    """External-only h-index larger than the all-citations h-index."""


@dataclass(frozen=True)
class MetricParams:
    """Shape of the SCAI penalty.

    ``alpha`` scales the penalty, ``beta`` is the no-penalty threshold on
    the self-citation ratio, ``gamma`` controls how fast the penalty grows
    past the threshold.
    """

    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        if not (self.alpha >= 0):
            raise InvalidParams(f"alpha must be >= 0, got {self.alpha}")
        if not (0 <= self.beta <= 1):
            raise InvalidParams(f"beta must be in [0, 1], got {self.beta}")
        if not (self.gamma >= 1):
            raise InvalidParams(f"gamma must be >= 1, got {self.gamma}")


@dataclass(frozen=True)
class MetricsReport:
    researcher_id: str
    h_index: int
    h_index_external: int
    i10_index: int
    total_citations: int
    self_citations: int
    scr: float
    scai: float
    s_index: int
    inflation: Optional[float]
    yearly_scr: dict[int, float] = field(default_factory=dict)


def compute_h_index(citation_counts: list[int]) -> int:
    """Largest h with at least h entries >= h."""
    h = 0
    for rank, count in enumerate(sorted(citation_counts, reverse=True), start=1):
        if count >= rank:
            h = rank
        else:
            break
    return h


def compute_i10(citation_counts: list[int]) -> int:
    """Number of entries with at least 10 citations."""
    return sum(1 for count in citation_counts if count >= 10)


def compute_scr(self_citations: int, total_citations: int) -> float:
    """Self-citation ratio; 0 by convention when there are no citations."""
    if self_citations < 0 or total_citations < 0:
        raise ValueError("citation counts cannot be negative")
    if self_citations > total_citations:
        raise SelfExceedsTotal(
            f"{self_citations} self-citations exceed {total_citations} total"
        )
    if total_citations == 0:
        return 0.0
    return self_citations / total_citations


def compute_scai(h: int, scr: float, params: MetricParams = MetricParams()) -> float:
    """Self-citation-adjusted index; equals h exactly for scr <= beta."""
    if not (0 <= scr <= 1):
        raise ValueError(f"scr must be in [0, 1], got {scr}")
    if scr <= params.beta:
        return float(h)
    penalty = params.alpha * (scr - params.beta) ** params.gamma * h
    return max(0.0, h - penalty)


def compute_s_index(self_citation_counts_per_publication: list[int]) -> int:
    """h-style index over per-publication self-citation counts."""
    return compute_h_index(self_citation_counts_per_publication)


def compute_inflation(h_all: int, h_external: int) -> Optional[float]:
    """Relative excess of h over its external-only baseline.

    None when the external-only h-index is zero (no meaningful baseline).
    """
    if h_external < 0 or h_all < 0:
        raise ValueError("h-index values cannot be negative")
    if h_external > h_all:
        raise ExternalExceedsAll(f"h_external {h_external} exceeds h_all {h_all}")
    if h_external == 0:
        return None
    return (h_all - h_external) / h_external


def compute_report(
    corpus: Corpus,
    focal: str,
    params: MetricParams = MetricParams(),
    mode: SelfCitationMode = SelfCitationMode.FOCAL,
) -> MetricsReport:
    """Full metrics report for one researcher.

    Counts incoming citations per publication, splits them into self and
    external per the classification mode, and assembles every metric.
    ``yearly_scr`` maps each calendar year in which the researcher was
    cited to the self-citation ratio of that year's citations.
    """
    counts = count_citations(corpus, focal, mode)
    return report_from_counts(counts, params)


def report_from_counts(
    counts: CitationCounts, params: MetricParams = MetricParams()
) -> MetricsReport:
    """Assemble a report from precomputed citation tallies."""
    totals = [t.total for t in counts.per_publication.values()]
    self_counts = [t.self for t in counts.per_publication.values()]
    externals = [t.external for t in counts.per_publication.values()]

    h_all = compute_h_index(totals)
    h_ext = compute_h_index(externals)
    total = sum(totals)
    self_total = sum(self_counts)
    scr = compute_scr(self_total, total)
    yearly = {
        year: compute_scr(tally.self, tally.total)
        for year, tally in counts.per_year.items()
    }
    return MetricsReport(
        researcher_id=counts.focal_researcher,
        h_index=h_all,
        h_index_external=h_ext,
        i10_index=compute_i10(totals),
        total_citations=total,
        self_citations=self_total,
        scr=scr,
        scai=compute_scai(h_all, scr, params),
        s_index=compute_s_index(self_counts),
        inflation=compute_inflation(h_all, h_ext),
        yearly_scr=yearly,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

REPORT_FIELDS = (
    "researcher_id",
    "h_index",
    "h_index_external",
    "i10_index",
    "total_citations",
    "self_citations",
    "scr",
    "scai",
    "s_index",
    "inflation",
    "yearly_scr",
)


def report_to_json(report: MetricsReport) -> dict:
    """JSON-ready dict with stable field order and sorted year keys."""
    return {
        "researcher_id": report.researcher_id,
        "h_index": report.h_index,
        "h_index_external": report.h_index_external,
        "i10_index": report.i10_index,
        "total_citations": report.total_citations,
        "self_citations": report.self_citations,
        "scr": report.scr,
        "scai": report.scai,
        "s_index": report.s_index,
        "inflation": report.inflation,
        "yearly_scr": {
            str(year): report.yearly_scr[year] for year in sorted(report.yearly_scr)
        },
    }


def report_from_json(record: dict) -> MetricsReport:
    """Rebuild a report from its JSON form (inverse of report_to_json)."""
    return MetricsReport(
        researcher_id=record["researcher_id"],
        h_index=int(record["h_index"]),
        h_index_external=int(record["h_index_external"]),
        i10_index=int(record["i10_index"]),
        total_citations=int(record["total_citations"]),
        self_citations=int(record["self_citations"]),
        scr=float(record["scr"]),
        scai=float(record["scai"]),
        s_index=int(record["s_index"]),
        inflation=(
            None if record.get("inflation") is None else float(record["inflation"])
        ),
        yearly_scr={
            int(year): float(value)
            for year, value in record.get("yearly_scr", {}).items()
        },
    )


def report_to_csv_row(report: MetricsReport) -> list[str]:
    """One CSV row in REPORT_FIELDS order; yearly series as year:value pairs."""
    yearly = ";".join(
        f"{year}:{report.yearly_scr[year]:.6f}" for year in sorted(report.yearly_scr)
    )
    return [
        report.researcher_id,
        str(report.h_index),
        str(report.h_index_external),
        str(report.i10_index),
        str(report.total_citations),
        str(report.self_citations),
        f"{report.scr:.6f}",
        f"{report.scai:.6f}",
        str(report.s_index),
        "" if report.inflation is None else f"{report.inflation:.6f}",
        yearly,
    ]
