"""Runs the enabled checks over one parsed page and assembles a report."""

from __future__ import annotations

import logging
from datetime import datetime
from typing import Iterable, Sequence

from ..css import StyleDeclaration
from ..dom import DocumentModel
from . import aria, contrast, html_checks, interaction  # noqa: F401  (registers checks)
from .base import CHECKS, PageReport, Violation, dedupe, now_utc
from .registry import descriptor, rule_ids

log = logging.getLogger(__name__)

RULES = {rid: CHECKS[rid] for rid in rule_ids()}
NO_STYLES = "no style information"


class UnknownRule(KeyError):
    pass


def select_rules(enabled: Iterable[str] | None) -> list[str]:
    if enabled is None:
        return list(RULES)
    wanted = set(enabled)
    unknown = sorted(wanted - set(RULES))
    if unknown:
        raise UnknownRule(", ".join(unknown))
    return [rid for rid in RULES if rid in wanted]


def evaluate_page(
    doc: DocumentModel,
    styles: Sequence[StyleDeclaration] | None,
    enabled: Iterable[str] | None = None,
    *,
    fetched_at: datetime | None = None,
) -> PageReport:
    """Run every enabled rule; a failing rule is recorded, never raised.

    ``styles=None`` means no style information at all: rules that depend on
    computed styles are skipped rather than guessed.
    """
    violations: list[Violation] = []
    skipped: list[tuple[str, str]] = []
    skipped_elements: dict[str, int] = {}
    for rid in select_rules(enabled):
        if styles is None and descriptor(rid).needs_styles:
            skipped.append((rid, NO_STYLES))
            continue
        try:
            found = RULES[rid](doc, styles)
            if rid in ("2.5.5", "2.5.8"):
                skipped_elements[rid] = interaction.indeterminate_targets(doc, styles)
        except Exception as exc:  # contain rule bugs to the rule
            log.debug("rule %s failed on %s", rid, doc.url, exc_info=True)
            skipped.append((rid, f"rule error: {type(exc).__name__}"))
            continue
        violations.extend(found)
    violations = sorted(dedupe(violations), key=Violation.sort_key)
    return PageReport(
        url=doc.url,
        fetched_at=fetched_at or now_utc(),
        violations=violations,
        skipped_rules=skipped,
        skipped_elements=skipped_elements,
        parse_warnings=list(doc.parse_warnings),
    )
