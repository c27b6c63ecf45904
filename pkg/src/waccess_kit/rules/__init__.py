from .base import PageReport, Violation
from .engine import RULES, UnknownRule, evaluate_page, select_rules
from .registry import THRESHOLDS, RuleDescriptor, descriptor, registry, rule_ids

__all__ = [
    "PageReport", "Violation", "RULES", "UnknownRule", "evaluate_page", "select_rules",
    "THRESHOLDS", "RuleDescriptor", "descriptor", "registry", "rule_ids",
]
