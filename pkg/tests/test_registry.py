from collections import Counter

import pytest

from catalog_table import CATALOG
from waccess_kit.rules import RULES, descriptor, registry
from waccess_kit.rules.registry import RULE_CLASSES, THRESHOLDS, id_key


def test_counts():
    regs = registry()
    assert len(regs) == 29
    assert Counter(d.wcag_version for d in regs) == {"2.0": 13, "2.1": 9, "2.2": 7}
    assert Counter(d.level for d in regs) == {"A": 14, "AA": 10, "AAA": 5}


@pytest.mark.parametrize("rid,version,level,principle,title", CATALOG)
def test_row(rid, version, level, principle, title):
    d = descriptor(rid)
    assert (d.wcag_version, d.level, d.principle, d.title) == (version, level, principle, title)


def test_order_is_version_then_numeric_id():
    regs = registry()
    assert regs == sorted(regs, key=lambda d: (d.wcag_version, id_key(d.id)))
    assert [d.id for d in regs][:2] == ["1.1.1", "1.3.1"]
    assert id_key("1.4.11") > id_key("1.4.6")


def test_class_partition():
    classes = Counter(d.rule_class for d in registry())
    assert set(classes) == set(RULE_CLASSES)
    assert sum(classes.values()) == 29
    assert set(RULES) == {d.id for d in registry()}


def test_thresholds_table():
    assert THRESHOLDS["contrast_aa_normal"] == 4.5
    assert THRESHOLDS["target_size_aa_px"] == 24.0
    assert THRESHOLDS["interaction_animation_s"] == 0.5
