import pytest

from sixvertex import validation as v


def test_registry_names_unique_and_grouped():
    names = [c.name for c in v.CHECKS]
    assert len(names) == len(set(names))
    assert set(v.GROUPS) == {c.group for c in v.CHECKS}
    assert not set(names) & set(v.GROUPS)


def test_select():
    assert len(v.select(None)) == len(v.CHECKS)
    assert [c.name for c in v.select(["recurrences"])] == ["rec-z", "rec-efp"]
    assert [c.name for c in v.select(["ice-counts", "rec-z"])] == ["rec-z", "ice-counts"]
    with pytest.raises(ValueError, match="no-such-check"):
        v.select(["no-such-check"])


def test_tolerance_rules():
    exact = next(c for c in v.CHECKS if c.tol_digits is None)
    bound = next(c for c in v.CHECKS if c.precision_bound)
    fixed = next(c for c in v.CHECKS if c.name == "z-cross")
    assert exact.tolerance(128) == 0
    assert bound.tolerance(128) == pytest.approx(10.0 ** -(128 - bound.tol_digits))
    assert fixed.tolerance(128) == pytest.approx(1e-90)
    # below the reference precision the demanded digits shrink in proportion
    assert fixed.tolerance(64) == pytest.approx(1e-45)


def test_record_schema_and_reproducibility():
    check = next(c for c in v.CHECKS if c.name == "rec-efp")
    a, b = v.run_check(check), v.run_check(check)
    assert {"name", "anchor", "max_dev", "tol", "pass", "group", "schema", "seconds", "warnings"} <= set(a)
    assert a["pass"] is True and a["schema"] == v.SCHEMA_VERSION
    assert a["max_dev"] == b["max_dev"]
    assert v.run_check(check, seed=1)["max_dev"] != a["max_dev"]


def test_asm_count_closed_form():
    assert [v.asm_count(n) for n in range(1, 8)] == [1, 2, 7, 42, 429, 7436, 218348]
