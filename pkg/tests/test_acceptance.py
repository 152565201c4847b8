"""The eleven acceptance criteria at full parameters, one PASS/FAIL line each."""
import pytest

from spectre_tiles import acceptance


@pytest.mark.parametrize("check", acceptance.ALL, ids=lambda c: f"criterion_{c.number:02d}")
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


def test_suite_definitions():
    assert sorted({fn.number for fn, _ in acceptance.SUITES["full"]}) == list(range(1, 12))
    assert {fn.number for fn, _ in acceptance.SUITES["proof"]} == {2, 3, 4, 5}


def test_corrupted_table_fails_with_kind_named():
    from spectre_tiles.hexsub import HEXAGON_TABLE
    table = dict(HEXAGON_TABLE)
    row = list(table["Ξ"])
    row[0], row[3] = row[3], row[0]
    table["Ξ"] = tuple(row)
    res = acceptance.c4_nine(table=table)
    assert not res.passed and "Ξ" in res.detail
