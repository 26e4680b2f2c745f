import pytest

from dsmlin import cli, dsm, verify


@pytest.mark.parametrize("cap", [1, 4])
def test_all_checks_pass(cap):
    results = verify.run_checks(seed=1, cap=cap)
    assert len(results) == len(verify.CHECKS)
    assert [name for name, ok, _ in results if not ok] == []


def test_broken_rk4_weights_are_caught(monkeypatch, capsys):
    # perturbed weights still sum to one, so only the order drops
    monkeypatch.setattr(dsm, "RK4_WEIGHTS", (1 / 6 + 1e-3, 1 / 3, 1 / 3, 1 / 6 - 1e-3))
    passed, detail = verify.check_oracle_equivalence(0, 12)
    assert not passed, detail
    assert cli.main(["verify", "--size-cap", "4"]) == 1
    assert "FAIL  dsm: oracle equivalence" in capsys.readouterr().out


def test_exception_counts_as_failure(monkeypatch):
    def boom(seed, cap):
        raise RuntimeError("boom")

    monkeypatch.setattr(verify, "CHECKS", [("boom check", boom)])
    [(name, ok, detail)] = verify.run_checks()
    assert name == "boom check" and not ok and "boom" in detail
