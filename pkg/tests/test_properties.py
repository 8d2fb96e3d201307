import pytest

from parahoric_lab.errors import SuiteUnknown
from parahoric_lab.properties import SUITES, property_run
from parahoric_lab.sampling import spawn

FAST = [name for name in SUITES if name != "normal-form"]


@pytest.mark.parametrize("name", FAST)
def test_suite_passes(name):
    report = property_run(name, seed=7, count=15)
    assert report["failed"] == 0, report["failures"][:2]


def test_normal_form_suite():
    assert property_run("normal-form", seed=7, count=8)["failed"] == 0


def test_parahoric_equality_hundred():
    report = property_run("parahoric-equality", seed=7, count=100)
    assert report["passed"] == 100


@pytest.mark.parametrize("seed", [0, 1, 2**63 + 5])
def test_preservation_any_seed(seed):
    assert property_run("gauge-preserves-parahoric", seed=seed, count=10)["failed"] == 0


def test_unknown_suite():
    with pytest.raises(SuiteUnknown):
        property_run("parahoric-equalty", 0, 1)


def test_deterministic():
    assert property_run("jordan", 5, 10) == property_run("jordan", 5, 10)


def test_spawn_is_prefix_stable():
    # sample k depends only on (seed, k), so shards can be merged in any order
    a = [g.integers(0, 2**32) for g in spawn(9, 8)]
    b = [g.integers(0, 2**32) for g in spawn(9, 4)]
    assert a[:4] == b


def test_failure_report_has_reproduction(monkeypatch):
    from parahoric_lab import properties

    def broken(rng):
        return False, {"draw": int(rng.integers(0, 10))}

    monkeypatch.setitem(properties.SUITES, "broken", properties.Suite("broken", "", broken))
    report = property_run("broken", 1, 3)
    assert report["failed"] == 3
    assert all("draw" in f["reproduction"] for f in report["failures"])
