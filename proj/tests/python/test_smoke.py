import math

import pytest

import fksym


def test_entries_and_manifest():
    names = fksym.entry_names()
    assert "besq" in names and "cir" in names
    m = fksym.manifest()
    assert m["schema"] == "fksym-catalog/1"
    assert [e["name"] for e in m["entries"]] == names
    assert dict(fksym.parameters("besq"))["n"] == 3.0


def test_besq_density_and_log_density():
    d = fksym.density("besq", {"n": 3}, 1.0, 1.0, 1.0)
    assert d == pytest.approx(math.exp(-1) * math.sinh(1) / math.sqrt(2 * math.pi), rel=1e-13)
    log_abs, sign = fksym.log_density("besq", {"n": 3}, 1.0, 1.0, 1.0)
    assert sign == 1.0 and math.exp(log_abs) == pytest.approx(d, rel=1e-14)
    assert fksym.log_density("besq", {"n": 3}, 1.0, 1.0, 0.0) == (-math.inf, 0.0)


def test_mass_and_atoms():
    assert fksym.total_mass("besq", {"n": 3}, 1.0, 1.0) == pytest.approx(1.0, abs=1e-8)
    (atom,) = fksym.atoms("rational", {"a": 2}, 1.0, 1.0)
    assert atom["order"] == 0
    assert atom["weight"] == pytest.approx(math.exp(-1) / 2, rel=1e-14)


def test_expectation():
    v = fksym.expectation("besq", {"n": 2, "b": 1}, 0.0, 1.0, 1.0)
    assert v == pytest.approx(math.exp(-math.tanh(1) / 2) / math.cosh(1), rel=1e-13)
    q = fksym.expectation("besq", {"n": 2, "b": 1}, 0.0, 1.0, 1.0, quadrature=True)
    assert q == pytest.approx(v, rel=1e-8)
    rows = fksym.joint_laplace_in_mu("cir", {}, 0.5, 1.0, 1.0, [0.1, 0.5, 1.0])
    values = [r[1] for r in rows]
    assert values == sorted(values, reverse=True)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError, match="unknown entry"):
        fksym.density("foo", {}, 1.0, 1.0, 1.0)
    with pytest.raises(fksym.ValidityError):
        fksym.density("besq", {"n": 1}, 1.0, 1.0, 1.0)
    with pytest.raises(fksym.DomainError):
        fksym.density("besq", {}, -1.0, 1.0, 1.0)
    with pytest.raises(NotImplementedError):
        fksym.transform_rhs("cir", {}, 1.0, 1.0, 1.0)


def test_run_suite():
    doc = fksym.run_suite("transform", entry="besq")
    assert doc["summary"]["failed"] == 0
    assert all(r["identity"].startswith("besq") for r in doc["reports"])
    assert "riccati" in fksym.suite_names()
