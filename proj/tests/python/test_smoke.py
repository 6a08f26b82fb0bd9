"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import qmlab


def plus_state():
    return qmlab.State.vector(np.array([1.0, 1.0]) / math.sqrt(2.0))


def test_basis_copy_scheme_is_sharp_and_fully_correlated():
    s = qmlab.build_cnot()
    r = s.default_scale()
    povm = s.measured_povm(r)
    assert len(povm) == 2
    assert np.allclose(povm[0]["matrix"], np.diag([1.0, 0.0]), atol=1e-12)
    assert qmlab.is_sharp(qmlab.Povm([(e["matrix"], e["label"]) for e in povm]))["sharp"]

    t = plus_state()
    assert qmlab.observable_correlation(s, t, r)["rho"] == pytest.approx(1.0, abs=1e-10)
    for i in range(2):
        assert qmlab.value_correlation(s, t, r, i)["rho"] == pytest.approx(1.0, abs=1e-10)
        assert qmlab.state_correlation(s, t, r, i)["rho"] == pytest.approx(1.0, abs=1e-10)

    checks = qmlab.transformer_checks(s, r, n_random=5)
    assert checks["first_kind"]["verdict"] == "holds"
    assert checks["repeatable"]["verdict"] == "holds"


def test_partial_rotation_fixture_statistics():
    s = qmlab.build_controlled_rotation(math.pi / 2)
    r = s.default_scale()
    t = plus_state()

    povm = s.measured_povm(r)
    assert povm[1]["matrix"][1, 1] == pytest.approx(0.5, abs=1e-12)

    assert qmlab.observable_correlation(s, t, r)["rho"] == pytest.approx(1 / 3, abs=1e-9)
    assert qmlab.value_correlation(s, t, r, 1)["rho"] == pytest.approx(
        1 / math.sqrt(3), abs=1e-9
    )
    assert qmlab.transformer_checks(s, r, n_random=5)["repeatable"]["verdict"] == "fails"

    red = qmlab.reduced_state_correlation(s, t)
    assert red["defined"] and red["rho"] == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(
        np.sort(red["object_spectrum"]), np.sort(red["apparatus_spectrum"]), atol=1e-10
    )

    comps = s.components(t, r)
    assert comps[1]["weight"] == pytest.approx(0.25, abs=1e-12)
    assert np.allclose(comps[1]["object"], np.diag([0.0, 1.0]), atol=1e-12)


def test_shift_register_transformer_is_projective():
    s = qmlab.build_shift_model(3, [0, 1, 2])
    r = s.default_scale()
    povm = s.measured_povm(r)
    rng = np.random.default_rng(5)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    dens = a @ a.conj().T
    t = qmlab.State(dens / np.trace(dens).real)
    for i in range(3):
        got = qmlab.transformer_apply(s, r, i, t)
        p = povm[i]["matrix"]
        assert np.allclose(got, p @ t.matrix @ p, atol=1e-10)


def test_scenarios_and_oracle_agree():
    sc = qmlab.load_scenario("builtin:shift3")
    assert sc.name == "builtin:shift3"
    rep = qmlab.oracle_cross_check(sc, 1e-8)
    assert rep["ok"] and rep["max_discrepancy"] < 1e-10
    assert any(what == "coupling_exponential" for what, _ in rep["entries"])

    with pytest.raises(ValueError):
        qmlab.load_scenario("builtin:unknown-fixture")


def test_theorem_suites_deterministic():
    a = qmlab.verify_theorems(seed=3, count=4)
    b = qmlab.verify_theorems(seed=3, count=4)
    assert a["all_ok"] and a["failed"] == 0
    assert a["text"] == b["text"]
    assert len(a["suites"]) == 7
    assert qmlab.verify_theorems(seed=3, count=4, inject_bug=True)["failed"] > 0


def test_quadrature_sweep_rows():
    rows = qmlab.quadrature_sweep(
        16,
        qmlab.vacuum_state(16),
        qmlab.State.vector(qmlab.coherent_state(16, 1.0)),
        [0.5, 1.0],
        2,
    )
    assert [row["lam"] for row in rows] == [0.5, 1.0]
    assert rows[0]["rho_obs"] == pytest.approx(0.2, rel=1e-6)
    assert rows[0]["var_E"] == pytest.approx(rows[0]["var_aq"] + rows[0]["var_bp_scaled"],
                                             rel=1e-6)
    assert all(row["rho_value_cell0"] == pytest.approx(1.0, abs=1e-9) for row in rows)


def test_error_translation():
    with pytest.raises(ValueError):
        qmlab.State(np.eye(2))  # trace 2: not a state
    with pytest.raises(ValueError):
        qmlab.build_controlled_rotation(7.0)  # angle outside the open-closed range
