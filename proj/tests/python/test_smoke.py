import math

import pytest

import harnack_lab as hl


def test_catalog_listing():
    ids = hl.catalog_ids()
    assert "heat.li_yau" in ids
    assert "log.hamilton_neg" in ids
    assert "yamabe.case1_2.k_scaled" in ids


def test_reaction_terms():
    assert hl.big_H({"kind": "log", "a": 1}, math.e) == pytest.approx(math.e)
    val, d1, d2 = hl.h({"kind": "log", "a": 2}, 0.7)
    assert val == pytest.approx(1.4)
    assert d1 == pytest.approx(2.0)
    assert d2 == pytest.approx(0.0)


def test_candidate_and_margins():
    q = hl.candidate_values("heat.li_yau", 1.0, m=3, K=0.0, alpha=2)
    assert set(q) >= {"gamma", "alpha", "phi", "c"}
    mg = hl.margins("log.sharp_compact", 0.8, 0.3, m=1, K=0, a=1)
    assert mg["a1_first"] == pytest.approx(mg["a1_first_lemma"], abs=1e-12)


def test_sharp_harnack():
    rhs = hl.harnack_rhs_log("log.sharp_compact", math.log(2), math.log(4), 1.0, m=1, K=0, a=1)
    assert rhs == pytest.approx(-0.5 * math.log(1.5) - 0.125, rel=1e-12)
    x0 = hl.sharp_x0(1.0, math.log(2), math.log(4), (0.0, 0.0), (1.0, 0.0))
    assert x0[0] == pytest.approx(-0.5)
    r = hl.verify_sharp_harnack(-1.0, 1, 0.5, 1.5, (0.2, 0.0), (1.1, 0.0))
    assert r["equality"]
    assert hl.min_energy(1.0, math.log(2), math.log(4), 1.0) == pytest.approx(0.5)


def test_exact_solution():
    assert hl.exact_log_u(1.0, 1, (0.0, 0.0), 0.0, (0.0, 0.0), math.log(2)) == pytest.approx(2.0)
    assert abs(hl.exact_log_residual(-1.0, 2, (0.1, 0.2), 0.3, (0.5, -0.4), 1.1)) < 1e-10


def test_eps_curve():
    pts = hl.a_eps_curve(-1.0, [0.2, 0.1], 60.0)
    assert pts[1][1] > pts[0][1]
    assert hl.delta0(-1.0) == pytest.approx(1 / 48)


def test_run_config():
    code, rep = hl.run({"command": "verify-system", "candidate": "heat.li_yau",
                        "system": "A3", "branch": "I"})
    assert code == 0
    assert rep["config"]["params"]["m"] == 3
    with pytest.raises(ValueError):
        hl.run({"command": "verify-system", "candidate": "nope"})
