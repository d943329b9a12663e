import math

import numpy as np
import pytest

import qdimer


def test_version_and_models():
    assert qdimer.__version__ == "0.1.0"
    assert qdimer.parse_model("al") == qdimer.AL
    with pytest.raises(ValueError):
        qdimer.parse_model("xyz")


def test_qnumbers():
    dp = qdimer.q_from_gamma(2.0)
    assert dp.q == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert qdimer.sym_qnum(2.0, dp.q) == pytest.approx(3 / math.sqrt(2), rel=1e-14)
    assert qdimer.basic_qnum(2, 2.0) == pytest.approx(3.0)
    assert qdimer.q_binomial(5, 2, 1.0) == pytest.approx(10.0)
    with pytest.raises(ValueError):
        qdimer.q_from_gamma(-1.0)


@pytest.mark.parametrize("model", [qdimer.DNLS, qdimer.AL])
@pytest.mark.parametrize("gamma", [0.0, 2.0, 8.0])
def test_eigenvalues_match_numpy(model, gamma):
    h = qdimer.build_dimer(model, 15, gamma)
    ref = np.linalg.eigvalsh(h.dense())
    got = np.array(qdimer.eigenvalues(h))
    assert np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref))) < 1e-10


def test_linear_limit():
    for model in (qdimer.DNLS, qdimer.AL):
        e = qdimer.eigenvalues(qdimer.build_dimer(model, 6, 0.0), 1e-15)
        assert np.allclose(e, [2.0 * m for m in range(-3, 4)], atol=1e-12)


def test_solve_vectors():
    s = qdimer.solve(qdimer.build_dimer(qdimer.AL, 8, 2.0), 1e-15)
    v = s.vectors
    assert v.shape == (9, 9)
    assert np.allclose(v.T @ v, np.eye(9), atol=1e-12)
    assert qdimer.completeness_check(s) < 1e-12
    assert qdimer.df_orthonormality_check(s) < 1e-10
    report = qdimer.parity_structure_check(s)
    assert report["passed"] and report["zero_count"] == 1


def test_chain_matches_dimer():
    for model in (qdimer.DNLS, qdimer.AL):
        chain = qdimer.chain_spectrum(model, 2, 5, 1.5)
        pred = qdimer.chain_energies_from_dimer(model, 5, 1.5)
        assert np.allclose(chain, pred, atol=1e-12)


def test_conservation_and_verify():
    entries = qdimer.conservation_suite(qdimer.DNLS, 3, 3, 1.0)
    assert entries and all(e["passed"] for e in entries)
    ok, text = qdimer.verify("algebra", 10, 2)
    assert ok and "status=PASS" in text


def test_sweep_and_gaps():
    gammas, eig = qdimer.sweep(qdimer.DNLS, 4, 0.0, 4.0, 5)
    assert gammas == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert len(eig) == 5 and len(eig[0]) == 5
    g = qdimer.gaps(6, pairs=1)
    assert len(g["gamma"]) == 25
    assert math.isnan(g["slope"][0][0])
    with pytest.raises(qdimer.UsageError):
        qdimer.gaps(6, pairs=9)
