"""Shape-operator spectrum tests: quartic coefficients, planted canonical
forms under random frame changes, and the refusal behavior near ambiguity."""

import numpy as np
import pytest

from biconserve.errors import ContractViolation
from biconserve.spectral import (canonical_pair, characteristic_quartic,
                                 classify_case, conjugated_pair, eigen_structure)


def test_quartic_of_zero_operator():
    assert np.allclose(characteristic_quartic(np.zeros((4, 4))), [1, 0, 0, 0, 0])


def test_quartic_direct_expansion():
    c = characteristic_quartic(np.diag([1.0, 2.0, 2.0, 3.0]))
    assert np.allclose(c, [1.0, -8.0, 23.0, -28.0, 12.0], atol=1e-12)


def test_quartic_similarity_invariance():
    rng = np.random.default_rng(17)
    for _ in range(50):
        S = rng.normal(size=(4, 4))
        c0 = characteristic_quartic(S)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        P = q @ np.diag(rng.uniform(0.8, 1.25, 4))
        c1 = characteristic_quartic(np.linalg.solve(P, S @ P))
        assert np.max(np.abs(c0 - c1)) < 1e-10 * (1 + np.max(np.abs(c0)))


def test_trace_recovered_from_roots():
    rng = np.random.default_rng(23)
    for case in ("I", "II", "III"):
        for _ in range(30):
            S, G, _, _ = conjugated_pair(case, rng)
            spec = eigen_structure(S, G)
            tr = sum(v * alg for v, alg, _ in spec.real_eigenvalues)
            tr += sum(2 * re for re, _ in spec.complex_pairs)
            assert tr == pytest.approx(float(np.trace(S)), abs=1e-9)


def _planted_sorted(S0):
    return sorted(np.linalg.eigvals(S0), key=lambda z: (z.real, z.imag))


def _recovered_sorted(spec):
    vals = [complex(v, 0) for v, alg, _ in spec.real_eigenvalues for _ in range(alg)]
    vals += [complex(re, im) for re, im in spec.complex_pairs]
    vals += [complex(re, -im) for re, im in spec.complex_pairs]
    return sorted(vals, key=lambda z: (z.real, z.imag))


def _random_params(rng):
    return {"H": rng.uniform(0.3, 1.2), "k2": rng.uniform(-2, -0.5),
            "k3": rng.uniform(0.5, 2.0), "k4": rng.uniform(2.5, 4.0),
            "nu": rng.uniform(0.5, 2.0)}


@pytest.mark.parametrize("case", ["I", "II", "III"])
def test_planted_cases_recovered(case):
    rng = np.random.default_rng(101)
    good = 0
    for _ in range(200):
        S, G, S0, _ = conjugated_pair(case, rng, _random_params(rng))
        spec = eigen_structure(S, G)
        assert spec.case_label in (case, "unresolved")
        if spec.case_label == case:
            err = max(abs(p - q) for p, q in
                      zip(_planted_sorted(S0), _recovered_sorted(spec)))
            assert err < 1e-8
            good += 1
    assert good >= 199


def test_planted_case_iv_defect_pattern():
    # two-step defect: triple root with one eigenvector; classified at a
    # coarser tolerance suited to the cube-root sensitivity of triple roots
    rng = np.random.default_rng(59)
    good = 0
    for _ in range(200):
        S, G, S0, _ = conjugated_pair("IV", rng, _random_params(rng))
        spec = eigen_structure(S, G, tol=1e-4)
        assert spec.case_label in ("IV", "unresolved")
        if spec.case_label == "IV":
            good += 1
            triple = [x for x in spec.real_eigenvalues if x[1] == 3]
            assert len(triple) == 1 and triple[0][2] == 1
    assert good >= 190


def test_case_patterns():
    S, G = canonical_pair("I", {"H": 0.5, "k2": 1.0, "k3": 2.0, "k4": 3.0})
    spec = eigen_structure(S, G)
    assert (spec.case_label, spec.pattern) == ("I", "1+1+1+1")
    S, G = canonical_pair("II")
    spec = eigen_structure(S, G)
    assert spec.case_label == "II"
    assert "2" in spec.pattern
    S, G = canonical_pair("III")
    spec = eigen_structure(S, G)
    assert spec.case_label == "III"
    assert spec.pattern.endswith("2c")
    assert spec.complex_pairs[0][1] > 0


def test_repeated_eigenvalue_diagonalizable_stays_case_I():
    S = np.diag([2.0, 1.0, 1.0, -1.0])
    G = np.diag([-1.0, -1.0, 1.0, 1.0])
    spec = eigen_structure(S, G)
    assert spec.case_label == "I"
    assert spec.pattern == "1+2+1"
    lam = [x for x in spec.real_eigenvalues if x[1] == 2][0]
    assert lam[2] == 2  # geometric multiplicity matches


def test_ambiguity_band_refuses():
    # a genuine gap inside (tol, 10 tol) must come back unresolved
    gap = 3e-6
    S = np.diag([1.0, 1.0 + gap, 2.0, 3.0])
    G = np.diag([-1.0, -1.0, 1.0, 1.0])
    spec = eigen_structure(S, G, tol=1e-6)
    assert spec.case_label == "unresolved"


def test_non_self_adjoint_rejected():
    S = np.diag([1.0, 2.0, 3.0, 4.0])
    G = np.diag([-1.0, -1.0, 1.0, 1.0])
    S2 = S.copy()
    S2[0, 1] = 0.5  # breaks G-self-adjointness
    with pytest.raises(ContractViolation):
        eigen_structure(S2, G)


def test_classify_case_totals_must_be_four():
    from biconserve.spectral import ShapeSpectrum

    spec = ShapeSpectrum([(1.0, 2, 2)], [], "", 1e-6)
    assert classify_case(spec)[0] == "unresolved"
