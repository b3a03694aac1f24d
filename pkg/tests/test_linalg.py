import json

import numpy as np
import pytest

from qfannes import _kernels
from qfannes.linalg import (
    DensityOperator,
    EigenNonConvergence,
    HermitianMatrix,
    InvalidDensityError,
    ProbVector,
    dump_matrix,
    hermitian_eigen,
    load_matrix,
    parse_matrix,
    sample_density,
    sample_simplex,
    sample_unitary,
    trace_norm,
    validate_density,
)

from conftest import random_hermitian


def test_diagonal_sorted_descending():
    sp = hermitian_eigen(np.diag([0.25, 0.75]))
    assert sp.eigenvalues.tolist() == [0.75, 0.25]


def test_two_by_two_by_hand():
    sp = hermitian_eigen([[0.5, 0.5], [0.5, 0.5]])
    assert np.allclose(sp.eigenvalues, [1.0, 0.0], atol=1e-15)


def test_complex_two_by_two():
    # eigenvalues of [[a, b], [b*, d]] from the characteristic polynomial
    a, d, b = 0.3, -1.2, 0.4 - 0.9j
    mean, half = (a + d) / 2, np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
    sp = hermitian_eigen([[a, b], [np.conj(b), d]])
    assert np.allclose(sp.eigenvalues, [mean + half, mean - half], atol=1e-15)


def test_degenerate_repeated():
    sp = hermitian_eigen(np.eye(3) / 3)
    assert np.allclose(sp.eigenvalues, [1 / 3] * 3, atol=0)


def test_reconstruction_and_oracle(rng):
    for _ in range(1000):
        d = int(rng.integers(2, 17))
        a = random_hermitian(rng, d)
        sp = hermitian_eigen(a)
        scale = max(1.0, np.abs(a).max())
        assert np.abs(sp.reconstruct() - a).max() <= 1e-9 * scale
        assert sp.residual <= 1e-9 * scale
        assert sp.orthonormality_defect <= 1e-9
        assert np.all(np.diff(sp.eigenvalues) <= 0)
        assert np.allclose(sp.eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-10 * scale)


def test_deterministic(rng):
    a = random_hermitian(rng, 6)
    s1, s2 = hermitian_eigen(a), hermitian_eigen(a)
    assert np.array_equal(s1.eigenvalues, s2.eigenvalues)
    assert np.array_equal(s1.vectors, s2.vectors)


def test_zero_matrix():
    sp = hermitian_eigen(np.zeros((3, 3)))
    assert sp.eigenvalues.tolist() == [0.0, 0.0, 0.0]
    assert trace_norm(np.zeros((3, 3))) == 0.0


def test_non_convergence(monkeypatch):
    monkeypatch.setattr("qfannes.linalg.MAX_SWEEPS", 0)
    with pytest.raises(EigenNonConvergence):
        hermitian_eigen([[1.0, 0.5], [0.5, 1.0]])


@pytest.mark.skipif(_kernels.compiled_jacobi_eigh is None, reason="extension not built")
def test_kernels_agree(rng):
    for d in (1, 2, 3, 5, 8, 12):
        a = random_hermitian(rng, d)
        wc, vc, sc, okc, rc, oc = _kernels.compiled_jacobi_eigh(a, 100, 1e-14)
        wp, vp, sp, okp, rp, op = _kernels.python_jacobi_eigh(a, 100, 1e-14)
        assert okc and okp and sc == sp
        assert np.allclose(wc, wp, atol=1e-12, rtol=0)
        assert np.allclose(vc, vp, atol=1e-12, rtol=0)


def test_python_fallback_is_correct(rng):
    a = random_hermitian(rng, 7)
    w, v, _, ok, res, orth = _kernels.python_jacobi_eigh(a, 100, 1e-14)
    assert ok and res < 1e-12 and orth < 1e-12
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-12)


def test_trace_norm_values():
    assert trace_norm(np.diag([1.0, 0.0]) - np.diag([0.75, 0.25])) == pytest.approx(0.5, abs=1e-15)


def test_trace_norm_against_singular_values(rng):
    for _ in range(200):
        a = random_hermitian(rng, int(rng.integers(1, 9)))
        assert trace_norm(a) == pytest.approx(np.linalg.svd(a, compute_uv=False).sum(), abs=1e-10)


def test_trace_norm_is_a_norm(rng):
    for _ in range(200):
        d = int(rng.integers(2, 7))
        a, b = random_hermitian(rng, d), random_hermitian(rng, d)
        c = float(rng.normal())
        assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-9
        assert trace_norm(c * a) == pytest.approx(abs(c) * trace_norm(a), abs=1e-9)


def test_trace_distance_range(rng):
    for _ in range(100):
        d = int(rng.integers(1, 7))
        r1, r2 = sample_density(d, rng), sample_density(d, rng)
        assert 0.0 <= trace_norm(r1.matrix - r2.matrix) <= 2.0 + 1e-12


def test_mirsky_step(rng):
    for _ in range(500):
        d = int(rng.integers(2, 9))
        r1, r2 = sample_density(d, rng), sample_density(d, rng)
        gap = np.abs(r1.eigenvalues - r2.eigenvalues).sum()
        assert gap <= trace_norm(r1.matrix - r2.matrix) + 1e-9


def test_unitary_invariance_of_spectrum(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        rho = sample_density(d, rng)
        u = sample_unitary(d, rng)
        assert np.allclose(u.conj().T @ u, np.eye(d), atol=1e-12)
        rotated = hermitian_eigen(u @ rho.matrix @ u.conj().T)
        assert np.allclose(rotated.eigenvalues, rho.eigenvalues, atol=1e-9)


def test_sample_density_d1():
    rho = sample_density(1, 7)
    assert rho.matrix.shape == (1, 1) and rho.matrix[0, 0] == pytest.approx(1.0, abs=1e-15)


def test_sample_density_seeded():
    a, b = sample_density(3, 12345), sample_density(3, 12345)
    assert np.array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, sample_density(3, 12346).matrix)


def test_sample_density_invariants(rng):
    means = []
    for _ in range(1000):
        rho = sample_density(4, rng)
        assert abs(np.trace(rho.matrix).real - 1) <= 1e-10
        assert rho.eigenvalues.min() >= 0
        means.append(rho.eigenvalues.mean())
    assert abs(np.mean(means) - 0.25) <= 3e-2


def test_sample_simplex():
    assert sample_simplex(1, 0).p.tolist() == [1.0]
    for seed in range(50):
        p = sample_simplex(int(seed % 9) + 1, seed)
        assert abs(p.p.sum() - 1) <= 1e-12 and p.p.min() >= 0
    assert np.array_equal(sample_simplex(5, 3).p, sample_simplex(5, 3).p)


def test_simplex_mean():
    rng = np.random.Generator(np.random.PCG64(1))
    firsts = [sample_simplex(2, rng).p[0] for _ in range(10_000)]
    assert abs(np.mean(firsts) - 0.5) <= 2e-2


def test_probvector_validation():
    ProbVector([0.2, 0.8])
    with pytest.raises(ValueError):
        ProbVector([0.5, 0.6])
    with pytest.raises(ValueError):
        ProbVector([1.2, -0.2])


def test_validate_density_accepts_maximally_mixed():
    rho = validate_density(np.eye(2) / 2)
    assert np.allclose(rho.eigenvalues, [0.5, 0.5])


@pytest.mark.parametrize(
    "raw, invariant",
    [
        (np.diag([1.2, -0.2]), "positive"),
        (np.diag([0.6, 0.6]), "trace"),
        ([[0.5, 0.3], [0.1, 0.5]], "hermitian"),
        (np.ones((2, 3)) / 2, "square"),
    ],
)
def test_validate_density_rejects(raw, invariant):
    with pytest.raises(InvalidDensityError) as exc:
        validate_density(raw)
    assert exc.value.invariant == invariant


def test_validate_density_symmetrizes(rng):
    a = sample_density(3, rng).matrix.copy()
    noise = 1e-15 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    rho = validate_density(a + noise)
    assert np.array_equal(rho.matrix, rho.matrix.conj().T)
    assert np.abs(rho.matrix - a).max() <= 1e-14


def test_clamping_tiny_negative():
    rho = DensityOperator(np.diag([1.0 + 5e-11, -5e-11]))
    assert rho.eigenvalues.min() == 0.0
    assert rho.eigenvalues.sum() == pytest.approx(1.0, abs=1e-15)


def test_hermitian_matrix_type():
    h = HermitianMatrix([[1, 1j], [-1j, 2]])
    assert h.dim == 2
    with pytest.raises(InvalidDensityError):
        HermitianMatrix([[1, 1j], [1j, 2]])


def test_matrix_json_roundtrip(tmp_path, rng):
    rho = sample_density(3, rng)
    path = tmp_path / "rho.json"
    dump_matrix(rho, path)
    assert np.array_equal(load_matrix(path), rho.matrix)


def test_matrix_json_bare_reals():
    a = parse_matrix({"d": 2, "entries": [[0.5, [0.1, -0.2]], [[0.1, 0.2], 0.5]]})
    assert a[0, 1] == 0.1 - 0.2j and a[1, 1] == 0.5


@pytest.mark.parametrize(
    "obj",
    [{"d": 3, "entries": [[1, 0], [0, 1]]}, {"d": 2, "entries": [[1, 0], [0]]}, {"d": 2, "entries": [[1, "x"], [0, 1]]}, []],
)
def test_matrix_json_malformed(obj):
    with pytest.raises(InvalidDensityError):
        parse_matrix(obj)


def test_matrix_json_not_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(InvalidDensityError):
        load_matrix(p)
    p.write_text(json.dumps({"d": 1, "entries": [[1]]}))
    assert load_matrix(p).tolist() == [[1 + 0j]]


def test_env_forces_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, QFANNES_PURE_PYTHON="1")
    code = "import qfannes; print(qfannes.BACKEND, qfannes.tsallis_entropy([[0.5, 0], [0, 0.5]], 2.0).value)"
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert proc.stdout.split() == ["python", "0.5"]
