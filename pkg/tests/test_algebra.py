import numpy as np
import pytest

from ym2d.algebra import (
    bracket,
    bracket_coeffs,
    group_exp,
    random_element,
    so,
    su,
)

SPECS = [su(2), su(3), so(3), so(4)]


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_dimensions(spec):
    expected = spec.n**2 - 1 if spec.kind.name == "SU" else spec.n * (spec.n - 1) // 2
    assert spec.dim == expected
    assert spec.basis.shape == (spec.dim, spec.n, spec.n)
    assert spec.structure.shape == (spec.dim,) * 3


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_basis_orthonormal_and_algebra_valued(spec):
    gram = np.einsum("aij,bji->ab", spec.basis, np.conj(spec.basis).transpose(0, 2, 1))
    assert np.allclose(gram, np.eye(spec.dim), atol=1e-12)
    for e in spec.basis:
        # anti-Hermitian (su) resp. antisymmetric real (so), traceless
        assert np.allclose(e + np.conj(e).T, 0.0, atol=1e-12)
        assert abs(np.trace(e)) < 1e-12


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_structure_constants_antisymmetric(spec):
    f = spec.structure
    assert np.allclose(f, -f.transpose(1, 0, 2), atol=1e-12)
    # total antisymmetry holds for an orthonormal basis of a compact form
    assert np.allclose(f, -f.transpose(0, 2, 1), atol=1e-12)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_bracket_matches_matrix_commutator(spec):
    x = random_element(spec, 1, 0.7)
    y = random_element(spec, 2, 0.7)
    z = bracket(x, y)
    mx, my = spec.to_matrix(x.coeffs), spec.to_matrix(y.coeffs)
    assert np.allclose(spec.to_matrix(z.coeffs), mx @ my - my @ mx, atol=1e-12)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_jacobi_identity(spec):
    x = random_element(spec, 3, 1.0)
    y = random_element(spec, 4, 1.0)
    z = random_element(spec, 5, 1.0)
    s = (
        bracket(x, bracket(y, z)).coeffs
        + bracket(y, bracket(z, x)).coeffs
        + bracket(z, bracket(x, y)).coeffs
    )
    assert np.max(np.abs(s)) < 1e-12


def test_bracket_coeffs_agrees_with_bracket():
    spec = su(2)
    x = random_element(spec, 6, 1.0)
    y = random_element(spec, 7, 1.0)
    assert np.allclose(
        bracket_coeffs(spec, x.coeffs, y.coeffs), bracket(x, y).coeffs, atol=1e-13
    )


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_group_exp_lands_in_group(spec):
    U = group_exp(random_element(spec, 8, 0.5))
    assert np.allclose(U @ np.conj(U).T, np.eye(spec.n), atol=1e-12)
    assert abs(np.linalg.det(U) - 1.0) < 1e-10


def test_from_matrix_roundtrip():
    spec = so(3)
    x = random_element(spec, 9, 1.0)
    assert np.allclose(spec.from_matrix(spec.to_matrix(x.coeffs)), x.coeffs, atol=1e-13)


def test_random_element_reproducible_and_validated():
    spec = su(2)
    a = random_element(spec, 0, 0.3)
    b = random_element(spec, 0, 0.3)
    assert np.array_equal(a.coeffs, b.coeffs)
    with pytest.raises(ValueError):
        random_element(spec, 0, -1.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        su(1)
