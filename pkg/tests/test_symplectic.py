import numpy as np
import pytest

from ncstar.errors import AdmissibilityError, ParameterError, SingularFormError
from ncstar.symplectic import (
    NCParams,
    OmegaMatrix,
    Schedule,
    SeibergWittenMap,
    admissible,
    at_hbar,
    build_omega,
    check_admissible,
    pair_matrix,
    random_symplectic,
    sigma,
    solve_sw_map,
    standard_j,
    variant_defect,
    with_hbar,
)


def random_antisymmetric(rng, n, scale=0.5):
    m = rng.uniform(-scale, scale, (n, n))
    return np.triu(m, 1) - np.triu(m, 1).T


def test_standard_j():
    j = standard_j(2)
    assert np.array_equal(j @ j, -np.eye(4))
    assert np.array_equal(j.T, -j)


def test_sigma_is_antisymmetric(rng):
    z, w = rng.standard_normal(4), rng.standard_normal(4)
    assert sigma(z, w) == pytest.approx(-sigma(w, z))
    assert sigma(z, z) == pytest.approx(0.0)


def test_omega_determinant_single_pair():
    theta, eta = 0.1, 0.05
    omega = build_omega(NCParams.single_pair(theta, eta))
    assert omega.det == pytest.approx((1 - theta * eta) ** 2, abs=1e-12)


def test_commutative_omega_is_j(flat_params):
    omega = build_omega(flat_params)
    assert np.array_equal(omega.entries, standard_j(2))


def test_non_antisymmetric_theta_rejected():
    with pytest.raises(ParameterError):
        NCParams(n=2, theta=[[0.0, 0.1], [0.1, 0.0]])


def test_admissibility_boundary():
    params = NCParams.single_pair(theta=1.0, eta=1.0, hbar=1.0)
    flag, margin = admissible(params)
    assert not flag
    assert margin == pytest.approx(0.0)
    with pytest.raises(AdmissibilityError) as info:
        check_admissible(params)
    assert info.value.indices == (1, 2, 1, 2)
    with pytest.raises(AdmissibilityError):
        build_omega(params)


def test_admissible_margin(nc_params):
    flag, margin = admissible(nc_params)
    assert flag
    assert margin == pytest.approx(1 - 0.1 * 0.05)


def test_singular_omega():
    with pytest.raises(SingularFormError):
        OmegaMatrix(entries=np.zeros((2, 2)), n=1, hbar=1.0).inverse


def test_commutative_sw_map_is_identity(flat_params):
    s = solve_sw_map(build_omega(flat_params))
    assert s.is_identity
    assert s.det == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3])
def test_sw_map_residual_random(rng, n):
    for _ in range(50):
        params = NCParams(
            n=n,
            hbar=float(rng.uniform(0.5, 2.0)),
            theta=random_antisymmetric(rng, n),
            eta=random_antisymmetric(rng, n),
        )
        omega = build_omega(params)
        s = solve_sw_map(omega)
        assert s.residual(omega) <= 1e-12
        assert max(s.block_residuals(params).values()) <= 1e-10


def test_sw_map_blocks(nc_params):
    s = solve_sw_map(build_omega(nc_params))
    assert np.array_equal(s.s[:2, :2], s.A)
    assert np.array_equal(s.s[2:, 2:], s.D)
    assert np.allclose(s.s @ s.inverse, np.eye(4))
    data = s.to_dict()
    assert set(data) == {"variant", "s", "A", "B", "C", "D"}


def test_sw_variants_differ_by_symplectic(nc_params):
    omega = build_omega(nc_params)
    s0, s3 = solve_sw_map(omega, 0), solve_sw_map(omega, 3)
    assert s3.residual(omega) <= 1e-12
    assert variant_defect(s0, s3) <= 1e-10


def test_sw_map_deterministic(nc_params):
    omega = build_omega(nc_params)
    assert np.array_equal(solve_sw_map(omega, 2).s, solve_sw_map(omega, 2).s)


def test_random_symplectic_preserves_j():
    m = random_symplectic(2, seed=7, scale=0.3)
    assert np.allclose(m @ standard_j(2) @ m.T, standard_j(2), atol=1e-12)


def test_composed_sw_map_is_sw_map(nc_params):
    omega = build_omega(nc_params)
    s = solve_sw_map(omega)
    other = SeibergWittenMap(s=s.s @ random_symplectic(2, seed=1, scale=0.1))
    assert other.residual(omega) <= 1e-12


def test_schedule_requires_exponent_above_two():
    with pytest.raises(ParameterError):
        Schedule(2.0, 1.0, 3.0, 1.0, pair_matrix(2, 1.0), pair_matrix(2, 1.0))


def test_schedule_values():
    schedule = Schedule(3.0, 1.0, 4.0, 2.0, pair_matrix(2, 1.0), pair_matrix(2, 1.0))
    params = NCParams.from_schedule(2, 0.5, schedule)
    assert params.theta[0, 1] == pytest.approx(0.125)
    assert params.eta[0, 1] == pytest.approx(0.125)
    smaller = at_hbar(params, 0.25)
    assert smaller.theta[0, 1] == pytest.approx(0.25**3)
    assert smaller.eta[0, 1] == pytest.approx(2 * 0.25**4)


def test_with_hbar_keeps_theta_without_schedule(nc_params):
    moved = with_hbar(nc_params, 0.5)
    assert moved.hbar == 0.5
    assert np.array_equal(moved.theta, nc_params.theta)
    with pytest.raises(ParameterError):
        at_hbar(nc_params, 0.5)


def test_with_hbar_checks_admissibility(nc_params):
    # θη = 0.005 ≥ ħ² 가 되는 ħ
    with pytest.raises(AdmissibilityError):
        with_hbar(nc_params, 0.05)
