from fractions import Fraction

import numpy as np
import pytest

from ncstar.errors import AdmissibilityError, ParameterError
from ncstar.star.bopp import (
    bopp_coordinate,
    commutator_defect,
    hamiltonian_field,
    poisson,
    poisson_omega,
    star_commutator,
    star_order,
    star_poly,
)
from ncstar.symbol.parser import parse
from ncstar.symbol.poly import PolySymbol, gaussian, poly_to_terms, to_poly
from ncstar.symplectic import NCParams, Schedule, pair_matrix


def poly(text, n=2):
    return to_poly(parse(text, n), n)


def constant(value, n=2):
    return PolySymbol.constant(2 * n, value)


def test_x_star_p_one_dof():
    params = NCParams(n=1, hbar=1.0)
    result = star_poly(poly("x1", 1), poly("p1", 1), params)
    assert result == poly("x1*p1", 1) + constant(gaussian(0, Fraction(1, 2)), 1)


def test_x1_star_x2_with_theta():
    params = NCParams.single_pair(theta=0.5)
    result = star_poly(poly("x1"), poly("x2"), params)
    assert poly_to_terms(result) == {
        "const": {"re": "0", "im": "1/4"},
        "x1*x2": {"re": "1", "im": "0"},
    }


def test_canonical_commutators(nc_params):
    i_hbar = gaussian(0, 1)
    assert star_commutator(poly("x1"), poly("x2"), nc_params) == constant(gaussian(0, Fraction(1, 10)))
    assert star_commutator(poly("p1"), poly("p2"), nc_params) == constant(gaussian(0, Fraction(1, 20)))
    assert star_commutator(poly("x1"), poly("p1"), nc_params) == constant(i_hbar)
    assert star_commutator(poly("x1"), poly("p2"), nc_params).is_zero


def test_unit(nc_params):
    a = poly("x1^2*p2 - 3*x2 + 1/2")
    one = constant(1)
    assert star_poly(one, a, nc_params) == a
    assert star_poly(a, one, nc_params) == a


def test_associativity(nc_params):
    a, b, c = poly("x1^2 + p2"), poly("x2*p1 - 1"), poly("p1^2*x1")
    left = star_poly(star_poly(a, b, nc_params), c, nc_params)
    right = star_poly(a, star_poly(b, c, nc_params), nc_params)
    assert left == right


def test_expansion_orders(nc_params):
    a, b = poly("x1^2*p1"), poly("x2*p2^2")
    assert star_order(a, b, nc_params, 0) == a * b
    first = star_order(a, b, nc_params, 1)
    assert first == poisson_omega(a, b, nc_params).scale(gaussian(0, Fraction(1, 2)))
    total = sum((star_order(a, b, nc_params, k) for k in range(1, 4)), star_order(a, b, nc_params, 0))
    assert total == star_poly(a, b, nc_params)


def test_commutative_limit_is_moyal(flat_params):
    a, b = poly("x1^2"), poly("p1^2")
    # x² ⋆ p² = x²p² + 2iħxp − ħ²/2
    expected = poly("x1^2*p1^2") + poly("x1*p1").scale(gaussian(0, 2)) - constant(Fraction(1, 2))
    assert star_poly(a, b, flat_params) == expected


def test_poisson_omega_reduces(flat_params, nc_params):
    a, b = poly("x1^2*p2"), poly("x2*p1")
    assert poisson_omega(a, b, flat_params) == poisson(a, b)
    assert poisson_omega(poly("x1"), poly("x2"), nc_params) == constant(Fraction(1, 10))
    assert poisson_omega(poly("p1"), poly("p2"), nc_params) == constant(Fraction(1, 20))


def test_hamiltonian_field(nc_params):
    field = hamiltonian_field(poly("x1"), nc_params)
    # Ω 의 첫 열
    assert field[1] == constant(Fraction(-1, 10))
    assert field[2] == constant(-1)
    assert field[0].is_zero and field[3].is_zero


def test_bopp_coordinate_matches_star(nc_params):
    b = poly("x2*p1^2")
    operator = bopp_coordinate(0, nc_params)
    assert operator.apply(b) == star_poly(poly("x1"), b, nc_params)


def test_bopp_apply_expr_on_gaussian(nc_params):
    operator = bopp_coordinate(0, nc_params)
    image = operator.apply_expr(parse("exp(-x1^2 - x2^2)", 2))
    z = [0.3, -0.2, 0.1, 0.4]
    g = np.exp(-(0.3**2) - 0.2**2)
    # x̃1 = x1 + ½iħ(θ/ħ ∂_{x2} + ∂_{p1})
    expected = 0.3 * g + 0.5j * (0.1 * (2 * 0.2) * g)
    assert complex(image.evaluate(z)) == pytest.approx(expected)


def test_inadmissible_rejected():
    params = NCParams.single_pair(theta=1.0, eta=1.0)
    with pytest.raises(AdmissibilityError):
        star_poly(poly("x1"), poly("x2"), params)


def test_commutator_defect_quadratic(nc_params, rng):
    probes = rng.uniform(-1, 1, (10, 4))
    defects = commutator_defect(parse("x1^2", 2), parse("p1*p2", 2), NCParams(n=2), [1.0, 0.5], probes)
    assert max(defects) <= 1e-12


def test_commutator_defect_scales_as_hbar_squared(rng):
    probes = rng.uniform(-1, 1, (10, 2))
    hbars = [0.4, 0.2, 0.1]
    defects = commutator_defect(parse("x1^3", 1), parse("p1^3", 1), NCParams(n=1), hbars, probes)
    slopes = np.diff(np.log(defects)) / np.diff(np.log(hbars))
    assert np.allclose(slopes, 2.0, atol=1e-6)


def test_commutator_defect_under_schedule(rng):
    # θ₁₂(ħ) = ħ³ 이면 {x₁,x₂}_Ω 결함은 θ₁₂/ħ = ħ²
    shape = pair_matrix(2, 1.0)
    params = NCParams.from_schedule(2, 0.1, Schedule(3.0, 1.0, 3.0, 1.0, shape, shape))
    hbars = [0.1, 0.01, 0.001]
    defects = commutator_defect(parse("x1", 2), parse("x2", 2), params, hbars, rng.uniform(-1, 1, (4, 4)))
    assert np.allclose(defects, np.array(hbars) ** 2, rtol=1e-9)
    slope = np.polyfit(np.log(hbars), np.log(defects), 1)[0]
    assert slope == pytest.approx(2.0, abs=1e-6)


def test_commutator_defect_requires_decreasing_hbar(rng):
    with pytest.raises(ParameterError):
        commutator_defect(parse("x1", 1), parse("p1", 1), NCParams(n=1), [0.1, 0.2], rng.uniform(size=(2, 2)))
