import json
from fractions import Fraction

import numpy as np
import pytest

from ncstar.errors import GridSizeError
from ncstar.method import METHODS, BoppMethod, DenseMethod, FftMethod
from ncstar.star.grid import PhaseGrid
from ncstar.symbol.parser import parse
from ncstar.symbol.poly import PolySymbol, gaussian, to_poly
from ncstar.symplectic import NCParams, SeibergWittenMap

GAUSS = "exp(-x1^2 - p1^2)"


@pytest.fixture
def line_params():
    return NCParams(n=1)


def test_registry():
    assert set(METHODS) == {"bopp", "fft", "dense"}


def test_bopp_can_handle(line_params):
    assert BoppMethod.can_handle(parse("x1^2", 1), parse("p1 - 1", 1), line_params)
    assert not BoppMethod.can_handle(parse("x1", 1), parse(GAUSS, 1), line_params)
    assert FftMethod.can_handle(parse("x1", 1), parse(GAUSS, 1), line_params)


def test_bopp_result(tmp_path, line_params, line_grid):
    result = BoppMethod().compute(
        parse("x1", 1), parse("p1", 1), line_params, SeibergWittenMap.identity(1), line_grid
    )
    expected = to_poly(parse("x1*p1", 1), 1) + PolySymbol.constant(2, gaussian(0, Fraction(1, 2)))
    assert result.poly == expected
    assert result.summary()[0] == "method: bopp"

    path = tmp_path / "product.json"
    result.write(path)
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["method"] == "bopp"
    assert payload["terms"]["const"] == {"re": "0", "im": "1/2"}


def test_fft_reports_bopp_difference(tmp_path, line_params, line_grid):
    result = FftMethod().compute(
        parse("x1*p1", 1), parse(GAUSS, 1), line_params, SeibergWittenMap.identity(1), line_grid
    )
    assert result.guards["sup_diff_bopp"] <= 1e-8
    assert result.guards["boundary_ratio"] <= 1e-6
    assert any(line.startswith("grid: n=1, M=32") for line in result.summary())

    path = tmp_path / "product.csv"
    result.write(path)
    assert path.read_text(encoding="utf-8").startswith("# ncstar-grid v1; n=1; M=32;")


def test_fft_non_polynomial_path(line_params, line_grid):
    result = FftMethod().compute(
        parse(GAUSS, 1), parse(GAUSS, 1), line_params, SeibergWittenMap.identity(1), line_grid
    )
    assert "sup_diff_bopp" not in result.guards
    x, p = line_grid.coordinates()
    assert np.abs(result.samples.samples - np.exp(-(x**2) - p**2) / 2).max() <= 1e-8


def test_dense_matches_fft(line_params):
    lattice = PhaseGrid.symplectic(1, 64)
    a = parse("x1*exp(-x1^2/2 - p1^2/2)", 1)
    b = parse("exp(-x1^2/2 - p1^2/2)", 1)
    identity = SeibergWittenMap.identity(1)
    dense = DenseMethod().compute(a, b, line_params, identity, lattice)
    fft = FftMethod().compute(a, b, line_params, identity, lattice)
    scale = np.abs(fft.samples.samples).max()
    assert np.abs(dense.samples.samples - fft.samples.samples).max() <= 1e-6 * scale
    assert "boundary_ratio" in dense.guards


def test_dense_grid_limit():
    a, b = parse("exp(-x1^2)", 2), parse("exp(-p2^2)", 2)
    identity = SeibergWittenMap.identity(2)
    with pytest.raises(GridSizeError):
        DenseMethod().compute(a, b, NCParams(n=2), identity, PhaseGrid(2, 6.0, 10))
