"""ncstar verify 의 성질 검사 스위트"""

from .base import Check, Suite, SuiteReport
from .grid import GridSuite
from .poly import PolySuite
from .spectral import SpectralSuite

# 스위트 레지스트리 (실행 순서)
SUITES: dict[str, type[Suite]] = {
    PolySuite.name: PolySuite,
    GridSuite.name: GridSuite,
    SpectralSuite.name: SpectralSuite,
}


def run_suites(names: list[str], config) -> SuiteReport:
    """이름 목록의 스위트를 실행해 하나의 보고서로"""
    return SuiteReport.merge([SUITES[name]().run(config) for name in names])


__all__ = [
    "Check",
    "GridSuite",
    "PolySuite",
    "SUITES",
    "SpectralSuite",
    "Suite",
    "SuiteReport",
    "run_suites",
]
