"""스타곱 계산 방법 베이스 클래스"""

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path

from ..star.grid import GridSymbol, PhaseGrid, write_grid_csv
from ..symbol.expr import Expr
from ..symbol.poly import PolySymbol, poly_text, poly_to_terms
from ..symplectic import NCParams, SeibergWittenMap


@dataclass
class StarResult:
    """스타곱 결과"""
    method: str                                     # bopp | fft | dense
    poly: PolySymbol | None = None                  # 정확한 다항식 결과
    samples: GridSymbol | None = None               # 격자 결과
    guards: dict[str, float] = field(default_factory=dict)  # 오차/감쇠 지표

    def write(self, path: Path) -> None:
        """다항식은 JSON 항 목록, 격자 심볼은 CSV v1"""
        if self.poly is not None:
            payload = {"method": self.method, "terms": poly_to_terms(self.poly)}
            path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        elif self.samples is not None:
            write_grid_csv(self.samples, path)

    def summary(self) -> list[str]:
        lines = [f"method: {self.method}"]
        if self.poly is not None:
            lines.append(f"result: {poly_text(self.poly)}")
        if self.samples is not None:
            grid = self.samples.grid
            lines.append(f"grid: n={grid.n}, M={grid.points}, L={grid.half_width:g}")
        lines.extend(f"{name}: {value:.3e}" for name, value in self.guards.items())
        return lines


class StarMethod(ABC):
    """a ⋆_Ω b 계산 방법 추상 클래스"""

    # CLI에서 쓰는 이름 (서브클래스에서 정의)
    name: str = ""

    @abstractmethod
    def compute(
        self, a: Expr, b: Expr, params: NCParams, s: SeibergWittenMap, grid: PhaseGrid
    ) -> StarResult:
        """
        a ⋆_Ω b 계산

        Args:
            a, b: 파싱된 심볼
            params: 변형 파라미터
            s: SW 맵
            grid: 격자 방법이 쓰는 위상 공간 격자

        Returns:
            StarResult: 결과와 가드 지표
        """

    @classmethod
    def can_handle(cls, a: Expr, b: Expr, params: NCParams) -> bool:
        """이 방법으로 계산할 수 있는지 확인"""
        return True
