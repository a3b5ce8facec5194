"""성질 검사 스위트 베이스 클래스"""

import json
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterator

from ..config import RunConfig

logger = logging.getLogger(__name__)


@dataclass
class Check:
    """검사 하나의 측정값과 허용 오차"""
    name: str
    value: float        # 측정된 오차 (작을수록 좋음)
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.value <= self.tolerance

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @classmethod
    def exact(cls, name: str, ok: bool) -> "Check":
        """참/거짓 검사 (value 0 또는 1, 허용 오차 0)"""
        return cls(name, 0.0 if ok else 1.0, 0.0)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "status": self.status,
        }


@dataclass
class SuiteReport:
    """스위트 실행 결과"""
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def lines(self) -> list[str]:
        return [f"{check.name}: {check.status}" for check in self.checks]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def merge(cls, reports: list["SuiteReport"]) -> "SuiteReport":
        """여러 스위트를 하나의 보고서로 (둘 이상이면 이름 'all', 검사 이름은 'suite.name')"""
        if len(reports) == 1:
            return cls(reports[0].suite, list(reports[0].checks))
        checks = [
            Check(f"{report.suite}.{check.name}", check.value, check.tolerance)
            for report in reports
            for check in report.checks
        ]
        return cls("all", checks)


class Suite(ABC):
    """검사 스위트 추상 클래스"""

    # CLI에서 쓰는 이름 (서브클래스에서 정의)
    name: str = ""

    @abstractmethod
    def checks(self, config: RunConfig) -> Iterator[Check]:
        """
        검사 실행

        Args:
            config: 실행 설정

        Yields:
            Check: 측정값과 허용 오차
        """

    def run(self, config: RunConfig) -> SuiteReport:
        report = SuiteReport(self.name)
        for check in self.checks(config):
            logger.info(
                f"[{self.name}] {check.name}: {check.status} ({check.value:.3e} ≤ {check.tolerance:.0e})"
            )
            report.checks.append(check)
        return report
