"""ncstar 예외 계층

CLI는 NcstarError를 잡아 메시지를 출력하고 exit_code로 종료한다.
"""


class NcstarError(Exception):
    """ncstar 예외의 루트"""

    exit_code: int = 2


class ConfigError(NcstarError):
    """설정 파일/옵션 오류"""


class ParseError(NcstarError):
    """심볼 표현식 파싱 오류 (column은 1부터 시작)"""

    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class ParameterError(NcstarError):
    """NCParams 불변식 위반 (형상, 반대칭성, 스케줄 지수)"""


class AdmissibilityError(ParameterError):
    """θ_{αβ}η_{γδ} < ħ² 조건 위반"""

    def __init__(self, message: str, indices: tuple[int, int, int, int] | None = None):
        self.indices = indices  # 위반한 (α, β, γ, δ), 1-based
        super().__init__(message)


class SymbolError(NcstarError):
    """심볼이 연산의 전제 조건을 만족하지 않음 (비다항식, 비실수 등)"""


class PolynomialError(SymbolError):
    """다항식으로 변환할 수 없는 노드"""

    def __init__(self, message: str, node: object = None):
        self.node = node
        super().__init__(message)


class SingularFormError(NcstarError):
    """특이한 Ω 행렬"""


class GuardError(NcstarError):
    """수치 가드 위반"""

    exit_code = 3


class DegenerateFormError(GuardError):
    """skew Gram–Schmidt 피벗이 너무 작음"""


class DecayError(GuardError):
    """샘플이 격자 경계에서 충분히 감쇠하지 않음 (절단 위험)"""


class GridSizeError(GuardError):
    """dense 모드 크기 상한 초과"""


class GridMismatchError(GuardError):
    """격자 또는 ħ 불일치"""


class InterpolationRequiredError(GuardError):
    """샘플 기반 입력에 보간 모드가 필요함"""


class TruncationError(GuardError):
    """Weyl 행렬 적분의 감쇠 가드 위반"""


class ConsistencyError(GuardError):
    """서로 독립적인 두 계산 경로의 결과가 다름"""
