"""스타곱 계산 방법"""

from .base import StarMethod, StarResult
from .bopp import BoppMethod
from .dense import DenseMethod
from .fft import FftMethod

METHODS: dict[str, type[StarMethod]] = {
    BoppMethod.name: BoppMethod,
    FftMethod.name: FftMethod,
    DenseMethod.name: DenseMethod,
}

__all__ = [
    "METHODS",
    "BoppMethod",
    "DenseMethod",
    "FftMethod",
    "StarMethod",
    "StarResult",
]
