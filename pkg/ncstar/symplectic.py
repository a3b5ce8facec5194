"""변형 파라미터, Ω 행렬, Seiberg–Witten 맵"""

import itertools
import logging
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy import linalg

from .errors import (
    AdmissibilityError,
    DegenerateFormError,
    ParameterError,
    SingularFormError,
)

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-14
SINGULAR_COND = 1e14


def standard_j(n: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]]"""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def sigma(z: np.ndarray, zp: np.ndarray) -> float:
    """표준 심플렉틱 형식 σ(z, z') = Jz·z'"""
    z = np.asarray(z)
    return float(standard_j(len(z) // 2) @ z @ np.asarray(zp))


def _antisymmetric(value, n: int, name: str) -> np.ndarray:
    if value is None:
        return np.zeros((n, n))
    matrix = np.array(value, dtype=float)
    if matrix.shape != (n, n):
        raise ParameterError(f"{name}의 형상이 ({n}, {n})이 아님: {matrix.shape}")
    if not np.array_equal(matrix.T, -matrix):
        raise ParameterError(f"{name}이 반대칭 행렬이 아님")
    matrix.setflags(write=False)
    return matrix


def pair_matrix(n: int, value: float) -> np.ndarray:
    """(1,2) 성분만 value인 반대칭 행렬"""
    matrix = np.zeros((n, n))
    if n >= 2:
        matrix[0, 1] = value
        matrix[1, 0] = -value
    return matrix


@dataclass(frozen=True, eq=False)
class Schedule:
    """ħ 스케줄 Θ(ħ) = c_θ ħ^{α_θ} Θ̂, N(ħ) = c_η ħ^{α_η} N̂"""
    alpha_theta: float
    c_theta: float
    alpha_eta: float
    c_eta: float
    theta_shape: np.ndarray  # 단위 정규화된 Θ̂
    eta_shape: np.ndarray    # 단위 정규화된 N̂

    def __post_init__(self) -> None:
        if self.alpha_theta <= 2 or self.alpha_eta <= 2:
            raise ParameterError(
                f"스케줄 지수는 2보다 커야 함: α_θ={self.alpha_theta}, α_η={self.alpha_eta}"
            )

    def theta_at(self, hbar: float) -> np.ndarray:
        return self.c_theta * hbar**self.alpha_theta * np.asarray(self.theta_shape)

    def eta_at(self, hbar: float) -> np.ndarray:
        return self.c_eta * hbar**self.alpha_eta * np.asarray(self.eta_shape)


@dataclass(frozen=True, eq=False)
class NCParams:
    """NCQM 변형 데이터 (n, ħ, Θ, N, 스케줄)"""
    n: int
    hbar: float = 1.0
    theta: np.ndarray | None = None
    eta: np.ndarray | None = None
    schedule: Schedule | None = None

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n은 양의 정수여야 함: {self.n}")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ParameterError(f"ħ는 양수여야 함: {self.hbar}")
        object.__setattr__(self, "theta", _antisymmetric(self.theta, self.n, "Θ"))
        object.__setattr__(self, "eta", _antisymmetric(self.eta, self.n, "N"))

    @classmethod
    def single_pair(
        cls,
        theta: float = 0.0,
        eta: float = 0.0,
        hbar: float = 1.0,
        n: int = 2,
    ) -> "NCParams":
        """θ₁₂, η₁₂ 한 쌍만 있는 파라미터"""
        return cls(n=n, hbar=hbar, theta=pair_matrix(n, theta), eta=pair_matrix(n, eta))

    @classmethod
    def from_schedule(cls, n: int, hbar: float, schedule: Schedule) -> "NCParams":
        params = cls(
            n=n,
            hbar=hbar,
            theta=schedule.theta_at(hbar),
            eta=schedule.eta_at(hbar),
            schedule=schedule,
        )
        check_admissible(params)
        return params

    @property
    def is_commutative(self) -> bool:
        return not (self.theta.any() or self.eta.any())

    def to_dict(self) -> dict:
        data = {
            "n": self.n,
            "hbar": self.hbar,
            "theta": self.theta.tolist(),
            "eta": self.eta.tolist(),
        }
        if self.schedule is not None:
            data["schedule"] = {
                "alpha_theta": self.schedule.alpha_theta,
                "c_theta": self.schedule.c_theta,
                "alpha_eta": self.schedule.alpha_eta,
                "c_eta": self.schedule.c_eta,
            }
        return data


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def admissible(params: NCParams) -> tuple[bool, float]:
    """모든 α<β, γ<δ에 대해 θ_{αβ}η_{γδ} < ħ² 인지 확인

    Returns:
        (flag, margin): margin = ħ² − 최대 곱
    """
    hbar2 = params.hbar**2
    products = [
        params.theta[a, b] * params.eta[c, d]
        for (a, b), (c, d) in itertools.product(_pairs(params.n), repeat=2)
    ]
    if not products:
        return True, hbar2
    worst = max(products)
    return bool(all(p < hbar2 for p in products)), hbar2 - worst


def check_admissible(params: NCParams) -> None:
    """허용 조건을 위반하면 첫 번째 (α,β,γ,δ)를 담아 예외 발생"""
    hbar2 = params.hbar**2
    for (a, b), (c, d) in itertools.product(_pairs(params.n), repeat=2):
        product = params.theta[a, b] * params.eta[c, d]
        if not product < hbar2:
            indices = (a + 1, b + 1, c + 1, d + 1)
            raise AdmissibilityError(
                f"허용 조건 위반: θ_{a + 1}{b + 1}·η_{c + 1}{d + 1} = {product:g} ≥ ħ² = {hbar2:g}",
                indices=indices,
            )


@dataclass(frozen=True, eq=False)
class OmegaMatrix:
    """Ω = [[ħ⁻¹Θ, I], [−I, ħ⁻¹N]]"""
    entries: np.ndarray
    n: int
    hbar: float

    @cached_property
    def inverse(self) -> np.ndarray:
        _require_invertible(self.entries)
        return np.linalg.inv(self.entries)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))

    @classmethod
    def scaled_standard(cls, n: int, scale: float, hbar: float = 1.0) -> "OmegaMatrix":
        """scale·J (검증용 손으로 만든 Ω)"""
        return cls(entries=scale * standard_j(n), n=n, hbar=hbar)


def _require_invertible(matrix: np.ndarray) -> None:
    if not np.isfinite(matrix).all() or not np.linalg.cond(matrix) <= SINGULAR_COND:
        raise SingularFormError("Ω 행렬이 특이함")


def build_omega(params: NCParams) -> OmegaMatrix:
    """NCParams로부터 Ω 블록 행렬 생성"""
    check_admissible(params)
    n = params.n
    eye = np.eye(n)
    entries = np.block(
        [
            [params.theta / params.hbar, eye],
            [-eye, params.eta / params.hbar],
        ]
    )
    entries.setflags(write=False)
    return OmegaMatrix(entries=entries, n=n, hbar=params.hbar)


def omega_form(omega: OmegaMatrix, z: np.ndarray, zp: np.ndarray) -> float:
    """ω(z, z') = z·Ω⁻¹z'"""
    return float(np.asarray(z) @ omega.inverse @ np.asarray(zp))


@dataclass(frozen=True, eq=False)
class SeibergWittenMap:
    """sJsᵀ = Ω 를 만족하는 선형 자기동형 s"""
    s: np.ndarray
    variant: int = 0

    @property
    def n(self) -> int:
        return self.s.shape[0] // 2

    @property
    def A(self) -> np.ndarray:  # noqa: N802
        return self.s[: self.n, : self.n]

    @property
    def B(self) -> np.ndarray:  # noqa: N802
        return self.s[: self.n, self.n :]

    @property
    def C(self) -> np.ndarray:  # noqa: N802
        return self.s[self.n :, : self.n]

    @property
    def D(self) -> np.ndarray:  # noqa: N802
        return self.s[self.n :, self.n :]

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.s)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.s))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.s, np.eye(2 * self.n)))

    @classmethod
    def identity(cls, n: int) -> "SeibergWittenMap":
        return cls(s=np.eye(2 * n))

    def residual(self, omega: OmegaMatrix) -> float:
        """‖sJsᵀ − Ω‖_max"""
        return float(np.abs(self.s @ standard_j(self.n) @ self.s.T - omega.entries).max())

    def block_residuals(self, params: NCParams) -> dict[str, float]:
        """ABᵀ−BAᵀ=ħ⁻¹Θ, CDᵀ−DCᵀ=ħ⁻¹N, ADᵀ−BCᵀ=I 의 최대 오차"""
        a, b, c, d = self.A, self.B, self.C, self.D
        return {
            "AB": float(np.abs(a @ b.T - b @ a.T - params.theta / params.hbar).max()),
            "CD": float(np.abs(c @ d.T - d @ c.T - params.eta / params.hbar).max()),
            "AD": float(np.abs(a @ d.T - b @ c.T - np.eye(self.n)).max()),
        }

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "s": self.s.tolist(),
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "D": self.D.tolist(),
        }


def _variant_basis(dim: int, variant: int) -> np.ndarray:
    # variant 0은 표준 기저, 그 외에는 시드 고정 직교 기저
    if variant == 0:
        return np.eye(dim)
    rng = np.random.default_rng(variant)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def solve_sw_map(omega: OmegaMatrix, variant: int = 0) -> SeibergWittenMap:
    """skew Gram–Schmidt로 sJsᵀ = Ω 인 s 계산

    형식 ω(u, v) = u·Ω⁻¹v 에 대해 남은 후보 중 |ω|가 가장 큰 쌍을 피벗으로 삼는다.

    Args:
        omega: 대상 Ω
        variant: 시작 기저 선택자 (같은 값이면 같은 결과)

    Returns:
        SeibergWittenMap
    """
    n = omega.n
    form = omega.inverse
    scale = max(1.0, float(np.abs(form).max()))
    candidates = list(_variant_basis(2 * n, variant).T)
    positions: list[np.ndarray] = []
    momenta: list[np.ndarray] = []

    for _ in range(n):
        m = len(candidates)
        best, best_pair = -1.0, (0, 1)
        for i, j in itertools.combinations(range(m), 2):
            value = abs(candidates[i] @ form @ candidates[j])
            if value > best:
                best, best_pair = value, (i, j)
        if best < PIVOT_TOL * scale:
            raise DegenerateFormError(f"skew Gram–Schmidt 피벗이 너무 작음: {best:.3e}")

        i, j = best_pair
        u = candidates[i]
        v = -candidates[j] / (u @ form @ candidates[j])  # ω(u, v) = −1
        rest = [w for k, w in enumerate(candidates) if k not in best_pair]
        candidates = [w + (w @ form @ v) * u - (w @ form @ u) * v for w in rest]
        positions.append(u)
        momenta.append(v)

    sw = SeibergWittenMap(s=np.column_stack(positions + momenta), variant=variant)
    logger.debug(f"SW 맵 계산 완료 (variant={variant}, residual={sw.residual(omega):.2e})")
    return sw


def random_symplectic(n: int, seed: int, scale: float = 0.3) -> np.ndarray:
    """시드 고정 무작위 심플렉틱 행렬 S = expm(scale·JH), H 대칭"""
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((2 * n, 2 * n))
    h = (h + h.T) / 2
    return linalg.expm(scale * standard_j(n) @ h)


def variant_defect(s: SeibergWittenMap, other: SeibergWittenMap) -> float:
    """‖(s⁻¹s')ᵀJ(s⁻¹s') − J‖_max"""
    t = s.inverse @ other.s
    j = standard_j(s.n)
    return float(np.abs(t.T @ j @ t - j).max())


def at_hbar(params: NCParams, hbar: float) -> NCParams:
    """스케줄에 따라 주어진 ħ에서의 NCParams"""
    if params.schedule is None:
        raise ParameterError("스케줄이 없는 파라미터에는 at_hbar를 쓸 수 없음")
    return NCParams.from_schedule(params.n, hbar, params.schedule)


def with_hbar(params: NCParams, hbar: float) -> NCParams:
    """스케줄이 있으면 at_hbar, 없으면 Θ, N을 유지한 채 ħ만 교체"""
    if params.schedule is not None:
        return at_hbar(params, hbar)
    result = replace(params, hbar=hbar)
    check_admissible(result)
    return result


__all__ = [
    "NCParams",
    "OmegaMatrix",
    "Schedule",
    "SeibergWittenMap",
    "admissible",
    "at_hbar",
    "build_omega",
    "check_admissible",
    "omega_form",
    "pair_matrix",
    "random_symplectic",
    "sigma",
    "solve_sw_map",
    "standard_j",
    "variant_defect",
    "with_hbar",
]
