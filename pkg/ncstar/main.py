"""CLI 엔트리포인트"""

import functools
import json
import logging
from pathlib import Path

import click

from .config import DEFAULT_CONFIG_YAML, RunConfig
from .errors import NcstarError, ParameterError, PolynomialError
from .method import METHODS, BoppMethod, DenseMethod, FftMethod, StarMethod
from .parallel import set_threads
from .star.grid import write_grid_csv
from .symbol.parser import parse
from .symplectic import build_omega, variant_defect
from .verify import SUITES, run_suites
from .wigner.hermite import HermiteBasis, WaveFunction
from .wigner.spectral import solve_stargen
from .wigner.transform import cross_wigner, w_s_phi

logger = logging.getLogger(__name__)


def handle_errors(func):
    """NcstarError를 stderr 메시지와 종료 코드로 바꾼다"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NcstarError as e:
            click.echo(f"오류: {e}", err=True)
            click.get_current_context().exit(e.exit_code)

    return wrapper


def _write(path: Path, text: str) -> None:
    path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    click.echo(f"저장: {path}")


@click.group()
@click.option(
    "-c", "--config",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="설정 파일 경로 (기본: ./config.yaml)",
)
@click.option("--seed", type=int, default=None, help="난수 시드 덮어쓰기")
@click.option("--tol", type=float, default=None, help="검사 허용 오차 덮어쓰기")
@click.pass_context
def cli(ctx: click.Context, config: Path | None, seed: int | None, tol: float | None) -> None:
    """ncstar - 비가환 위상공간의 Ω-스타곱과 star-고윳값 계산 도구"""
    ctx.ensure_object(dict)

    # 설정 로드
    try:
        if config:
            loaded = RunConfig.from_file(config)
        elif Path("config.yaml").exists():
            loaded = RunConfig.from_file(Path("config.yaml"))
        else:
            loaded = RunConfig.default()
        loaded = loaded.with_overrides(seed=seed, tolerance=tol)
    except NcstarError as e:
        click.echo(f"설정 오류: {e}", err=True)
        ctx.exit(e.exit_code)
    ctx.obj["config"] = loaded

    # 로깅과 작업 스레드
    loaded.setup_logging()
    set_threads(loaded.threads)


@cli.command()
@click.argument("path", type=click.Path(path_type=Path), default=Path("config.yaml"))
@click.pass_context
def init(ctx: click.Context, path: Path) -> None:
    """기본 설정 파일 생성"""
    if path.exists():
        click.echo(f"{path}이 이미 존재합니다.", err=True)
        ctx.exit(1)

    path.write_text(DEFAULT_CONFIG_YAML, encoding="utf-8")
    click.echo(f"{path} 생성 완료!")


@cli.command()
@click.option(
    "--suite",
    type=click.Choice([*SUITES, "all"]),
    default="all",
    help="실행할 검사 스위트",
)
@click.option("-o", "--out", type=click.Path(path_type=Path), default=None, help="JSON 보고서 경로")
@click.pass_context
@handle_errors
def verify(ctx: click.Context, suite: str, out: Path | None) -> None:
    """성질 검사 실행 (모두 통과하면 0, 실패가 있으면 1)"""
    config: RunConfig = ctx.obj["config"]
    names = list(SUITES) if suite == "all" else [suite]
    report = run_suites(names, config)

    for line in report.lines():
        click.echo(line)
    if out:
        _write(out, report.to_json())

    failed = sum(not check.passed for check in report.checks)
    if failed:
        click.echo(f"{failed}개 검사 실패", err=True)
        ctx.exit(1)


def _make_method(name: str, config: RunConfig, interpolate: bool) -> StarMethod:
    decay = config.tolerances.decay
    if name == FftMethod.name:
        return FftMethod(decay_tol=decay, interpolate=interpolate)
    if name == DenseMethod.name:
        return DenseMethod(decay_tol=decay)
    return BoppMethod()


@cli.command()
@click.argument("a")
@click.argument("b")
@click.option(
    "-m", "--method",
    type=click.Choice(list(METHODS)),
    default=BoppMethod.name,
    help="계산 방법 (bopp: 정확한 다항식, fft: 격자, dense: 커널 구적)",
)
@click.option("--interpolate", is_flag=True, help="샘플 기반 입력의 보간 재표본 허용")
@click.option("-o", "--out", type=click.Path(path_type=Path), default=None, help="결과 파일 (JSON 또는 CSV)")
@click.pass_context
@handle_errors
def star(ctx: click.Context, a: str, b: str, method: str, interpolate: bool, out: Path | None) -> None:
    """스타곱 a ⋆_Ω b 계산"""
    config: RunConfig = ctx.obj["config"]
    params = config.params()
    left, right = parse(a, params.n), parse(b, params.n)

    if not METHODS[method].can_handle(left, right, params):
        raise PolynomialError(f"{method} 방법은 두 심볼이 모두 다항식이어야 함")
    calculator = _make_method(method, config, interpolate)
    result = calculator.compute(left, right, params, config.sw_map(), config.phase_grid())

    for line in result.summary():
        click.echo(line)
    if out:
        result.write(out)
        click.echo(f"저장: {out}")


@cli.command()
@click.argument("symbol")
@click.option("-k", "--count", type=int, default=6, help="고윳값 개수")
@click.option("--phi-index", type=int, default=0, help="창 함수 φ 의 Hermite 번호 (총 차수 순)")
@click.option("-o", "--out", type=click.Path(path_type=Path), default=None, help="Spectrum JSON 경로")
@click.pass_context
@handle_errors
def spectrum(ctx: click.Context, symbol: str, count: int, phi_index: int, out: Path | None) -> None:
    """a ⋆_Ω Ψ = λΨ 의 가장 낮은 고윳값"""
    config: RunConfig = ctx.obj["config"]
    params = config.params()
    a = parse(symbol, params.n)
    tolerances = config.tolerances

    result = solve_stargen(
        a,
        params,
        config.sw_map(),
        config.hermite_basis(),
        config.phase_grid(),
        count,
        phi_index=phi_index,
        eigen_tol=config.tol(tolerances.eigen),
        residual_tol=tolerances.residual,
        decay_tol=tolerances.decay,
    )

    for j, value in enumerate(result.eigenvalues):
        flag = "converged" if result.converged[j] else "not converged"
        click.echo(f"λ_{j} = {value:.12g} ({flag})")
    if out:
        _write(out, result.to_json())
    if not result.all_converged:
        click.echo(f"경고 {len(result.warnings)}건 (converged:false 표시)", err=True)


@cli.command()
@click.option("--variant", type=int, default=0, help="SW 맵 시작 기저 선택자")
@click.option("--companion", type=int, default=None, help="비교할 다른 variant")
@click.option("-o", "--out", type=click.Path(path_type=Path), default=None, help="SW 맵 JSON 경로")
@click.pass_context
@handle_errors
def swmap(ctx: click.Context, variant: int, companion: int | None, out: Path | None) -> None:
    """sJsᵀ = Ω 인 Seiberg–Witten 맵 계산"""
    config: RunConfig = ctx.obj["config"]
    params = config.params()
    omega = build_omega(params)
    s = config.sw_map(variant)

    payload = {
        "params": params.to_dict(),
        **s.to_dict(),
        "residual": s.residual(omega),
        "block_residuals": s.block_residuals(params),
        "companion": None,
    }
    if companion is not None:
        other = config.sw_map(companion)
        payload["companion"] = {
            "variant": companion,
            "s": other.s.tolist(),
            "symplectic_defect": variant_defect(s, other),
        }
    logger.info(f"SW 맵 잔차 {payload['residual']:.2e}")

    text = json.dumps(payload, indent=2, ensure_ascii=False)
    if out:
        _write(out, text)
    else:
        click.echo(text)


def parse_hermite(spec: str, basis: HermiteBasis) -> WaveFunction:
    """'hermite:<j>' (총 차수 순 번호) 또는 'hermite:<j1>,..,<jn>' (다중 지수)"""
    prefix, _, body = spec.partition(":")
    if prefix != "hermite" or not body:
        raise ParameterError(f"파동함수 지정은 'hermite:<j>' 형식이어야 함: {spec!r}")
    try:
        indices = [int(part) for part in body.split(",")]
    except ValueError as e:
        raise ParameterError(f"Hermite 번호가 정수가 아님: {spec!r}") from e
    if any(j < 0 for j in indices):
        raise ParameterError(f"Hermite 번호는 음수가 될 수 없음: {spec!r}")

    if len(indices) == basis.n:
        if max(indices) >= basis.K:
            raise ParameterError(f"Hermite 번호가 basis.K={basis.K} 이상: {spec!r}")
        return basis.function(tuple(indices))
    if len(indices) == 1:
        if indices[0] >= basis.size:
            raise ParameterError(f"Hermite 번호가 기저 크기 {basis.size} 이상: {spec!r}")
        return basis.function(basis.ordered(indices[0] + 1)[indices[0]])
    raise ParameterError(f"다중 지수 길이 {len(indices)} 가 n={basis.n} 과 다름: {spec!r}")


@cli.command()
@click.option("--psi", default="hermite:0", help="ψ 지정 (hermite:<j>)")
@click.option("--phi", default="hermite:0", help="φ 지정 (hermite:<j>)")
@click.option("--intertwine", is_flag=True, help="W(ψ,φ) 대신 W_{s,φ}ψ 출력")
@click.option("-o", "--out", type=click.Path(path_type=Path), default=None, help="GridSymbol CSV 경로")
@click.pass_context
@handle_errors
def wigner(ctx: click.Context, psi: str, phi: str, intertwine: bool, out: Path | None) -> None:
    """교차 Wigner 분포 또는 얽힘 연산자 상을 격자에 계산"""
    config: RunConfig = ctx.obj["config"]
    basis = config.hermite_basis()
    grid = config.phase_grid()
    left, right = parse_hermite(psi, basis), parse_hermite(phi, basis)

    if intertwine:
        result = w_s_phi(left, right, config.sw_map(), grid)
    else:
        result = cross_wigner(left, right, grid)

    click.echo(f"grid: n={grid.n}, M={grid.points}, L={grid.half_width:g}")
    click.echo(f"norm: {result.norm():.12g}")
    click.echo(f"boundary_ratio: {result.boundary_ratio():.3e}")
    if out:
        write_grid_csv(result, out)
        click.echo(f"저장: {out}")


if __name__ == "__main__":
    cli()
