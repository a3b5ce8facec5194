"""청크 단위 구적을 위한 작업 스레드 관리

결과는 항상 입력 순서대로 모으므로 스레드 수와 무관하게 같은 합이 나온다.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV = "NCSTAR_THREADS"

T = TypeVar("T")
R = TypeVar("R")

_configured: int | None = None


def set_threads(threads: int | None) -> None:
    """설정 파일의 threads 값 등록 (환경 변수가 우선)"""
    global _configured
    _configured = threads


def thread_count() -> int:
    """NCSTAR_THREADS > 설정 값 > CPU 수"""
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning(f"{THREADS_ENV} 값이 정수가 아님: {value!r} (무시)")
    if _configured:
        return max(1, _configured)
    return os.cpu_count() or 1


def chunk_ranges(total: int, chunk: int) -> list[tuple[int, int]]:
    return [(start, min(start + chunk, total)) for start in range(0, total, chunk)]


def map_ordered(func: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """func를 items에 적용하고 입력 순서대로 결과 반환"""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
