import time
from contextlib import contextmanager
from typing import Iterator, Union

from humanize import intcomma, naturaldelta, precisedelta


def format_count(value: Union[int, float]) -> str:
    return intcomma(value)


def format_elapsed(seconds: float) -> str:
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    return precisedelta(seconds, minimum_unit="seconds", format="%0.1f")


def format_span(seconds: float) -> str:
    return naturaldelta(seconds)


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()
        self.elapsed = 0.0

    def stop(self) -> float:
        self.elapsed = time.perf_counter() - self.start
        return self.elapsed

    def __str__(self) -> str:
        return format_elapsed(self.elapsed)


@contextmanager
def timed() -> Iterator[Stopwatch]:
    watch = Stopwatch()
    try:
        yield watch
    finally:
        watch.stop()
