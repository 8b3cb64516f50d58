"""Stub module which helps to manage the launch of parallel verification jobs."""
from __future__ import annotations

from concurrent.futures import Future, ThreadPoolExecutor
from os import getenv
from typing import TYPE_CHECKING, TypeVar

from .consts import EnvironmentVariable

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Callable, Optional

T = TypeVar("T")

PARALLEL = not getenv(EnvironmentVariable.NO_PARALLEL.value)
executor = ThreadPoolExecutor(thread_name_prefix="ProjectiveSuperflowsWorker_")


class Deferred(Future):  # type: ignore[type-arg]
    """Future that runs its function only when the result is requested."""

    def __init__(self, func: Callable[..., T], *args: Any, **kwargs: Any) -> None:
        """Store func and arguments."""
        self.deferred_func = func
        self.args = args
        self.kwargs = kwargs
        super().__init__()

    def result(self, timeout: Optional[float] = None) -> Any:
        """Execute the deferred function and return its value."""
        if not self.done():
            try:
                self.set_result(self.deferred_func(*self.args, **self.kwargs))
            except BaseException as e:
                self.set_exception(e)
        return super().result(timeout)


def parallel(func: Callable[..., T], *args: Any, **kwargs: Any) -> Future[T]:
    """Launch a task in parallel UNLESS the ProjectiveSuperflows_NO_PARALLEL environment variable is set."""
    if PARALLEL:
        def wrapped() -> T:
            return func(*args, **kwargs)

        return executor.submit(wrapped)
    return Deferred(func, *args, **kwargs)
