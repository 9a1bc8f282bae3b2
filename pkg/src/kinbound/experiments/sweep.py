"""Sequential or concurrent execution of independent solver runs."""

import asyncio
import logging
from collections.abc import Callable, Sequence

logger = logging.getLogger(__name__)


async def run_sweep[T](tasks: Sequence[Callable[[], T]]) -> list[T]:
    """Run blocking tasks in worker threads; results keep the input order."""
    logger.debug("Starting concurrent sweep over %d tasks", len(tasks))
    return list(await asyncio.gather(*(asyncio.to_thread(task) for task in tasks)))


def sweep[T](tasks: Sequence[Callable[[], T]], *, concurrent: bool = False) -> list[T]:
    """Run tasks one after another, or through :func:`run_sweep` when ``concurrent``."""
    if concurrent:
        return asyncio.run(run_sweep(tasks))
    return [task() for task in tasks]
