# src/designtrace/retry.py
"""
Retry policy for filesystem access
"""

import errno
import logging

from tenacity import (
    before_sleep_log,
    retry,
    retry_if_exception,
    stop_after_attempt,
    wait_exponential,
)

logger = logging.getLogger(__name__)

# Errors worth a second attempt (network mounts, busy files). Everything else is permanent.
TRANSIENT_ERRNOS = frozenset({errno.EAGAIN, errno.EBUSY, errno.EINTR, errno.ETIMEDOUT})


def is_transient(exc: BaseException) -> bool:
    """True for OS errors that may succeed on retry"""
    return isinstance(exc, OSError) and exc.errno in TRANSIENT_ERRNOS


io_retry = retry(
    retry=retry_if_exception(is_transient),
    wait=wait_exponential(multiplier=0.05, min=0.05, max=1),
    stop=stop_after_attempt(3),
    before_sleep=before_sleep_log(logger, logging.WARNING),
    reraise=True,
)
