import functools
import logging
import time

logger = logging.getLogger(__name__)


def timed(func=None, *, label=None):
    """
    This decorator logs the wall time of a call and stores it on the result
    when the result has a `wall_time` attribute
    """
    def actual_decorator(f):
        name = label or f.__name__

        @functools.wraps(f)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            result = f(*args, **kwargs)
            elapsed = time.perf_counter() - start
            if hasattr(result, 'wall_time'):
                result.wall_time = elapsed
            logger.info('%s finished in %.3fs', name, elapsed)
            return result
        return wrapper

    if func:
        return actual_decorator(func)
    else:
        return actual_decorator
