import time
import logging
from functools import wraps
from typing import Callable, Optional

from tenacity import retry, stop_after_attempt, wait_exponential, retry_if_exception_type
from sqlalchemy.exc import OperationalError, DBAPIError

from config import settings
from models import VerificationRun, init_db
from repositories.verification_run_repository import VerificationRunRepository
from schemas import SelfcheckReport

logger = logging.getLogger(__name__)


@retry(
    stop=stop_after_attempt(3),
    wait=wait_exponential(multiplier=1, min=1, max=10),
    retry=retry_if_exception_type((OperationalError, DBAPIError)),
    reraise=True
)
def _store_run_with_retry(session_factory: Callable, report: SelfcheckReport, duration_ms: float) -> int:
    """Store a self-check run, retrying transient database failures (e.g. a locked SQLite file)"""
    db = session_factory()
    try:
        init_db(db.get_bind())
        repo = VerificationRunRepository(db)
        run = repo.create(VerificationRun(
            source=report.source,
            seed=report.seed,
            matrices_checked=sum(b.instances for b in report.batteries),
            cells_checked=sum(b.cells_checked for b in report.batteries),
            discrepancies=sum(b.failures for b in report.batteries),
            non_exact_divisions=sum(b.non_exact_divisions for b in report.batteries),
            passed=report.passed,
            duration_ms=duration_ms,
        ))
        repo.delete_old_records(settings.run_retention_days)
        return run.id
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()


def track_verification_run(source: str, session_factory: Optional[Callable] = None):
    """Time a self-check, log it, and record it when a session factory is given"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.time()
            logger.info("Self-check STARTED - source: %s", source)

            report = func(*args, **kwargs)

            duration_ms = (time.time() - start_time) * 1000
            verdict = "PASS" if report.passed else "FAIL"
            logger.info("Self-check %s - source: %s, duration: %.2fms", verdict, source, duration_ms)

            if session_factory is not None:
                try:
                    run_id = _store_run_with_retry(session_factory, report, duration_ms)
                    logger.info("Recorded self-check run", extra={'run_id': run_id})
                except Exception as e:
                    logger.error("Failed to record self-check run for %s after retries: %s", source, e)

            return report
        return wrapper
    return decorator
