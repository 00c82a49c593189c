from datetime import datetime, timedelta
from typing import List
import logging

from sqlalchemy.orm import Session

from models import VerificationRun

logger = logging.getLogger(__name__)


class VerificationRunRepository:
    """Repository for VerificationRun database operations"""

    def __init__(self, db: Session):
        self.db = db

    def get_latest(self, limit: int = 20) -> List[VerificationRun]:
        """Get latest runs, newest first"""
        return (
            self.db.query(VerificationRun)
            .order_by(VerificationRun.created_at.desc(), VerificationRun.id.desc())
            .limit(limit)
            .all()
        )

    def create(self, run: VerificationRun) -> VerificationRun:
        """Store a run record"""
        self.db.add(run)
        self.db.commit()
        self.db.refresh(run)
        logger.debug("Recorded verification run ID=%s: %s (%.2fms)", run.id, run.source, run.duration_ms)
        return run

    def delete_old_records(self, retention_days: int) -> int:
        """Delete runs older than retention_days. Returns count of deleted records."""
        cutoff_date = datetime.now() - timedelta(days=retention_days)
        try:
            count = self.db.query(VerificationRun).filter(
                VerificationRun.created_at < cutoff_date
            ).delete()
            self.db.commit()
            if count > 0:
                logger.info("Deleted %d verification runs older than %d days", count, retention_days)
            return count
        except Exception as e:
            self.db.rollback()
            logger.error("Failed to delete old verification runs: %s", e)
            raise
