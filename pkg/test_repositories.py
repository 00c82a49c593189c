"""Tests for the verification ledger: repository and run tracking"""
import logging
from datetime import datetime, timedelta
from unittest.mock import Mock

import pytest
from sqlalchemy.exc import OperationalError
from tenacity import wait_none

from models import VerificationRun
from repositories.verification_run_repository import VerificationRunRepository
from run_tracker import _store_run_with_retry, track_verification_run
from schemas import BatteryResult, Discrepancy, SelfcheckReport


@pytest.fixture
def run_repo(test_db):
    return VerificationRunRepository(test_db)


def make_run(**overrides):
    fields = dict(
        source="random", seed=0, matrices_checked=10, cells_checked=200,
        discrepancies=0, non_exact_divisions=0, passed=True, duration_ms=12.5,
    )
    fields.update(overrides)
    return VerificationRun(**fields)


def make_report(failures=0):
    battery = BatteryResult(
        name="construction", instances=3, cells_checked=40, failures=failures,
        discrepancies=[Discrepancy(kind="three-way", k=1, i=1, j=2)] * failures,
    )
    return SelfcheckReport(source="random", seed=5, batteries=[battery])


class TestVerificationRunRepository:
    """Test VerificationRunRepository"""

    def test_create(self, run_repo):
        run = run_repo.create(make_run())
        assert run.id is not None
        assert run.created_at is not None

    def test_get_latest_newest_first(self, run_repo):
        run_repo.create(make_run(source="first", created_at=datetime.now() - timedelta(minutes=5)))
        run_repo.create(make_run(source="second"))
        assert [r.source for r in run_repo.get_latest()] == ["second", "first"]

    def test_get_latest_limit(self, run_repo):
        for n in range(5):
            run_repo.create(make_run(seed=n))
        assert len(run_repo.get_latest(limit=3)) == 3

    def test_delete_old_records(self, run_repo):
        run_repo.create(make_run(source="old", created_at=datetime.now() - timedelta(days=120)))
        run_repo.create(make_run(source="recent"))
        assert run_repo.delete_old_records(90) == 1
        assert [r.source for r in run_repo.get_latest()] == ["recent"]

    def test_delete_nothing(self, run_repo):
        run_repo.create(make_run())
        assert run_repo.delete_old_records(90) == 0

    def test_delete_logs_count(self, run_repo, caplog):
        caplog.set_level(logging.INFO, logger="repositories.verification_run_repository")
        run_repo.create(make_run(created_at=datetime.now() - timedelta(days=120)))
        run_repo.delete_old_records(90)
        assert "Deleted 1 verification runs older than 90 days" in caplog.messages


class TestRunTracker:
    """Test timing, recording and retries of self-check runs"""

    def test_store_run(self, session_factory):
        run_id = _store_run_with_retry(session_factory, make_report(), 3.0)
        db = session_factory()
        try:
            run = db.get(VerificationRun, run_id)
            assert run.source == "random"
            assert run.seed == 5
            assert run.matrices_checked == 3
            assert run.cells_checked == 40
            assert run.passed is True
        finally:
            db.close()

    def test_store_failed_run(self, session_factory):
        run_id = _store_run_with_retry(session_factory, make_report(failures=2), 3.0)
        db = session_factory()
        try:
            run = db.get(VerificationRun, run_id)
            assert run.passed is False
            assert run.discrepancies == 2
        finally:
            db.close()

    def test_retries_transient_errors(self, session_factory):
        """Two locked-database failures, then success"""
        factory = Mock(side_effect=[
            OperationalError("INSERT", {}, Exception("database is locked")),
            OperationalError("INSERT", {}, Exception("database is locked")),
            session_factory(),
        ])
        store = _store_run_with_retry.retry_with(wait=wait_none())
        assert store(factory, make_report(), 1.0) is not None
        assert factory.call_count == 3

    def test_gives_up_after_three_attempts(self):
        factory = Mock(side_effect=OperationalError("INSERT", {}, Exception("database is locked")))
        store = _store_run_with_retry.retry_with(wait=wait_none())
        with pytest.raises(OperationalError):
            store(factory, make_report(), 1.0)
        assert factory.call_count == 3

    def test_decorator_returns_report(self, session_factory):
        report = make_report()

        @track_verification_run("unit", session_factory)
        def run():
            return report

        assert run() is report
        db = session_factory()
        try:
            assert db.query(VerificationRun).count() == 1
        finally:
            db.close()

    def test_decorator_without_ledger(self):
        @track_verification_run("unit")
        def run():
            return make_report(failures=1)

        assert not run().passed

    def test_decorator_logs_start_and_verdict(self, caplog):
        caplog.set_level(logging.INFO, logger="run_tracker")

        @track_verification_run("unit")
        def run():
            return make_report()

        run()
        assert "Self-check STARTED - source: unit" in caplog.messages
        assert any(m.startswith("Self-check PASS - source: unit, duration: ") for m in caplog.messages)
