"""Tests for the self-verification service and the seeded corpora"""
import random
import time

import pytest

from determinants import first_vanishing_minor
from matrix import Matrix
from models import VerificationRun
from services.verification_service import (
    BASE_CASE_SIGNS,
    VerificationService,
    random_corpus_matrix,
    random_deficient_matrix,
    random_nonsingular_system,
    verify_construction,
    verify_pivoting,
    verify_solver,
    verify_sylvester,
)


class TestVerifyConstruction:
    """Test the three-way check of A^k"""

    def test_identity(self):
        report = verify_construction(Matrix.identity(4))
        assert report.passed
        assert report.discrepancies == []
        assert report.steps_checked == 4

    def test_worked_example(self, worked_example):
        report = verify_construction(worked_example)
        assert report.passed
        # k=1: 2 rows x 2 columns, k=2: 2 rows x 1 column
        assert report.cells_checked == 6
        assert report.table_entries_checked == 6

    def test_base_identities_on_four_rows(self):
        a = random_corpus_matrix(random.Random(3), 4)
        report = verify_construction(a)
        assert report.passed
        # each (k, i) pair checks columns k+1..6
        assert report.base_identities_checked == sum(6 - k for k, _ in BASE_CASE_SIGNS)

    def test_zero_pivot_reported_at_step(self):
        report = verify_construction(Matrix([[1, 2, 1], [2, 4, 3], [1, 0, 1]]))
        assert report.zero_pivot_step == 2
        assert not report.passed

    def test_never_raises_on_rank_deficient_input(self):
        report = verify_construction(Matrix([[0, 0], [0, 0]]))
        assert report.zero_pivot_step == 1


class TestVerifyPivoting:
    """Test strict failure location and swap soundness"""

    def test_first_vanishing_minor(self):
        report = verify_pivoting(Matrix([[1, 2, 1], [2, 4, 3], [1, 0, 1]]))
        assert report.passed
        assert report.first_vanishing_minor == report.strict_failure_step == 2
        assert report.permutation == [1, 3, 2]

    def test_structurally_singular(self):
        report = verify_pivoting(Matrix([[1, 2, 3], [2, 4, 6]]))
        assert report.passed
        assert report.structurally_singular_step == 2

    def test_regular_matrix(self):
        report = verify_pivoting(Matrix([[2, 1], [1, 3]]))
        assert report.passed
        assert report.strict_failure_step is None
        assert report.permutation == [1, 2]


class TestVerifySolverAndIdentity:
    """Test the Cramer and bordered-determinant checks"""

    def test_solver(self, system_2x2):
        a, b = system_2x2
        assert verify_solver(a, b) == []

    def test_solver_reports_singular(self):
        found = verify_solver(Matrix([[1, 2], [2, 4]]), [1, 1])
        assert [d.kind for d in found] == ["solver-error"]

    def test_sylvester(self):
        rng = random.Random(11)
        assert all(verify_sylvester(rng) is None for _ in range(25))


class TestGenerators:
    """Test the seeded corpus generators"""

    def test_corpus_matrix_has_nonzero_leading_minors(self):
        rng = random.Random(0)
        for n in range(2, 8):
            a = random_corpus_matrix(rng, n)
            assert a.shape == (n, n + 2)
            assert first_vanishing_minor(a) is None
            assert all(-9 <= x <= 9 for i in range(1, n + 1) for x in a.row(i))

    def test_deficient_matrix_has_vanishing_minor(self):
        rng = random.Random(0)
        for _ in range(30):
            a = random_deficient_matrix(rng, rng.randint(2, 7))
            assert first_vanishing_minor(a) is not None

    def test_deficient_matrix_vanishes_above_the_last_row(self):
        rng = random.Random(2024)
        for _ in range(40):
            n = rng.randint(2, 7)
            assert first_vanishing_minor(random_deficient_matrix(rng, n)) < n

    def test_deficient_matrix_reaches_swap_comparison(self):
        rng = random.Random(1)
        for _ in range(40):
            report = verify_pivoting(random_deficient_matrix(rng, rng.randint(2, 7)))
            assert report.passed
            assert report.structurally_singular_step is None
            assert len(report.permutation) == report.rows

    def test_nonsingular_system(self):
        a, b = random_nonsingular_system(random.Random(5), 4)
        assert a.shape == (4, 4)
        assert len(b) == 4

    def test_seed_determines_corpus(self):
        first = [random_corpus_matrix(random.Random(42), 5) for _ in range(3)]
        second = [random_corpus_matrix(random.Random(42), 5) for _ in range(3)]
        assert first == second


class TestVerificationService:
    """Test the battery runner"""

    def test_small_battery_passes(self):
        counts = {"construction": 15, "sylvester": 15, "solver": 15, "pivoting": 15}
        report = VerificationService().run_battery(seed=1, counts=counts)
        assert report.passed
        assert [b.name for b in report.batteries] == ["construction", "sylvester", "solver", "pivoting"]
        assert all(b.instances == 15 for b in report.batteries)

    def test_battery_is_deterministic(self):
        counts = {"construction": 5, "sylvester": 5, "solver": 5, "pivoting": 5}
        first = VerificationService().run_battery(seed=9, counts=counts)
        second = VerificationService().run_battery(seed=9, counts=counts)
        assert first == second

    def test_workers_give_the_same_report(self):
        counts = {"construction": 8, "sylvester": 4, "solver": 4, "pivoting": 8}
        serial = VerificationService(workers=1).run_battery(seed=4, counts=counts)
        parallel = VerificationService(workers=2).run_battery(seed=4, counts=counts)
        assert serial == parallel

    def test_single_matrix(self, worked_example):
        report = VerificationService().verify_matrix(worked_example, source="example")
        assert report.passed
        assert report.source == "example"

    def test_records_run(self, session_factory):
        service = VerificationService(session_factory=session_factory)
        service.verify_matrix(Matrix.identity(3), source="identity")
        db = session_factory()
        try:
            runs = db.query(VerificationRun).all()
            assert len(runs) == 1
            assert runs[0].source == "identity"
            assert runs[0].passed is True
        finally:
            db.close()

    def test_storage_failure_keeps_verdict(self):
        def broken_factory():
            raise RuntimeError("database unavailable")

        report = VerificationService(session_factory=broken_factory).verify_matrix(Matrix.identity(2))
        assert report.passed


@pytest.mark.slow
class TestAcceptanceCorpus:
    """Full-size seeded corpora"""

    def test_construction_corpus(self):
        """500 matrices, n in 2..7, m = n + 2, entries in [-9, 9]"""
        rng = random.Random(2024)
        service = VerificationService()
        corpus = [random_corpus_matrix(rng, rng.randint(2, 7)) for _ in range(500)]
        start = time.time()
        result = service.construction_battery(corpus)
        assert time.time() - start < 60
        assert result.failures == 0, result.discrepancies[:5]
        assert result.non_exact_divisions == 0

    def test_sylvester_instances(self):
        result = VerificationService().sylvester_battery(random.Random(2024), 200)
        assert result.failures == 0

    def test_solver_systems(self):
        rng = random.Random(2024)
        systems = [random_nonsingular_system(rng, rng.randint(1, 7)) for _ in range(200)]
        result = VerificationService().solver_battery(systems)
        assert result.failures == 0, result.discrepancies[:5]

    def test_pivoting_cases(self):
        rng = random.Random(2024)
        matrices = [random_deficient_matrix(rng, rng.randint(2, 7)) for _ in range(100)]
        result = VerificationService().pivoting_battery(matrices)
        assert result.failures == 0, result.discrepancies[:5]
        reports = [verify_pivoting(a) for a in matrices]
        assert all(r.structurally_singular_step is None for r in reports)
        assert all(r.strict_failure_step is not None for r in reports)
