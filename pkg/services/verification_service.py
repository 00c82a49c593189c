"""Self-verification of the explicit Gauss-Jordan construction.

Each check compares independent computations and reports every disagreement
with its operands instead of raising.
"""
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from bareiss import PivotingMode, ff_eliminate
from cramer import cramer_classical, inverse, solve_gj
from determinants import (
    bordered_minor_above,
    bordered_minor_below,
    check_sylvester_identity,
    det_cofactor,
    first_vanishing_minor,
    leading_principal_minor,
)
from errors import MathematicalError, NonExactDivision, StructurallySingular, ZeroPivot
from gauss_jordan import (
    GjLevel,
    decompose_entry,
    gj_rational_oracle,
    gj_reduce,
    numerator_of,
    piecewise_sign,
    unified_sign,
)
from matrix import Matrix
from run_tracker import track_verification_run
from scalars import render_scalar
from schemas import (
    BatteryResult,
    BorderedMinorSpec,
    ConstructionReport,
    Discrepancy,
    PivotingReport,
    SelfcheckReport,
)

logger = logging.getLogger(__name__)

# Signs of the above-diagonal base identities for steps 2, 3 and 4, keyed (k, i)
BASE_CASE_SIGNS = {
    (2, 1): 1,
    (3, 1): -1,
    (3, 2): 1,
    (4, 1): 1,
    (4, 2): -1,
    (4, 3): 1,
}

ENTRY_BOUND = 9
SYLVESTER_ENTRY_BOUND = 5
CORPUS_SIZES = range(2, 8)
DEFAULT_BATTERY = {"construction": 500, "sylvester": 200, "solver": 200, "pivoting": 100}


def _ops(**values) -> dict:
    return {name: render_scalar(v) if not isinstance(v, str) else v for name, v in values.items()}


def _table_oracle(a: Matrix, i: int, j: int, k: int):
    """The level-table numerator of entry (i, j) of A^k, from cofactor-assembled minors."""
    if i > k:
        return bordered_minor_below(a, BorderedMinorSpec.below(k, i, j), det=det_cofactor)
    if i == k:
        if k == 1:
            return a[1, j]
        return bordered_minor_below(a, BorderedMinorSpec.below(k - 1, k, j), det=det_cofactor)
    return bordered_minor_above(a, BorderedMinorSpec.above(k, i, j), det=det_cofactor)


def verify_construction(a: Matrix) -> ConstructionReport:
    """Three-way check of every j > k entry of every A^k.

    closed-form determinant ratio == fraction-free recursion == rational oracle,
    plus the identity-block law, table entries against cofactor-assembled
    minors, the sign law and the step 2..4 base identities.
    """
    report = ConstructionReport(rows=a.rows, cols=a.cols)
    try:
        trace = gj_reduce(a, PivotingMode.STRICT)
    except ZeroPivot as e:
        report.zero_pivot_step = e.step
        logger.info("construction check stopped: %s", e, extra={'step': e.step})
        return report
    except NonExactDivision as e:
        report.non_exact_divisions += 1
        report.discrepancies.append(Discrepancy(
            kind="non-exact-division",
            operands=_ops(dividend=e.dividend, divisor=e.divisor),
        ))
        logger.error("fraction-free recursion hit %s", e)
        return report
    oracle = gj_rational_oracle(a, PivotingMode.STRICT)

    def flag(kind, k=None, i=None, j=None, **operands):
        report.discrepancies.append(Discrepancy(kind=kind, k=k, i=i, j=j, operands=_ops(**operands)))
        logger.error("discrepancy %s at k=%s (%s,%s): %s", kind, k, i, j, operands)

    levels: List[GjLevel] = [GjLevel.initial(a)] + [s.level for s in trace.steps]
    for step in trace.steps:
        k = step.k
        reference = oracle.step(k).matrix
        level, previous = levels[k], levels[k - 1]
        report.steps_checked += 1

        for name, produced in (("recursion", step.matrix), ("oracle", reference)):
            for i in range(1, a.rows + 1):
                for j in range(1, k + 1):
                    if produced[i, j] != int(i == j):
                        flag("identity-block", k, i, j, source=name, value=produced[i, j])

        pivot_oracle = leading_principal_minor(a, k, det=det_cofactor)
        if level.pivot != pivot_oracle:
            flag("pivot", k, k, k, recursion=level.pivot, cofactor=pivot_oracle)

        for i in range(1, a.rows + 1):
            for j in range(k + 1, a.cols + 1):
                report.cells_checked += 1
                closed = decompose_entry(a, i, j, k).value
                recursed = step.matrix[i, j]
                expected = reference[i, j]
                if not closed == recursed == expected:
                    flag("three-way", k, i, j, closed_form=closed, recursion=recursed, oracle=expected)
                if i < k and piecewise_sign(k, i) != unified_sign(k, i):
                    flag("sign-law", k, i, j, piecewise=piecewise_sign(k, i), unified=unified_sign(k, i))

                _, _, numerator = numerator_of(level, previous, i, j)
                minor = _table_oracle(a, i, j, k)
                report.table_entries_checked += 1
                if numerator != minor:
                    flag("table-entry", k, i, j, recursion=numerator, cofactor=minor)

    for (k, i), sign in BASE_CASE_SIGNS.items():
        if k > len(trace.steps):
            continue
        denominator = leading_principal_minor(a, k, det=det_cofactor)
        for j in range(k + 1, a.cols + 1):
            numerator = bordered_minor_above(a, BorderedMinorSpec.above(k, i, j), det=det_cofactor)
            expected = Fraction(sign * numerator, denominator)
            report.base_identities_checked += 1
            if oracle.step(k).matrix[i, j] != expected:
                flag("base-identity", k, i, j, oracle=oracle.step(k).matrix[i, j], identity=expected)
    return report


def verify_pivoting(a: Matrix) -> PivotingReport:
    """Strict mode must stop at the first vanishing leading minor; swap mode
    must equal the strict run on the permuted matrix."""
    report = PivotingReport(rows=a.rows, cols=a.cols)
    report.first_vanishing_minor = first_vanishing_minor(a, det=det_cofactor)

    def flag(kind, **operands):
        report.discrepancies.append(Discrepancy(kind=kind, operands=_ops(**operands)))
        logger.error("pivoting discrepancy %s: %s", kind, operands)

    try:
        ff_eliminate(a, PivotingMode.STRICT)
    except ZeroPivot as e:
        report.strict_failure_step = e.step
    if report.strict_failure_step != report.first_vanishing_minor:
        flag("strict-step", reported=str(report.strict_failure_step), direct=str(report.first_vanishing_minor))

    try:
        swapped = ff_eliminate(a, PivotingMode.ROW_SWAP)
        gj_swapped = gj_reduce(a, PivotingMode.ROW_SWAP)
    except StructurallySingular as e:
        report.structurally_singular_step = e.step
        return report
    report.permutation = list(swapped.permutation.mapping)
    permuted = swapped.permutation.apply(a)
    strict = ff_eliminate(permuted, PivotingMode.STRICT)
    if swapped.levels != strict.levels:
        flag("swap-levels", permutation=str(report.permutation))
    if gj_swapped.permutation != swapped.permutation:
        flag("swap-permutation", bareiss=str(report.permutation), gauss_jordan=str(list(gj_swapped.permutation.mapping)))
    gj_strict = gj_reduce(permuted, PivotingMode.STRICT)
    if [s.matrix for s in gj_swapped.steps] != [s.matrix for s in gj_strict.steps]:
        flag("swap-steps", permutation=str(report.permutation))
    return report


def verify_sylvester(rng: random.Random, max_size: int = 5) -> Optional[Discrepancy]:
    """One random instance of the bordered-determinant identity."""
    p = rng.randint(1, max_size)
    draw = lambda: rng.randint(-SYLVESTER_ENTRY_BOUND, SYLVESTER_ENTRY_BOUND)
    m = Matrix([[draw() for _ in range(p)] for _ in range(p)])
    u, v, r, s = ([draw() for _ in range(p)] for _ in range(4))
    a, b, c, d = (draw() for _ in range(4))
    verdict = check_sylvester_identity(m, u, v, r, s, a, b, c, d)
    if verdict.equal:
        return None
    return Discrepancy(kind="sylvester", operands=_ops(lhs=verdict.lhs, rhs=verdict.rhs, size=p))


def verify_solver(a: Matrix, b) -> List[Discrepancy]:
    """solve_gj against classical Cramer and the rational oracle, plus the inverse checks."""
    found = []
    try:
        result = solve_gj(a, b, cross_check=True)
        classical = cramer_classical(a, b)
        if result.vector != classical:
            found.append(Discrepancy(kind="cramer", operands={"explicit": str(result.vector), "classical": str(classical)}))
        inv = inverse(a)
        if inverse(inv, PivotingMode.ROW_SWAP) != a:
            found.append(Discrepancy(kind="inverse-involution", operands={"matrix": repr(a)}))
    except MathematicalError as e:
        found.append(Discrepancy(kind="solver-error", operands={"error": str(e), "matrix": repr(a)}))
    return found


# -- corpus generation ----------------------------------------------------------

def _random_matrix(rng: random.Random, n: int, m: int, bound: int = ENTRY_BOUND) -> Matrix:
    return Matrix([[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)])


def random_corpus_matrix(rng: random.Random, n: int, m: Optional[int] = None) -> Matrix:
    """n x m (default n+2) matrix, resampled until every leading minor is nonzero."""
    m = n + 2 if m is None else m
    while True:
        a = _random_matrix(rng, n, m)
        if first_vanishing_minor(a) is None:
            return a


def random_deficient_matrix(rng: random.Random, n: int, m: Optional[int] = None) -> Matrix:
    """A matrix whose leading minor of some order t < n vanishes by construction.

    The first t entries of row t are an integer combination of the first t
    entries of rows 1..t-1 (for t = 1, a_{1,1} = 0). For n >= 2 the draw is
    repeated until row swaps can carry the elimination through every step.
    """
    m = n + 2 if m is None else m
    p = min(n, m)
    while True:
        a = _random_matrix(rng, n, m).to_lists()
        t = rng.randint(1, max(1, min(n - 1, p)))
        weights = [rng.randint(-2, 2) for _ in range(t - 1)]
        for c in range(t):
            a[t - 1][c] = sum(w * a[r][c] for r, w in enumerate(weights))
        candidate = Matrix(a)
        if n == 1 or _swap_completes(candidate):
            return candidate


def _swap_completes(a: Matrix) -> bool:
    try:
        ff_eliminate(a, PivotingMode.ROW_SWAP, trace=False)
    except StructurallySingular:
        return False
    return True


def random_nonsingular_system(rng: random.Random, n: int) -> Tuple[Matrix, List[int]]:
    """(A, b) with nonzero leading minors, so strict mode applies."""
    a = random_corpus_matrix(rng, n, n)
    return a, [rng.randint(-ENTRY_BOUND, ENTRY_BOUND) for _ in range(n)]


# -- battery ---------------------------------------------------------------------

def _construction_job(a: Matrix) -> ConstructionReport:
    return verify_construction(a)


def _pivoting_job(a: Matrix) -> PivotingReport:
    return verify_pivoting(a)


class VerificationService:
    """Runs the self-check battery and optionally records it"""

    def __init__(self, workers: int = 1, session_factory: Optional[Callable] = None):
        self.workers = workers
        self.session_factory = session_factory

    def _map(self, job, items):
        if self.workers <= 1 or len(items) < 2:
            return [job(item) for item in items]
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            # map keeps input order, so reports stay deterministic
            return list(pool.map(job, items, chunksize=max(1, len(items) // (4 * self.workers))))

    def construction_battery(self, matrices: List[Matrix]) -> BatteryResult:
        result = BatteryResult(name="construction", instances=len(matrices))
        for report in self._map(_construction_job, matrices):
            result.cells_checked += report.cells_checked
            result.non_exact_divisions += report.non_exact_divisions
            if not report.passed:
                result.failures += 1
                result.discrepancies.extend(report.discrepancies)
                if report.zero_pivot_step is not None:
                    result.discrepancies.append(Discrepancy(kind="zero-pivot", k=report.zero_pivot_step))
        return result

    def pivoting_battery(self, matrices: List[Matrix]) -> BatteryResult:
        result = BatteryResult(name="pivoting", instances=len(matrices))
        for report in self._map(_pivoting_job, matrices):
            if not report.passed:
                result.failures += 1
                result.discrepancies.extend(report.discrepancies)
        return result

    def sylvester_battery(self, rng: random.Random, count: int) -> BatteryResult:
        result = BatteryResult(name="sylvester", instances=count)
        for _ in range(count):
            found = verify_sylvester(rng)
            if found is not None:
                result.failures += 1
                result.discrepancies.append(found)
        return result

    def solver_battery(self, systems) -> BatteryResult:
        result = BatteryResult(name="solver", instances=len(systems))
        for a, b in systems:
            found = verify_solver(a, b)
            if found:
                result.failures += 1
                result.discrepancies.extend(found)
        return result

    def verify_matrix(self, a: Matrix, source: str = "file") -> SelfcheckReport:
        """Construction check of one given matrix."""
        @track_verification_run(source, self.session_factory)
        def run() -> SelfcheckReport:
            report = verify_construction(a)
            battery = BatteryResult(
                name="construction",
                instances=1,
                cells_checked=report.cells_checked,
                non_exact_divisions=report.non_exact_divisions,
                failures=0 if report.passed else 1,
                discrepancies=list(report.discrepancies),
            )
            if report.zero_pivot_step is not None:
                battery.discrepancies.append(Discrepancy(kind="zero-pivot", k=report.zero_pivot_step))
            return SelfcheckReport(source=source, batteries=[battery])
        return run()

    def run_battery(self, seed: int = 0, counts: Optional[dict] = None) -> SelfcheckReport:
        """Random corpora for every check, reproducible from the seed."""
        counts = dict(DEFAULT_BATTERY if counts is None else counts)
        source = "random"

        @track_verification_run(source, self.session_factory)
        def run() -> SelfcheckReport:
            rng = random.Random(seed)
            sizes = list(CORPUS_SIZES)
            corpus = [random_corpus_matrix(rng, rng.choice(sizes)) for _ in range(counts["construction"])]
            deficient = [random_deficient_matrix(rng, rng.choice(sizes)) for _ in range(counts["pivoting"])]
            systems = [random_nonsingular_system(rng, rng.randint(1, 7)) for _ in range(counts["solver"])]
            logger.info(
                "battery corpora ready: %s", counts, extra={'run_id': f"seed-{seed}"}
            )
            batteries = [
                self.construction_battery(corpus),
                self.sylvester_battery(rng, counts["sylvester"]),
                self.solver_battery(systems),
                self.pivoting_battery(deficient),
            ]
            return SelfcheckReport(source=source, seed=seed, batteries=batteries)
        return run()
