"""Priority weights and consistency diagnostics from pairwise-comparison matrices.

The core objects are a judgment matrix (square, positive, conventionally
reciprocal), the priority vector derived from its dominant eigenvector, and a
consistency report (lambda_max, CI, CR) that tells the analyst whether the
judgments are coherent enough to use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

# Saaty's random index values. RI(n) is the expected consistency index of a
# random reciprocal matrix of size n; CR = CI / RI(n).
SAATY_RI = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
            6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}

# Alternate table with RI(6) = 1.26, seen in several AHP references. Shipped
# selectable because some published CR figures back-solve to this value.
ALTERNATE_RI = {**SAATY_RI, 6: 1.26}

SAATY_VALUES = frozenset(
    [float(i) for i in range(1, 10)] + [1.0 / i for i in range(2, 10)]
)


class AhpError(Exception):
    """Base class for AHP errors."""


class NonSquareError(AhpError):
    pass


class TooSmallError(AhpError):
    pass


class NonPositiveEntryError(AhpError):
    pass


class ValidationFailedError(AhpError):
    def __init__(self, report):
        super().__init__("; ".join(report.errors))
        self.report = report


class NoConvergenceError(AhpError):
    pass


class DimensionMismatchError(AhpError):
    pass


class MissingRIError(AhpError):
    pass


class InconsistentMatrixError(AhpError):
    def __init__(self, report):
        super().__init__(f"CR {report.cr:.4f} >= threshold {report.threshold}")
        self.report = report


@dataclass(frozen=True)
class JudgmentMatrix:
    """Pairwise-comparison matrix over named criteria."""

    labels: tuple[str, ...]
    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(
            self, "entries", tuple(tuple(float(v) for v in row) for row in self.entries)
        )
        n = len(self.labels)
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise NonSquareError(
                f"matrix must be {n}x{n} to match {n} labels"
            )
        if n < 2:
            raise TooSmallError("need at least 2 criteria")
        if len(set(self.labels)) != n:
            raise AhpError("labels must be unique")

    @property
    def n(self) -> int:
        return len(self.labels)

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    @classmethod
    def from_upper_triangle(cls, labels, upper: dict[tuple[int, int], float]) -> "JudgmentMatrix":
        """Build a strict-reciprocal matrix: diagonal 1, (j,i) = 1/(i,j)."""
        n = len(labels)
        grid = [[1.0] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise AhpError(f"bad cell ({i}, {j})")
            if v <= 0:
                raise NonPositiveEntryError(f"cell ({i}, {j}) = {v}")
            grid[i][j] = float(v)
            grid[j][i] = 1.0 / float(v)
        return cls(tuple(labels), tuple(tuple(row) for row in grid))

    def to_json(self) -> str:
        return json.dumps({"labels": list(self.labels),
                           "entries": [list(r) for r in self.entries]})

    @classmethod
    def from_json(cls, text: str) -> "JudgmentMatrix":
        doc = json.loads(text)
        return cls(tuple(doc["labels"]), tuple(tuple(r) for r in doc["entries"]))


@dataclass(frozen=True)
class PriorityVector:
    """Normalized criterion weights, same order as labels."""

    labels: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.labels) != len(self.weights):
            raise DimensionMismatchError("labels and weights differ in length")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise AhpError("weights must sum to 1")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.weights))

    def to_json(self) -> str:
        return json.dumps({"labels": list(self.labels), "weights": list(self.weights)})

    @classmethod
    def from_json(cls, text: str) -> "PriorityVector":
        doc = json.loads(text)
        return cls(tuple(doc["labels"]), tuple(doc["weights"]))


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    ci: float
    ri: float
    cr: float
    passed: bool
    threshold: float
    iterations: int = 0

    def to_json(self) -> str:
        return json.dumps({
            "lambda_max": self.lambda_max, "ci": self.ci, "ri": self.ri,
            "cr": self.cr, "passed": self.passed, "threshold": self.threshold,
            "iterations": self.iterations,
        })


@dataclass(frozen=True)
class AhpConfig:
    reciprocity_mode: str = "strict"          # "strict" | "lenient"
    ri_table: dict[int, float] = field(default_factory=lambda: dict(SAATY_RI))
    cr_threshold: float = 0.1
    eigen_tolerance: float = 1e-12
    max_iterations: int = 10_000
    strict_consistency: bool = False

    def __post_init__(self):
        if self.reciprocity_mode not in ("strict", "lenient"):
            raise AhpError(f"unknown reciprocity mode {self.reciprocity_mode!r}")
        if self.eigen_tolerance <= 0:
            raise AhpError("eigen_tolerance must be positive")
        if self.max_iterations < 1:
            raise AhpError("max_iterations must be >= 1")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    errors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()


_RECIPROCITY_RTOL = 1e-9


def validate_matrix(m: JudgmentMatrix, mode: str = "strict") -> ValidationReport:
    """Check positivity, unit diagonal, and (strict mode) reciprocity.

    Reciprocity violations are errors in strict mode and warnings in lenient
    mode, so a matrix transcribed verbatim from a non-reciprocal source can
    still be processed deliberately.
    """
    if mode not in ("strict", "lenient"):
        raise AhpError(f"unknown reciprocity mode {mode!r}")
    errors: list[str] = []
    warnings: list[str] = []
    n = m.n
    for i in range(n):
        for j in range(n):
            v = m.entries[i][j]
            if not np.isfinite(v) or v <= 0:
                errors.append(f"non-positive entry at ({m.labels[i]}, {m.labels[j]}): {v}")
    for i in range(n):
        if m.entries[i][i] != 1.0:
            errors.append(f"diagonal entry at ({m.labels[i]}, {m.labels[i]}) is {m.entries[i][i]}, not 1")
    for i in range(n):
        for j in range(i + 1, n):
            a, b = m.entries[i][j], m.entries[j][i]
            if a > 0 and b > 0 and abs(b - 1.0 / a) > _RECIPROCITY_RTOL * max(b, 1.0 / a):
                msg = (f"reciprocity violated at ({m.labels[i]}, {m.labels[j]}): "
                       f"entry {a:g} vs transpose entry {b:g}")
                (errors if mode == "strict" else warnings).append(msg)
    for i in range(n):
        for j in range(n):
            v = m.entries[i][j]
            if i != j and v > 0 and not any(abs(v - s) <= 1e-9 for s in SAATY_VALUES):
                warnings.append(
                    f"entry at ({m.labels[i]}, {m.labels[j]}) = {v:g} is outside the Saaty 1-9 scale")
    return ValidationReport(ok=not errors, errors=tuple(errors), warnings=tuple(warnings))


def _power_iteration(a: np.ndarray, cfg: AhpConfig) -> tuple[np.ndarray, int]:
    n = a.shape[0]
    w = np.full(n, 1.0 / n)
    for it in range(1, cfg.max_iterations + 1):
        v = a @ w
        v /= v.sum()
        if np.max(np.abs(v - w)) < cfg.eigen_tolerance:
            return v, it
        w = v
    raise NoConvergenceError(
        f"power iteration did not converge in {cfg.max_iterations} iterations")


def principal_eigenvector(m: JudgmentMatrix, cfg: AhpConfig | None = None) -> PriorityVector:
    """Dominant eigenvector by power iteration with L1 renormalization."""
    cfg = cfg or AhpConfig()
    w, _ = _power_iteration(m.to_array(), cfg)
    # Nudge the float sum onto 1 exactly within tolerance.
    w = w / w.sum()
    return PriorityVector(m.labels, tuple(w))


def max_eigenvalue(m: JudgmentMatrix, w: PriorityVector) -> float:
    """lambda_max estimated as the mean of component-wise ratios (Aw)_i / w_i."""
    if w.labels != m.labels:
        raise DimensionMismatchError("priority vector labels do not match matrix labels")
    a = m.to_array()
    wv = np.array(w.weights)
    return float(np.mean((a @ wv) / wv))


def consistency(lambda_max: float, n: int, cfg: AhpConfig | None = None,
                iterations: int = 0) -> ConsistencyReport:
    """CI = (lambda_max - n)/(n - 1); CR = CI/RI(n), 0 by convention when RI = 0."""
    cfg = cfg or AhpConfig()
    if n < 2:
        raise TooSmallError("n must be >= 2")
    if n not in cfg.ri_table:
        raise MissingRIError(f"no RI value for n = {n}")
    ci = (lambda_max - n) / (n - 1)
    ri = cfg.ri_table[n]
    cr = ci / ri if ri > 0 else 0.0
    return ConsistencyReport(
        lambda_max=float(lambda_max), ci=float(ci), ri=float(ri), cr=float(cr),
        passed=cr < cfg.cr_threshold, threshold=cfg.cr_threshold,
        iterations=iterations,
    )


def derive_weights(m: JudgmentMatrix, cfg: AhpConfig | None = None
                   ) -> tuple[PriorityVector, ConsistencyReport]:
    """validate -> eigenvector -> lambda_max -> consistency, in one call."""
    cfg = cfg or AhpConfig()
    report = validate_matrix(m, cfg.reciprocity_mode)
    if not report.ok:
        raise ValidationFailedError(report)
    w, iterations = _power_iteration(m.to_array(), cfg)
    weights = PriorityVector(m.labels, tuple(w / w.sum()))
    lam = max_eigenvalue(m, weights)
    cons = consistency(lam, m.n, cfg, iterations=iterations)
    if cfg.strict_consistency and not cons.passed:
        raise InconsistentMatrixError(cons)
    return weights, cons


def with_ri_table(cfg: AhpConfig, table: dict[int, float]) -> AhpConfig:
    return replace(cfg, ri_table=dict(table))
