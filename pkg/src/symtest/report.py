"""Result records shared by the test modules and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AcceptanceReport:
    """Paired (simulated, closed-form) acceptance values with metadata.

    ``shots = 0`` means the simulated value is exact; otherwise it is a
    Monte Carlo estimate drawn with the recorded seed.
    """

    simulated: float
    closed_form: float | None = None
    shots: int = 0
    seed: int = 0
    method: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for label, value in (("simulated", self.simulated), ("closed_form", self.closed_form)):
            if value is None:
                continue
            if not -1e-9 <= value <= 1.0 + 1e-9:
                raise ValueError(f"{label} acceptance {value} outside [0, 1]")

    @property
    def difference(self) -> float | None:
        if self.closed_form is None:
            return None
        return abs(self.simulated - self.closed_form)


@dataclass(frozen=True)
class SeriesReport:
    """Truncated series against an exact reference value."""

    order: int
    partial_sums: tuple[float, ...]
    coefficients: tuple[float, ...]
    exact: float
    method: str = ""

    @property
    def residuals(self) -> tuple[float, ...]:
        return tuple(abs(s - self.exact) for s in self.partial_sums)


@dataclass(frozen=True)
class OptimizationOutcome:
    """Best objective over restarts, with convergence diagnostics.

    Behaves like a float for arithmetic; check ``converged`` before trusting
    the value as a global optimum (ascent is local, restarts mitigate).
    """

    value: float
    converged: bool
    iterations: int
    restart_values: tuple[float, ...]
    message: str = ""

    def __float__(self) -> float:
        return self.value
