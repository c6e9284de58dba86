"""Dataclass configs for the pipeline stages."""

from dataclasses import dataclass, field

from .field import Field


@dataclass(frozen=True)
class QuadricConfig:
    """How the quadric expansion weights the diagonal t_i^2 terms.

    "half" uses psi(o(phi_i, phi_i)) / 2, so that Q(t) agrees with psi(o(t)) / 2
    when o is expanded bilinearly; "two" multiplies by 2 instead.
    """

    diagonal: str = "half"

    def __post_init__(self):
        if self.diagonal not in ("half", "one", "two"):
            raise ValueError("diagonal must be 'half', 'one' or 'two'")

    def diagonal_factor(self):
        return {"half": "1/2", "one": 1, "two": 2}[self.diagonal]


@dataclass(frozen=True)
class CertificateConfig:
    """Artinian-reduction certificate settings.

    With ``modular`` the graded elimination for rational input runs modulo the
    first usable prime; a vanishing degree piece there still proves vanishing
    over Q (the rank can only drop mod p).  Set it False for exact rational
    elimination throughout.
    """

    retries: int = 5
    max_degree: int | None = 8
    field: Field | None = None
    modular: bool = True
    primes: tuple = (2147483647, 2147483629, 2147483587)


@dataclass(frozen=True)
class VerdictConfig:
    target: int = 4
    quadrics: QuadricConfig = field(default_factory=QuadricConfig)
    certificate: CertificateConfig = field(default_factory=CertificateConfig)
