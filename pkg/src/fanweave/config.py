"""Default numerical tolerances and run configuration.

All fixtures in this package have entries that are roots of unity, so double
precision leaves residuals around 1e-13; the defaults below keep an order of
magnitude of margin on top of that.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass
class Tolerances:
    """Named absolute tolerances.

    ``DEFAULT_TOLS`` is the process-wide instance every operation consults;
    the CLI applies per-run overrides to it (and restores them on exit).
    """

    unitarity: float = 1e-9        # ||A*A - I||_F
    orthogonality: float = 1e-9    # |tr(U_x* U_y) - d delta_xy|
    commutation: float = 1e-9      # ||AB - BA||_F
    trace: float = 1e-9            # |tr W| for unitary-system members
    psd: float = 1e-10             # lambda_min >= -psd
    hermitian: float = 1e-9        # relative ||A - A*||_F / ||A||_F
    normality: float = 1e-8        # relative ||A*A - AA*||_F / ||A||_F^2
    diag_residual: float = 1e-8    # off-diagonal residual of joint diagonalization, times sqrt(d)
    row_sum: float = 1e-8          # |sum of a traceless diagonal|
    unbiasedness: float = 1e-9     # |d |<b, b'>|^2 - 1| across bases
    unimodular: float = 1e-12      # ||H_jk| - 1|
    vector_norm: float = 1e-12     # |  ||psi|| - 1 |
    schmidt: float = 1e-8          # singular-value cutoff / flatness of Schmidt spectra
    purity_ratio: float = 1e-8     # second eigenvalue <= ratio * largest for a pure element
    povm_sum: float = 1e-9         # ||sum A_j - I||_F
    reconstruction: float = 1e-8   # ||rho - rho_hat||_F for noiseless round trips

    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(self))

    def snapshot(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    def apply(self, overrides: dict[str, float]) -> None:
        unknown = sorted(set(overrides) - set(self.names()))
        if unknown:
            raise ValueError(
                f"unknown tolerance name(s) {unknown}; known names: {sorted(self.names())}"
            )
        for name, value in overrides.items():
            setattr(self, name, float(value))


DEFAULT_TOLS = Tolerances()

# Angle resolution used when rounding unimodular spectra into discrete
# invariants.  Fixture spectra are separated by at least 2*pi/d, far above
# this, so the rounding is safe; it is deliberately not run-configurable.
ANGLE_DECIMALS = 8


@dataclass(frozen=True)
class RunConfig:
    """CLI-level configuration: seed, tolerance overrides, output routing."""

    seed: int = 0
    fmt: str = "text"
    out: str | None = None
