from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class HierarchyParams:
    """Numerical data attached to the D_N reduction.

    ``h1 = h = 2N - 2`` is the Coxeter number and ``h2 = 2``.  The weight of
    ``t^1_m`` is ``m`` and the weight of ``t^2_m`` is ``m (N - 1)``, so that
    ``weight(a) * h_a == h`` for both components.
    """

    N: int

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 3:
            raise ValueError(f"N must be an integer >= 3, got {self.N!r}")

    @property
    def h(self) -> int:
        return 2 * self.N - 2

    @property
    def h1(self) -> int:
        return self.h

    @property
    def h2(self) -> int:
        return 2

    def h_of(self, a: int) -> int:
        return self.h if a == 1 else 2

    def weight(self, a: int) -> int:
        """Weight carried by ``z_a`` (equivalently by ``t^a_1``)."""
        return 1 if a == 1 else self.N - 1

    def var_weight(self, a: int, m: int) -> int:
        return m * self.weight(a)


@dataclass(frozen=True, order=True)
class VarId:
    """The dynamical variable ``t^a_m`` (``copy`` distinguishes t' from t'')."""

    a: int
    m: int
    copy: int = 0

    def __post_init__(self):
        if self.a not in (1, 2):
            raise ValueError("component index must be 1 or 2")
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError(f"time index must be odd and positive, got {self.m}")

    def __str__(self):
        primes = "'" * self.copy
        return f"t{self.a}_{self.m}{primes}"
