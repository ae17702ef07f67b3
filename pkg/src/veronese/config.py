"""Run configuration shared by the library and the command line."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .algebra import DEFAULT_EXACT_BUDGET, DEFAULT_PRIME, SECOND_PRIME, FieldSpec

ENV_CACHE_DIR = "VERONESE_CACHE_DIR"
ENV_PRIME = "VERONESE_PRIME"

OUTPUT_FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    """Primes, budgets and output settings.

    ``primes[0]`` drives every computation; the remaining primes are only
    consulted to tighten a positive modular upper bound that could not be
    certified exactly.  ``exact_budget`` caps the number of columns of any
    single block handed to the integer rank engine (0 disables exact ranks).
    ``max_columns`` is the memory budget: Koszul maps with more columns are
    refused outright.
    """

    primes: tuple[int, ...] = (DEFAULT_PRIME, SECOND_PRIME)
    exact_budget: int = DEFAULT_EXACT_BUDGET
    max_columns: int = 4_000_000
    cache_dir: str | None = None
    output_format: str = "text"
    use_symmetry: bool = True
    jobs: int = 1
    fields: tuple[FieldSpec, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.primes:
            raise ValueError("at least one prime is required")
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be distinct")
        object.__setattr__(self, "fields", tuple(FieldSpec.prime(p) for p in self.primes))
        if self.exact_budget < 0 or self.max_columns <= 0 or self.jobs <= 0:
            raise ValueError("budgets must be positive")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")

    @property
    def prime(self) -> int:
        return self.primes[0]

    def replace(self, **kw) -> RunConfig:
        return replace(self, **kw)

    @classmethod
    def from_env(cls, **overrides) -> RunConfig:
        """Defaults, then environment, then explicit overrides (flags win)."""
        kw = {}
        if os.environ.get(ENV_CACHE_DIR):
            kw["cache_dir"] = os.environ[ENV_CACHE_DIR]
        if os.environ.get(ENV_PRIME):
            p = int(os.environ[ENV_PRIME])
            kw["primes"] = (p,) + tuple(q for q in cls.primes_default() if q != p)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    @staticmethod
    def primes_default() -> tuple[int, ...]:
        return (DEFAULT_PRIME, SECOND_PRIME)


DEFAULT_CONFIG = RunConfig()
