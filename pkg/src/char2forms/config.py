"""Run configuration: seeds, degree caps and search limits."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    seed: int = 0
    # randomized suites draw polynomials of total degree <= this
    random_degree: int = 6
    # caps for the exponential F^2-span systems (2^n unknowns, 2^k equations)
    max_span_generators: int = 6
    max_basis_variables: int = 8
    # bounded isotropy search: refuse candidate spaces larger than this
    # (per meet-in-the-middle half)
    search_half_cap: int = 1 << 21
    # default coordinate degree bound for witness searches
    search_degree: int = 2
    # descent search: degree bound for the scalar candidates
    descent_degree: int = 2


DEFAULT = Config()
