"""Finite quotient order sets, with coset-table certificates.

Every finite quotient of order n corresponds to a normal subgroup of
index n, so order sets come straight out of the normal low-index
search.  Each order keeps one certificate: the standardized table of
the smallest normal subgroup realizing it, re-checkable independently
with ``verify_table`` and a regularity test.

A budget exhaustion can leave the listing incomplete; results carry a
``complete`` flag and incomplete ones are refused by downstream
consumers unless explicitly requested.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SearchBudgetError
from ..permgroup import perm_order
from .coset import CosetTable
from .lowindex import low_index_normal_subgroups
from .presentation import Presentation


@dataclass(frozen=True)
class FqResult:
    """Sorted quotient orders up to a limit, one certificate per order."""

    presentation: Presentation
    limit: int
    orders: tuple[int, ...]
    certificates: dict[int, CosetTable]
    tables: tuple[CosetTable, ...]
    complete: bool

    def __post_init__(self):
        if tuple(sorted(set(self.orders))) != self.orders:
            raise ValueError("orders must be sorted and duplicate-free")
        if set(self.certificates) != set(self.orders):
            raise ValueError("need exactly one certificate per order")


def _collect(pres, limit, node_budget, allow_partial):
    if limit < 1:
        raise ValueError("limit must be >= 1")
    try:
        return low_index_normal_subgroups(pres, limit, node_budget), True
    except SearchBudgetError as err:
        if not allow_partial:
            raise
        return getattr(err, "partial", []), False


def _bundle(pres, limit, tables, complete) -> FqResult:
    certificates: dict[int, CosetTable] = {}
    for t in tables:
        certificates.setdefault(t.n_cosets, t)
    return FqResult(
        presentation=pres,
        limit=limit,
        orders=tuple(sorted(certificates)),
        certificates=certificates,
        tables=tuple(tables),
        complete=complete,
    )


def fq_up_to(
    pres: Presentation,
    limit: int,
    node_budget: int | None = None,
    allow_partial: bool = False,
) -> FqResult:
    """All finite quotient orders up to the limit."""
    tables, complete = _collect(pres, limit, node_budget, allow_partial)
    return _bundle(pres, limit, tables, complete)


def oq_up_to(
    pres: Presentation,
    limit: int,
    node_budget: int | None = None,
    allow_partial: bool = False,
) -> FqResult:
    """Odd finite quotient orders up to the limit."""
    tables, complete = _collect(pres, limit, node_budget, allow_partial)
    odd = [t for t in tables if t.n_cosets % 2 == 1]
    return _bundle(pres, limit, odd, complete)


def _letter_names(k: int) -> tuple[str, ...]:
    if k <= 26:
        return tuple(chr(ord("a") + i) for i in range(k))
    return tuple(f"x{i + 1}" for i in range(k))


def free_product_of_cyclics(cyclic_orders) -> Presentation:
    """Presentation with one generator per factor, of that exact order."""
    orders = tuple(cyclic_orders)
    if not orders:
        raise ValueError("need at least one cyclic factor")
    for s in orders:
        if not isinstance(s, int) or s < 2:
            raise ValueError(f"cyclic factor orders must be integers >= 2, got {s!r}")
    names = _letter_names(len(orders))
    relators = tuple(tuple([i + 1] * s) for i, s in enumerate(orders))
    return Presentation(names, relators)


def smooth_quotients(
    cyclic_orders,
    max_index: int,
    node_budget: int | None = None,
    allow_partial: bool = False,
) -> FqResult:
    """Quotient orders of a free product of cyclic groups where every
    factor keeps its full order.

    A quotient counts only if the image of each factor's generator has
    order exactly the factor's order, not a proper divisor; kept
    certificates are checked generator by generator.
    """
    orders = tuple(cyclic_orders)
    pres = free_product_of_cyclics(orders)
    tables, complete = _collect(pres, max_index, node_budget, allow_partial)
    kept = [
        t
        for t in tables
        if all(perm_order(t.column_perm(i)) == s for i, s in enumerate(orders))
    ]
    return _bundle(pres, max_index, kept, complete)
