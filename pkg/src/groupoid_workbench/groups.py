"""Discrete group backends used as grading targets.

Two backends cover the desk-scale needs with exact arithmetic:

* :class:`FiniteGroup` — a Cayley table over elements ``0..n-1``, with the
  identity index and inverse table derived (and checked) at construction.
* :class:`FreeAbelianGroup` — rank-``k`` free abelian group; elements are
  integer ``k``-tuples under componentwise addition.

Elements are plain Python values (``int`` or ``tuple[int, ...]``) so they can
serve directly as dictionary keys and serialize canonically.
"""

from __future__ import annotations

import itertools
from typing import Any, Iterable, Sequence


class DiscreteGroup:
    """Shared interface for the two group backends."""

    name: str

    def mul(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def inv(self, a: Any) -> Any:
        raise NotImplementedError

    @property
    def identity(self) -> Any:
        raise NotImplementedError

    def contains(self, el: Any) -> bool:
        raise NotImplementedError

    def canonical(self, el: Any) -> Any:
        """Normalize an element (e.g. list -> tuple); raise ValueError if foreign."""
        raise NotImplementedError

    def element_key(self, el: Any) -> str:
        """Canonical string key for reports and JSON maps."""
        raise NotImplementedError

    def sort_key(self, el: Any) -> tuple:
        """Deterministic ordering key for elements of this group."""
        raise NotImplementedError

    def element_to_json(self, el: Any) -> Any:
        raise NotImplementedError

    def element_from_json(self, value: Any) -> Any:
        raise NotImplementedError


class FiniteGroup(DiscreteGroup):
    """Finite group given by a Cayley table over element indices 0..n-1.

    The constructor checks the table axioms (closure, associativity, a
    two-sided identity, two-sided inverses) and raises ``ValueError`` with a
    witness on the first violation.
    """

    def __init__(self, cayley: Sequence[Sequence[int]], *, name: str = "finite") -> None:
        n = len(cayley)
        if n == 0:
            raise ValueError("Cayley table must be nonempty.")
        table: list[list[int]] = []
        for i, row in enumerate(cayley):
            if len(row) != n:
                raise ValueError(f"Cayley row {i} has length {len(row)}, expected {n}.")
            row_int = [int(x) for x in row]
            for x in row_int:
                if x < 0 or x >= n:
                    raise ValueError(f"Cayley entry {x} at row {i} out of range [0,{n - 1}].")
            table.append(row_int)
        identity = None
        for e in range(n):
            if all(table[e][a] == a and table[a][e] == a for a in range(n)):
                identity = e
                break
        if identity is None:
            raise ValueError("Cayley table has no two-sided identity.")
        inverse: list[int] = []
        for a in range(n):
            inv = next((b for b in range(n) if table[a][b] == identity and table[b][a] == identity), None)
            if inv is None:
                raise ValueError(f"Element {a} has no two-sided inverse.")
            inverse.append(inv)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise ValueError(f"Cayley table not associative at triple ({a},{b},{c}).")
        self.name = name
        self.order = n
        self.table = table
        self.identity_index = identity
        self.inverse_table = inverse

    def mul(self, a: int, b: int) -> int:
        return self.table[int(a)][int(b)]

    def inv(self, a: int) -> int:
        return self.inverse_table[int(a)]

    @property
    def identity(self) -> int:
        return self.identity_index

    def elements(self) -> range:
        return range(self.order)

    def contains(self, el: Any) -> bool:
        return isinstance(el, int) and not isinstance(el, bool) and 0 <= el < self.order

    def canonical(self, el: Any) -> int:
        if isinstance(el, bool) or not isinstance(el, int):
            raise ValueError(f"Finite group element must be an integer index, got {el!r}.")
        if not 0 <= el < self.order:
            raise ValueError(f"Element index {el} out of range [0,{self.order - 1}].")
        return el

    def element_key(self, el: int) -> str:
        return str(int(el))

    def sort_key(self, el: int) -> tuple:
        return (int(el),)

    def element_to_json(self, el: int) -> int:
        return int(el)

    def element_from_json(self, value: Any) -> int:
        return self.canonical(value)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


class FreeAbelianGroup(DiscreteGroup):
    """Free abelian group Z^k; elements are integer k-tuples, identity is zero."""

    def __init__(self, rank: int, *, name: str | None = None) -> None:
        rank = int(rank)
        if rank < 0:
            raise ValueError(f"Rank must be nonnegative, got {rank}.")
        self.rank = rank
        self.name = name or f"Z^{rank}"

    def mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) + int(y) for x, y in zip(self.canonical(a), self.canonical(b)))

    def inv(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(-int(x) for x in self.canonical(a))

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def contains(self, el: Any) -> bool:
        return (
            isinstance(el, tuple)
            and len(el) == self.rank
            and all(isinstance(x, int) and not isinstance(x, bool) for x in el)
        )

    def canonical(self, el: Any) -> tuple[int, ...]:
        if isinstance(el, (list, tuple)):
            values = tuple(el)
        elif self.rank == 1 and isinstance(el, int) and not isinstance(el, bool):
            values = (el,)
        else:
            raise ValueError(f"Free abelian element must be a length-{self.rank} integer vector, got {el!r}.")
        if len(values) != self.rank:
            raise ValueError(f"Element {el!r} has length {len(values)}, expected rank {self.rank}.")
        out = []
        for x in values:
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValueError(f"Element {el!r} has non-integer coordinate {x!r}.")
            out.append(int(x))
        return tuple(out)

    def element_key(self, el: Sequence[int]) -> str:
        return ",".join(str(x) for x in self.canonical(el))

    def sort_key(self, el: Sequence[int]) -> tuple:
        return self.canonical(el)

    def element_to_json(self, el: Sequence[int]) -> list[int]:
        return list(self.canonical(el))

    def element_from_json(self, value: Any) -> tuple[int, ...]:
        return self.canonical(value)

    def __repr__(self) -> str:
        return f"FreeAbelianGroup(rank={self.rank})"


def cyclic_group(n: int) -> FiniteGroup:
    """Cyclic group Z/n with additive Cayley table."""
    n = int(n)
    if n <= 0:
        raise ValueError(f"Cyclic group order must be positive, got {n}.")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, name=f"Z/{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="trivial")


def permutations_of(n: int) -> list[tuple[int, ...]]:
    """All permutations of range(n) in lexicographic order; fixes element indexing of S_n."""
    return list(itertools.permutations(range(n)))


def permutation_parity(perm: Iterable[int]) -> int:
    """0 for even permutations, 1 for odd."""
    perm = list(perm)
    seen = [False] * len(perm)
    parity = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) % 2
    return parity


def symmetric_group(n: int) -> FiniteGroup:
    """Symmetric group S_n; element i is permutations_of(n)[i], product is composition (p.q)(x) = p(q(x))."""
    if n <= 0:
        raise ValueError(f"Symmetric group degree must be positive, got {n}.")
    perms = permutations_of(n)
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[x]] for x in range(n))] for q in perms]
        for p in perms
    ]
    return FiniteGroup(table, name=f"S{n}")
