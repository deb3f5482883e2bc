"""Finite groupoids with explicit composition tables, plus Haar systems.

A groupoid here is a finite set of arrows over a finite unit space.  Arrow
records carry ``src`` (the source unit ``s(x)``) and ``dst`` (the range unit
``r(x)``); ``compose(x, y)`` is defined exactly when ``s(x) = r(y)`` and then
``r(xy) = r(x)`` and ``s(xy) = s(y)``.  Constructors fill explicit composition
and inversion tables; nothing is computed lazily from generators, so
validation is a direct table check.

A Haar system is stored as one positive weight per unit: left invariance on a
finite groupoid forces the arrow weight ``w(y)`` to depend only on ``s(y)``
(put ``y = unit arrow at s(x)`` in the invariance identity), so the per-unit
table ``rho`` determines the measures ``w(y) = rho(s(y))`` and is valid by
construction.

All values are immutable after construction; operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .groups import FiniteGroup
from .validation import CheckReport


@dataclass(frozen=True)
class Arrow:
    """One arrow: ``src`` is the source unit s(x), ``dst`` the range unit r(x)."""

    id: str
    src: str
    dst: str


class FiniteGroupoid:
    """Arrows over a finite unit space with explicit compose/invert tables.

    The constructor checks structural well-formedness (unique ids, resolvable
    references, nonempty unit space) and raises ``ValueError`` on violations.
    The groupoid *axioms* are checked by :func:`validate_groupoid`, which
    reports rather than raises, so deliberately broken tables can be built
    and fed to the validator.

    Unit and arrow order is the declared order; matrix bases and reports
    follow it.
    """

    def __init__(
        self,
        units: Sequence[str],
        arrows: Sequence[Arrow],
        compose: Mapping[tuple[str, str], str],
        invert: Mapping[str, str],
        unit_arrow: Mapping[str, str],
    ) -> None:
        units = tuple(str(u) for u in units)
        if not units:
            raise ValueError("Unit space must be nonempty (norms are undefined on empty algebras).")
        if len(set(units)) != len(units):
            raise ValueError("Unit identifiers must be unique.")
        self.units = units
        self.arrows = tuple(arrows)
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("Arrow identifiers must be unique.")
        unit_set = set(units)
        for a in self.arrows:
            if a.src not in unit_set or a.dst not in unit_set:
                raise ValueError(f"Arrow {a.id!r} references unknown unit {a.src!r} or {a.dst!r}.")
        self._index = {a.id: i for i, a in enumerate(self.arrows)}
        for (x, y), z in compose.items():
            for aid in (x, y, z):
                if aid not in self._index:
                    raise ValueError(f"Compose entry ({x!r},{y!r})->{z!r} references unknown arrow {aid!r}.")
        for x, y in invert.items():
            if x not in self._index or y not in self._index:
                raise ValueError(f"Invert entry {x!r}->{y!r} references an unknown arrow.")
        missing_inv = [a.id for a in self.arrows if a.id not in invert]
        if missing_inv:
            raise ValueError(f"Invert table missing arrows {missing_inv[:3]}.")
        for u, aid in unit_arrow.items():
            if u not in unit_set:
                raise ValueError(f"Unit-arrow entry for unknown unit {u!r}.")
            if aid not in self._index:
                raise ValueError(f"Unit arrow {aid!r} for unit {u!r} is not a declared arrow.")
        missing_units = [u for u in units if u not in unit_arrow]
        if missing_units:
            raise ValueError(f"Unit-arrow table missing units {missing_units[:3]}.")
        self.compose = dict(compose)
        self.invert = dict(invert)
        self.unit_arrow = dict(unit_arrow)
        self._unit_index = {u: i for i, u in enumerate(units)}
        by_src: dict[str, list[str]] = {u: [] for u in units}
        by_dst: dict[str, list[str]] = {u: [] for u in units}
        for a in self.arrows:
            by_src[a.src].append(a.id)
            by_dst[a.dst].append(a.id)
        self._by_src = {u: tuple(v) for u, v in by_src.items()}
        self._by_dst = {u: tuple(v) for u, v in by_dst.items()}
        self._compose_matrix: np.ndarray | None = None
        self._pair_table: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
        self._src_index = np.array([self._unit_index[a.src] for a in self.arrows], dtype=np.intp)
        self._dst_index = np.array([self._unit_index[a.dst] for a in self.arrows], dtype=np.intp)
        self._invert_index: np.ndarray | None = None
        self._rep_scaffold: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    # -- basic accessors ---------------------------------------------------

    @property
    def n_units(self) -> int:
        return len(self.units)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def arrow(self, aid: str) -> Arrow:
        return self.arrows[self._index[aid]]

    def has_unit(self, u: str) -> bool:
        return u in self._unit_index

    def index(self, aid: str) -> int:
        return self._index[aid]

    def has_arrow(self, aid: str) -> bool:
        return aid in self._index

    def source(self, aid: str) -> str:
        return self.arrows[self._index[aid]].src

    def target(self, aid: str) -> str:
        return self.arrows[self._index[aid]].dst

    def composable(self, a: str, b: str) -> bool:
        return self.source(a) == self.target(b)

    def compose_ids(self, a: str, b: str) -> str | None:
        return self.compose.get((a, b))

    def invert_id(self, aid: str) -> str:
        return self.invert[aid]

    def unit_arrow_id(self, u: str) -> str:
        return self.unit_arrow[u]

    def arrows_with_src(self, u: str) -> tuple[str, ...]:
        """Arrow ids x with s(x) = u, in declared order (the set Gu)."""
        return self._by_src[u]

    def arrows_with_dst(self, u: str) -> tuple[str, ...]:
        """Arrow ids x with r(x) = u, in declared order (the set G^u)."""
        return self._by_dst[u]

    # -- integer tables for vectorized operations --------------------------

    @property
    def src_index(self) -> np.ndarray:
        return self._src_index

    @property
    def dst_index(self) -> np.ndarray:
        return self._dst_index

    @property
    def invert_index(self) -> np.ndarray:
        if self._invert_index is None:
            self._invert_index = np.array(
                [self._index[self.invert[a.id]] for a in self.arrows], dtype=np.intp
            )
        return self._invert_index

    def compose_matrix(self) -> np.ndarray:
        """Dense (n, n) table of arrow indices for x.y, with -1 where undefined."""
        if self._compose_matrix is None:
            n = self.n_arrows
            mat = np.full((n, n), -1, dtype=np.intp)
            for (x, y), z in self.compose.items():
                mat[self._index[x], self._index[y]] = self._index[z]
            self._compose_matrix = mat
        return self._compose_matrix

    def composable_pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Index arrays (x, y, xy) over all defined compose entries."""
        if self._pair_table is None:
            mat = self.compose_matrix()
            xs, ys = np.nonzero(mat >= 0)
            self._pair_table = (xs, ys, mat[xs, ys])
        return self._pair_table

    def source_fiber_rep_index(self, u: str) -> tuple[np.ndarray, np.ndarray]:
        """For the arrows x with s(x) = u: their global indices and the table
        of products x' x^{-1} (as global arrow indices), cached per unit."""
        cached = self._rep_scaffold.get(u)
        if cached is None:
            gidx = np.array([self._index[aid] for aid in self._by_src[u]], dtype=np.intp)
            table = self.compose_matrix()[np.ix_(gidx, self.invert_index[gidx])]
            if (table < 0).any():
                raise ValueError(f"Arrows with source {u!r} do not compose; groupoid invalid.")
            cached = (gidx, table)
            self._rep_scaffold[u] = cached
        return cached

    # -- derived groupoids --------------------------------------------------

    def restricted_to(self, arrow_ids: Sequence[str]) -> "FiniteGroupoid":
        """Subgroupoid on a subset of arrows (same units, declared order kept).

        The subset must contain every unit arrow, be closed under inversion,
        and be closed under composition; otherwise ValueError.
        """
        keep = set(arrow_ids)
        unknown = keep - set(self._index)
        if unknown:
            raise ValueError(f"Unknown arrows in restriction: {sorted(unknown)[:3]}.")
        for u in self.units:
            if self.unit_arrow[u] not in keep:
                raise ValueError(f"Restriction drops the unit arrow at {u!r}.")
        for aid in keep:
            if self.invert[aid] not in keep:
                raise ValueError(f"Restriction not closed under inversion at {aid!r}.")
        sub_arrows = [a for a in self.arrows if a.id in keep]
        sub_compose = {}
        for (x, y), z in self.compose.items():
            if x in keep and y in keep:
                if z not in keep:
                    raise ValueError(f"Restriction not closed under composition at ({x!r},{y!r}).")
                sub_compose[(x, y)] = z
        sub_invert = {aid: self.invert[aid] for aid in keep}
        return FiniteGroupoid(self.units, sub_arrows, sub_compose, sub_invert, dict(self.unit_arrow))

    def __repr__(self) -> str:
        return f"FiniteGroupoid(units={self.n_units}, arrows={self.n_arrows})"


def validate_groupoid(g: FiniteGroupoid) -> CheckReport:
    """Check the groupoid axioms; pass, or first violation with a witness.

    Check order: compose-domain exactness, endpoints of composites, unit-arrow
    endpoints, identity laws, inverse laws, involution, associativity.
    """
    mat = g.compose_matrix()
    src = g.src_index
    dst = g.dst_index
    n = g.n_arrows
    defined = mat >= 0
    composable = src[:, None] == dst[None, :]
    if (defined != composable).any():
        i, j = np.argwhere(defined != composable)[0]
        a, b = g.arrows[i].id, g.arrows[j].id
        if composable[i, j]:
            return CheckReport.failed("compose-undefined-on-composable-pair", pair=(a, b))
        return CheckReport.failed("compose-defined-on-noncomposable-pair", pair=(a, b))
    xs, ys, zs = g.composable_pairs()
    bad = dst[zs] != dst[xs]
    if bad.any():
        k = int(np.nonzero(bad)[0][0])
        return CheckReport.failed(
            "compose-range-mismatch",
            pair=(g.arrows[xs[k]].id, g.arrows[ys[k]].id),
            product=g.arrows[zs[k]].id,
        )
    bad = src[zs] != src[ys]
    if bad.any():
        k = int(np.nonzero(bad)[0][0])
        return CheckReport.failed(
            "compose-source-mismatch",
            pair=(g.arrows[xs[k]].id, g.arrows[ys[k]].id),
            product=g.arrows[zs[k]].id,
        )
    for u in g.units:
        e = g.arrow(g.unit_arrow[u])
        if e.src != u or e.dst != u:
            return CheckReport.failed("unit-arrow-endpoints", unit=u, arrow=e.id)
    for a in g.arrows:
        left = g.compose_ids(g.unit_arrow[a.dst], a.id)
        if left != a.id:
            return CheckReport.failed("unit-not-left-identity", arrow=a.id, got=left)
        right = g.compose_ids(a.id, g.unit_arrow[a.src])
        if right != a.id:
            return CheckReport.failed("unit-not-right-identity", arrow=a.id, got=right)
    for a in g.arrows:
        b = g.arrow(g.invert[a.id])
        if b.src != a.dst or b.dst != a.src:
            return CheckReport.failed("inverse-endpoints", arrow=a.id, inverse=b.id)
        if g.compose_ids(b.id, a.id) != g.unit_arrow[a.src]:
            return CheckReport.failed("inverse-left", arrow=a.id, inverse=b.id)
        if g.compose_ids(a.id, b.id) != g.unit_arrow[a.dst]:
            return CheckReport.failed("inverse-right", arrow=a.id, inverse=b.id)
        if g.invert[b.id] != a.id:
            return CheckReport.failed("inverse-not-involutive", arrow=a.id)
    for i in range(n):
        row = mat[i]
        ij_ok = row >= 0
        if not ij_ok.any():
            continue
        j_idx = np.nonzero(ij_ok)[0]
        lhs = mat[row[j_idx], :]
        cjk = mat[j_idx, :]
        mask = cjk >= 0
        rhs = np.where(mask, row[np.clip(cjk, 0, None)], -1)
        mismatch = mask & (lhs != rhs)
        if mismatch.any():
            a, b = np.argwhere(mismatch)[0]
            return CheckReport.failed(
                "associativity",
                triple=(g.arrows[i].id, g.arrows[j_idx[a]].id, g.arrows[b].id),
            )
    return CheckReport.passed()


@dataclass(frozen=True, eq=False)
class HaarSystem:
    """Per-unit positive weights; arrow y gets measure w(y) = rho(s(y))."""

    rho: Mapping[str, float]

    def unit_weight(self, u: str) -> float:
        return self.rho[u]

    def weight(self, g: FiniteGroupoid, aid: str) -> float:
        return self.rho[g.source(aid)]

    def weights(self, g: FiniteGroupoid) -> np.ndarray:
        """w(y) = rho(s(y)) in declared arrow order."""
        per_unit = np.array([self.rho[u] for u in g.units], dtype=float)
        return per_unit[g.src_index]

    def restricted(self) -> "HaarSystem":
        """The restricted Haar system on a subgroupoid: same per-unit weights."""
        return self


def haar_from_weights(g: FiniteGroupoid, rho: Mapping[str, float]) -> HaarSystem:
    """Build the Haar system with w(y) = rho(s(y)); rho must be positive on every unit."""
    table: dict[str, float] = {}
    for u in g.units:
        if u not in rho:
            raise ValueError(f"Haar weights missing unit {u!r}.")
        value = float(rho[u])
        if not value > 0.0 or not np.isfinite(value):
            raise ValueError(f"Nonpositive Haar weight at unit {u!r}: {rho[u]!r}.")
        table[u] = value
    extra = set(rho) - set(g.units)
    if extra:
        raise ValueError(f"Haar weights name unknown units {sorted(extra)[:3]}.")
    return HaarSystem(rho=table)


def counting_haar(g: FiniteGroupoid) -> HaarSystem:
    return HaarSystem(rho={u: 1.0 for u in g.units})


def validate_left_invariance(g: FiniteGroupoid, w: Mapping[str, float], rel_tol: float = 1e-12) -> bool:
    """Check the invariance identity for an arbitrary arrow-weight table.

    True iff for every arrow x and every indicator function f,
    sum over {y : r(y) = s(x)} of f(xy) w(y) equals
    sum over {y : r(y) = r(x)} of f(y) w(y).
    """
    for a in g.arrows:
        if a.id not in w:
            raise ValueError(f"Weight table missing arrow {a.id!r}.")
        if not float(w[a.id]) > 0.0:
            raise ValueError(f"Weight table must be positive; got {w[a.id]!r} at {a.id!r}.")
    vec = np.array([float(w[a.id]) for a in g.arrows])
    n = g.n_arrows
    tol = rel_tol * (1.0 + float(vec.max()))
    xs, ys, zs = g.composable_pairs()
    lhs = np.zeros((n, n))
    np.add.at(lhs, (xs, zs), vec[ys])
    dst = g.dst_index
    rhs = np.where(dst[None, :] == dst[:, None], vec[None, :], 0.0)
    return bool(np.abs(lhs - rhs).max() <= tol)


# -- constructors ----------------------------------------------------------


def pair_groupoid(n: int) -> FiniteGroupoid:
    """Pair groupoid on units 1..n: arrow (i,j) runs j -> i, (i,j)(j,k) = (i,k)."""
    n = int(n)
    if n <= 0:
        raise ValueError(f"Pair groupoid needs at least one point, got {n}.")
    units = [str(i) for i in range(1, n + 1)]
    aid = lambda i, j: f"({i},{j})"
    arrows = [Arrow(aid(i, j), src=str(j), dst=str(i)) for i in range(1, n + 1) for j in range(1, n + 1)]
    compose = {
        (aid(i, j), aid(j, k)): aid(i, k)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        for k in range(1, n + 1)
    }
    invert = {aid(i, j): aid(j, i) for i in range(1, n + 1) for j in range(1, n + 1)}
    unit_arrow = {str(i): aid(i, i) for i in range(1, n + 1)}
    return FiniteGroupoid(units, arrows, compose, invert, unit_arrow)


def group_groupoid(group: FiniteGroup | Sequence[Sequence[int]], *, unit: str = "u") -> FiniteGroupoid:
    """A finite group as a one-unit groupoid; arrow ids are g0..g{n-1}."""
    if not isinstance(group, FiniteGroup):
        group = FiniteGroup(group)
    aid = lambda i: f"g{i}"
    arrows = [Arrow(aid(i), src=unit, dst=unit) for i in group.elements()]
    compose = {(aid(i), aid(j)): aid(group.mul(i, j)) for i in group.elements() for j in group.elements()}
    invert = {aid(i): aid(group.inv(i)) for i in group.elements()}
    return FiniteGroupoid([unit], arrows, compose, invert, {unit: aid(group.identity)})


def action_groupoid(
    points: Sequence[Any],
    group: FiniteGroup,
    action: Callable[[Any, int], Any],
) -> FiniteGroupoid:
    """Transformation groupoid of a right action: arrow (x,h) runs x.h -> x.

    ``action(x, h)`` must be a genuine right action: ``action(x, e) = x`` and
    ``action(action(x, h), k) = action(x, hk)``; violations are rejected with
    a witness.
    """
    points = list(points)
    if len(set(points)) != len(points):
        raise ValueError("Action points must be distinct.")
    point_set = set(points)
    for x in points:
        if action(x, group.identity) != x:
            raise ValueError(f"Not an action: point {x!r} moves under the identity.")
        for h in group.elements():
            if action(x, h) not in point_set:
                raise ValueError(f"Not an action: {x!r}.{h} leaves the point set.")
            for k in group.elements():
                if action(action(x, h), k) != action(x, group.mul(h, k)):
                    raise ValueError(f"Not an action: compatibility fails at ({x!r},{h},{k}).")
    units = [str(x) for x in points]
    if len(set(units)) != len(units):
        raise ValueError("Action points must stringify to distinct unit ids.")
    aid = lambda x, h: f"({x},{h})"
    arrows = [Arrow(aid(x, h), src=str(action(x, h)), dst=str(x)) for x in points for h in group.elements()]
    compose = {}
    for x in points:
        for h in group.elements():
            y = action(x, h)
            for k in group.elements():
                compose[(aid(x, h), aid(y, k))] = aid(x, group.mul(h, k))
    invert = {aid(x, h): aid(action(x, h), group.inv(h)) for x in points for h in group.elements()}
    unit_arrow = {str(x): aid(x, group.identity) for x in points}
    return FiniteGroupoid(units, arrows, compose, invert, unit_arrow)


def group_bundle(groups: Sequence[FiniteGroup | Sequence[Sequence[int]]]) -> FiniteGroupoid:
    """Disjoint bundle of groups: unit u{j} carries the j-th group as isotropy."""
    if not groups:
        raise ValueError("Group bundle needs at least one fibre.")
    fibres = [h if isinstance(h, FiniteGroup) else FiniteGroup(h) for h in groups]
    units = [f"u{j}" for j in range(1, len(fibres) + 1)]
    aid = lambda j, i: f"u{j}:g{i}"
    arrows = []
    compose = {}
    invert = {}
    unit_arrow = {}
    for j, h in enumerate(fibres, start=1):
        u = f"u{j}"
        arrows.extend(Arrow(aid(j, i), src=u, dst=u) for i in h.elements())
        for i in h.elements():
            for k in h.elements():
                compose[(aid(j, i), aid(j, k))] = aid(j, h.mul(i, k))
            invert[aid(j, i)] = aid(j, h.inv(i))
        unit_arrow[u] = aid(j, h.identity)
    return FiniteGroupoid(units, arrows, compose, invert, unit_arrow)


def disjoint_union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """Disjoint union; ids are prefixed L:/R: to keep them unique."""
    relabel = [("L:", g1), ("R:", g2)]
    units = [p + u for p, g in relabel for u in g.units]
    arrows = [Arrow(p + a.id, src=p + a.src, dst=p + a.dst) for p, g in relabel for a in g.arrows]
    compose = {}
    invert = {}
    unit_arrow = {}
    for p, g in relabel:
        for (x, y), z in g.compose.items():
            compose[(p + x, p + y)] = p + z
        for x, y in g.invert.items():
            invert[p + x] = p + y
        for u, a in g.unit_arrow.items():
            unit_arrow[p + u] = p + a
    return FiniteGroupoid(units, arrows, compose, invert, unit_arrow)


def product(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """Direct product groupoid; arrows are pairs composed componentwise."""
    uid = lambda u, v: f"{u}|{v}"
    aid = lambda a, b: f"{a}|{b}"
    units = [uid(u, v) for u in g1.units for v in g2.units]
    arrows = [
        Arrow(aid(a.id, b.id), src=uid(a.src, b.src), dst=uid(a.dst, b.dst))
        for a in g1.arrows
        for b in g2.arrows
    ]
    compose = {}
    for (x1, y1), z1 in g1.compose.items():
        for (x2, y2), z2 in g2.compose.items():
            compose[(aid(x1, x2), aid(y1, y2))] = aid(z1, z2)
    invert = {aid(a.id, b.id): aid(g1.invert[a.id], g2.invert[b.id]) for a in g1.arrows for b in g2.arrows}
    unit_arrow = {uid(u, v): aid(g1.unit_arrow[u], g2.unit_arrow[v]) for u in g1.units for v in g2.units}
    return FiniteGroupoid(units, arrows, compose, invert, unit_arrow)
