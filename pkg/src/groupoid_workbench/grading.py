"""Gradings: cocycles into a discrete group, fibers, and the identity-fiber subgroupoid.

A cocycle labels every arrow with a group element so that composition maps to
the group product.  Its fibers partition the arrow set; the fiber over the
group identity is a subgroupoid carrying the restricted Haar system (same
per-unit weights).  Surjectivity of the cocycle is not required: everything
quantifies over the image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from .groupoid import FiniteGroupoid, HaarSystem
from .groups import DiscreteGroup
from .validation import CheckReport


@dataclass(frozen=True, eq=False)
class Cocycle:
    """Arrow labelling c with values in a discrete group."""

    group: DiscreteGroup
    label: Mapping[str, Any]

    def of(self, aid: str) -> Any:
        return self.label[aid]

    def key_of(self, aid: str) -> str:
        return self.group.element_key(self.label[aid])


def cocycle_from_map(g: FiniteGroupoid, group: DiscreteGroup, label: Mapping[str, Any]) -> Cocycle:
    """Canonicalize a total arrow -> element map into a Cocycle (totality enforced)."""
    table: dict[str, Any] = {}
    for a in g.arrows:
        if a.id not in label:
            raise ValueError(f"Cocycle missing a label for arrow {a.id!r}.")
        table[a.id] = group.canonical(label[a.id])
    extra = set(label) - set(table)
    if extra:
        raise ValueError(f"Cocycle labels unknown arrows {sorted(extra)[:3]}.")
    return Cocycle(group=group, label=table)


def trivial_cocycle(g: FiniteGroupoid, group: DiscreteGroup) -> Cocycle:
    return Cocycle(group=group, label={a.id: group.identity for a in g.arrows})


def validate_cocycle(g: FiniteGroupoid, c: Cocycle) -> CheckReport:
    """Check the homomorphism identities; pass, or first violation with witness pair."""
    grp = c.group
    for a in g.arrows:
        if a.id not in c.label:
            return CheckReport.failed("label-missing", arrow=a.id)
        if not grp.contains(c.label[a.id]):
            return CheckReport.failed("label-not-in-group", arrow=a.id, label=repr(c.label[a.id]))
    for (x, y), z in g.compose.items():
        expected = grp.mul(c.of(x), c.of(y))
        if c.of(z) != expected:
            return CheckReport.failed(
                "not-multiplicative",
                pair=(x, y),
                got=grp.element_key(c.of(z)),
                expected=grp.element_key(expected),
            )
    for u in g.units:
        aid = g.unit_arrow[u]
        if c.of(aid) != grp.identity:
            return CheckReport.failed("unit-not-identity", unit=u, got=grp.element_key(c.of(aid)))
    for a in g.arrows:
        if c.of(g.invert[a.id]) != grp.inv(c.of(a.id)):
            return CheckReport.failed("inverse-not-inverted", arrow=a.id)
    return CheckReport.passed()


def fiber_of(g: FiniteGroupoid, c: Cocycle, gamma: Any) -> tuple[str, ...]:
    """Arrow ids in the preimage of gamma, in declared order (may be empty)."""
    gamma = c.group.canonical(gamma)
    return tuple(a.id for a in g.arrows if c.of(a.id) == gamma)


def image_elements(g: FiniteGroupoid, c: Cocycle) -> list[Any]:
    """Distinct label values, deterministically ordered by the group's sort key."""
    seen = {c.group.element_key(c.of(a.id)): c.of(a.id) for a in g.arrows}
    return sorted(seen.values(), key=c.group.sort_key)


def identity_fiber_subgroupoid(g: FiniteGroupoid, c: Cocycle) -> FiniteGroupoid:
    """The subgroupoid over the group identity, with the same unit space.

    Arrow ids are shared with the parent, so inclusion and restriction of
    functions are id-based coefficient transfers.
    """
    return g.restricted_to(fiber_of(g, c, c.group.identity))


class GradedGroupoid:
    """A groupoid together with a Haar system and a validated grading.

    Bundles the three layers every higher operation needs and caches the
    identity-fiber subgroupoid and fiber partition.  Use :meth:`build` to get
    construction-time validation of all invariants.
    """

    def __init__(self, groupoid: FiniteGroupoid, haar: HaarSystem, cocycle: Cocycle) -> None:
        self.groupoid = groupoid
        self.haar = haar
        self.cocycle = cocycle
        self._identity_fiber: FiniteGroupoid | None = None
        self._fibers: dict[str, tuple[str, ...]] | None = None
        self._induced_space = None
        self._parent_to_sub = None

    @classmethod
    def build(cls, groupoid: FiniteGroupoid, haar: HaarSystem, cocycle: Cocycle) -> "GradedGroupoid":
        from .groupoid import validate_groupoid

        report = validate_groupoid(groupoid)
        if not report:
            raise ValueError(f"Groupoid axioms fail: {report.cause} {dict(report.witness)}")
        for u in groupoid.units:
            if u not in haar.rho or not float(haar.rho[u]) > 0.0:
                raise ValueError(f"Haar system invalid at unit {u!r}.")
        creport = validate_cocycle(groupoid, cocycle)
        if not creport:
            raise ValueError(f"Cocycle identities fail: {creport.cause} {dict(creport.witness)}")
        return cls(groupoid, haar, cocycle)

    @property
    def group(self) -> DiscreteGroup:
        return self.cocycle.group

    @property
    def identity_fiber(self) -> FiniteGroupoid:
        if self._identity_fiber is None:
            self._identity_fiber = identity_fiber_subgroupoid(self.groupoid, self.cocycle)
        return self._identity_fiber

    def fibers(self) -> dict[str, tuple[str, ...]]:
        """Element key -> arrow ids, ordered by the group sort key."""
        if self._fibers is None:
            members: dict[str, list[str]] = {}
            for a in self.groupoid.arrows:
                members.setdefault(self.cocycle.key_of(a.id), []).append(a.id)
            order = image_elements(self.groupoid, self.cocycle)
            self._fibers = {self.group.element_key(el): tuple(members[self.group.element_key(el)]) for el in order}
        return self._fibers

    def grading_elements(self) -> list[Any]:
        return image_elements(self.groupoid, self.cocycle)

    def __repr__(self) -> str:
        return f"GradedGroupoid({self.groupoid!r}, group={self.group.name})"
