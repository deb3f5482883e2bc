"""Cocycle validation, fibers, and the identity-fiber subgroupoid."""

import pytest

from groupoid_workbench.grading import (
    Cocycle,
    GradedGroupoid,
    cocycle_from_map,
    fiber_of,
    identity_fiber_subgroupoid,
    image_elements,
    trivial_cocycle,
    validate_cocycle,
)
from groupoid_workbench.groupoid import (
    action_groupoid,
    counting_haar,
    group_groupoid,
    validate_groupoid,
    validate_left_invariance,
)
from groupoid_workbench.groups import FreeAbelianGroup, cyclic_group

from conftest import pair_cocycle


class TestValidateCocycle:
    def test_pair_difference_grading_passes(self, p2):
        assert validate_cocycle(p2, pair_cocycle(p2)).ok

    def test_hand_computed_violation(self, p2):
        # c((1,2)) = c((2,1)) = 1 gives c((1,2)(2,1)) = 0 != 2
        z = FreeAbelianGroup(1)
        label = {"(1,1)": (0,), "(2,2)": (0,), "(1,2)": (1,), "(2,1)": (1,)}
        report = validate_cocycle(p2, cocycle_from_map(p2, z, label))
        assert not report.ok
        assert report.cause == "not-multiplicative"
        assert report.witness["pair"] == ("(1,2)", "(2,1)")
        assert report.witness["got"] == "0" and report.witness["expected"] == "2"

    def test_identity_cocycle_on_group(self, z2_groupoid):
        z2 = cyclic_group(2)
        c = cocycle_from_map(z2_groupoid, z2, {"g0": 0, "g1": 1})
        assert validate_cocycle(z2_groupoid, c).ok

    def test_missing_label_rejected(self, p2):
        z = FreeAbelianGroup(1)
        with pytest.raises(ValueError, match="missing"):
            cocycle_from_map(p2, z, {"(1,1)": (0,)})


class TestFibers:
    def test_preimages(self, p2):
        c = pair_cocycle(p2)
        assert fiber_of(p2, c, (0,)) == ("(1,1)", "(2,2)")
        assert fiber_of(p2, c, (-1,)) == ("(1,2)",)
        assert fiber_of(p2, c, (5,)) == ()

    def test_partition(self, p2):
        c = pair_cocycle(p2)
        seen = []
        for gamma in image_elements(p2, c):
            seen.extend(fiber_of(p2, c, gamma))
        assert sorted(seen) == sorted(p2.arrow_ids)
        assert len(seen) == len(set(seen))

    def test_product_and_inverse_support_calculus(self, p2):
        c = pair_cocycle(p2)
        grp = c.group
        for (x, y), z in p2.compose.items():
            assert c.of(z) == grp.mul(c.of(x), c.of(y))
        for x, xinv in p2.invert.items():
            assert c.of(xinv) == grp.inv(c.of(x))


class TestIdentityFiber:
    def test_pair_diagonal(self, p2):
        sub = identity_fiber_subgroupoid(p2, pair_cocycle(p2))
        assert sub.arrow_ids == ("(1,1)", "(2,2)")
        assert sub.units == p2.units
        assert validate_groupoid(sub).ok

    def test_trivial_cocycle_gives_everything(self, p2):
        c = trivial_cocycle(p2, FreeAbelianGroup(1))
        sub = identity_fiber_subgroupoid(p2, c)
        assert sub.arrow_ids == p2.arrow_ids

    def test_action_groupoid_identity_fiber_is_unit_space(self):
        z3 = cyclic_group(3)
        g = action_groupoid([0, 1, 2], z3, lambda x, h: (x + h) % 3)
        label = {a.id: int(a.id.rsplit(",", 1)[1].rstrip(")")) for a in g.arrows}
        c = cocycle_from_map(g, z3, label)
        assert validate_cocycle(g, c).ok
        sub = identity_fiber_subgroupoid(g, c)
        assert sub.n_arrows == g.n_units
        assert set(sub.arrow_ids) == {g.unit_arrow[u] for u in g.units}

    def test_restricted_haar_still_invariant(self, p2):
        sub = identity_fiber_subgroupoid(p2, pair_cocycle(p2))
        haar = counting_haar(p2).restricted()
        w = {aid: haar.weight(sub, aid) for aid in sub.arrow_ids}
        assert validate_left_invariance(sub, w)


class TestGradedGroupoid:
    def test_build_validates(self, p2, p2_counting):
        sys = GradedGroupoid.build(p2, p2_counting, pair_cocycle(p2))
        assert sys.identity_fiber.n_arrows == 2
        assert list(sys.fibers()) == ["-1", "0", "1"]

    def test_build_rejects_bad_cocycle(self, p2, p2_counting):
        z = FreeAbelianGroup(1)
        bad = Cocycle(z, {a.id: (1,) for a in p2.arrows})
        with pytest.raises(ValueError, match="Cocycle"):
            GradedGroupoid.build(p2, p2_counting, bad)

    def test_sign_cocycle_on_s3_identity_fiber_is_a3(self):
        from groupoid_workbench.groups import permutation_parity, permutations_of, symmetric_group

        s3 = symmetric_group(3)
        g = group_groupoid(s3)
        z2 = cyclic_group(2)
        perms = permutations_of(3)
        c = cocycle_from_map(g, z2, {f"g{i}": permutation_parity(p) for i, p in enumerate(perms)})
        assert validate_cocycle(g, c).ok
        sub = identity_fiber_subgroupoid(g, c)
        assert sub.n_arrows == 3  # A3 inside S3
        assert validate_groupoid(sub).ok
