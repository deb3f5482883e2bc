"""Property verification suites and the machine-readable report.

Each suite drives one cluster of verified properties over a parsed document
with seeded random functions (coefficients drawn uniformly from [-1, 1],
real vector first, then imaginary).  A check produces one record aggregating
all its trials: the worst observed defect, the tolerance it was compared
against, and the seed, so a failure reproduces from the report alone.

Records are sorted by (suite, instance, check) before emission and all
numbers come from deterministic dense eigendecompositions, so the JSON
report is byte-identical for a fixed (document, seed, version).

Tolerances follow two regimes: 1e-12 relative for exact algebraic
identities, 1e-9 relative for anything passing through an eigensolve.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .algebra import (
    convolve,
    delta,
    graded_components,
    i_norm,
    include_i,
    involute,
    random_function,
    restrict_q,
    unit_function,
    zero,
)
from .bundle import (
    bundle_rep_check,
    check_grading_axioms,
    check_topological_grading,
    graded_subspaces,
    tautological_rep,
)
from .document import WorkbenchDocument
from .grading import validate_cocycle
from .groupoid import validate_groupoid, validate_left_invariance
from .hilbert_module import (
    L_operator_norm,
    check_eq_ruy,
    eq_ruy_defect,
    expectation_P,
    induced_space,
    kernel_check,
    module_action,
    module_inner_product,
    module_norm,
)
from .representation import (
    cstar_norm,
    decompose_rep_U,
    operator_norm,
    positivity_check,
    regular_rep_matrix,
    spectrum,
    translate_rep_V,
)

ALG_TOL = 1e-12
EIG_TOL = 1e-9
UNITARY_TRIALS = 20
SMALL_TRIALS = 20

DEFAULT_COUNTS = {
    "haar": 20,
    "algebra": 50,
    "norms": 100,
    "inclusion": 100,
    "module": 100,
    "expectation": 20,
    "bundle": 200,
}
SUITES = tuple(DEFAULT_COUNTS)


@dataclass(frozen=True)
class CheckRecord:
    """One verified property on one instance, with its worst-case witness."""

    suite: str
    check: str
    prop: str
    instance: str
    status: str
    tolerance: float
    seed: int
    witness: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "check": self.check,
            "property": self.prop,
            "instance": self.instance,
            "status": self.status,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "witness": self.witness,
        }


class _Recorder:
    def __init__(self, suite: str, instance: str, seed: int) -> None:
        self.suite = suite
        self.instance = instance
        self.seed = seed
        self.records: list[CheckRecord] = []

    def add(self, check: str, prop: str, ok: bool, tolerance: float, **witness: Any) -> None:
        self.records.append(
            CheckRecord(
                suite=self.suite,
                check=check,
                prop=prop,
                instance=self.instance,
                status="pass" if ok else "fail",
                tolerance=tolerance,
                seed=self.seed,
                witness={k: _jsonable(v) for k, v in witness.items()},
            )
        )


def _jsonable(v: Any) -> Any:
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _rel(defect: float, scale: float) -> float:
    return float(defect) / (1.0 + float(scale))


def _max_abs(x: np.ndarray) -> float:
    return float(np.abs(x).max()) if x.size else 0.0


# -- suites -----------------------------------------------------------------


def _suite_haar(doc: WorkbenchDocument, rec: _Recorder, rng: np.random.Generator, count: int) -> None:
    sys = doc.system
    g = sys.groupoid
    report = validate_groupoid(g)
    rec.add(
        "groupoid-axioms",
        "compose/invert/unit tables satisfy the groupoid axioms",
        report.ok,
        0.0,
        cause=report.cause,
    )
    creport = validate_cocycle(g, sys.cocycle)
    rec.add(
        "cocycle-identities",
        "arrow labels form a homomorphism into the grading group",
        creport.ok,
        0.0,
        cause=creport.cause,
    )
    w = {aid: sys.haar.weight(g, aid) for aid in g.arrow_ids}
    rec.add(
        "haar-left-invariance",
        "source-determined weights satisfy the left-invariance identity",
        validate_left_invariance(g, w),
        ALG_TOL,
    )
    unit_arrows = {g.unit_arrow[u] for u in g.units}
    non_units = [aid for aid in g.arrow_ids if aid not in unit_arrows]
    detected = 0
    trials = 0
    for _ in range(count):
        if not non_units:
            break
        victim = non_units[int(rng.integers(len(non_units)))]
        perturbed = dict(w)
        perturbed[victim] *= float(rng.uniform(1.3, 2.0))
        trials += 1
        if not validate_left_invariance(g, perturbed):
            detected += 1
    rec.add(
        "haar-perturbation-detected",
        "breaking the source-dependence of a weight breaks invariance",
        detected == trials,
        ALG_TOL,
        trials=trials,
        detected=detected,
    )
    e = unit_function(g, sys.haar)
    worst = 0.0
    for _ in range(count):
        f = random_function(g, rng)
        left = convolve(e, f, sys.haar)
        right = convolve(f, e, sys.haar)
        worst = max(
            worst,
            _rel(_max_abs(left.coeffs - f.coeffs), f.max_abs()),
            _rel(_max_abs(right.coeffs - f.coeffs), f.max_abs()),
        )
    rec.add(
        "convolution-unit",
        "the weighted sum of unit-arrow deltas is a two-sided unit",
        worst <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=worst,
        trials=count,
    )
    sub = sys.identity_fiber
    sub_ok = validate_groupoid(sub).ok
    wsub = {aid: sys.haar.weight(sub, aid) for aid in sub.arrow_ids}
    rec.add(
        "identity-fiber-subgroupoid",
        "the identity fiber is a subgroupoid carrying the restricted weights",
        sub_ok and validate_left_invariance(sub, wsub),
        0.0,
        arrows=sub.n_arrows,
    )


def _suite_algebra(doc: WorkbenchDocument, rec: _Recorder, rng: np.random.Generator, count: int) -> None:
    sys = doc.system
    g = sys.groupoid
    haar = sys.haar
    sub = sys.identity_fiber
    assoc = bilin = star = inorm_star = comp_sum = include_hom = 0.0
    for _ in range(count):
        a = random_function(g, rng)
        b = random_function(g, rng)
        c = random_function(g, rng)
        lhs = convolve(convolve(a, b, haar), c, haar)
        rhs = convolve(a, convolve(b, c, haar), haar)
        assoc = max(assoc, _rel(_max_abs(lhs.coeffs - rhs.coeffs), _max_abs(lhs.coeffs)))
        lin = convolve(a + 2j * b, c, haar)
        split = convolve(a, c, haar) + 2j * convolve(b, c, haar)
        bilin = max(bilin, _rel(_max_abs(lin.coeffs - split.coeffs), _max_abs(lin.coeffs)))
        anti = involute(convolve(a, b, haar))
        flip = convolve(involute(b), involute(a), haar)
        star = max(
            star,
            _rel(_max_abs(anti.coeffs - flip.coeffs), _max_abs(anti.coeffs)),
            _max_abs(involute(involute(a)).coeffs - a.coeffs),
            _max_abs(
                involute(1j * a + b).coeffs - (-1j * involute(a) + involute(b)).coeffs
            ),
        )
        inorm_star = max(inorm_star, _rel(abs(i_norm(involute(a), haar) - i_norm(a, haar)), i_norm(a, haar)))
        parts = graded_components(a, sys.cocycle)
        total = np.zeros_like(a.coeffs)
        for part in parts.values():
            total = total + part.coeffs
        comp_sum = max(comp_sum, _max_abs(total - a.coeffs))
        f1 = random_function(sub, rng)
        f2 = random_function(sub, rng)
        lift = convolve(include_i(f1, g), include_i(f2, g), haar)
        lifted_prod = include_i(convolve(f1, f2, haar), g)
        include_hom = max(
            include_hom,
            _rel(_max_abs(lift.coeffs - lifted_prod.coeffs), _max_abs(lift.coeffs)),
            _max_abs(restrict_q(include_i(f1, g), sub).coeffs - f1.coeffs),
            _max_abs(include_i(involute(f1), g).coeffs - involute(include_i(f1, g)).coeffs),
        )
    rec.add("convolution-associativity", "convolution is associative", assoc <= ALG_TOL, ALG_TOL, max_rel_defect=assoc, trials=count)
    rec.add("convolution-bilinear", "convolution is bilinear", bilin <= ALG_TOL, ALG_TOL, max_rel_defect=bilin, trials=count)
    rec.add(
        "involution-star-algebra",
        "the involution is involutive and anti-multiplicative",
        star <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=star,
        trials=count,
    )
    rec.add(
        "i-norm-star-invariant",
        "the I-norm is invariant under the involution",
        inorm_star <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=inorm_star,
        trials=count,
    )
    rec.add(
        "graded-components-sum",
        "the fiber components sum back to the function exactly",
        comp_sum == 0.0,
        0.0,
        max_abs_defect=comp_sum,
        trials=count,
    )
    rec.add(
        "inclusion-star-homomorphism",
        "extension by zero is a *-homomorphism split by restriction",
        include_hom <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=include_hom,
        trials=count,
    )


def _suite_norms(doc: WorkbenchDocument, rec: _Recorder, rng: np.random.Generator, count: int) -> None:
    sys = doc.system
    g = sys.groupoid
    haar = sys.haar
    cident = dominated = submult = star = 0.0
    positive = True
    for _ in range(count):
        a = random_function(g, rng)
        b = random_function(g, rng)
        n = cstar_norm(a, haar)
        nn = cstar_norm(convolve(involute(a), a, haar), haar)
        cident = max(cident, abs(nn - n * n) / (1.0 + n * n))
        ia = i_norm(a, haar)
        dominated = max(dominated, _rel(max(0.0, n - ia), ia))
        iab = i_norm(convolve(a, b, haar), haar)
        submult = max(submult, _rel(max(0.0, iab - ia * i_norm(b, haar)), ia * i_norm(b, haar)))
        star = max(star, _rel(abs(cstar_norm(involute(a), haar) - n), n))
        if not positivity_check(convolve(involute(a), a, haar), haar):
            positive = False
    rec.add("cstar-identity", "the C*-identity ||a^* a|| = ||a||^2", cident <= EIG_TOL, EIG_TOL, max_rel_defect=cident, trials=count)
    rec.add(
        "i-norm-dominates-cstar",
        "the C*-norm is bounded by the I-norm",
        dominated <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=dominated,
        trials=count,
    )
    rec.add(
        "i-norm-submultiplicative",
        "the I-norm is submultiplicative",
        submult <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=submult,
        trials=count,
    )
    rec.add("cstar-star-invariant", "the C*-norm is invariant under the involution", star <= EIG_TOL, EIG_TOL, max_rel_defect=star, trials=count)
    rec.add(
        "positivity-of-star-squares",
        "a^* a is positive in the regular representation",
        positive,
        EIG_TOL,
        trials=count,
    )
    e = unit_function(g, haar)
    unit_norm = abs(cstar_norm(e, haar) - 1.0)
    unit_spec = _max_abs(spectrum(e, haar) - 1.0)
    rec.add(
        "unit-norm-and-spectrum",
        "the convolution unit has norm one and spectrum {1}",
        max(unit_norm, unit_spec) <= EIG_TOL,
        EIG_TOL,
        norm_defect=unit_norm,
        spectrum_defect=unit_spec,
    )
    delta_norm = delta_rule = 0.0
    for x in g.arrows:
        expected = float(np.sqrt(haar.rho[x.src] * haar.rho[x.dst]))
        delta_norm = max(delta_norm, _rel(abs(cstar_norm(delta(g, x.id), haar) - expected), expected))
    for x in g.arrow_ids:
        dx = delta(g, x)
        for y in g.arrow_ids:
            prod = convolve(dx, delta(g, y), haar)
            z = g.compose_ids(x, y)
            expected_vec = np.zeros(g.n_arrows, dtype=np.complex128)
            if z is not None:
                expected_vec[g.index(z)] = haar.weight(g, x)
            delta_rule = max(delta_rule, _max_abs(prod.coeffs - expected_vec))
    rec.add(
        "delta-norm-closed-form",
        "||delta_x|| is the geometric mean of the endpoint weights",
        delta_norm <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=delta_norm,
    )
    rec.add(
        "delta-convolution-rule",
        "delta_x * delta_y = w(x) delta_{xy} (zero when non-composable)",
        delta_rule <= ALG_TOL,
        ALG_TOL,
        max_abs_defect=delta_rule,
    )


def _suite_inclusion(doc: WorkbenchDocument, rec: _Recorder, rng: np.random.Generator, count: int) -> None:
    sys = doc.system
    g = sys.groupoid
    haar = sys.haar
    sub = sys.identity_fiber
    iso = 0.0
    for _ in range(count):
        f = random_function(sub, rng)
        inner = cstar_norm(f, haar)
        outer = cstar_norm(include_i(f, g), haar)
        iso = max(iso, _rel(abs(outer - inner), inner))
    rec.add(
        "inclusion-isometric",
        "extension by zero preserves the C*-norm of identity-fiber functions",
        iso <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=iso,
        trials=count,
    )
    chain = u_defect = 0.0
    for _ in range(UNITARY_TRIALS):
        f = random_function(sub, rng)
        ambient = cstar_norm(include_i(f, g), haar)
        block_max = 0.0
        for u in g.units:
            dec = decompose_rep_U(sys, f, u)
            u_defect = max(u_defect, dec.max_abs_error)
            for block in dec.blocks.values():
                block_max = max(block_max, operator_norm(block.matrix))
        fiber_max = max(operator_norm(regular_rep_matrix(f, haar, v).matrix) for v in sub.units)
        chain = max(chain, _rel(abs(block_max - ambient), ambient), _rel(abs(fiber_max - ambient), ambient))
    rec.add(
        "fiber-block-decomposition",
        "the representation of an included function is the direct sum of its fiber blocks",
        u_defect <= ALG_TOL,
        ALG_TOL,
        max_abs_defect=u_defect,
        trials=UNITARY_TRIALS,
    )
    rec.add(
        "included-norm-chain",
        "ambient norm = max fiber-block norm = identity-fiber norm",
        chain <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=chain,
        trials=UNITARY_TRIALS,
    )
    v_defect = 0.0
    checked = 0
    for _ in range(UNITARY_TRIALS):
        f = random_function(sub, rng)
        for u in g.units:
            present: dict[str, Any] = {}
            for aid in g.arrows_with_src(u):
                el = sys.cocycle.of(aid)
                present.setdefault(sys.group.element_key(el), el)
            for el in present.values():
                wit = translate_rep_V(sys, f, u, el)
                v_defect = max(v_defect, wit.max_abs_error)
                checked += 1
    rec.add(
        "fiber-translation-unitaries",
        "right translation by a fiber arrow conjugates blocks to the identity-fiber representation",
        v_defect <= ALG_TOL,
        ALG_TOL,
        max_abs_defect=v_defect,
        conjugations=checked,
    )


def _suite_module(doc: WorkbenchDocument, rec: _Recorder, rng: np.random.Generator, count: int) -> None:
    sys = doc.system
    g = sys.groupoid
    haar = sys.haar
    sub = sys.identity_fiber
    space = induced_space(sys)
    rec.add(
        "induced-gram-positive",
        "the induced-space Gram matrix is positive semidefinite",
        space.gram_min_eig >= -EIG_TOL * (1.0 + float(space.gram_eigenvalues[-1])),
        EIG_TOL,
        min_eigenvalue=space.gram_min_eig,
        rank=space.rank,
        dimension=space.dim_ambient,
    )
    slack = 1.0 + EIG_TOL
    sandwich_ok = True
    contraction = cauchy = 0.0
    positive = definite = True
    gap = 0.0
    worst_chain = None
    for _ in range(count):
        a = random_function(g, rng)
        q = cstar_norm(restrict_q(a, sub), haar)
        m = module_norm(sys, a)
        ell = L_operator_norm(sys, a, space)
        ia = i_norm(a, haar)
        n = cstar_norm(a, haar)
        if not (q <= m * slack + 1e-15 and m <= ell * slack + 1e-15 and ell <= ia * slack + 1e-15):
            sandwich_ok = False
            worst_chain = {"restriction": q, "module": m, "operator": ell, "i_norm": ia}
        contraction = max(contraction, _rel(max(0.0, q - n), n))
        gram = module_inner_product(sys, a, a)
        if not positivity_check(gram, haar):
            positive = False
        if m <= 1e-9 and n > 1e-6:
            definite = False
        b = random_function(g, rng)
        pairing = cstar_norm(module_inner_product(sys, a, b), haar)
        cauchy = max(cauchy, _rel(max(0.0, pairing - m * module_norm(sys, b)), pairing))
        gap = max(gap, _rel(abs(ell - n), n))
    rec.add(
        "norm-sandwich",
        "restriction norm <= module norm <= operator norm <= I-norm",
        sandwich_ok,
        EIG_TOL,
        trials=count,
        **({"worst": worst_chain} if worst_chain else {}),
    )
    rec.add(
        "restriction-contractive",
        "restriction to the identity fiber does not increase the C*-norm",
        contraction <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=contraction,
        trials=count,
    )
    rec.add(
        "inner-product-positive",
        "<a, a> is positive in the identity-fiber representation, and zero only at zero",
        positive and definite,
        EIG_TOL,
        trials=count,
    )
    rec.add(
        "cauchy-schwarz",
        "||<a, b>|| <= ||a|| ||b|| for the module norm",
        cauchy <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=cauchy,
        trials=count,
    )
    rec.add(
        "l-norm-gap-observed",
        "observed gap between the module operator norm and the C*-norm (recorded, not asserted)",
        True,
        EIG_TOL,
        max_rel_gap=gap,
        trials=count,
    )
    symmetry = linearity = action = adjoint = isometry = 0.0
    action_ok = True
    for _ in range(SMALL_TRIALS):
        a = random_function(g, rng)
        b = random_function(g, rng)
        ge = random_function(sub, rng)
        he = random_function(sub, rng)
        lhs = involute(module_inner_product(sys, a, b))
        rhs = module_inner_product(sys, b, a)
        symmetry = max(symmetry, _rel(_max_abs(lhs.coeffs - rhs.coeffs), _max_abs(rhs.coeffs)))
        lin_lhs = module_inner_product(sys, a, module_action(sys, b, ge))
        lin_rhs = convolve(module_inner_product(sys, a, b), ge, haar)
        linearity = max(linearity, _rel(_max_abs(lin_lhs.coeffs - lin_rhs.coeffs), _max_abs(lin_rhs.coeffs)))
        try:
            act_lhs = module_action(sys, a, convolve(ge, he, haar))
            act_rhs = module_action(sys, module_action(sys, a, ge), he)
            action = max(action, _rel(_max_abs(act_lhs.coeffs - act_rhs.coeffs), _max_abs(act_rhs.coeffs)))
            e_sub = unit_function(sub, haar)
            action = max(action, _rel(_max_abs(module_action(sys, a, e_sub).coeffs - a.coeffs), a.max_abs()))
        except ValueError:
            action_ok = False
        a2 = random_function(g, rng)
        d = random_function(g, rng)
        adj_lhs = module_inner_product(sys, convolve(a, b, haar), convolve(a2, d, haar))
        adj_rhs = module_inner_product(sys, b, convolve(convolve(involute(a), a2, haar), d, haar))
        adjoint = max(adjoint, _rel(_max_abs(adj_lhs.coeffs - adj_rhs.coeffs), _max_abs(adj_rhs.coeffs)))
        f = random_function(sub, rng)
        lifted = include_i(f, g)
        target = cstar_norm(f, haar)
        isometry = max(
            isometry,
            _rel(abs(module_norm(sys, lifted) - target), target),
            _rel(abs(L_operator_norm(sys, lifted, space) - target), target),
        )
    rec.add(
        "inner-product-symmetry",
        "<a, b>^* = <b, a>",
        symmetry <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=symmetry,
        trials=SMALL_TRIALS,
    )
    rec.add(
        "inner-product-right-linear",
        "<a, b.g> = <a, b> * g over the identity-fiber algebra",
        linearity <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=linearity,
        trials=SMALL_TRIALS,
    )
    rec.add(
        "module-action-associative",
        "the action is associative and unital, and its two evaluation paths agree",
        action_ok and action <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=action,
        trials=SMALL_TRIALS,
    )
    rec.add(
        "module-adjoint-identity",
        "<L_a b, L_c d> = <b, L_{a^* c} d>",
        adjoint <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=adjoint,
        trials=SMALL_TRIALS,
    )
    rec.add(
        "module-isometry-on-included",
        "module and operator norms of included functions equal the identity-fiber norm",
        isometry <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=isometry,
        trials=SMALL_TRIALS,
    )


def _suite_expectation(doc: WorkbenchDocument, rec: _Recorder, rng: np.random.Generator, count: int) -> None:
    sys = doc.system
    g = sys.groupoid
    haar = sys.haar
    sub = sys.identity_fiber
    identity_key = sys.group.element_key(sys.group.identity)
    basis_defect = 0.0
    for aid in g.arrow_ids:
        image = expectation_P(sys, delta(g, aid))
        expected = delta(g, aid).coeffs if sys.cocycle.key_of(aid) == identity_key else np.zeros(g.n_arrows)
        basis_defect = max(basis_defect, _max_abs(image.coeffs - expected))
    rec.add(
        "expectation-projection",
        "the expectation is the identity on the identity component and zero on the others",
        basis_defect == 0.0,
        0.0,
        max_abs_defect=basis_defect,
    )
    idem = bimodule = 0.0
    contraction = 0.0
    positive = True
    for _ in range(count):
        a = random_function(g, rng)
        once = expectation_P(sys, a)
        idem = max(idem, _max_abs(expectation_P(sys, once).coeffs - once.coeffs))
        contraction = max(contraction, _rel(max(0.0, cstar_norm(once, haar) - cstar_norm(a, haar)), cstar_norm(a, haar)))
        square = convolve(involute(a), a, haar)
        if not positivity_check(expectation_P(sys, square), haar):
            positive = False
        b = include_i(random_function(sub, rng), g)
        c = include_i(random_function(sub, rng), g)
        lhs = expectation_P(sys, convolve(convolve(involute(b), a, haar), c, haar))
        rhs = convolve(convolve(involute(b), expectation_P(sys, a), haar), c, haar)
        bimodule = max(bimodule, _rel(_max_abs(lhs.coeffs - rhs.coeffs), _max_abs(rhs.coeffs)))
    rec.add("expectation-idempotent", "applying the expectation twice changes nothing", idem == 0.0, 0.0, max_abs_defect=idem, trials=count)
    rec.add(
        "expectation-contractive",
        "the expectation does not increase the C*-norm",
        contraction <= EIG_TOL,
        EIG_TOL,
        max_rel_defect=contraction,
        trials=count,
    )
    rec.add(
        "expectation-positive",
        "the expectation of a^* a is positive",
        positive,
        EIG_TOL,
        trials=count,
    )
    rec.add(
        "expectation-bimodule",
        "P(b^* a c) = b^* P(a) c for identity-fiber b, c",
        bimodule <= ALG_TOL,
        ALG_TOL,
        max_rel_defect=bimodule,
        trials=count,
    )
    ruy_defect = 0.0
    ruy_ok = True
    for _ in range(SMALL_TRIALS):
        a = random_function(g, rng)
        for aid in g.arrow_ids:
            b = delta(g, aid)
            ruy_defect = max(ruy_defect, eq_ruy_defect(sys, a, b))
            if not check_eq_ruy(sys, a, b):
                ruy_ok = False
    rec.add(
        "fiber-sandwich-identity",
        "i(<b, a*b>) = b^* P(a) b for fiber-supported b",
        ruy_ok,
        ALG_TOL,
        max_abs_defect=ruy_defect,
        trials=SMALL_TRIALS * g.n_arrows,
    )
    functions = [zero(g)] + [random_function(g, rng) for _ in range(count)]
    records = kernel_check(sys, functions, tol=EIG_TOL)
    kernel_ok = all(r.consistent for r in records)
    kernel_ok = kernel_ok and records[0].l_zero and records[0].p_zero and records[0].a_zero
    kernel_ok = kernel_ok and all(not (r.l_zero or r.p_zero or r.a_zero) for r in records[1:])
    rec.add(
        "kernel-characterization",
        "L_a vanishes iff P(a^* a) vanishes iff a vanishes",
        kernel_ok,
        EIG_TOL,
        functions=len(functions),
    )


def _suite_bundle(doc: WorkbenchDocument, rec: _Recorder, rng: np.random.Generator, count: int) -> None:
    sys = doc.system
    family = graded_subspaces(sys)
    axioms = check_grading_axioms(family, seed=int(rng.integers(2**31)), count=5)
    rec.add(
        "grading-axioms",
        "fiber subspaces multiply and adjoint into the right fibers, span, and are independent",
        axioms.ok,
        0.0,
        cause=axioms.cause,
        fibers=len(family.keys),
    )
    topo = check_topological_grading(family, seed=int(rng.integers(2**31)), count=count)
    rec.add(
        "topological-grading",
        "the expectation is the norm-one projection singling out the identity component",
        topo.ok,
        EIG_TOL,
        cause=topo.cause,
        **dict(topo.witness),
    )
    taut = bundle_rep_check(family, tautological_rep(sys), seed=int(rng.integers(2**31)), count=3)
    rec.add(
        "bundle-representation",
        "the fiberwise regular representation is a *-representation bounded by the I-norm",
        taut.ok,
        ALG_TOL,
        cause=taut.cause,
        **dict(taut.witness),
    )


_SUITE_FN: dict[str, Callable[[WorkbenchDocument, _Recorder, np.random.Generator, int], None]] = {
    "haar": _suite_haar,
    "algebra": _suite_algebra,
    "norms": _suite_norms,
    "inclusion": _suite_inclusion,
    "module": _suite_module,
    "expectation": _suite_expectation,
    "bundle": _suite_bundle,
}


def _instance_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def run_document(
    doc: WorkbenchDocument, suite: str = "all", seed: int = 0, count: int | None = None
) -> list[CheckRecord]:
    """Run one suite (or all) on one document; records carry worst-case witnesses."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"Unknown suite {suite!r}; choose from {('all',) + SUITES}.")
    names = SUITES if suite == "all" else (suite,)
    records: list[CheckRecord] = []
    for index, name in enumerate(SUITES):
        if name not in names:
            continue
        rng = np.random.default_rng([seed, _instance_key(doc.name), index])
        rec = _Recorder(suite=name, instance=doc.name, seed=seed)
        trials = count if count is not None else DEFAULT_COUNTS[name]
        _SUITE_FN[name](doc, rec, rng, trials)
        records.extend(rec.records)
    return records


def run_verification(
    docs: Sequence[WorkbenchDocument], suite: str = "all", seed: int = 0, count: int | None = None
) -> dict[str, Any]:
    """Run suites over many documents and assemble the machine-readable report."""
    records: list[CheckRecord] = []
    for doc in docs:
        records.extend(run_document(doc, suite=suite, seed=seed, count=count))
    records.sort(key=lambda r: (r.suite, r.instance, r.check))
    passed = sum(1 for r in records if r.status == "pass")
    return {
        "format_version": "1",
        "tool": {"name": "groupoid-workbench", "version": __version__},
        "suite": suite,
        "seed": seed,
        "count": count,
        "instances": sorted(doc.name for doc in docs),
        "notes": [
            "full and reduced C*-norms coincide at this scale (the direct sum of "
            "regular representations is faithful), so a single C*-norm is computed",
            "module completions are trivial here; the only degeneracy handled is the "
            "null-space quotient of the induced Gram matrix",
            "one family of grading subspaces is reported; its closures in the full "
            "and reduced completions agree at this scale",
        ],
        "summary": {"total": len(records), "passed": passed, "failed": len(records) - passed},
        "checks": [r.to_json() for r in records],
    }


def report_to_json(report: dict[str, Any]) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def iter_failures(report: dict[str, Any]) -> Iterable[dict[str, Any]]:
    return (c for c in report["checks"] if c["status"] != "pass")
