"""Sweep-out construction: base case, restriction pasting, recursion.

A sweep-out is built either directly, adding one triangle at a time, or by
splitting the surface along a short separating cycle, coning off both
sides, sweeping the cones recursively, and splicing the restricted
families back together.  Restriction keeps only certificate coefficients
on domain triangles and re-derives the cycles as partial-sum boundaries,
which realizes the correction-term bookkeeping exactly: the restricted
family runs from the null cycle to the boundary of its domain, and every
intermediate cycle pays at most the boundary length on top of the source
family's mass.

Every family produced here passes SweepOut.verify, and the recursion
asserts the pasting bound maxMass <= max(children) + |delta| at every
node.
"""

import math
from dataclasses import dataclass

from . import kernels
from .chains import OneCycle, SweepOut, TwoChain
from .decompose import C0, cone_off, fewer_triangles_check, split_surface
from .errors import (
    NoCutFound,
    NotSingleTriangleMoves,
    ProvenanceMismatch,
    RecursionDepthExceeded,
    SignMismatch,
    ValidationError,
)
from .spectral import cheeger_bound
from .surface import UNIT_TRIANGLE_AREA


class PartialFamily:
    """Cycle family z_0..z_m from the null cycle to some target cycle.

    Same certificate structure as a SweepOut but the last step need not be
    null; the two halves of a pasted sweep-out are carried in this form.
    """

    def __init__(self, surface, steps, certificates, ring=None):
        if len(certificates) != len(steps) - 1:
            raise ValidationError(
                "%d certificates for %d steps" % (len(certificates), len(steps))
            )
        if not steps[0].is_zero():
            raise ValidationError("partial family must start at the null cycle")
        self.surface = surface
        self.ring = steps[0].ring
        self.steps = list(steps)
        self.certificates = list(certificates)

    def validate(self):
        """Recheck every certificate against its step pair."""
        for i, c in enumerate(self.certificates):
            if c.boundary() != self.steps[i + 1] - self.steps[i]:
                raise ValidationError("certificate %d does not match its step" % i)

    @property
    def end(self):
        return self.steps[-1]

    @property
    def max_mass(self):
        return max(z.mass for z in self.steps)

    def __repr__(self):
        return "PartialFamily(%d steps, maxMass=%d, end mass=%d)" % (
            len(self.steps),
            self.max_mass,
            self.end.mass,
        )


def base_sweep_out(surface, order="greedy", ring=None):
    """Sweep a surface by adding one triangle at a time.

    order "greedy" picks the next triangle minimizing the resulting
    frontier mass (ties by index); "given" keeps the triangle numbering;
    an explicit permutation of triangle indices is also accepted.  The
    certificates are single triangles with coefficient +1 (or 1 mod 2),
    so max mass is at most 3N.
    """
    n = len(surface.triangles)
    if order == "greedy":
        seq = kernels.greedy_order(surface)
    elif order == "given":
        seq = list(range(n))
    else:
        seq = [int(t) for t in order]
        if sorted(seq) != list(range(n)):
            raise ValidationError("order is not a permutation of the triangles")
    if ring is None:
        ring = surface.topology.ring

    steps = [OneCycle(surface, {}, ring)]
    certs = []
    for t in seq:
        c = TwoChain(surface, {t: 1}, ring)
        certs.append(c)
        steps.append(steps[-1] + c.boundary())
    sweep = SweepOut(surface, steps, certs, ring)
    report = sweep.verify()
    if not report.accepted:
        raise ValidationError("base sweep-out failed verification: %r" % (report,))
    if sweep.max_mass > 3 * n:
        raise ValidationError("base sweep-out exceeded the trivial 3N mass bound")
    return sweep


def _restrict_component(m0, comp, sweep, ring):
    """Restrict one component's sweep to its domain triangles on m0.

    Returns (certificates, steps-after-the-first) normalized so the family
    ends at the boundary of the domain taken with coefficient +1.
    """
    dom_of = {}
    for ct, prov in enumerate(comp.provenance):
        if prov[0] == "domain":
            dom_of[ct] = prov[1]

    target = TwoChain(m0, {t: 1 for t in dom_of.values()}, ring).boundary()

    certs = []
    steps = []
    z = OneCycle(m0, {}, ring)
    for c in sweep.certificates:
        coeffs = {}
        for ct, x in c.coeffs.items():
            if ct in dom_of:
                coeffs[dom_of[ct]] = x
        if not coeffs:
            continue  # the move only touched cone triangles
        restricted = TwoChain(m0, coeffs, ring)
        certs.append(restricted)
        z = z + restricted.boundary()
        steps.append(z)

    if z == target:
        return certs, steps, target
    if ring == "Z" and z == -target:
        return [-c for c in certs], [-s for s in steps], target
    raise SignMismatch(
        "restricted family ends at mass %d, boundary target has mass %d"
        % (z.mass, target.mass)
    )


def restrict_and_correct(sweeps, cone):
    """Restrict component sweep-outs of a coned domain back to the source.

    sweeps is one SweepOut per connected component of the cone (a bare
    SweepOut is accepted when there is a single component); they are
    expected to have passed verification already, only structural
    consistency is rechecked here.  Certificates keep only their
    domain-triangle coefficients via provenance; cycles are recomputed as
    partial-sum boundaries.  The result runs from the null cycle to the
    domain boundary, and its max mass is asserted to be at most
    max(source max masses) + |delta|.
    """
    if isinstance(sweeps, SweepOut):
        sweeps = [sweeps]
    if len(sweeps) != len(cone.components):
        raise ProvenanceMismatch(
            "%d sweeps for %d components" % (len(sweeps), len(cone.components))
        )
    for s, comp in zip(sweeps, cone.components):
        if s.surface is not comp.surface:
            raise ProvenanceMismatch("sweep is not on its component's surface")
    rings = set(s.ring for s in sweeps)
    if len(rings) != 1:
        raise ValidationError("component sweeps use mixed coefficient rings")
    ring = rings.pop()

    m0 = cone.origin
    all_steps = [OneCycle(m0, {}, ring)]
    all_certs = []
    offset = OneCycle(m0, {}, ring)
    for comp, sweep in zip(cone.components, sweeps):
        certs, steps, target = _restrict_component(m0, comp, sweep, ring)
        all_certs.extend(certs)
        for z in steps:
            all_steps.append(offset + z)
        offset = offset + target

    family = PartialFamily(m0, all_steps, all_certs, ring)
    budget = max(s.max_mass for s in sweeps) + cone.delta_length
    if family.max_mass > budget:
        raise ValidationError(
            "restricted family mass %d exceeds source + boundary budget %d"
            % (family.max_mass, budget)
        )
    return family


def paste_sweep_outs(p1, p2, dec):
    """Concatenate two partial families into a sweep-out of their surface.

    p1 and p2 each run from null to the boundary of their own domain, so
    over Z the second family is negated before reversal (the two domain
    boundaries are opposite cycles); over Z/2 reversal needs no negation.
    The pasted family is verified and its max mass never exceeds
    max(maxMass(p1), maxMass(p2)).
    """
    if p1.surface is not p2.surface:
        raise ValidationError("pasting families from different surfaces")
    if p1.ring != p2.ring:
        raise ValidationError("pasting families over different rings")
    ring = p1.ring
    want = -p2.end if ring == "Z" else p2.end
    if p1.end != want:
        raise SignMismatch(
            "family ends do not match: mass %d vs %d" % (p1.end.mass, p2.end.mass)
        )
    if set(p1.end.coeffs) != set(dec.delta.coeffs):
        raise SignMismatch("family ends are not carried by the decomposition boundary")

    tail = list(reversed(p2.steps))[1:]
    if ring == "Z":
        tail = [-z for z in tail]
    steps = list(p1.steps) + tail
    certs = list(p1.certificates) + list(reversed(p2.certificates))

    sweep = SweepOut(p1.surface, steps, certs, ring)
    report = sweep.verify()
    if not report.accepted:
        raise ValidationError("pasted sweep-out failed verification: %r" % (report,))
    if sweep.max_mass > max(p1.max_mass, p2.max_mass):
        raise ValidationError("pasted max mass exceeds both halves")
    return sweep


def proof_threshold(genus):
    """Base-case size under which the direct 3N sweep already meets the bound."""
    return math.sqrt(3.0) * C0 * C0 * (genus + 1.0)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of a full build: mass, the two bounds, and the recursion tree."""

    max_mass: int
    area: float
    genus: int
    bound_6c0: float
    bound_theorem: float
    mode: str
    ring: str
    tree: dict

    @property
    def bound_6c0_ok(self):
        return self.max_mass <= self.bound_6c0

    @property
    def bound_theorem_ok(self):
        return self.max_mass <= self.bound_theorem

    def to_json_dict(self):
        return {
            "maxMass": self.max_mass,
            "area": self.area,
            "genusParameter": self.genus,
            "bound6C0": self.bound_6c0,
            "boundTheorem": self.bound_theorem,
            "bound6C0Pass": bool(self.bound_6c0_ok),
            "boundTheoremPass": bool(self.bound_theorem_ok),
            "mode": self.mode,
            "ring": self.ring,
            "tree": self.tree,
        }


def build_sweep_out(
    surface,
    mode="practical",
    base_threshold=32,
    cheeger_constant=96,
    seed=42,
    eig_tol=1e-8,
    depth_cap=64,
    order="greedy",
    cut_source="spectral",
):
    """Construct a verified sweep-out and check the diastolic bound.

    practical mode recurses through balanced spectral cuts whenever the
    split actually shrinks both sides and its ratio stays within the
    Cheeger bound; proof-faithful mode uses ratio-minimizing cuts, the
    certified length-vs-area gate, and the analytic base threshold
    sqrt(3)*C0^2*(g+1) under which the direct 3N sweep already satisfies
    the target inequality.  Returns (sweep, BoundReport).
    """
    if mode not in ("practical", "proof-faithful"):
        raise ValidationError("unknown mode %r" % mode)
    if cheeger_constant == 32 and not surface.orientable:
        raise ValidationError("the orientable Cheeger constant 32 needs an orientable surface")
    ring = surface.topology.ring

    def descend(node_surface, depth):
        if depth > depth_cap:
            raise RecursionDepthExceeded("recursion deeper than %d" % depth_cap)
        n = len(node_surface.triangles)
        genus = node_surface.topology.genus
        if mode == "practical":
            threshold = base_threshold
        else:
            threshold = proof_threshold(genus)

        dec = None
        cones = None
        if n > threshold:
            try:
                dec = split_surface(
                    node_surface,
                    cut_source=cut_source,
                    mode=mode,
                    constant=cheeger_constant,
                    seed=seed,
                    tol=eig_tol,
                )
            except NoCutFound:
                dec = None
            if dec is not None:
                cone1 = cone_off(node_surface, dec, 1)
                cone2 = cone_off(node_surface, dec, 2)
                if not fewer_triangles_check(node_surface, cone1, cone2):
                    dec = None
                elif mode == "practical" and dec.ratio > cheeger_bound(
                    node_surface, cheeger_constant
                ):
                    dec = None
                else:
                    cones = (cone1, cone2)

        if dec is None:
            sweep = base_sweep_out(node_surface, order=order, ring=ring)
            return sweep, {
                "type": "base",
                "triangles": n,
                "maxMass": sweep.max_mass,
            }

        child_nodes = []
        child_masses = []
        partials = []
        for cone in cones:
            comp_sweeps = []
            for comp in cone.components:
                child_sweep, child_node = descend(comp.surface, depth + 1)
                child_node["side"] = cone.side
                comp_sweeps.append(child_sweep)
                child_nodes.append(child_node)
                child_masses.append(child_sweep.max_mass)
            partials.append(restrict_and_correct(comp_sweeps, cone))

        sweep = paste_sweep_outs(partials[0], partials[1], dec)
        if sweep.max_mass > max(child_masses) + dec.delta.mass:
            raise ValidationError(
                "pasting bound violated: %d > max(children) %d + |delta| %d"
                % (sweep.max_mass, max(child_masses), dec.delta.mass)
            )
        return sweep, {
            "type": "split",
            "triangles": n,
            "delta": dec.delta.mass,
            "maxMass": sweep.max_mass,
            "childMaxMass": child_masses,
            "children": child_nodes,
        }

    sweep, tree = descend(surface, 0)
    genus = surface.topology.genus
    area = surface.area
    factor = math.sqrt(genus + 1.0) * math.sqrt(area)
    report = BoundReport(
        max_mass=sweep.max_mass,
        area=area,
        genus=genus,
        bound_6c0=6.0 * C0 * factor,
        bound_theorem=1.0e8 * factor,
        mode=mode,
        ring=ring,
        tree=tree,
    )
    return sweep, report


@dataclass(frozen=True)
class BisectionReport:
    """Equal-area bisection extracted from a sweep-out."""

    cycle: OneCycle
    step_index: int
    domain1: tuple
    domain2: tuple
    length: int
    area1: float
    area2: float
    bound_6c0: float

    @property
    def area_gap(self):
        return abs(self.area1 - self.area2)

    @property
    def bound_ok(self):
        return self.length <= self.bound_6c0

    def to_json_dict(self):
        return {
            "cycle": self.cycle.to_pairs(),
            "stepIndex": self.step_index,
            "domain1": list(self.domain1),
            "domain2": list(self.domain2),
            "length": self.length,
            "area1": self.area1,
            "area2": self.area2,
            "areaGap": self.area_gap,
            "bound6C0": self.bound_6c0,
            "bound6C0Pass": bool(self.bound_ok),
        }


def derive_bisection(sweep):
    """Extract an equal-area bisecting cycle from a single-move sweep-out.

    Z-coefficient sweeps are reduced mod 2 first.  The returned cycle is
    the step at which the swept triangle count first reaches ceil(N/2);
    its two sides differ by at most one triangle in area and its length is
    at most the sweep's max mass.
    """
    if sweep.ring == "Z":
        sweep = sweep.to_mod2()
    if not sweep.verify().accepted:
        raise ValidationError("bisection needs a verified sweep-out")
    for c in sweep.certificates:
        if len(c.coeffs) != 1:
            raise NotSingleTriangleMoves(
                "certificate touches %d triangles" % len(c.coeffs)
            )

    surface = sweep.surface
    n = len(surface.triangles)
    target = (n + 1) // 2
    swept = set()
    index = None
    for i, c in enumerate(sweep.certificates):
        (t,) = c.coeffs
        swept.symmetric_difference_update((t,))
        if len(swept) == target:
            index = i + 1
            break
    if index is None:
        raise ValidationError("sweep never covers half the surface")

    domain1 = tuple(sorted(swept))
    domain2 = tuple(t for t in range(n) if t not in swept)
    cycle = sweep.steps[index]
    if TwoChain(surface, {t: 1 for t in domain1}, "Z2").boundary() != cycle:
        raise ValidationError("bisection cycle is not the domain boundary")
    if cycle.mass > sweep.max_mass:
        raise ValidationError("bisection cycle longer than the sweep max mass")

    genus = surface.topology.genus
    bound = 6.0 * C0 * math.sqrt(genus + 1.0) * math.sqrt(surface.area)
    return cycle, BisectionReport(
        cycle=cycle,
        step_index=index,
        domain1=domain1,
        domain2=domain2,
        length=cycle.mass,
        area1=UNIT_TRIANGLE_AREA * len(domain1),
        area2=UNIT_TRIANGLE_AREA * len(domain2),
        bound_6c0=bound,
    )
