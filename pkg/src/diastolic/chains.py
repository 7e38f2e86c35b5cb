"""Chains, cycles and certified sweep-outs.

Coefficients live in Z (orientable surfaces, relative to the stored coherent
orientation) or Z/2 (any surface).  A sweep-out is a sequence of one-cycles
z_0..z_m together with two-chain certificates c_0..c_{m-1} satisfying
boundary(c_i) = z_{i+1} - z_i; it is accepted when additionally z_0 = z_m = 0
and sum(c_i) is plus or minus the fundamental class.  The reported mass of a
one-cycle is the integer sum of absolute edge coefficients, every edge having
unit length.
"""

from dataclasses import dataclass

from .errors import LengthMismatch, ValidationError

RINGS = ("Z", "Z2")


def _canon(coeffs, ring):
    out = {}
    for k, c in coeffs.items():
        c = int(c) % 2 if ring == "Z2" else int(c)
        if c:
            out[int(k)] = c
    return out


def _check_ring(surface, ring):
    if ring is None:
        ring = surface.topology.ring
    if ring not in RINGS:
        raise ValidationError("unknown coefficient ring %r" % ring)
    if ring == "Z" and not surface.orientable:
        raise ValidationError("Z coefficients need an orientable surface")
    return ring


class OneCycle:
    """Sparse one-chain, edge id -> coefficient."""

    __slots__ = ("surface", "ring", "coeffs", "_mass")

    def __init__(self, surface, coeffs=None, ring=None):
        self.surface = surface
        self.ring = _check_ring(surface, ring)
        self.coeffs = _canon(coeffs or {}, self.ring)
        self._mass = None

    @property
    def mass(self):
        if self._mass is None:
            self._mass = sum(abs(c) for c in self.coeffs.values())
        return self._mass

    def is_zero(self):
        return not self.coeffs

    def is_cycle(self):
        """Zero boundary at every vertex.

        Over Z the boundary of edge (u, v) with u < v is v - u; over Z/2 it
        is the parity of incident odd edges.
        """
        at = {}
        for e, c in self.coeffs.items():
            u, v = self.surface.edges[e]
            at[u] = at.get(u, 0) - c
            at[v] = at.get(v, 0) + c
        if self.ring == "Z2":
            return all(x % 2 == 0 for x in at.values())
        return all(x == 0 for x in at.values())

    @classmethod
    def _make(cls, surface, ring, coeffs):
        # internal fast path: coeffs already canonical (int values, no zeros)
        z = cls.__new__(cls)
        z.surface = surface
        z.ring = ring
        z.coeffs = coeffs
        z._mass = None
        return z

    def _combine(self, other, sign):
        if other.surface is not self.surface or other.ring != self.ring:
            raise ValidationError("cycle arithmetic across surfaces or rings")
        out = dict(self.coeffs)
        if self.ring == "Z2":
            for e in other.coeffs:
                if e in out:
                    del out[e]
                else:
                    out[e] = 1
        else:
            for e, c in other.coeffs.items():
                v = out.get(e, 0) + sign * c
                if v:
                    out[e] = v
                elif e in out:
                    del out[e]
        return OneCycle._make(self.surface, self.ring, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        if self.ring == "Z2":
            return self
        return OneCycle._make(
            self.surface, self.ring, {e: -c for e, c in self.coeffs.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, OneCycle)
            and other.surface is self.surface
            and other.ring == self.ring
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.coeffs.items()))))

    def to_pairs(self):
        """Sorted [[u, v], coefficient] pairs for serialization."""
        out = []
        for e in sorted(self.coeffs):
            u, v = self.surface.edges[e]
            out.append([[u, v], self.coeffs[e]])
        return out

    def __repr__(self):
        return "OneCycle(mass=%d, ring=%s)" % (self.mass, self.ring)


class TwoChain:
    """Sparse two-chain, triangle id -> coefficient."""

    __slots__ = ("surface", "ring", "coeffs")

    def __init__(self, surface, coeffs=None, ring=None):
        self.surface = surface
        self.ring = _check_ring(surface, ring)
        self.coeffs = _canon(coeffs or {}, self.ring)

    def boundary(self):
        acc = {}
        if self.ring == "Z2":
            for t, c in self.coeffs.items():
                for e in self.surface.triangle_edges[t]:
                    acc[e] = acc.get(e, 0) + c
        else:
            for t, c in self.coeffs.items():
                a, b, d = self.surface.orientations[t]
                for u, v in ((a, b), (b, d), (d, a)):
                    e = self.surface.edge_id(u, v)
                    acc[e] = acc.get(e, 0) + (c if u < v else -c)
        return OneCycle(self.surface, acc, self.ring)

    def __add__(self, other):
        if other.surface is not self.surface or other.ring != self.ring:
            raise ValidationError("chain arithmetic across surfaces or rings")
        out = dict(self.coeffs)
        for t, c in other.coeffs.items():
            out[t] = out.get(t, 0) + c
        return TwoChain(self.surface, out, self.ring)

    def __neg__(self):
        if self.ring == "Z2":
            return self
        return TwoChain(self.surface, {t: -c for t, c in self.coeffs.items()}, self.ring)

    def __eq__(self, other):
        return (
            isinstance(other, TwoChain)
            and other.surface is self.surface
            and other.ring == self.ring
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.coeffs.items()))))

    def to_pairs(self):
        return [[t, self.coeffs[t]] for t in sorted(self.coeffs)]

    def __repr__(self):
        return "TwoChain(%d triangles, ring=%s)" % (len(self.coeffs), self.ring)


def boundary(two_chain):
    return two_chain.boundary()


@dataclass(frozen=True)
class VerificationReport:
    endpoints_null: bool
    certificates_valid: bool
    generator_certificate: bool
    max_mass: int

    @property
    def accepted(self):
        return self.endpoints_null and self.certificates_valid and self.generator_certificate


class SweepOut:
    """One-cycle family z_0..z_m with certificates c_0..c_{m-1}."""

    def __init__(self, surface, steps, certificates, ring=None):
        if len(certificates) != len(steps) - 1:
            raise LengthMismatch(
                "%d certificates for %d steps" % (len(certificates), len(steps))
            )
        self.surface = surface
        self.ring = _check_ring(surface, ring)
        self.steps = list(steps)
        self.certificates = list(certificates)
        for z in self.steps:
            if z.surface is not surface or z.ring != self.ring:
                raise ValidationError("step on wrong surface or ring")
        for c in self.certificates:
            if c.surface is not surface or c.ring != self.ring:
                raise ValidationError("certificate on wrong surface or ring")
        self._max_mass = None

    @property
    def max_mass(self):
        if self._max_mass is None:
            self._max_mass = max(z.mass for z in self.steps)
        return self._max_mass

    def mass_profile(self):
        return [z.mass for z in self.steps]

    def verify(self):
        """Check the three acceptance conditions and report them."""
        endpoints = self.steps[0].is_zero() and self.steps[-1].is_zero()

        certs_ok = True
        for i, c in enumerate(self.certificates):
            if c.boundary() != self.steps[i + 1] - self.steps[i]:
                certs_ok = False
                break

        total = {}
        for c in self.certificates:
            for t, x in c.coeffs.items():
                total[t] = total.get(t, 0) + x
        n = len(self.surface.triangles)
        if self.ring == "Z2":
            gen = all(total.get(t, 0) % 2 == 1 for t in range(n))
        else:
            gen = all(total.get(t, 0) == 1 for t in range(n)) or all(
                total.get(t, 0) == -1 for t in range(n)
            )
        return VerificationReport(endpoints, certs_ok, gen, self.max_mass)

    def to_mod2(self):
        """The same family with coefficients reduced mod 2."""
        steps = [OneCycle(self.surface, z.coeffs, "Z2") for z in self.steps]
        certs = [TwoChain(self.surface, c.coeffs, "Z2") for c in self.certificates]
        return SweepOut(self.surface, steps, certs, "Z2")

    def to_json_dict(self):
        return {
            "format": "dias-sweep/1",
            "ring": self.ring,
            "steps": [z.to_pairs() for z in self.steps],
            "certificates": [c.to_pairs() for c in self.certificates],
        }

    def __repr__(self):
        return "SweepOut(%d steps, maxMass=%d, ring=%s)" % (
            len(self.steps),
            self.max_mass,
            self.ring,
        )


def sweep_from_json_dict(surface, data):
    if data.get("format") != "dias-sweep/1":
        raise ValidationError("not a dias-sweep/1 document")
    ring = data.get("ring")
    steps = []
    for pairs in data["steps"]:
        coeffs = {}
        for (u, v), c in pairs:
            coeffs[surface.edge_id(u, v)] = c
        steps.append(OneCycle(surface, coeffs, ring))
    certs = []
    for pairs in data["certificates"]:
        certs.append(TwoChain(surface, {int(t): c for t, c in pairs}, ring))
    return SweepOut(surface, steps, certs, ring)
