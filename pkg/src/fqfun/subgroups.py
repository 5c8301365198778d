"""Finite-index subgroups of GL_2(F_q[T]) framed by a congruence quotient.

A SubgroupFrame holds a monic modulus f and generators of a subgroup H of
the reduced ambient group

    Gbar = { M over A/(f) : det(M) in F_q^* },

which is exactly the image of GL_2(A) modulo f.  The frame denotes the full
preimage Gamma of H in GL_2(A); Gamma has finite index and contains the
kernel of reduction, so everything about its quasi-level, level, cusps and
modularity is computable inside the finite ring A/(f).

The quasi-level is the set of residues a whose unipotent [[1,a],[0,1]] lies
in the core of H in Gbar (the intersection of all Gbar-conjugates); it is an
F_q-subspace of A/(f) but not an ideal in general.  The level is the largest
ideal of A inside the quasi-level.
"""

from dataclasses import dataclass

from .config import check_guard
from .fields import field_make, field_from_order
from .polys import (MonicIdeal, Poly, factor, poly_gcd, poly_one, poly_str,
                    poly_xgcd)


# ---------------------------------------------------------------------------
# the residue ring A/(f)

class ResidueRing:
    """A/(f).  Elements are coefficient tuples of length deg f."""

    def __init__(self, field, modulus, config=None):
        if not modulus.is_monic() or modulus.degree < 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.field = field
        self.modulus = modulus
        self.deg = modulus.degree
        self.size = field.q**self.deg
        check_guard(self.size, "residue ring", config)
        self.zero = (0,) * self.deg
        self.one = self.reduce_poly(poly_one(field))

    def reduce_poly(self, f):
        r = f % self.modulus
        cs = list(r.coeffs) + [0] * (self.deg - len(r.coeffs))
        return tuple(cs)

    def to_poly(self, a):
        return Poly(self.field, a)

    def elements(self):
        q = self.field.q
        for code in range(self.size):
            cs = []
            cc = code
            for _ in range(self.deg):
                cs.append(cc % q)
                cc //= q
            yield tuple(cs)

    def add(self, a, b):
        F = self.field
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        F = self.field
        return tuple(F.neg(x) for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def smul(self, c, a):
        F = self.field
        return tuple(F.mul(c, x) for x in a)

    def mul(self, a, b):
        return self.reduce_poly(self.to_poly(a) * self.to_poly(b))

    def is_unit(self, a):
        return poly_gcd(self.to_poly(a), self.modulus).degree == 0

    def inv(self, a):
        g, u, _ = poly_xgcd(self.to_poly(a), self.modulus)
        if g.degree != 0:
            raise ZeroDivisionError("not a unit in A/(f)")
        return self.reduce_poly(u)

    def scalar(self, c):
        """The ring element c for a base-field constant c."""
        return (c,) + (0,) * (self.deg - 1)

    def is_base_constant(self, a):
        return all(x == 0 for x in a[1:])

    def __repr__(self):
        return f"A/({poly_str(self.modulus)}) over {self.field}"


# ---------------------------------------------------------------------------
# 2x2 matrices over the ring, as 4-tuples (a, b, c, d)

def mat_id(ring):
    return (ring.one, ring.zero, ring.zero, ring.one)


def mat_mul(ring, M, N):
    a, b, c, d = M
    e, f, g, h = N
    return (ring.add(ring.mul(a, e), ring.mul(b, g)),
            ring.add(ring.mul(a, f), ring.mul(b, h)),
            ring.add(ring.mul(c, e), ring.mul(d, g)),
            ring.add(ring.mul(c, f), ring.mul(d, h)))


def mat_det(ring, M):
    a, b, c, d = M
    return ring.sub(ring.mul(a, d), ring.mul(b, c))


def mat_inv(ring, M):
    a, b, c, d = M
    di = ring.inv(mat_det(ring, M))
    return (ring.mul(di, d), ring.mul(di, ring.neg(b)),
            ring.mul(di, ring.neg(c)), ring.mul(di, a))


def unipotent(ring, a):
    return (ring.one, a, ring.zero, ring.one)


# ---------------------------------------------------------------------------
# the ambient group Gbar = image of GL_2(A) in GL_2(A/(f))

class AmbientGroup:
    """Handle for Gbar: membership, order, generators, enumeration."""

    def __init__(self, ring, config=None):
        self.ring = ring
        self.config = config
        check_guard(ring.size**4, "ambient matrix group", config)
        self._elements = None

    def contains(self, M):
        det = mat_det(self.ring, M)
        return self.ring.is_base_constant(det) and det[0] != 0

    def order(self):
        """|Gbar| = |GL_2(A/f)| (q-1) / |(A/f)^*| by the determinant map."""
        F = self.ring.field
        q = F.q
        gl, units = 1, 1
        for piece, e in factor(self.ring.modulus):
            qd = q**piece.degree
            gl_res = (qd**2 - 1) * (qd**2 - qd)
            gl *= gl_res * qd ** (4 * (e - 1))
            units *= (qd - 1) * qd ** (e - 1)
        return gl * (q - 1) // units

    def generators(self):
        """Elementaries over an additive basis of A/(f), plus one torus
        generator; these generate Gbar (the ring is semilocal)."""
        ring = self.ring
        F = ring.field
        gens = []
        basis_scalars = [F.p**j for j in range(F.n)]
        for i in range(ring.deg):
            for c in basis_scalars:
                m = [0] * ring.deg
                m[i] = c
                m = tuple(m)
                gens.append((ring.one, m, ring.zero, ring.one))
                gens.append((ring.one, ring.zero, m, ring.one))
        if F.q > 2:
            u = ring.scalar(F.multiplicative_generator())
            gens.append((u, ring.zero, ring.zero, ring.one))
        return gens

    def elements(self):
        if self._elements is None:
            self._elements = group_closure(self.ring, self.generators())
            assert len(self._elements) == self.order()
        return self._elements


def group_closure(ring, generators, config=None):
    """The subgroup generated by the given matrices, as a frozenset."""
    ident = mat_id(ring)
    seen = {ident}
    frontier = [ident]
    gens = list(generators)
    while frontier:
        nxt = []
        for M in frontier:
            for g in gens:
                P = mat_mul(ring, M, g)
                if P not in seen:
                    check_guard(len(seen) + 1, "subgroup closure", config)
                    seen.add(P)
                    nxt.append(P)
        frontier = nxt
    return frozenset(seen)


# ---------------------------------------------------------------------------

class SubgroupFrame:
    """Modulus f plus generators of H inside Gbar; denotes the preimage
    subgroup of GL_2(A)."""

    def __init__(self, ring, generators, config=None):
        self.ring = ring
        self.config = config
        self.ambient = AmbientGroup(ring, config)
        gens = []
        for M in generators:
            M = tuple(tuple(e) for e in M)
            if not self.ambient.contains(M):
                raise ValueError(
                    "generator determinant is not a base-field unit")
            gens.append(M)
        self.generators = tuple(gens)
        self._subgroup = None
        self._core = None

    def subgroup(self):
        if self._subgroup is None:
            self._subgroup = group_closure(self.ring, self.generators,
                                           self.config)
        return self._subgroup

    def core(self):
        """Largest subgroup of H normal in Gbar, by iterated refinement
        against conjugation by the ambient generators."""
        if self._core is not None:
            return self._core
        ring = self.ring
        K = self.subgroup()
        amb = self.ambient.generators()
        pairs = [(s, mat_inv(ring, s)) for s in amb]
        changed = True
        while changed:
            changed = False
            for s, si in pairs:
                conj = frozenset(mat_mul(ring, mat_mul(ring, s, k), si)
                                 for k in K)
                K2 = K & conj
                if len(K2) < len(K):
                    K = K2
                    changed = True
        self._core = K
        return K

    def conjugated(self, g):
        """The frame for g H g^-1 (same denoted invariants)."""
        ring = self.ring
        gi = mat_inv(ring, g)
        gens = [mat_mul(ring, mat_mul(ring, g, M), gi)
                for M in self.generators]
        return SubgroupFrame(ring, gens, self.config)

    def __repr__(self):
        return (f"SubgroupFrame(f={poly_str(self.ring.modulus)}, "
                f"{len(self.generators)} gens)")


def gamma_T_frame(field, config=None):
    """The frame of the principal congruence subgroup at the degree-one
    prime (T): modulus T, trivial reduced subgroup."""
    ring = ResidueRing(field, Poly(field, [0, 1]), config)
    return SubgroupFrame(ring, [], config)


def full_frame(ring, config=None):
    """The frame denoting all of GL_2(A): H = Gbar."""
    return SubgroupFrame(ring, AmbientGroup(ring, config).generators(),
                         config)


def congruence_frame(ring, config=None):
    """The full congruence frame of classical level f: H trivial."""
    return SubgroupFrame(ring, [], config)


# ---------------------------------------------------------------------------
# quasi-level, level, modularity

@dataclass
class QuasiLevel:
    modulus: Poly
    basis: list          # echelonized residue tuples spanning ql/(f)
    residues: frozenset  # the full residue set

    @property
    def dimension(self):
        return len(self.basis)


def _echelon_basis(ring, vectors):
    F = ring.field
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    pivots = []
    for col in range(ring.deg - 1, -1, -1):
        cand = None
        for row in rows:
            if row[col] != 0 and all(row[c] == 0 for c in range(col + 1,
                                                                ring.deg)):
                cand = row
                break
        if cand is None:
            continue
        inv = F.inv(cand[col])
        cand = [F.mul(inv, x) for x in cand]
        rows = [[F.sub(x, F.mul(r[col], c)) for x, c in zip(r, cand)]
                if r[col] != 0 else r for r in rows]
        for b in basis:
            if b[col] != 0:
                fctr = b[col]
                for i in range(ring.deg):
                    b[i] = F.sub(b[i], F.mul(fctr, cand[i]))
        basis.append(cand)
        pivots.append(col)
    out = [tuple(b) for _, b in sorted(zip(pivots, basis))]
    return out


def quasi_level(frame):
    """Residues a with unipotent(a) in the core of H; an F_q-subspace."""
    ring = frame.ring
    K = frame.core()
    residues = frozenset(a for a in ring.elements()
                         if unipotent(ring, a) in K)
    F = ring.field
    for a in residues:  # the theory guarantees subspace closure
        for c in range(1, F.q):
            if ring.smul(c, a) not in residues:
                raise AssertionError("quasi-level failed scalar closure")
        for b in residues:
            if ring.add(a, b) not in residues:
                raise AssertionError("quasi-level failed additive closure")
    basis = _echelon_basis(ring, residues)
    return QuasiLevel(modulus=ring.modulus, basis=basis, residues=residues)


def _monic_divisors(f):
    pieces = factor(f)
    divs = [poly_one(f.field)]
    for g, e in pieces:
        divs = [d * g**0 if k == 0 else d * _pow(g, k)
                for d in divs for k in range(e + 1)]
    uniq = {d.coeffs: d for d in divs}
    return sorted(uniq.values(), key=lambda d: d.sort_key())


def _pow(g, k):
    out = poly_one(g.field)
    for _ in range(k):
        out = out * g
    return out


def level(frame):
    """Largest ideal of A inside the quasi-level: scan monic divisors of f
    by increasing degree; (h) fits iff every h*T^i lies in the residues."""
    ql = quasi_level(frame)
    ring = frame.ring
    f = ring.modulus
    T = Poly(ring.field, [0, 1])
    for h in _monic_divisors(f):
        ok = True
        for i in range(ring.deg - h.degree):
            if ring.reduce_poly(h * _pow(T, i)) not in ql.residues:
                ok = False
                break
        if ok:
            return MonicIdeal(h)
    raise AssertionError("the modulus ideal itself must always fit")


def is_modular_frame(frame):
    """Modular: the denoted subgroup sits inside the T-congruence group and
    has level different from (0) and (1).  Returns (verdict, reason)."""
    ring = frame.ring
    f = ring.modulus
    if f.constant() != 0:
        return False, "modulus is coprime to T, so the subgroup surjects mod T"
    # reduce generators mod T: all must be the identity
    F = ring.field
    for M in frame.generators:
        red = tuple(ring.to_poly(e).eval(0) for e in M)
        if red != (1, 0, 0, 1):
            return False, "a generator is nontrivial mod T"
    lv = level(frame)
    if lv.is_unit_ideal():
        return False, "level is the unit ideal"
    if lv.is_zero():
        return False, "level is zero"
    return True, f"contained in the T-frame with level {lv!r}"


def is_classically_modular_frame(frame):
    """Modular and the quasi-level equals the level ideal."""
    ok, _ = is_modular_frame(frame)
    if not ok:
        return False
    ql = quasi_level(frame)
    lv = level(frame)
    return ql.dimension == frame.ring.deg - lv.generator.degree


# ---------------------------------------------------------------------------
# cusps

def cusp_count(frame):
    """Orbits of the denoted subgroup on P^1(F_q(T)).

    A = F_q[T] has class number one, so GL_2(A) is transitive on the
    projective line and the orbit count equals the number of double cosets
    H \\ Gbar / (upper triangular with base-field diagonal).  Those double
    cosets are H-orbits on unimodular column pairs modulo F_q^* scaling.
    """
    ring = frame.ring
    F = ring.field
    check_guard(ring.size**2, "projective point enumeration", frame.config)
    points = {}
    for a in ring.elements():
        for c in ring.elements():
            g = poly_gcd(poly_gcd(ring.to_poly(a), ring.to_poly(c)),
                         ring.modulus)
            if g.degree != 0:
                continue
            lab = min((ring.smul(s, a), ring.smul(s, c))
                      for s in range(1, F.q))
            points[lab] = None
    labels = list(points)
    index = {lab: i for i, lab in enumerate(labels)}
    parent = list(range(len(labels)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for M in frame.generators:
        a0, b0, c0, d0 = M
        for lab in labels:
            a, c = lab
            na = ring.add(ring.mul(a0, a), ring.mul(b0, c))
            nc = ring.add(ring.mul(c0, a), ring.mul(d0, c))
            nlab = min((ring.smul(s, na), ring.smul(s, nc))
                       for s in range(1, F.q))
            union(index[lab], index[nlab])
    return len({find(i) for i in range(len(labels))})


# ---------------------------------------------------------------------------
# torsion scan over the denoted subgroup

def torsion_scan(frame, degree_bound, config=None):
    """Finite-order matrices in the denoted subgroup with entry degrees
    bounded as given, each with its exact order.

    A finite-order element has base-field eigenvalues (in F_{q^2}) and a
    unipotent part killed by p, so its order divides p (q^2 - 1); powers
    are only taken up to that exponent.
    """
    ring = frame.ring
    F = ring.field
    q = F.q
    H = frame.subgroup()
    cap = F.p * (q * q - 1)
    n_entries = q ** (degree_bound + 1)
    check_guard(n_entries**4, "torsion matrix enumeration", config)

    def decode(idx):
        cs = []
        for _ in range(degree_bound + 1):
            cs.append(idx % q)
            idx //= q
        return Poly(F, cs)

    out = []
    one = poly_one(F)
    for code in range(n_entries**4):
        idx = code
        entries = []
        for _ in range(4):
            entries.append(decode(idx % n_entries))
            idx //= n_entries
        a, b, c, d = entries
        det = a * d - b * c
        if det.degree != 0:
            continue
        red = tuple(ring.reduce_poly(e) for e in entries)
        if red not in H:
            continue
        order = _matrix_order(F, (a, b, c, d), cap)
        if order is not None:
            out.append(((tuple(a.coeffs), tuple(b.coeffs),
                         tuple(c.coeffs), tuple(d.coeffs)), order))
    out.sort()
    return out


def _matrix_order(F, M, cap):
    one = poly_one(F)
    zero = Poly(F, [])
    ident = (one, zero, zero, one)

    def mul(X, Y):
        a, b, c, d = X
        e, f, g, h = Y
        return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    cur = M
    for k in range(1, cap + 1):
        if cur == ident:
            return k - 1 if k > 1 else 1
        if k == 1 and M == ident:
            return 1
        cur = mul(cur, M) if k == 1 else mul(cur, M)
    return None


# ---------------------------------------------------------------------------
# frame file format:  q=<int> f=<coeffs> gens=[a|b|c|d;a|b|c|d;...]

def parse_frame_line(line, config=None):
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    fields = {}
    for tok in text.split():
        key, _, val = tok.partition("=")
        fields[key] = val
    if "q" not in fields or "f" not in fields:
        raise ValueError("frame line needs q= and f=")
    F = field_from_order(int(fields["q"]), config)
    fcoeffs = [int(c) for c in fields["f"].split(",")]
    ring = ResidueRing(F, Poly(F, fcoeffs), config)
    gens = []
    body = fields.get("gens", "[]")
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError("gens must be bracketed")
    body = body[1:-1]
    if body:
        for mat in body.split(";"):
            parts = mat.split("|")
            if len(parts) != 4:
                raise ValueError("each generator needs 4 entries")
            entries = []
            for part in parts:
                cs = [int(c) for c in part.split(",")]
                if any(c < 0 or c >= F.q for c in cs):
                    raise ValueError("entry coefficients out of range")
                entries.append(ring.reduce_poly(Poly(F, cs)))
            gens.append(tuple(entries))
    return SubgroupFrame(ring, gens, config)


def format_frame_line(frame):
    ring = frame.ring
    parts = [f"q={ring.field.q}",
             "f=" + ",".join(str(c) for c in ring.modulus.coeffs)]
    mats = []
    for M in frame.generators:
        mats.append("|".join(",".join(str(c) for c in e) for e in M))
    parts.append("gens=[" + ";".join(mats) + "]")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# exhaustive example search (used to hunt frames with prescribed quasi-level)

def search_frames(ring, max_gens=2, predicate=None, config=None):
    """First frame, in canonical generator order, whose quasi-level
    satisfies the predicate; None when the search space is exhausted."""
    ambient = AmbientGroup(ring, config)
    elements = sorted(ambient.elements())
    seen_subgroups = set()

    def try_gens(gens):
        frame = SubgroupFrame(ring, list(gens), config)
        H = frame.subgroup()
        if H in seen_subgroups:
            return None
        seen_subgroups.add(H)
        ql = quasi_level(frame)
        if predicate(ql):
            return frame
        return None

    from itertools import combinations
    for r in range(1, max_gens + 1):
        for gens in combinations(elements, r):
            hit = try_gens(gens)
            if hit is not None:
                return hit
    return None


def quasi_level_is_ideal(ql, ring):
    """Whether the quasi-level residue set is closed under multiplication
    by T, i.e. is an ideal of A/(f)."""
    T = (0, 1) + (0,) * (ring.deg - 2) if ring.deg >= 2 else None
    if ring.deg < 2:
        return True  # every subspace of A/(T) is an ideal
    return all(ring.mul(a, T) in ql.residues for a in ql.residues)
