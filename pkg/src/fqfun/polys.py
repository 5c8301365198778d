"""The polynomial ring A = F_q[T]: elements, ideals, factoring, enumeration.

A polynomial is a Poly: an immutable coefficient tuple (ascending degree,
no trailing zeros) plus its coefficient field.  The canonical order used for
every "least"/sorted output is by degree, then by comparing coefficient
element indices from the leading coefficient down to the constant term.
"""

import random

from .config import check_guard
from .fields import field_make


class Poly:
    """Element of F_q[T].  Immutable; coefficients ascend by degree."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # degree of the zero polynomial is -1 by convention
    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def constant(self):
        return self.coeffs[0] if self.coeffs else 0

    def sort_key(self):
        return (self.degree, tuple(reversed(self.coeffs)))

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.p, self.field.n, self.coeffs))

    def __repr__(self):
        return f"Poly({self.field}, {poly_str(self)})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F, [])
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return Poly(F, out)

    def scale(self, c):
        F = self.field
        return Poly(F, [F.mul(c, x) for x in self.coeffs])

    def monic(self):
        if self.is_zero() or self.is_monic():
            return self
        return self.scale(self.field.inv(self.leading()))

    def divmod(self, other):
        """Division with remainder; other must be nonzero."""
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.degree
        inv_lead = F.inv(other.leading())
        q = [0] * max(0, len(r) - d)
        while len(r) - 1 >= d and r:
            c = F.mul(r[-1], inv_lead)
            off = len(r) - 1 - d
            q[off] = c
            for j, oc in enumerate(other.coeffs):
                r[off + j] = F.sub(r[off + j], F.mul(c, oc))
            while r and r[-1] == 0:
                r.pop()
        return Poly(F, q), Poly(F, r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def divides(self, other):
        return (other % self).is_zero()

    def eval(self, x, field=None, embedding=None):
        """Evaluate at x, optionally in an extension via the embedding."""
        F = field or self.field
        acc = 0
        for c in reversed(self.coeffs):
            v = embedding[c] if embedding is not None else c
            acc = F.add(F.mul(acc, x), v)
        return acc

    def derivative(self):
        F = self.field
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            out.append(F.smul(i % F.p, c))
        return Poly(F, out)

    def shift_subst(self, alpha):
        """The polynomial f(T + alpha)."""
        F = self.field
        acc = Poly(F, [])
        t_plus = Poly(F, [alpha, 1])
        for c in reversed(self.coeffs):
            acc = acc * t_plus + Poly(F, [c])
        return acc

    def compose(self, inner):
        acc = Poly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly(self.field, [c])
        return acc

    def map_field(self, field, embedding):
        """Reinterpret coefficients inside an extension field."""
        return Poly(field, [embedding[c] for c in self.coeffs])


def make_poly(field, coeffs):
    return Poly(field, coeffs)


def poly_T(field):
    return Poly(field, [0, 1])


def poly_one(field):
    return Poly(field, [1])


def poly_str(f):
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            t = "T" if i == 1 else f"T^{i}"
            parts.append(t if c == 1 else f"{c}*{t}")
    return " + ".join(parts)


def poly_gcd(a, b):
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """g, u, v with u*a + v*b = g = gcd(a,b) monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = poly_one(F), Poly(F, [])
    t0, t1 = Poly(F, []), poly_one(F)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.inv(r0.leading())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def poly_lcm(a, b):
    if a.is_zero() or b.is_zero():
        return Poly(a.field, [])
    g = poly_gcd(a, b)
    return ((a * b) // g).monic()


def poly_powmod(base, e, modulus):
    acc = poly_one(base.field)
    base = base % modulus
    while e:
        if e & 1:
            acc = (acc * base) % modulus
        base = (base * base) % modulus
        e >>= 1
    return acc


def is_irreducible(f):
    """Rabin test over F_q."""
    d = f.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    F = f.field
    q = F.q
    x = poly_T(F)
    if not (poly_powmod(x, q**d, f) - x % f).is_zero():
        return False
    for ell in _prime_divisors(d):
        g = poly_gcd(f, poly_powmod(x, q ** (d // ell), f) - x % f)
        if g.degree != 0:
            return False
    return True


def _prime_divisors(m):
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _moebius(m):
    mu, d = 1, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            mu = -mu
        d += 1
    if m > 1:
        mu = -mu
    return mu


def irreducible_count(q, d):
    """Number of monic irreducibles of degree d over F_q (necklace count)."""
    total = sum(_moebius(d // e) * q**e for e in range(1, d + 1) if d % e == 0)
    assert total % d == 0
    return total // d


def monic_polys(field, d):
    """All monic polynomials of degree d, in canonical order."""
    q = field.q
    for m in range(q**d):
        coeffs = []
        mm = m
        for _ in range(d):
            coeffs.append(mm % q)  # constant term varies fastest
            mm //= q
        yield Poly(field, coeffs + [1])


def poly_irreducibles(field, d, config=None):
    """Complete canonically ordered list of monic irreducibles of degree d."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    check_guard(field.q**d, f"irreducibles of degree {d} over {field}", config)
    out = [f for f in monic_polys(field, d) if is_irreducible(f)]
    assert len(out) == irreducible_count(field.q, d)
    return out


def substitution_automorphism(alpha, f):
    """Apply the ring automorphism T -> T + alpha (alpha in the base field)."""
    if alpha not in range(f.field.q):
        raise ValueError("alpha must be an element of the coefficient field")
    return f.shift_subst(alpha)


# ---------------------------------------------------------------------------
# factorization (squarefree / distinct-degree / equal-degree)

def squarefree_part_factors(f):
    """Squarefree decomposition: list of (g_i, multiplicity), g_i squarefree."""
    F = f.field
    out = {}

    def rec(g, mult):
        if g.degree <= 0:
            return
        d = g.derivative()
        if d.is_zero():
            # g = h(T^p); take p-th root of coefficients
            p = F.p
            root = [F.pow(c, F.q // p) for c in g.coeffs[::p]]
            rec(Poly(F, root), mult * p)
            return
        w = poly_gcd(g, d)
        sf = (g // w).monic()
        m = 1
        while sf.degree > 0:
            nxt = poly_gcd(sf, w)
            piece = (sf // nxt).monic()
            if piece.degree > 0:
                out[(piece.coeffs, mult * m)] = piece
            w = (w // nxt).monic() if not nxt.is_zero() else w
            sf = nxt
            m += 1
        if w.degree > 0:
            rec(w, mult)

    rec(f.monic(), 1)
    return [(g, k) for (cs, k), g in sorted(out.items(),
                                            key=lambda kv: (kv[1].sort_key(), kv[0][1]))]


def is_squarefree(f):
    d = f.derivative()
    if d.is_zero():
        return f.degree <= 0
    return poly_gcd(f, d).degree == 0


def factor(f):
    """Full factorization: sorted list of (irreducible monic, multiplicity).

    Equal-degree splitting draws from a per-call fixed-seed generator, so the
    output is deterministic run to run.
    """
    if f.degree <= 0:
        return []
    rng = random.Random(0x5EED)
    out = []
    for g, mult in squarefree_part_factors(f):
        for h in _factor_squarefree(g, rng):
            out.append((h, mult))
    out.sort(key=lambda t: (t[0].sort_key(), t[1]))
    return out


def _factor_squarefree(f, rng):
    F = f.field
    q = F.q
    x = poly_T(F)
    pieces = []
    xq = poly_powmod(x, q, f)
    h = xq
    rest = f
    d = 1
    while rest.degree >= 2 * d:
        g = poly_gcd(rest, h - x % rest)
        if g.degree > 0:
            pieces.extend(_split_equal_degree(g, d, rng))
            rest = (rest // g).monic()
        h = poly_powmod(h, q, rest) if rest.degree > 0 else h
        d += 1
    if rest.degree > 0:
        pieces.append(rest)
    return pieces


def _split_equal_degree(f, d, rng):
    """Cantor-Zassenhaus: f is squarefree, all factors of degree d."""
    F = f.field
    q = F.q
    if f.degree == d:
        return [f.monic()]
    while True:
        a = Poly(F, [rng.randrange(q) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        g = poly_gcd(f, a)
        if 0 < g.degree < f.degree:
            pass
        elif F.p == 2:
            # trace map T(a) = a + a^2 + ... over F_{2^k}
            t = a
            acc = a
            e = F.n * d
            for _ in range(e - 1):
                t = poly_powmod(t, 2, f)
                acc = acc + t
            g = poly_gcd(f, acc)
        else:
            b = poly_powmod(a, (q**d - 1) // 2, f)
            g = poly_gcd(f, b - poly_one(F))
        if 0 < g.degree < f.degree:
            left = _split_equal_degree(g.monic(), d, rng)
            right = _split_equal_degree((f // g).monic(), d, rng)
            return left + right


def roots_in_field(f, field=None, embedding=None):
    """Roots of f in the given field (default: its own), sorted."""
    if field is not None and field != f.field:
        f = f.map_field(field, embedding)
    F = f.field
    x = poly_T(F)
    g = poly_gcd(f, poly_powmod(x, F.q, f) - x % f)
    roots = []
    for h, _ in factor(g):
        if h.degree == 1:
            roots.append(F.neg(h.constant()))
    return sorted(roots)


# ---------------------------------------------------------------------------
# ideals of A (principal: A is a PID)

class MonicIdeal:
    """An ideal of F_q[T], held by its unique monic generator (or zero)."""

    __slots__ = ("generator",)

    def __init__(self, generator):
        if generator.is_zero():
            self.generator = generator
        else:
            self.generator = generator.monic()

    @property
    def field(self):
        return self.generator.field

    def is_zero(self):
        return self.generator.is_zero()

    def is_unit_ideal(self):
        return self.generator.degree == 0

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return MonicIdeal(poly_gcd(self.generator, other.generator))

    def __mul__(self, other):
        return MonicIdeal(self.generator * other.generator)

    def intersect(self, other):
        if self.is_zero() or other.is_zero():
            return MonicIdeal(Poly(self.field, []))
        return MonicIdeal(poly_lcm(self.generator, other.generator))

    def contains(self, other):
        """(g1) contains (g2) iff g1 divides g2."""
        if self.is_zero():
            return other.is_zero()
        return self.generator.divides(other.generator)

    def __eq__(self, other):
        return isinstance(other, MonicIdeal) and self.generator == other.generator

    def __hash__(self):
        return hash(("ideal", self.generator))

    def __repr__(self):
        return f"({poly_str(self.generator)})"
