"""Arithmetic for the finite fields F_{p^n} and their extension towers.

Field elements are plain ints in range(q).  The base-p digits of an element
are its coordinates in the power basis of the field's defining modulus, so 0
and 1 are always the additive and multiplicative identities and the prime
subfield is encoded by 0..p-1.  All arithmetic lives on the field object
(pass elements around together with their field).

The defining modulus of F_{p^n} is the canonically least monic irreducible
of degree n over F_p: polynomials are ordered by degree, then by comparing
coefficients from the leading one down to the constant term.  This makes
every construction in the package deterministic.
"""

from .config import DEFAULT_CONFIG, check_guard

_TABLE_LIMIT = 1 << 13  # exp/log tables kept for fields up to this order


def is_prime(m):
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# bare F_p[x] helpers used to bootstrap the modulus search
# (coefficient lists, ascending degree, normalized: no trailing zeros)

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for j in range(dm + 1):
                a[off + j] = (a[off + j] - c * m[j]) % p
        a.pop()
    return _fp_trim(a)


def _fp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        b = [(c * inv) % p for c in b]
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_powmod_x(e, m, p):
    # x^e mod m
    acc, base = [1], _fp_mod([0, 1], m, p)
    while e:
        if e & 1:
            acc = _fp_mod(_fp_mul(acc, base, p), m, p)
        base = _fp_mod(_fp_mul(base, base, p), m, p)
        e >>= 1
    return acc


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


def _fp_irreducible(f, p):
    """Rabin irreducibility test for a monic f over F_p."""
    n = len(f) - 1
    if n <= 0:
        return False
    x = [0, 1]
    xq = _fp_powmod_x(p**n, f, p)
    if _fp_trim([(a - b) % p for a, b in
                 zip(xq + [0] * len(x), x + [0] * len(xq))]) != []:
        return False
    for ell in _prime_divisors(n):
        xe = _fp_powmod_x(p ** (n // ell), f, p)
        diff = [(a - b) % p for a, b in
                zip(xe + [0] * len(x), x + [0] * len(xe))]
        g = _fp_gcd(f, _fp_trim(diff), p)
        if len(g) - 1 != 0:
            return False
    return True


def _least_irreducible(p, n):
    """Canonically least monic irreducible of degree n over F_p."""
    if n == 1:
        return (0, 1)
    for m in range(p**n):
        coeffs = []
        mm = m
        for _ in range(n):
            coeffs.append(mm % p)
            mm //= p
        f = coeffs + [1]
        if _fp_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible found")  # cannot happen


# ---------------------------------------------------------------------------

class PrimePowerField:
    """The field F_q, q = p^n, with the canonical defining modulus.

    Use :func:`field_make` (cached) rather than constructing directly.
    """

    def __init__(self, p, n, config=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if n < 1:
            raise ValueError("n must be >= 1")
        check_guard(p**n, f"field F_{p}^{n}", config)
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = _least_irreducible(p, n)
        self._embeddings = {}
        self._digits = None
        self._exp = None
        self._log = None
        if n > 1:
            self._digits = [self._to_digits(a) for a in range(self.q)]
            # powers of T reduced mod modulus, for products of degree >= n
            red = []
            cur = list(self.modulus[:-1])
            cur = [(-c) % p for c in cur]  # T^n mod modulus
            red.append(tuple(cur))
            for _ in range(n - 2):
                cur = [0] + cur
                if len(cur) > n:
                    top = cur.pop()
                    if top:
                        base = red[0]
                        cur = [(c + top * b) % p for c, b in zip(cur, base)]
                red.append(tuple(cur))
            self._red = red
            if self.q <= _TABLE_LIMIT:
                self._build_tables()

    # -- encoding ----------------------------------------------------------

    def _to_digits(self, a):
        p = self.p
        out = []
        for _ in range(self.n):
            out.append(a % p)
            a //= p
        return tuple(out)

    def digits(self, a):
        """Power-basis coordinates of element a, as a length-n tuple."""
        if self._digits is not None:
            return self._digits[a]
        return self._to_digits(a)

    def from_digits(self, digs):
        a = 0
        for d in reversed(digs):
            a = a * self.p + (d % self.p)
        return a

    # -- tables -------------------------------------------------------------

    def _build_tables(self):
        g = self._find_generator()
        exp = [1] * (self.q - 1)
        for i in range(1, self.q - 1):
            exp[i] = self._raw_mul(exp[i - 1], g)
        log = [0] * self.q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        self._gen = g

    def _find_generator(self):
        order = self.q - 1
        prime_divs = _prime_divisors(order)
        for cand in range(2, self.q):
            if all(self._raw_pow(cand, order // ell) != 1
                   for ell in prime_divs):
                return cand
        raise AssertionError("no generator found")

    # -- raw arithmetic (no tables) ------------------------------------------

    def _raw_mul(self, a, b):
        p, n = self.p, self.n
        da, db = self.digits(a), self.digits(b)
        conv = [0] * (2 * n - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        low = conv[:n]
        for k in range(n - 1):
            c = conv[n + k]
            if c:
                row = self._red[k]
                for j in range(n):
                    low[j] = (low[j] + c * row[j]) % p
        return self.from_digits(low)

    def _raw_pow(self, a, e):
        r, b = 1, a
        while e:
            if e & 1:
                r = self._raw_mul(r, b)
            b = self._raw_mul(b, b)
            e >>= 1
        return r

    # -- public arithmetic ----------------------------------------------------

    def add(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a):
        if self.n == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits([(-x) % self.p for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.n == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._raw_mul(a, b)

    def smul(self, c, a):
        """Scale by a prime-subfield constant c in 0..p-1."""
        if self.n == 1:
            return (c * a) % self.p
        return self.from_digits([(c * x) % self.p for x in self.digits(a)])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._raw_pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 0 if e else 1
        if self.n == 1:
            return pow(a, e, self.p)
        e %= self.q - 1
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._raw_pow(a, e)

    def frobenius(self, a, k=1):
        """a^(p^k)."""
        if a == 0 or self.q == 2:
            return a
        return self.pow(a, pow(self.p, k, self.q - 1))

    def trace_to_prime(self, a):
        """Absolute trace down to F_p, returned as an int in 0..p-1."""
        t, cur = 0, a
        for _ in range(self.n):
            t = self.add(t, cur)
            cur = self.pow(cur, self.p)
        # the trace lies in the prime subfield, whose encoding is 0..p-1
        return t

    def is_square(self, a):
        if self.p == 2 or a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        """A square root of a, or None when a is a non-square (p odd)."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if not self.is_square(a):
            return None
        if self._log is not None:
            ell = self._log[a]
            return self._exp[ell // 2] if ell % 2 == 0 else \
                self._exp[(ell + self.q - 1) // 2]
        if self.q % 4 == 3:
            return self.pow(a, (self.q + 1) // 4)
        return self._tonelli(a)

    def _tonelli(self, a):
        q1, s = self.q - 1, 0
        while q1 % 2 == 0:
            q1 //= 2
            s += 1
        z = 2
        while self.is_square(z):
            z += 1
        m, c = s, self.pow(z, q1)
        t, r = self.pow(a, q1), self.pow(a, (q1 + 1) // 2)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            m, c = i, self.mul(b, b)
            t, r = self.mul(t, c), self.mul(r, b)
        return r

    # -- structure ------------------------------------------------------------

    def elements(self):
        return range(self.q)

    def multiplicative_generator(self):
        if self._exp is not None:
            return self._gen
        return self._find_generator()

    def extension(self, k, config=None):
        """The canonical field F_{q^k} together with the embedding of self."""
        big = field_make(self.p, self.n * k, config)
        return big, big.embed(self)

    def embed(self, sub):
        """Embedding map (a list) from a subfield into this field.

        The image of the subfield generator is the least root of the
        subfield's modulus here, which pins the embedding canonically.
        """
        key = (sub.p, sub.n)
        if key in self._embeddings:
            return self._embeddings[key]
        if sub.p != self.p or self.n % sub.n:
            raise ValueError(f"F_{sub.q} does not embed into F_{self.q}")
        if sub.n == self.n:
            table = list(range(self.q))
            self._embeddings[key] = table
            return table
        root = None
        for cand in range(self.q):
            acc = 0
            for c in reversed(sub.modulus):
                acc = self.add(self.mul(acc, cand), c % self.p)
            if acc == 0:
                root = cand
                break
        assert root is not None
        table = [0] * sub.q
        for a in range(sub.q):
            acc = 0
            for d in reversed(sub.digits(a)):
                acc = self.add(self.mul(acc, root), d)
            table[a] = acc
        self._embeddings[key] = table
        return table

    def __eq__(self, other):
        return (isinstance(other, PrimePowerField)
                and (self.p, self.n) == (other.p, other.n))

    def __hash__(self):
        return hash((self.p, self.n))

    def __repr__(self):
        return f"F_{self.p}^{self.n}" if self.n > 1 else f"F_{self.p}"


_FIELD_CACHE = {}


def field_make(p, n, config=None):
    """The canonical F_{p^n} (cached; fields are immutable and shareable)."""
    key = (p, n)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = PrimePowerField(p, n, config)
    return _FIELD_CACHE[key]


def field_from_order(q, config=None):
    """The canonical field with q elements; q must be a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in _prime_divisors(q):
        n = 0
        m = q
        while m % p == 0:
            m //= p
            n += 1
        if m != 1:
            raise ValueError(f"{q} is not a prime power")
        return field_make(p, n, config)
