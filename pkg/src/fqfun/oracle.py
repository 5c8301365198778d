"""Independent enumeration check for the class group order of a domain.

The closed formula h_B = h_K * deg(x) in domains.py leans on the exact
sequence relating degree-zero classes to the classes of the punctured
curve.  This module recomputes the order of Cl(B) from first principles:

  * generators: places of degree <= degree_bound away from x,
  * relations: principal divisors of explicitly enumerated functions whose
    poles lie only at x,
  * order: index of the relation lattice via integer elimination.

Supported configurations: the projective line with any place, and the
affine models (artin-schreier, odd-degree hyperelliptic) with x equal to
the single place at infinity.  The answer is accepted only when growing
the function pole bound does not change it; otherwise OracleUnstable.
"""

from .config import check_guard
from .curves import places_of_degree


class OracleUnstable(Exception):
    """Raising the enumeration bounds changed the computed group order."""


class OracleUnsupported(Exception):
    """Domain shape outside what the enumeration oracle can handle."""


# ---------------------------------------------------------------------------
# index of a sublattice of Z^r given by spanning rows

def lattice_index(rows, r):
    """Order of Z^r modulo the row span, or None when infinite."""
    if r == 0:
        return 1
    mat = [list(v) for v in rows if any(v)]
    if len(mat) < r:
        return None
    order = 1
    col = 0
    while col < r:
        piv = None
        for i in range(col, len(mat)):
            if mat[i][col]:
                if piv is None or abs(mat[i][col]) < abs(mat[piv][col]):
                    piv = i
        if piv is None:
            return None
        mat[col], mat[piv] = mat[piv], mat[col]
        dirty = False
        for i in range(col + 1, len(mat)):
            if mat[i][col]:
                f = mat[i][col] // mat[col][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[col])]
                if mat[i][col]:
                    dirty = True
        if dirty:
            continue
        order *= abs(mat[col][col])
        col += 1
    return order


# ---------------------------------------------------------------------------
# truncated power series over a finite field (coefficient lists, length N)

def _ser_mul(F, a, b, N):
    out = [0] * N
    for i, ai in enumerate(a):
        if ai and i < N:
            for j, bj in enumerate(b):
                if i + j >= N:
                    break
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return out


def _ser_add(F, a, b):
    return [F.add(x, y) for x, y in zip(a, b)]


def _ser_scale(F, c, a):
    return [F.mul(c, x) for x in a]


def _ser_inv(F, a, N):
    inv0 = F.inv(a[0])
    out = [inv0] + [0] * (N - 1)
    for k in range(1, N):
        acc = 0
        for j in range(1, k + 1):
            if j < len(a) and a[j]:
                acc = F.add(acc, F.mul(a[j], out[k - j]))
        out[k] = F.neg(F.mul(inv0, acc))
    return out


def _ser_frob_pow(F, a, p, N):
    """a^p via the characteristic-p power rule on coefficients."""
    out = [0] * N
    for k, c in enumerate(a):
        if c and p * k < N:
            out[p * k] = F.pow(c, p)
    return out


def _poly_at_series(F, coeffs, xs, N):
    acc = [0] * N
    for c in reversed(coeffs):
        acc = _ser_mul(F, acc, xs, N)
        acc[0] = F.add(acc[0], c)
    return acc


def _ord_of(series):
    for i, c in enumerate(series):
        if c:
            return i
    return None


def _newton_steps(p, nser):
    it, reach = 0, 1
    while reach < nser:
        reach *= p
        it += 1
    return it + 1


# ---------------------------------------------------------------------------

def class_group_oracle(domain, degree_bound=2, config=None):
    """Order of Cl(B) by divisor enumeration; see module docstring."""
    curve = domain.curve
    if curve.kind == "projective-line":
        return _oracle_line(domain, degree_bound, config)
    if curve.kind == "artin-schreier" or (
            curve.kind == "hyperelliptic" and curve.poly.degree % 2 == 1):
        if domain.place.kind != "infinity":
            raise OracleUnsupported(
                "curve-mode oracle needs x = the place at infinity")
        return _oracle_curve(domain, degree_bound, config)
    raise OracleUnsupported(f"no oracle for {curve.kind} with this place")


# -- projective line ---------------------------------------------------------

def _oracle_line(domain, degree_bound, config):
    """Functions are u / pi^k with u supported on the generator primes and
    deg u <= k deg(pi), so every divisor is read off an explicit
    factorization and no zeta machinery enters.  For x = infinity the
    functions are plain polynomials u."""
    x = domain.place
    gens = []
    for d in range(1, degree_bound + 1):
        for pl in places_of_degree(domain.curve, d, config):
            if pl != x:
                gens.append(pl)
    r = len(gens)
    dx = x.degree
    finite_pos = [i for i, g in enumerate(gens) if g.kind == "poly"]
    inf_index = next((i for i, g in enumerate(gens)
                      if g.kind == "infinity"), None)

    def relations(kcap):
        maxdeg = kcap * dx
        rows = []
        if x.kind != "infinity":
            row = [0] * r
            row[inf_index] = dx  # the function 1/pi
            rows.append(row)
        m = len(finite_pos)
        supports = [(i,) for i in range(m)]
        supports += [(i, j) for i in range(m) for j in range(i + 1, m)]
        supports += [(i, j, k) for i in range(m) for j in range(i + 1, m)
                     for k in range(j + 1, m)]
        for sup in supports:
            _exponent_rows(rows, sup, gens, finite_pos, maxdeg, dx,
                           inf_index, r, x.kind == "infinity")
        return rows

    kcap = degree_bound + 2
    prev = lattice_index(relations(kcap - 1), r)
    cur = lattice_index(relations(kcap), r)
    if prev is None or cur is None or prev != cur:
        raise OracleUnstable(f"index did not stabilize: {prev} vs {cur}")
    return cur


def _exponent_rows(rows, sup, gens, finite_pos, maxdeg, dx, inf_index, r,
                   x_is_inf):
    degs = [gens[finite_pos[i]].degree for i in sup]

    def rec(i, degsum, exps):
        if i == len(sup):
            if degsum == 0:
                return
            row = [0] * r
            for pos, e in exps:
                row[finite_pos[pos]] = e
            if not x_is_inf:
                k = -(-degsum // dx)  # ceil: least pole power covering deg u
                row[inf_index] = k * dx - degsum
            rows.append(row)
            return
        e = 0
        while degsum + e * degs[i] <= maxdeg:
            if e > 0:
                rec(i + 1, degsum + e * degs[i], exps + [(sup[i], e)])
            else:
                rec(i + 1, degsum, exps)
            e += 1

    rec(0, 0, [])


# -- affine curve models with a single infinite place -------------------------

def _oracle_curve(domain, degree_bound, config):
    curve = domain.curve
    F = curve.field
    g = curve.genus
    degf = curve.poly.degree
    if curve.kind == "artin-schreier":
        pole_x, pole_y, jmax = F.p, degf, F.p
    else:
        pole_x, pole_y, jmax = 2, degf, 2

    gens = []
    for d in range(1, degree_bound + 1):
        for pl in places_of_degree(curve, d, config):
            if pl.kind == "affine":
                gens.append(pl)
    r = len(gens)

    mcap = 2 * g + 2 * degree_bound + 2
    nser = mcap + 2
    local = [_monomial_series(curve, pl, pole_x, pole_y, jmax, mcap, nser,
                              config) for pl in gens]

    def order_at(m):
        monos = sorted(((i, j) for j in range(jmax)
                        for i in range(m // pole_x + 1)
                        if pole_x * i + pole_y * j <= m),
                       key=lambda ij: pole_x * ij[0] + pole_y * ij[1])
        nm = len(monos)
        check_guard(F.q**nm, "oracle function enumeration", config)
        rows = []
        for code in range(1, F.q**nm):
            coeffs = []
            cc = code
            for _ in range(nm):
                coeffs.append(cc % F.q)
                cc //= F.q
            top = max(t for t, c in enumerate(coeffs) if c)
            if coeffs[top] != 1:
                continue  # scalar multiples of an earlier function
            pole = pole_x * monos[top][0] + pole_y * monos[top][1]
            row = []
            total = 0
            for pl, (big, ser, emb) in zip(gens, local):
                acc = [0] * nser
                for c, mono in zip(coeffs, monos):
                    if c:
                        acc = _ser_add(big, acc,
                                       _ser_scale(big, emb[c], ser[mono]))
                o = _ord_of(acc)
                assert o is not None, "valuation exceeded series precision"
                row.append(o)
                total += o * pl.degree
            if total == pole:
                rows.append(row)  # otherwise zeros escape the generators
        return lattice_index(rows, r)

    prev = order_at(mcap - 1)
    cur = order_at(mcap)
    if prev is None or cur is None or prev != cur:
        raise OracleUnstable(f"index did not stabilize: {prev} vs {cur}")
    return cur


def _monomial_series(curve, place, pole_x, pole_y, jmax, mcap, nser, config):
    """Local expansions (x(t), y(t)) and the series of each monomial."""
    F = curve.field
    big, emb = F.extension(place.degree, config)
    x0, y0 = place.data
    fbig = curve.poly.map_field(big, emb)

    if curve.kind == "artin-schreier":
        # etale over the x-line (d/dy of y^p - y is -1): t = x - x0
        xs = [x0, 1] + [0] * (nser - 2)
        fx = _poly_at_series(big, list(fbig.coeffs), xs, nser)
        ys = [y0] + [0] * (nser - 1)
        for _ in range(_newton_steps(F.p, nser)):
            # solving y^p - y = f: the map y -> y^p - f contracts errors
            ys = [big.sub(a, b)
                  for a, b in zip(_ser_frob_pow(big, ys, F.p, nser), fx)]
    elif y0 != 0:
        xs = [x0, 1] + [0] * (nser - 2)
        fx = _poly_at_series(big, list(fbig.coeffs), xs, nser)
        ys = [y0] + [0] * (nser - 1)
        inv2 = big.inv(2 % big.p)
        for _ in range(_newton_steps(2, nser)):
            ys = _ser_scale(big, inv2,
                            _ser_add(big, ys,
                                     _ser_mul(big, fx, _ser_inv(big, ys, nser),
                                              nser)))
    else:
        # branch point of the double cover: t = y, solve f(x(t)) = t^2
        t2 = [0, 0, 1] + [0] * (nser - 3)
        xs = [x0] + [0] * (nser - 1)
        fprime = fbig.derivative()
        for _ in range(_newton_steps(2, nser)):
            fx = _poly_at_series(big, list(fbig.coeffs), xs, nser)
            fpx = _poly_at_series(big, list(fprime.coeffs), xs, nser)
            err = [big.sub(a, b) for a, b in zip(fx, t2)]
            corr = _ser_mul(big, err, _ser_inv(big, fpx, nser), nser)
            xs = [big.sub(a, b) for a, b in zip(xs, corr)]
        ys = [0, 1] + [0] * (nser - 2)

    series = {}
    xpow = [1] + [0] * (nser - 1)
    for i in range(mcap // pole_x + 1):
        ypow = xpow
        for j in range(jmax):
            if pole_x * i + pole_y * j <= mcap:
                series[(i, j)] = ypow
            ypow = _ser_mul(big, ypow, ys, nser)
        xpow = _ser_mul(big, xpow, xs, nser)
    return big, series, emb
