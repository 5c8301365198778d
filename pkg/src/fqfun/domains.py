"""Rings of functions regular away from one closed point, and their class
groups.

A domain here is a pair (C, x): a supported curve model and a place on it.
The order of the class group of the coordinate ring B = functions regular on
C - {x} satisfies h_B = h_K * deg(x), where h_K is the class number of the
function field: divisor classes supported at x alone are trivial in degree
zero, and the degree map identifies the cokernel with Z/deg(x).  The
independent enumeration check of that formula lives in oracle.py.

search_rigid_domains scans every supported model family of genus up to
genus_max whose enumeration fits under the guard and returns the domains
with h_B = 1, split into the genus-0 "standard" entry and the "exceptional"
genus >= 1 entries, deduplicated by (genus, zeta numerator, place degree).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from .config import DEFAULT_CONFIG, RunConfig
from .fields import field_from_order
from .polys import Poly, is_irreducible, is_squarefree
from .curves import (CurveModel, Place, class_number, count_points,
                     places_of_degree, projective_line, zeta_numerator, INF)


class DrinfeldianDomain:
    """A curve together with a closed point; the ring it denotes is the
    functions regular away from that point."""

    def __init__(self, curve, place, config=None):
        self.curve = curve
        self.place = place
        self._validate(config)

    def _validate(self, config):
        c, pl = self.curve, self.place
        F = c.field
        if c.kind == "projective-line":
            if pl.kind == "infinity":
                if pl.data != (INF, 0) or pl.degree != 1:
                    raise ValueError("bad infinite place for the line")
                return
            f = Poly(F, pl.data)
            if not (f.is_monic() and f.degree == pl.degree
                    and is_irreducible(f)):
                raise ValueError("place of the line must be monic irreducible")
            return
        # all other models: the place must occur in the canonical list
        if pl not in places_of_degree(c, pl.degree, config):
            raise ValueError(f"{pl} does not lie on {c}")

    def __repr__(self):
        return f"DrinfeldianDomain({self.curve}, {self.place})"


@dataclass(frozen=True)
class ClassGroupReport:
    h_K: int
    deg_x: int
    h_B: int
    d1_order: int
    d2_order: int


def class_group_of_domain(domain, config=None):
    """Class group order of B via h_B = h_K * deg(x).

    No nonzero degree-zero divisor is supported on the single point x, so
    the degree-zero classes inject into Cl(B); the cokernel is cyclic of
    order deg(x), detected by total degree.
    """
    h_K = class_number(domain.curve, config)
    d = domain.place.degree
    return ClassGroupReport(h_K=h_K, deg_x=d, h_B=h_K * d,
                            d1_order=1, d2_order=d)


def is_uniformizationally_rigid(domain, config=None):
    """True iff Cl(B) is trivial, i.e. h_K = 1 and deg(x) = 1."""
    return class_group_of_domain(domain, config).h_B == 1


# ---------------------------------------------------------------------------
# exhaustive search over supported model families

@dataclass
class FamilyDesc:
    kind: str
    genus: int
    param: int          # degree of f, or plane degree
    candidates: int
    cost: int           # estimated enumeration size, checked against the guard
    searched: bool
    note: str = ""

    def to_dict(self):
        return {"kind": self.kind, "genus": self.genus, "param": self.param,
                "candidates": self.candidates, "cost": self.cost,
                "searched": self.searched, "note": self.note}


@dataclass
class SearchEntry:
    q: int
    kind: str
    genus: int
    model: CurveModel
    place: Place
    zeta: tuple
    h_K: int
    deg_x: int
    h_B: int
    models_found: int = 1

    def key(self):
        return (self.genus, self.zeta, self.deg_x)

    def to_dict(self):
        if self.model.kind == "smooth-plane":
            poly = list(self.model.plane_coeffs)
        elif self.model.poly is not None:
            poly = list(self.model.poly.coeffs)
        else:
            poly = []
        place = {"degree": self.place.degree, "kind": self.place.kind,
                 "data": list(self.place.data)}
        return {"q": self.q, "kind": self.model.kind, "genus": self.genus,
                "poly": poly, "place": place, "zeta": list(self.zeta),
                "h_K": self.h_K, "deg_x": self.deg_x, "h_B": self.h_B,
                "models_found": self.models_found}


@dataclass
class SearchResult:
    q: int
    genus_max: int
    standard: list
    exceptional: list
    families: list = dc_field(default_factory=list)

    def skipped_families(self):
        return [f for f in self.families if not f.searched]

    def to_dict(self):
        return {"q": self.q, "genus_max": self.genus_max,
                "standard": [e.to_dict() for e in self.standard],
                "exceptional": [e.to_dict() for e in self.exceptional],
                "families": [f.to_dict() for f in self.families]}


_KIND_ORDER = {"artin-schreier": 0, "hyperelliptic": 1,
               "projective-line": 2, "smooth-plane": 3}


def _families_for(q, genus_max, field, guard):
    """Model families of each genus 1..genus_max, with cost accounting."""
    p = field.p
    fams = []
    for g in range(1, genus_max + 1):
        if p != 2:
            for deg in (2 * g + 1, 2 * g + 2):
                cand = 2 * q**deg  # leading coeff up to squares: two classes
                fams.append(FamilyDesc("hyperelliptic", g, deg, cand, cand,
                                       cand <= guard,
                                       "" if cand <= guard else "guard"))
        if (2 * g) % (p - 1) == 0 or p == 2:
            deg = 2 * g + 1 if p == 2 else 2 * g // (p - 1) + 1
            if deg >= 2 and deg % p != 0:
                cand = (q - 1) * q ** deg
                fams.append(FamilyDesc("artin-schreier", g, deg, cand, cand,
                                       cand <= guard,
                                       "" if cand <= guard else "guard"))
        d = 3
        while (d - 1) * (d - 2) // 2 < g:
            d += 1
        if (d - 1) * (d - 2) // 2 == g:
            nmon = (d + 1) * (d + 2) // 2
            cand = q**nmon
            smooth_pts = sum(q ** (2 * k) + q**k + 1
                             for k in range(1, min((d - 1) ** 2, 2 * d) + 1))
            cost = cand * smooth_pts
            fams.append(FamilyDesc("smooth-plane", g, d, cand, cost,
                                   cost <= guard,
                                   "" if cost <= guard else "guard"))
    return fams


def _iter_hyperelliptic(field, deg, lo, hi):
    """Candidates lo..hi: f = lc * monic, lc over the two square classes."""
    q = field.q
    nonsq = next(a for a in range(1, q) if not field.is_square(a))
    for m in range(lo, hi):
        lead = 1 if m < q**deg else nonsq
        mm = m % (q**deg)
        coeffs = []
        for _ in range(deg):
            coeffs.append(mm % q)
            mm //= q
        coeffs.append(lead)
        yield coeffs


def _iter_artin_schreier(field, deg, lo, hi):
    q = field.q
    for m in range(lo, hi):
        lead = 1 + m // (q**deg)
        mm = m % (q**deg)
        coeffs = []
        for _ in range(deg):
            coeffs.append(mm % q)
            mm //= q
        coeffs.append(lead)
        yield coeffs


def _scan_chunk(args):
    """Worker: return raw hit coefficient lists with h = 1 in one range."""
    (q, kind, deg, genus, lo, hi, guard) = args
    field = field_from_order(q)
    cfg = RunConfig(guard=guard)
    hits = []
    it = (_iter_hyperelliptic(field, deg, lo, hi) if kind == "hyperelliptic"
          else _iter_artin_schreier(field, deg, lo, hi))
    for coeffs in it:
        f = Poly(field, coeffs)
        if kind == "hyperelliptic" and not is_squarefree(f):
            continue
        curve = CurveModel(field, kind, poly=f)
        n1 = count_points(curve, 1, cfg)
        if n1 < 1:
            continue
        if genus == 1:
            if n1 != 1:  # h = N_1 in genus 1
                continue
        else:
            a1 = n1 - q - 1
            # h = 1 pins a_2; prune when the pinned value violates |a_2|<=6q
            if abs(-(q * q) - (1 + q) * a1) > 6 * q:
                continue
            n2 = count_points(curve, 2, cfg)
            s1, s2 = -a1, q * q + 1 - n2
            if (s1 * s1 - s2) % 2:
                continue
            a2 = (s1 * s1 - s2) // 2
            if a2 != -(q * q) - (1 + q) * a1:
                continue
        z = zeta_numerator(curve, cfg)
        if z.value_at_one() == 1:
            hits.append((kind, tuple(coeffs), tuple(z.coeffs)))
    return hits


def _scan_plane_family(field, d, config):
    """All smooth plane degree-d models with h = 1 (small q only)."""
    q = field.q
    nmon = (d + 1) * (d + 2) // 2
    hits = []
    for m in range(q**nmon):
        coeffs = []
        mm = m
        for _ in range(nmon):
            coeffs.append(mm % q)
            mm //= q
        if not any(coeffs):
            continue
        try:
            curve = CurveModel(field, "smooth-plane", plane_coeffs=coeffs,
                               config=config)
        except ValueError:
            continue  # singular model: not in the family
        if curve.genus < 1:
            continue
        n1 = count_points(curve, 1, config)
        if n1 < 1 or (curve.genus == 1 and n1 != 1):
            continue
        z = zeta_numerator(curve, config)
        if z.value_at_one() == 1:
            hits.append(("smooth-plane", tuple(coeffs), tuple(z.coeffs)))
    return hits


def _hit_sort_key(hit):
    kind, coeffs, _zeta = hit
    if kind == "smooth-plane":
        return (_KIND_ORDER[kind], coeffs)
    # poly models: canonical polynomial order (leading coeff first)
    return (_KIND_ORDER[kind], tuple(reversed(coeffs)))


def search_rigid_domains(q, genus_max=2, config=None, workers=None):
    """All domains with trivial class group over the searched families."""
    cfg = config or DEFAULT_CONFIG
    nworkers = workers or cfg.workers
    field = field_from_order(q, cfg)
    line = projective_line(field)
    std_place = places_of_degree(line, 1, cfg)[0]
    standard = [SearchEntry(q=q, kind="projective-line", genus=0, model=line,
                            place=std_place, zeta=(1,), h_K=1, deg_x=1, h_B=1,
                            models_found=q + 1)]

    fams = _families_for(q, genus_max, field, cfg.guard)
    raw_hits = []
    jobs = []
    for fam in fams:
        if not fam.searched:
            continue
        if fam.kind == "smooth-plane":
            raw_hits.extend(_scan_plane_family(field, fam.param, cfg))
            continue
        genus = fam.genus
        total = fam.candidates
        step = max(1, total // max(1, nworkers))
        lo = 0
        while lo < total:
            hi = min(total, lo + step)
            jobs.append((q, fam.kind, fam.param, genus, lo, hi, cfg.guard))
            lo = hi
    if nworkers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            for part in pool.map(_scan_chunk, jobs):
                raw_hits.extend(part)
    else:
        for job in jobs:
            raw_hits.extend(_scan_chunk(job))

    entries = {}
    for kind, coeffs, zeta in sorted(raw_hits, key=_hit_sort_key):
        if kind == "smooth-plane":
            curve = CurveModel(field, kind, plane_coeffs=coeffs, config=cfg)
        else:
            curve = CurveModel(field, kind, poly=Poly(field, coeffs))
        genus = curve.genus
        key = (genus, zeta, 1)
        if key in entries:
            entries[key].models_found += 1
            continue
        place = places_of_degree(curve, 1, cfg)[0]
        entries[key] = SearchEntry(q=q, kind=kind, genus=genus, model=curve,
                                   place=place, zeta=zeta, h_K=1, deg_x=1,
                                   h_B=1)

    def entry_key(e):
        ck = (tuple(reversed(e.model.poly.coeffs)) if e.model.poly is not None
              else e.model.data_key())
        return (e.genus, _KIND_ORDER[e.kind], ck)

    exceptional = sorted(entries.values(), key=entry_key)
    return SearchResult(q=q, genus_max=genus_max, standard=standard,
                        exceptional=exceptional, families=fams)
