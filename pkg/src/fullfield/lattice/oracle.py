"""Brute-force fixture oracle on the rank-1 lattice model.

Derives, exactly:

* the fusing-tensor entry relating product and iterate expansions of abelian
  four-point functions (``derive_f_entry``),
* the canonical-basis gauge: module maps, their skew images on (a, e)
  spaces, and vacuum-channel bases normalized by the residue extraction
  identity (the z^-1 coefficient of the dressed two-point insertion equals
  the contragredient pairing),
* a complete self-consistent Z/2k data bundle (``emit_bundle``), whose
  S3-action matrices are produced by the constraint solver seeded with the
  derived fusing tensor.

All comparisons are series-level with exact coefficients; a ratio is accepted
only when it is stable across at least ``MIN_MATCHES`` independent entries.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from fullfield.bundles import Bundle
from fullfield.cyclotomic import CycField, CycScalar
from fullfield.fusion import FusionData
from fullfield.lattice.model import LatticeModel, LatticeSpec

MIN_MATCHES = 3


class OracleError(RuntimeError):
    """A derived ratio was absent or unstable across matrix elements."""


def _frac_binom(gamma: Fraction, t: int) -> Fraction:
    out = Fraction(1)
    for i in range(t):
        out *= (gamma - i) / (i + 1)
    return out


def _series_ratio(field: CycField, num: dict, den: dict) -> CycScalar:
    if set(num) != set(den):
        only_n = set(num) - set(den)
        only_d = set(den) - set(num)
        raise OracleError(f"series supports differ: extra {only_n or only_d}")
    if len(den) < MIN_MATCHES:
        raise OracleError(f"only {len(den)} matrix elements, need {MIN_MATCHES}")
    ratio = None
    for key, dval in den.items():
        r = num[key] / dval
        if ratio is None:
            ratio = r
        elif ratio != r:
            raise OracleError(f"unstable ratio at {key}: {r} vs {ratio}")
    return ratio


def _acc_scalar(d: dict, key, val) -> None:
    cur = d.get(key)
    tot = val if cur is None else cur + val
    if tot:
        d[key] = tot
    elif cur is not None:
        del d[key]


class CanonicalGauge:
    """Canonical-basis scalars on top of the raw exponential operators.

    * (e, a) spaces carry the module maps themselves,
    * (a, e) spaces carry the skew image e^{xL(-1)} Y(., -x) of the module
      map (weight shift zero, so no branch phase is involved),
    * (a, a') spaces are normalized by the residue extraction identity,
    * all other spaces keep the raw exponential basis.
    """

    def __init__(self, model: LatticeModel, field: CycField, T: int = 6):
        self.model = model
        self.field = field
        self.T = T
        self.g: dict[tuple[int, int], CycScalar] = {}
        two_k = model.two_k
        for i in range(two_k):
            self.g[(0, i)] = field.one()
        for i in range(1, two_k):
            self.g[(i, 0)] = self._skew_of_module_map(i)
        for i in range(1, two_k):
            jp = (-i) % two_k
            self.g[(i, jp)] = self.residue_normalizer(jp).inverse()
        for i in range(two_k):
            for j in range(two_k):
                self.g.setdefault((i, j), field.one())
        if self.g[(0, 0)] != field.one():
            raise OracleError("vacuum gauge is not 1")

    def gauge(self, i: int, j: int) -> CycScalar:
        return self.g[(i % self.model.two_k, j % self.model.two_k)]

    def _skew_of_module_map(self, i: int) -> CycScalar:
        """Scalar with e^{xL(-1)} Y_W(., e^{pi i} x)|swapped = scalar * raw_(i,0).

        The (i, 0) space has integer operator exponents, so the half
        monodromy is the plain sign (-1)^exponent.
        """
        m, field, T = self.model, self.field, self.T
        num: dict = {}
        den: dict = {}
        pairs = [(m.lowest(i), m.vacuum()),
                 (m.lowest(i), {((2,), 0): Fraction(1)}),
                 (m.alpha(-1, m.lowest(i)), m.vacuum())]
        for tag, (w1, w2) in enumerate(pairs):
            wt1, wt2 = m.vec_weight(w1), m.vec_weight(w2)
            comps = m.components(w2, w1, T)  # module map acts with the V side first
            for mm, vec in comps.items():
                gamma = mm - wt1 - wt2
                assert gamma == int(gamma)
                sign = Fraction(-1) ** int(gamma)
                term = vec
                fact = Fraction(1)
                ell = 0
                while term:
                    for key, c in term.items():
                        _acc_scalar(num, (tag, gamma + ell, key),
                                    (c * sign / fact) * field.one())
                    ell += 1
                    fact *= ell
                    term = m.virasoro(-1, term, T)
            comps2 = m.components(w1, w2, T)
            for mm, vec in comps2.items():
                for key, c in vec.items():
                    _acc_scalar(den, (tag, mm - wt1 - wt2, key), c * field.one())
        cap = Fraction(T) - m.sector_weight(i) - 3
        num = {k: v for k, v in num.items() if k[1] <= cap}
        den = {k: v for k, v in den.items() if k[1] <= cap}
        return _series_ratio(self.field, num, den)

    def residue_normalizer(self, a: int) -> CycScalar:
        """Scalar lam with the raw (a', a) extraction equal to lam * <w', w>.

        The canonical vacuum-channel basis is raw/lam; stability is required
        across three independent state pairs.
        """
        m, field, T = self.model, self.field, self.T + 2
        h = m.sector_weight(a)
        q = m.min_rep(a)
        ratios = []
        for dress in range(4):
            w = m.charged(q)
            wp = m.charged(-q)
            if dress == 1:
                w = m.alpha(-1, w)
                wp = m.alpha(-1, wp)
            elif dress == 2:
                w = m.alpha(-2, w)
                wp = m.alpha(-2, wp)
            elif dress == 3:
                w = m.alpha(-1, m.alpha(-1, w))
                wp = m.alpha(-1, m.alpha(-1, wp))
            wt = m.exp_virasoro(1, Fraction(-1), w, T)
            wtp = m.exp_virasoro(1, Fraction(-1), wp, T)
            expect = m.pair(wp, w)
            if not expect:
                continue
            pieces: dict[Fraction, dict] = {}
            for key, c in wtp.items():
                pieces.setdefault(m.state_weight(key), {})[key] = c
            total = Fraction(0)
            for u1, p1 in pieces.items():
                exc = u1 - h
                assert exc == int(exc)
                sign = (-1) ** int(exc)
                vec0 = m.components(p1, wt, T).get(Fraction(0))
                if vec0:
                    c0 = vec0.get(((), 0))
                    if c0:
                        total += sign * c0
            ratios.append(Fraction(total, expect))
        if len(ratios) < MIN_MATCHES:
            raise OracleError(f"residue normalization for sector {a} lacks data")
        if any(r != ratios[0] for r in ratios):
            raise OracleError(f"residue normalization unstable for sector {a}: {ratios}")
        if ratios[0] == 0:
            raise OracleError(f"vanishing residue normalization for sector {a}")
        return field.rational(ratios[0])


# -- raw fusing ratio via the four-point pattern fit -------------------------


def raw_f_ratio(model: LatticeModel, b1: int, b2: int, b3: int, T: int) -> Fraction:
    """The scalar relating raw product and iterate expansions, exactly.

    Lowest-weight four-point functions are pure prefactor monomials
    c * z1^C1 * z2^C2 * (z1-z2)^C3; each side's truncated grid is fitted
    against its binomial expansion pattern and the two normalizations are
    compared.  Several representative choices must agree.
    """
    ratios = []
    base = (model.min_rep(b1), model.min_rep(b2), model.min_rep(b3))
    got = _fit_f(model, *base, T)
    if got is not None:
        ratios.append(got)
    for slot in range(3):
        # shift one representative by a lattice vector, away from the origin's
        # opposite side so the weights stay inside the truncation
        for direction in (-1, 1):
            qs = list(base)
            qs[slot] += 2 * model.k * direction
            got = _fit_f(model, qs[0], qs[1], qs[2], T)
            if got is not None:
                ratios.append(got)
                break
    if len(ratios) < MIN_MATCHES:
        raise OracleError(
            f"only {len(ratios)} usable four-point fits for sectors ({b1},{b2},{b3})")
    if any(r != ratios[0] for r in ratios):
        raise OracleError(f"fusing ratio unstable across representatives: {ratios}")
    return ratios[0]


def _fit_f(model: LatticeModel, q1: int, q2: int, q3: int, T: int) -> Fraction | None:
    two_k = model.two_k
    wu = Fraction(q1 * q1, 2 * two_k)
    wv = Fraction(q2 * q2, 2 * two_k)
    ww = Fraction(q3 * q3, 2 * two_k)
    c1 = Fraction(q1 * q3, two_k)
    c2 = Fraction(q2 * q3, two_k)
    c3 = Fraction(q1 * q2, two_k)
    out_key = ((), q1 + q2 + q3)
    u, v, w = model.charged(q1), model.charged(q2), model.charged(q3)
    if max(wu, wv, ww, model.state_weight(out_key)) > T - 2:
        return None

    prod: dict[tuple[Fraction, Fraction], Fraction] = {}
    inner = model.components(v, w, T)
    for m2, vec2 in inner.items():
        outer = model.components(u, vec2, T)
        for m1, vec1 in outer.items():
            coeff = vec1.get(out_key)
            if coeff:
                prod[(m1 - wu - m2, m2 - wv - ww)] = coeff
    cp = _fit_pattern(prod, base=(c1 + c3, c2), gamma=c3, alternating=True)
    if cp is None:
        raise OracleError(
            f"product grid does not match the prefactor pattern at q=({q1},{q2},{q3})")

    iterate: dict[tuple[Fraction, Fraction], Fraction] = {}
    inner_i = model.components(u, v, T)
    for m, vecm in inner_i.items():
        outer = model.components(vecm, w, T)
        for mp, vec1 in outer.items():
            coeff = vec1.get(out_key)
            if coeff:
                iterate[(m - wu - wv, mp - m - ww)] = coeff
    ci = _fit_pattern(iterate, base=(c3, c1 + c2), gamma=c1, alternating=False)
    if ci is None:
        raise OracleError(
            f"iterate grid does not match the prefactor pattern at q=({q1},{q2},{q3})")
    return cp / ci


def _fit_pattern(grid: dict, base: tuple[Fraction, Fraction], gamma: Fraction,
                 alternating: bool) -> Fraction | None:
    """Fit grid == c * binom(gamma, t) * (-1 if alternating)^t.

    The product side expands (1 - z2/z1)^gamma, so its terms alternate at
    grid points (base1 - t, base2 + t); the iterate side expands
    (1 + x/z2)^gamma at (base1 + t, base2 - t) without the sign.
    """
    if not grid:
        return None
    lead = grid.get(base)
    if not lead:
        return None
    c = lead  # binom(gamma, 0) = 1
    step = -1 if alternating else 1
    for (e1, e2), val in grid.items():
        t = (e2 - base[1]) if alternating else (e1 - base[0])
        if t < 0 or t != int(t):
            return None
        if alternating and e1 != base[0] - t:
            return None
        if not alternating and e2 != base[1] + t * (-1):
            return None
        expect = c * _frac_binom(gamma, int(t)) * step ** int(t)
        if val != expect:
            return None
    return c


# -- public oracle API --------------------------------------------------------


def field_for(k: int) -> CycField:
    return CycField(8 * k)


def sector_labels(k: int) -> list[str]:
    return [str(j) for j in range(2 * k)]


def derive_f_entry(spec: LatticeSpec, labels: tuple[int, ...], T: int | None = None,
                   gauge: CanonicalGauge | None = None) -> CycScalar:
    """Exact fusing-tensor entry for the canonical-gauged Z/2k bundle basis.

    ``labels`` is the six-tuple (b1, b5, b4, b2, b3, b6) of sectors; it must
    be channel-consistent for the group law, i.e. b5 = b2+b3, b4 = b1+b5,
    b6 = b1+b2.
    """
    T = T if T is not None else max(spec.truncation, 8)
    if gauge is None:
        gauge = CanonicalGauge(LatticeModel(spec.k), field_for(spec.k), T=6)
    model = gauge.model
    two_k = model.two_k
    b1, b5, b4, b2, b3, b6 = (x % two_k for x in labels)
    if b5 != (b2 + b3) % two_k or b4 != (b1 + b5) % two_k or b6 != (b1 + b2) % two_k:
        raise ValueError(f"label tuple {labels} is not channel-consistent for Z/{two_k}")
    raw = raw_f_ratio(model, b1, b2, b3, T)
    g = (gauge.gauge(b1, b5) * gauge.gauge(b2, b3)
         / gauge.gauge(b6, b3) / gauge.gauge(b1, b2))
    return raw * g


def lattice_fusion(k: int) -> FusionData:
    model = LatticeModel(k)
    labels = sector_labels(k)
    two_k = 2 * k

    def lab(x: int) -> str:
        return labels[x % two_k]

    return FusionData(
        labels=tuple(labels),
        unit=labels[0],
        dual={lab(j): lab(-j) for j in range(two_k)},
        weights={lab(j): model.sector_weight(j) for j in range(two_k)},
        rules={(lab(i), lab(j), lab(i + j)): 1
               for i in range(two_k) for j in range(two_k)},
    )


def emit_bundle(spec: LatticeSpec, seed: int | None = None) -> Bundle:
    """The complete Z/2k chiral-data bundle in the canonical gauge.

    The fusing tensor comes from the four-point oracle; the S3 action comes
    from the constraint solver pinned to the canonical bases.
    """
    from fullfield.solver import solve_sigma

    model = LatticeModel(spec.k)
    field = field_for(spec.k)
    two_k = model.two_k
    T = max(min(spec.truncation, 10), 8)
    gauge = CanonicalGauge(model, field, T=6)
    labels = sector_labels(spec.k)
    fusion = lattice_fusion(spec.k)

    def lab(x: int) -> str:
        return labels[x % two_k]

    f: dict = {}
    for b1 in range(two_k):
        for b2 in range(two_k):
            for b3 in range(two_k):
                key_int = (b1, (b2 + b3) % two_k, (b1 + b2 + b3) % two_k,
                           b2, b3, (b1 + b2) % two_k)
                val = derive_f_entry(spec, key_int, T=T, gauge=gauge)
                key6 = tuple(lab(x) for x in key_int)
                f[(key6, (0, 0, 0, 0))] = val

    canonical = {}
    for a in range(two_k):
        canonical[(lab(0), lab(a), lab(a))] = 0
        canonical[(lab(a), lab(0), lab(a))] = 0
        canonical[(lab(a), lab(-a), lab(0))] = 0

    sigma12, sigma23 = solve_sigma(field, fusion, f)

    provenance = {
        "generator": "lattice-oracle",
        "k": spec.k,
        "truncation": T,
        "version": "0.1.0",
    }
    if seed is not None:
        provenance["seed"] = seed
    return Bundle(field=field, fusion=fusion, f=f, sigma12=sigma12, sigma23=sigma23,
                  canonical=canonical, provenance=provenance)
