"""Exact truncated Fock-space engine for the rank-1 lattice model.

States are dictionaries keyed by ``(parts, q)`` where ``parts`` is a
descending tuple of positive integers (Heisenberg creation modes alpha(-n))
and ``q`` an integer lattice point meaning q*alpha/(2k).  The weight of a
basis state is q^2/(4k) + sum(parts).  All state coefficients in this module
are exact Fractions; phases enter only in the scalar-derivation layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

StateKey = tuple[tuple[int, ...], int]
FockVector = dict  # StateKey -> coefficient


@dataclass(frozen=True)
class LatticeSpec:
    """Parameters of a lattice run: Z*alpha with <alpha,alpha> = 2k, cutoff T."""

    k: int
    truncation: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.truncation < 1:
            raise ValueError("truncation must be a positive integer")


def _partitions(budget: int):
    """All partitions (descending tuples) of total <= budget, incl. ()."""
    out = [()]
    def rec(prefix, maxpart, left):
        for p in range(min(maxpart, left), 0, -1):
            cur = prefix + (p,)
            out.append(cur)
            rec(cur, p, left - p)
    rec((), budget, budget)
    return out


class LatticeModel:
    """Operator engine for one value of k, with component caching."""

    def __init__(self, k: int):
        self.k = k
        self.two_k = 2 * k
        self._comp_cache: dict = {}

    # -- sectors and weights -------------------------------------------------

    def sector(self, q: int) -> int:
        return q % self.two_k

    def sector_weight(self, j: int) -> Fraction:
        j = j % self.two_k
        return Fraction(min(j, self.two_k - j) ** 2, 4 * self.k)

    def min_rep(self, j: int) -> int:
        """Lattice point of minimal norm in sector j, in (-k, k]."""
        j = j % self.two_k
        return j if j <= self.k else j - self.two_k

    def state_weight(self, key: StateKey) -> Fraction:
        parts, q = key
        return Fraction(q * q, 4 * self.k) + sum(parts)

    def vec_weight(self, vec: FockVector) -> Fraction:
        """Weight of a homogeneous vector (raises if mixed)."""
        weights = {self.state_weight(key) for key in vec}
        if len(weights) != 1:
            raise ValueError(f"not homogeneous: weights {sorted(weights)}")
        return weights.pop()

    def lowest(self, j: int) -> FockVector:
        return {((), self.min_rep(j)): Fraction(1)}

    def vacuum(self) -> FockVector:
        return {((), 0): Fraction(1)}

    def charged(self, q: int) -> FockVector:
        return {((), q): Fraction(1)}

    # -- cocycle --------------------------------------------------------------

    def eps(self, q1: int, q2: int) -> int:
        """Sign making the exponential operators an intertwiner family.

        The requirements are the commutator sign against the even sublattice
        and the cocycle identity anchored on it; both hold for the floor form
        below, and the product/iterate comparison then descends to sectors.
        """
        return -1 if (q2 * (q1 // self.two_k)) % 2 else 1

    def pair_norm(self, q: int) -> int:
        """Lattice-part normalization of the contragredient pairing."""
        return -1 if (self.k * (q // self.two_k)) % 2 else 1

    # -- basic operators -------------------------------------------------------

    def alpha(self, n: int, vec: FockVector) -> FockVector:
        out: FockVector = {}
        for (parts, q), c in vec.items():
            if n == 0:
                _acc(out, (parts, q), c * q)
            elif n < 0:
                newparts = tuple(sorted(parts + (-n,), reverse=True))
                _acc(out, (newparts, q), c)
            else:
                cnt = parts.count(n)
                if cnt:
                    idx = parts.index(n)
                    newparts = parts[:idx] + parts[idx + 1:]
                    _acc(out, (newparts, q), c * cnt * n * self.two_k)
        return out

    def virasoro(self, n: int, vec: FockVector, cap: Fraction | int | None = None) -> FockVector:
        """L(n) = (1/4k) sum_j :alpha(j) alpha(n-j):, truncated at weight cap."""
        out: FockVector = {}
        quarter = Fraction(1, 4 * self.k)
        for key, c in vec.items():
            parts, _q = key
            maxpart = parts[0] if parts else 0
            # unordered pairs (a, b), a <= b, a + b = n; annihilating side first
            b_lo = -((-n) // 2)  # ceil(n/2)
            for b in range(b_lo, maxpart + 1):
                a = n - b
                first = self.alpha(b, {key: c})
                if not first:
                    continue
                second = self.alpha(a, first)
                if not second:
                    continue
                mult = 1 if a == b else 2
                for k2, c2 in second.items():
                    if cap is not None and self.state_weight(k2) > cap:
                        continue
                    _acc(out, k2, c2 * quarter * mult)
        return {k2: v for k2, v in out.items() if v}

    def virasoro_power(self, n: int, times: int, vec: FockVector,
                       cap: Fraction | int | None = None) -> FockVector:
        for _ in range(times):
            vec = self.virasoro(n, vec, cap)
            if not vec:
                break
        return vec

    def exp_virasoro(self, n: int, scale: Fraction, vec: FockVector,
                     cap: Fraction | int) -> FockVector:
        """exp(scale * L(n)) for n = +-1, truncated at weight cap."""
        assert n in (1, -1)
        out: FockVector = dict(vec)
        term = vec
        fact = Fraction(1)
        ell = 0
        while term:
            ell += 1
            fact *= ell
            term = self.virasoro(n, term, cap)
            for key, c in term.items():
                _acc(out, key, c * scale ** ell / fact)
        return {key: c for key, c in out.items() if c}

    # -- contragredient pairing -------------------------------------------------

    def heis_norm(self, parts: tuple[int, ...]) -> int:
        norm = 1
        for p in set(parts):
            c = parts.count(p)
            for i in range(1, c + 1):
                norm *= i
            norm *= (p * self.two_k) ** c
        return norm

    def pair(self, functional: FockVector, vec: FockVector):
        """Contragredient pairing; first argument is the primed-module side."""
        total = None
        for (parts, qf), cf in functional.items():
            c2 = vec.get((parts, -qf))
            if c2 is None:
                continue
            sign = -1 if len(parts) % 2 else 1
            term = cf * c2 * (sign * self.heis_norm(parts) * self.pair_norm(-qf))
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def pair_rev(self, functional: FockVector, vec: FockVector):
        """Pairing with the lattice normalization keyed to the first argument."""
        total = None
        for (parts, qf), cf in functional.items():
            c2 = vec.get((parts, -qf))
            if c2 is None:
                continue
            sign = -1 if len(parts) % 2 else 1
            term = cf * c2 * (sign * self.heis_norm(parts) * self.pair_norm(qf))
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def dual_functional(self, key: StateKey) -> tuple[StateKey, Fraction]:
        """Functional key and scale s with <s * key', key> = 1."""
        parts, q = key
        sign = -1 if len(parts) % 2 else 1
        scale = Fraction(1, sign * self.heis_norm(parts) * self.pair_norm(q))
        return (parts, -q), scale

    # -- graded components of intertwining operators ----------------------------

    def components(self, u: FockVector, v: FockVector, T: int) -> dict[Fraction, FockVector]:
        """Graded components of Y(u, z)v, keyed by output weight <= T.

        The z-exponent of the weight-m component is m - wt(u) - wt(v).
        Bilinear over basis states, exact and cached.
        """
        out: dict[Fraction, FockVector] = {}
        for (mu, qu), cu in u.items():
            for (nu, qv), cv in v.items():
                base = self._components_basis(mu, qu, nu, qv, T)
                c = cu * cv
                for m, vec in base.items():
                    tgt = out.setdefault(m, {})
                    for key, coeff in vec.items():
                        _acc(tgt, key, c * coeff)
        return {m: {k: c for k, c in vec.items() if c}
                for m, vec in out.items() if any(vec.values())}

    def _components_basis(self, mu, qu, nu, qv, T) -> dict[Fraction, FockVector]:
        ck = (mu, qu, nu, qv, T)
        hit = self._comp_cache.get(ck)
        if hit is not None:
            return hit
        if mu:
            res = self._components_dressed(mu, qu, nu, qv, T)
        else:
            res = self._components_exp(qu, nu, qv, T)
        self._comp_cache[ck] = res
        return res

    def _components_dressed(self, mu, qu, nu, qv, T) -> dict[Fraction, FockVector]:
        # Y(alpha(-n)u0, z) = sum_{p>0} C(p-1,n-1) z^{p-n} alpha(-p) Y(u0, z)
        #   + (-1)^(n-1) sum_{m>=0} C(m+n-1,n-1) z^{-m-n} Y(u0, z) alpha(m)
        n = mu[0]
        rest = mu[1:]
        out: dict[Fraction, FockVector] = {}
        c0 = self._components_basis(rest, qu, nu, qv, T)
        for w, vec in c0.items():
            pmax = int(T - w)
            for p in range(1, pmax + 1):
                bc = comb(p - 1, n - 1)
                if not bc:
                    continue
                raised = self.alpha(-p, vec)
                tgt = out.setdefault(w + p, {})
                for key, c in raised.items():
                    _acc(tgt, key, c * bc)
        sign = -1 if (n - 1) % 2 else 1
        # m = 0 term: alpha(0) eigenvalue qv
        if qv:
            for w, vec in c0.items():
                tgt = out.setdefault(w, {})
                for key, c in vec.items():
                    _acc(tgt, key, c * sign * qv)
        for m in sorted(set(nu)):
            cnt = nu.count(m)
            idx = nu.index(m)
            reduced = nu[:idx] + nu[idx + 1:]
            coeff = sign * comb(m + n - 1, n - 1) * cnt * m * self.two_k
            cm = self._components_basis(rest, qu, reduced, qv, T)
            for w, vec in cm.items():
                tgt = out.setdefault(w, {})
                for key, c in vec.items():
                    _acc(tgt, key, c * coeff)
        return _clean(out)

    def _components_exp(self, qu, nu, qv, T) -> dict[Fraction, FockVector]:
        # Y(e^{qu}, z) on the basis state (nu, qv):
        #  1. annihilation conjugation alpha(-n) -> alpha(-n) - qu z^{-n},
        #  2. creation dressing exp(sum qu/(2k n) z^n alpha(-n)),
        #  3. cocycle sign, lattice shift; z-powers are weight bookkeeping.
        q_out = qu + qv
        base_w = Fraction(q_out * q_out, 4 * self.k)
        sign = self.eps(qu, qv)
        out: dict[Fraction, FockVector] = {}
        # expand annihilation-conjugated partition choices
        distinct = sorted(set(nu), reverse=True)
        counts = [nu.count(p) for p in distinct]
        choices = [[]]
        for p, c in zip(distinct, counts):
            choices = [prev + [t] for prev in choices for t in range(c + 1)]
        for pick in choices:
            kept: list[int] = []
            factor = Fraction(1)
            for p, c, t in zip(distinct, counts, pick):
                kept.extend([p] * (c - t))
                if t:
                    factor *= comb(c, t) * Fraction(-qu) ** t
            kept_t = tuple(sorted(kept, reverse=True))
            w0 = base_w + sum(kept_t)
            if w0 > T:
                continue
            budget = int(T - w0)
            for lam in _partitions(budget):
                cfac = factor
                for p in set(lam):
                    m = lam.count(p)
                    num = Fraction(qu, self.two_k * p) ** m
                    for i in range(1, m + 1):
                        num /= i
                    cfac *= num
                if not cfac:
                    continue
                parts = tuple(sorted(kept_t + lam, reverse=True))
                w = w0 + sum(lam)
                tgt = out.setdefault(w, {})
                _acc(tgt, (parts, q_out), cfac * sign)
        return _clean(out)


def _acc(d: dict, key, val) -> None:
    cur = d.get(key)
    if cur is None:
        if val:
            d[key] = val
    else:
        s = cur + val
        if s:
            d[key] = s
        else:
            del d[key]


def _clean(comps: dict) -> dict:
    return {m: {k: c for k, c in vec.items() if c}
            for m, vec in comps.items() if any(vec.values())}


def vec_add(a: FockVector, b: FockVector) -> FockVector:
    out = dict(a)
    for k, v in b.items():
        _acc(out, k, v)
    return out


def vec_scale(a: FockVector, s) -> FockVector:
    return {k: s * v for k, v in a.items() if s * v}


def chiral_io_apply(spec: LatticeSpec, lam: int, v: FockVector,
                    target_sector: int, model: LatticeModel | None = None):
    """Graded components of the charged insertion at lattice point ``lam``.

    ``lam`` is an integer point (units of alpha/2k).  A target sector not
    matching the group law is the zero operator: the empty component map.
    """
    model = model or LatticeModel(spec.k)
    sectors = {model.sector(key[1]) for key in v}
    if len(sectors) != 1:
        raise ValueError("the argument must be sector homogeneous")
    if (model.sector(lam) + sectors.pop() - target_sector) % model.two_k:
        return {}
    return model.components(model.charged(lam), v, spec.truncation)
