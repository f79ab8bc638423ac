"""Exact arithmetic in a fixed cyclotomic field Q(zeta_N).

Every structure constant in a data bundle lives in one cyclotomic field whose
order N is declared once.  Scalars are stored in the power basis
``1, z, ..., z^(phi(N)-1)`` (z a primitive N-th root of unity) with Fraction
coefficients, reduced modulo the N-th cyclotomic polynomial after every
operation, so equality is literal comparison of coefficient maps.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath


class FieldOrderError(ValueError):
    """Raised for invalid field orders or cross-field arithmetic."""


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return out


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, den monic-leading or +-1 lead.
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c % lead:
            raise ArithmeticError("non-exact polynomial division")
        q = c // lead
        quot[i - dn] = q
        if q:
            for j, cd in enumerate(den):
                num[i - dn + j] -= q * cd
    if any(num[:dn]):
        raise ArithmeticError("non-exact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, index = degree."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _euler_phi(n: int) -> int:
    return sum(1 for j in range(1, n + 1) if gcd(j, n) == 1)


class CycField:
    """The field Q(zeta_N) with precomputed reduction data.

    All scalars produced by one instance share it; mixing scalars from fields
    of different order raises :class:`FieldOrderError`.
    """

    def __init__(self, order: int):
        if order < 2 or order % 2:
            raise FieldOrderError(f"field order must be a positive even integer, got {order}")
        self.order = order
        phi = cyclotomic_polynomial(order)
        self.degree = len(phi) - 1
        assert self.degree == _euler_phi(order)
        # x^k in the power basis, for k = degree .. order-1
        self._reduce_pow: dict[int, tuple[int, ...]] = {}
        rep = [-c for c in phi[: self.degree]]  # x^degree
        self._reduce_pow[self.degree] = tuple(rep)
        for k in range(self.degree + 1, order):
            shifted = [0] + rep[:-1]
            top = rep[-1]
            if top:
                for e in range(self.degree):
                    shifted[e] += top * self._reduce_pow[self.degree][e]
            rep = shifted
            self._reduce_pow[k] = tuple(rep)
        self._embed_inverse = None
        self._sqrt_cache: dict = {}

    # -- constructors ------------------------------------------------------

    def scalar(self, coeffs: dict[int, Fraction | int] | None = None) -> "CycScalar":
        raw: dict[int, Fraction] = {}
        for e, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                raw[e % self.order] = raw.get(e % self.order, Fraction(0)) + c
        return CycScalar(self, self._reduce(raw))

    def zero(self) -> "CycScalar":
        return CycScalar(self, {})

    def one(self) -> "CycScalar":
        return CycScalar(self, {0: Fraction(1)})

    def rational(self, q) -> "CycScalar":
        q = Fraction(q)
        return CycScalar(self, {0: q} if q else {})

    def zeta(self, k: int = 1) -> "CycScalar":
        return self.scalar({k: 1})

    def root_of_unity(self, p: int, q: int) -> "CycScalar":
        """The exact value of exp(pi*i*p/q), requiring 2q | N."""
        if q <= 0:
            raise FieldOrderError(f"root_of_unity needs q > 0, got {q}")
        if self.order % (2 * q):
            raise FieldOrderError(
                f"exp(pi*i*{p}/{q}) needs 2*{q} | field order, got order {self.order}"
            )
        return self.zeta((self.order * p) // (2 * q) % self.order)

    # -- internals ---------------------------------------------------------

    def _reduce(self, raw: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for e, c in raw.items():
            if not c:
                continue
            if e < self.degree:
                out[e] = out.get(e, Fraction(0)) + c
            else:
                for b, rc in enumerate(self._reduce_pow[e]):
                    if rc:
                        out[b] = out.get(b, Fraction(0)) + c * rc
        return {e: c for e, c in out.items() if c}

    def _check(self, other: "CycScalar") -> None:
        if other.field.order != self.order:
            raise FieldOrderError(
                f"mixed field orders {self.order} and {other.field.order}"
            )

    # -- numeric embedding and square roots --------------------------------

    def embed(self, a: "CycScalar", precision: int = 17) -> mpmath.mpc:
        """Complex value of ``a`` to ``precision`` decimal digits."""
        if precision < 1:
            raise ValueError("precision must be >= 1")
        self._check(a)
        with mpmath.workdps(precision + 15):
            val = mpmath.mpc(0)
            for e, c in a.coeffs.items():
                val += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(
                    mpmath.mpf(2 * e) / self.order
                )
            return mpmath.mpc(val)

    def sqrt(self, a: "CycScalar") -> "CycScalar | None":
        """Principal square root of ``a`` if it lies in the field, else None.

        Principal means the embedding has argument in [0, pi), matching the
        convention sqrt(|w|) * exp(i*arg(w)/2) with arg(w) in [0, 2*pi).
        """
        self._check(a)
        if not a.coeffs:
            return self.zero()
        if a in self._sqrt_cache:
            return self._sqrt_cache[a]
        got = self._sqrt_uncached(a)
        self._sqrt_cache[a] = got
        return got

    def _sqrt_uncached(self, a: "CycScalar") -> "CycScalar | None":
        units = [j for j in range(1, self.order) if gcd(j, self.order) == 1]
        d = self.degree
        with mpmath.workdps(60):
            conj_a = {j: self._embed_conj(a, j) for j in units}
            # Solve M c = v for each admissible sign pattern on the free
            # conjugate-pair representatives; sign at j=1 fixed to principal.
            reps = [j for j in units if j <= self.order - j]
            frees = [j for j in reps if j != 1]
            if self._embed_inverse is None:
                m_rows = [[mpmath.expjpi(mpmath.mpf(2 * j * e) / self.order)
                           for e in range(d)] for j in units]
                self._embed_inverse = mpmath.inverse(mpmath.matrix(m_rows))
            minv = self._embed_inverse
            for bits in range(1 << len(frees)):
                v: dict[int, mpmath.mpc] = {}
                v[1] = _principal_sqrt(conj_a[1])
                for t, j in enumerate(frees):
                    s = 1 if (bits >> t) & 1 == 0 else -1
                    v[j] = s * _principal_sqrt(conj_a[j])
                for j in reps:
                    other = (self.order - j) % self.order
                    if other in units and other not in v:
                        v[other] = mpmath.conj(v[j])
                rhs = mpmath.matrix([v[j] for j in units])
                sol = minv * rhs
                coeffs: dict[int, Fraction] = {}
                ok = True
                for e in range(d):
                    z = sol[e]
                    if abs(mpmath.im(z)) > mpmath.mpf("1e-25"):
                        ok = False
                        break
                    frac = _to_fraction(mpmath.re(z))
                    if frac is None:
                        ok = False
                        break
                    if frac:
                        coeffs[e] = frac
                if not ok:
                    continue
                cand = CycScalar(self, coeffs)
                if cand * cand == a:
                    return cand
        return None

    def _embed_conj(self, a: "CycScalar", j: int) -> mpmath.mpc:
        val = mpmath.mpc(0)
        for e, c in a.coeffs.items():
            val += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(
                mpmath.mpf(2 * ((j * e) % self.order)) / self.order
            )
        return val

    def __repr__(self) -> str:
        return f"CycField({self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CycField) and other.order == self.order

    def __hash__(self) -> int:
        return hash(("CycField", self.order))


def _principal_sqrt(w: mpmath.mpc) -> mpmath.mpc:
    s = mpmath.sqrt(w)
    if mpmath.arg(s) < 0:
        s = -s
    return s


def _to_fraction(x: mpmath.mpf, max_den: int = 10**8) -> Fraction | None:
    frac = Fraction(float(x)).limit_denominator(max_den)
    with mpmath.workdps(50):
        if abs(x - mpmath.mpf(frac.numerator) / frac.denominator) < mpmath.mpf("1e-30"):
            return frac
    return None


class CycScalar:
    """An element of Q(zeta_N), always in canonical reduced form.

    Immutable; arithmetic returns new scalars.  Integers and Fractions mix
    freely on either side of ``+ - * /``.
    """

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: CycField, coeffs: dict[int, Fraction]):
        self.field = field
        self.coeffs = coeffs
        self._hash: int | None = None

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "CycScalar | None":
        if isinstance(other, CycScalar):
            self.field._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return None

    def __add__(self, other) -> "CycScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            v = out.get(e, Fraction(0)) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CycScalar(self.field, out)

    __radd__ = __add__

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.field, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other) -> "CycScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "CycScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "CycScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.field.order
        raw: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = (e1 + e2) % n
                raw[e] = raw.get(e, Fraction(0)) + c1 * c2
        return CycScalar(self.field, self.field._reduce(raw))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        d = self.field.degree
        # Columns: self * zeta^j in the power basis.
        cols = []
        for j in range(d):
            col = self * self.field.zeta(j)
            cols.append([col.coeffs.get(e, Fraction(0)) for e in range(d)])
        # Solve sum_j x_j * cols[j] = e_0 by Gaussian elimination.
        aug = [[cols[j][e] for j in range(d)] + [Fraction(1 if e == 0 else 0)]
               for e in range(d)]
        x = _solve_fraction_system(aug, d)
        if x is None:  # pragma: no cover - nonzero elements are invertible
            raise ZeroDivisionError("singular multiplication matrix")
        return CycScalar(self.field, {j: x[j] for j in range(d) if x[j]})

    def __truediv__(self, other) -> "CycScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "CycScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "CycScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "CycScalar":
        """Complex conjugation: exponent map k -> N - k, then reduction."""
        n = self.field.order
        raw = {(-e) % n: c for e, c in self.coeffs.items()}
        return CycScalar(self.field, self.field._reduce(raw))

    # -- predicates, hashing, display --------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.field.order == other.field.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.order, frozenset(self.coeffs.items())))
        return self._hash

    def embed(self, precision: int = 17) -> mpmath.mpc:
        return self.field.embed(self, precision)

    def __complex__(self) -> complex:
        return complex(self.embed(17))

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction if it is rational, else None."""
        if not self.coeffs:
            return Fraction(0)
        if set(self.coeffs) == {0}:
            return self.coeffs[0]
        return None

    def literal(self) -> list[list[int]]:
        """Bundle-file scalar literal: sorted (exponent, num, den) triples."""
        return [[e, c.numerator, c.denominator] for e, c in sorted(self.coeffs.items())]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Cyc(0)"
        terms = []
        for e, c in sorted(self.coeffs.items()):
            terms.append(f"{c}*z{e}" if e else f"{c}")
        return f"Cyc[{self.field.order}]({' + '.join(terms)})"


def _solve_fraction_system(aug: list[list[Fraction]], n: int) -> list[Fraction] | None:
    """Solve an n x n system given as augmented rows; None if singular."""
    rows = [list(r) for r in aug]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return [rows[e][n] for e in range(n)]


def scalar_from_literal(field: CycField, literal) -> CycScalar:
    """Parse the bundle scalar literal format; the empty list is zero."""
    coeffs: dict[int, Fraction] = {}
    for item in literal:
        if len(item) != 3:
            raise ValueError(f"scalar literal triple must have 3 entries, got {item!r}")
        e, num, den = item
        if not all(isinstance(v, int) for v in (e, num, den)):
            raise ValueError(f"scalar literal entries must be integers, got {item!r}")
        if not 0 <= e < field.order:
            raise ValueError(f"scalar literal exponent {e} outside 0..{field.order - 1}")
        if den <= 0:
            raise ValueError(f"scalar literal denominator must be positive, got {den}")
        coeffs[e] = coeffs.get(e, Fraction(0)) + Fraction(num, den)
    return field.scalar(coeffs)
