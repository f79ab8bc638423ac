"""Fusion-ring data: labels, unit, dual involution, weights, multiplicities.

This layer is purely combinatorial; it validates the structural constraints a
bundle must satisfy before any fusing tensor is loaded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm


@dataclass(frozen=True)
class Violation:
    code: str
    labels: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        where = ",".join(self.labels)
        return f"[{self.code}] ({where}) {self.message}"


@dataclass(frozen=True, eq=False)
class FusionData:
    """The finite label set with unit, dual map, conformal weights and N's.

    ``rules`` holds only nonzero multiplicities, keyed (a1, a2, a3) for the
    dimension of the space of maps a1 x a2 -> a3.
    """

    labels: tuple[str, ...]
    unit: str
    dual: dict[str, str]
    weights: dict[str, Fraction]
    rules: dict[tuple[str, str, str], int] = field(default_factory=dict)

    def n(self, a1: str, a2: str, a3: str) -> int:
        return self.rules.get((a1, a2, a3), 0)

    def index(self, a: str) -> int:
        return self.labels.index(a)

    # -- validation ---------------------------------------------------------

    def validate(self, field_order: int | None = None) -> list[Violation]:
        """Every violated invariant, with the offending label tuple."""
        out: list[Violation] = []
        labset = set(self.labels)
        e = self.unit

        if e not in labset:
            out.append(Violation("unit-missing", (e,), "unit label not declared"))
            return out
        for a in self.labels:
            if a not in self.dual:
                out.append(Violation("dual-missing", (a,), "no dual assigned"))
                return out
            if self.dual[a] not in labset:
                out.append(Violation("dual-range", (a,), "dual maps outside label set"))
                return out
        for key in self.rules:
            for a in key:
                if a not in labset:
                    out.append(Violation("rule-label", key, "fusion rule uses unknown label"))
                    return out

        if self.dual[e] != e:
            out.append(Violation("unit-dual", (e,), "dual of the unit is not the unit"))
        for a in self.labels:
            if self.dual[self.dual[a]] != a:
                out.append(Violation("dual-involution", (a,), "dual map is not an involution"))

        if self.weights.get(e, None) != 0:
            out.append(Violation("unit-weight", (e,), "unit weight must be 0"))
        for a in self.labels:
            if a not in self.weights:
                out.append(Violation("weight-missing", (a,), "no weight assigned"))
            elif self.weights[a] != self.weights.get(self.dual[a]):
                out.append(
                    Violation("dual-weight", (a, self.dual[a]),
                              "weight differs from the dual label's weight"))

        for a in self.labels:
            for b in self.labels:
                want = 1 if a == b else 0
                if self.n(e, a, b) != want:
                    out.append(Violation("unit-left", (e, a, b),
                                         f"N(e,a;b) = {self.n(e, a, b)}, want {want}"))
                if self.n(a, e, b) != want:
                    out.append(Violation("unit-right", (a, e, b),
                                         f"N(a,e;b) = {self.n(a, e, b)}, want {want}"))
                want_e = 1 if b == self.dual[a] else 0
                if self.n(a, b, e) != want_e:
                    code = "unit-duality" if b == self.dual[a] else "extra-unit-channel"
                    out.append(Violation(code, (a, b, e),
                                         f"N(a,b;e) = {self.n(a, b, e)}, want {want_e}"))

        for (a1, a2, a3), n in sorted(self.rules.items()):
            if n < 0:
                out.append(Violation("negative", (a1, a2, a3), "negative multiplicity"))
            if self.n(a2, a1, a3) != n:
                out.append(Violation("commutativity", (a1, a2, a3),
                                     "N(a1,a2;a3) != N(a2,a1;a3)"))
            if self.n(a1, self.dual[a3], self.dual[a2]) != n:
                out.append(Violation("sigma23-symmetry", (a1, a2, a3),
                                     "N(a1,a2;a3) != N(a1,a3';a2')"))
            d1, d2, d3 = self.dual[a1], self.dual[a2], self.dual[a3]
            if self.n(d1, d2, d3) != n:
                out.append(Violation("prime-symmetry", (a1, a2, a3),
                                     "N(a1',a2';a3') != N(a1,a2;a3)"))

        if field_order is not None:
            need = 2 * lcm(*(w.denominator for w in self.weights.values()), 1)
            if field_order % need:
                out.append(Violation(
                    "field-order", (),
                    f"weight phases need 2*lcm(denominators) = {need} to divide "
                    f"the field order {field_order}"))

        return out

    # -- enumeration --------------------------------------------------------

    def nonzero_spaces(self) -> list[tuple[str, str, str, int]]:
        """All (a1, a2, a3, N) with N > 0, lexicographic in declared order."""
        order = {a: i for i, a in enumerate(self.labels)}
        keys = [k for k, n in self.rules.items() if n > 0]
        keys.sort(key=lambda k: (order[k[0]], order[k[1]], order[k[2]]))
        return [(a1, a2, a3, self.rules[(a1, a2, a3)]) for a1, a2, a3 in keys]

    def spaces(self) -> list[tuple[str, str, str]]:
        return [(a1, a2, a3) for a1, a2, a3, _ in self.nonzero_spaces()]

    def primed(self, space: tuple[str, str, str]) -> tuple[str, str, str]:
        a1, a2, a3 = space
        return (self.dual[a1], self.dual[a2], self.dual[a3])
