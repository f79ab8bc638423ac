"""Constraint solvers for multiplicity-free bundles.

``solve_sigma`` determines the S3-action scalars from a given fusing tensor:
the unknowns are one sigma12 scalar and one sigma23 scalar per nonzero space,
subject to

* canonical pins (module maps, their skew images, vacuum channels),
* involutivity of both generators and the braid relation,
* agreement of the two fusing expressions for the intertwiner pairing,
* the left-inverse normalization identity tying sigma123 contractions of the
  fusing tensor to the canonical vacuum-channel weight.

``solve_pentagon`` solves the reassociation consistency system for the fusing
tensor itself on small multiplicity-free fusion rings, with the unit-slot
entries pinned to delta patterns, by propagation plus quadratic branching
over square roots in the field.

Both solvers work by exact elimination over monomial equations
prod_i x_i^{e_i} = c with c in the bundle's cyclotomic field.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from fullfield.cyclotomic import CycField, CycScalar
from fullfield.fusion import FusionData

Space = tuple[str, str, str]


class SolverError(RuntimeError):
    pass


@dataclass
class Monomial:
    """prod var^exp = const, over field units."""

    exps: dict
    const: CycScalar

    def reduce(self, assignment: dict) -> "Monomial":
        exps = {}
        const = self.const
        for var, e in self.exps.items():
            val = assignment.get(var)
            if val is None:
                exps[var] = e
            else:
                const = const * val ** (-e)
        return Monomial(exps, const)


def _propagate(constraints: list[Monomial], assignment: dict, field: CycField):
    """Assign single-variable constraints until stable; False on contradiction."""
    one = field.one()
    pending = list(constraints)
    changed = True
    while changed:
        changed = False
        nxt = []
        for con in pending:
            red = con.reduce(assignment)
            if not red.exps:
                if red.const != one:
                    return None
                continue
            if len(red.exps) == 1:
                (var, e), = red.exps.items()
                if e == 1:
                    assignment[var] = red.const
                elif e == -1:
                    assignment[var] = red.const.inverse()
                elif e % 2 == 0:
                    nxt.append(red)
                    continue
                else:
                    # odd power n: x = c^(1/n) needs an n-th root; try c itself
                    nxt.append(red)
                    continue
                changed = True
                continue
            nxt.append(red)
        pending = nxt
    return pending


def _solve_monomials(constraints: list[Monomial], variables: list, field: CycField,
                     assignment: dict, depth: int = 0) -> dict | None:
    if depth > 24:
        return None
    work = dict(assignment)
    pending = _propagate(constraints, work, field)
    if pending is None:
        return None
    unassigned = [v for v in variables if v not in work]
    if not unassigned:
        for con in constraints:
            red = con.reduce(work)
            if red.exps or red.const != field.one():
                return None
        return work
    # branch: prefer a quadratic x^2 = c if available, else guess units
    quad = next((c for c in pending if len(c.exps) == 1
                 and abs(next(iter(c.exps.values()))) == 2), None)
    if quad is not None:
        (var, e), = quad.exps.items()
        target = quad.const if e > 0 else quad.const.inverse()
        root = field.sqrt(target)
        if root is None:
            return None
        for cand in (root, -root):
            got = _solve_monomials(constraints, variables, field,
                                   {**work, var: cand}, depth + 1)
            if got is not None:
                return got
        return None
    var = unassigned[0]
    guesses = [field.one(), field.rational(-1)]
    if field.order % 4 == 0:
        i_unit = field.root_of_unity(1, 2)
        guesses += [i_unit, -i_unit]
    for cand in guesses:
        got = _solve_monomials(constraints, variables, field,
                               {**work, var: cand}, depth + 1)
        if got is not None:
            return got
    return None


# -- sigma solver ---------------------------------------------------------------


def _f_scalar(f: dict, key6, field: CycField) -> CycScalar:
    return f.get((tuple(key6), (0, 0, 0, 0)), field.zero())


def solve_sigma(field: CycField, fusion: FusionData, f: dict):
    """S3-action scalars consistent with a multiplicity-free fusing tensor.

    Returns (sigma12, sigma23) as per-space 1x1 matrices.  Raises SolverError
    if the constraint system has no solution over the field.
    """
    for _, n in fusion.rules.items():
        if n > 1:
            raise SolverError("sigma solver requires all multiplicities <= 1")
    spaces = fusion.spaces()
    d = fusion.dual
    e = fusion.unit

    def s12_space(s: Space) -> Space:
        return (s[1], s[0], s[2])

    def s23_space(s: Space) -> Space:
        return (s[0], d[s[2]], d[s[1]])

    uvar = {s: ("u", s) for s in spaces}
    vvar = {s: ("v", s) for s in spaces}
    one = field.one()
    cons: list[Monomial] = []
    assignment: dict = {}

    for a in fusion.labels:
        ap = d[a]
        assignment[uvar[(e, a, a)]] = one
        assignment[uvar[(a, e, a)]] = one
        assignment[uvar[(a, ap, e)]] = one
        assignment[vvar[(a, e, a)]] = one
        assignment[vvar[(a, ap, e)]] = one
        assignment[vvar[(e, a, a)]] = one

    for s in spaces:
        cons.append(Monomial({uvar[s]: 1, uvar[s12_space(s)]: 1}, one))
        cons.append(Monomial({vvar[s]: 1, vvar[s23_space(s)]: 1}, one))
        # braid relation through both generator words
        t1 = s12_space(s)
        lhs = {uvar[s]: 1, vvar[t1]: 1, uvar[s23_space(t1)]: 1}
        t2 = s23_space(s)
        rhs = {vvar[s]: 1, uvar[t2]: 1, vvar[s12_space(t2)]: 1}
        exps: dict = {}
        for var, ee in lhs.items():
            exps[var] = exps.get(var, 0) + ee
        for var, ee in rhs.items():
            exps[var] = exps.get(var, 0) - ee
        exps = {var: ee for var, ee in exps.items() if ee}
        cons.append(Monomial(exps, one))

    for s in spaces:
        a1, a2, a3 = s
        # pairing symmetry: v[primed s] * F_A = v[s] * F_B
        fa_key = (d[a1], a3, a2, a1, a2, e)
        fb_key = (a1, d[a3], d[a2], d[a1], d[a2], e)
        f_a_val = _f_scalar(f, fa_key, field)
        f_b_val = _f_scalar(f, fb_key, field)
        if not f_a_val or not f_b_val:
            raise SolverError(f"vanishing pairing-contraction entry at {s}")
        cons.append(Monomial({vvar[fusion.primed(s)]: 1, vvar[s]: -1},
                             f_b_val / f_a_val))
        # left-inverse normalization: v[s] * u[s23_space(s)] = F_x / (F1 * F2)
        x, y, z = s
        f1 = _f_scalar(f, (x, e, x, y, d[y], z), field)
        f2 = _f_scalar(f, (z, d[y], x, d[z], x, e), field)
        fx = _f_scalar(f, (x, e, x, d[x], x, e), field)
        if not f1 or not f2 or not fx:
            raise SolverError(f"vanishing normalization entry at {s}")
        cons.append(Monomial({vvar[s]: 1, uvar[s23_space(s)]: 1}, fx / (f1 * f2)))

    variables = list(uvar.values()) + list(vvar.values())
    solution = _solve_monomials(cons, variables, field, assignment)
    if solution is None:
        raise SolverError("no S3 action consistent with the fusing tensor over this field")
    sigma12 = {s: [[solution[uvar[s]]]] for s in spaces}
    sigma23 = {s: [[solution[vvar[s]]]] for s in spaces}
    return sigma12, sigma23


# -- pentagon solver ------------------------------------------------------------


def admissible_tuples(fusion: FusionData):
    """All channel-consistent label six-tuples (b1, b5, b4, b2, b3, b6)."""
    n = fusion.n
    out = []
    for b1, b2, b3 in product(fusion.labels, repeat=3):
        for b5 in fusion.labels:
            if not n(b2, b3, b5):
                continue
            for b4 in fusion.labels:
                if not n(b1, b5, b4):
                    continue
                for b6 in fusion.labels:
                    if n(b6, b3, b4) and n(b1, b2, b6):
                        out.append((b1, b5, b4, b2, b3, b6))
    return out


def pinned_value(fusion: FusionData, key6, field: CycField) -> CycScalar | None:
    """Unit-slot entries forced by the canonical bases, None if not pinned."""
    b1, b5, b4, b2, b3, b6 = key6
    e = fusion.unit
    one, zero = field.one(), field.zero()
    if b1 == e:
        return one if (b5 == b4 and b6 == b2) else zero
    if b2 == e:
        return one if b6 == b1 else zero
    if b3 == e:
        return one if b6 == b4 else zero
    return None


def _noncanonical_spaces(fusion: FusionData) -> list[Space]:
    e = fusion.unit
    d = fusion.dual
    out = []
    for a1, a2, a3, _n in fusion.nonzero_spaces():
        if e in (a1, a2) or (a3 == e and a2 == d[a1]):
            continue
        out.append((a1, a2, a3))
    return out


def _entry_scaling(fusion: FusionData, key6, noncanon: set):
    """Gauge-scaling exponents of an F entry over the non-canonical spaces."""
    b1, b5, b4, b2, b3, b6 = key6
    vec: dict[Space, int] = {}
    for space, sgn in (((b1, b5, b4), 1), ((b2, b3, b5), 1),
                       ((b6, b3, b4), -1), ((b1, b2, b6), -1)):
        if space in noncanon:
            vec[space] = vec.get(space, 0) + sgn
    return {s: v for s, v in vec.items() if v}


def _gauge_fix(fusion: FusionData, unknowns: list, field: CycField) -> dict:
    """Greedy basis normalization: one unknown entry set to 1 per free space."""
    noncanon = set(_noncanonical_spaces(fusion))
    fixed: set = set()
    chosen: dict = {}
    progress = True
    while progress and len(fixed) < len(noncanon):
        progress = False
        for key in unknowns:
            if key in chosen:
                continue
            vec = _entry_scaling(fusion, key, noncanon)
            unfixed = [s for s in vec if s not in fixed]
            if len(unfixed) == 1:
                chosen[key] = field.one()
                fixed.add(unfixed[0])
                progress = True
    return chosen


def solve_pentagon(fusion: FusionData, field_order: int, limit: int = 40):
    """Pentagon solutions for a small multiplicity-free fusion ring.

    The unit-slot entries are pinned to their delta patterns; one entry per
    non-canonical space is normalized to 1 (basis rescaling freedom); the
    rest is determined by propagation with square-root branching in the
    field.  Returns a list of assignments {key6: CycScalar} (gauge
    representatives); empty if the system has no solution over Q(zeta_N).
    """
    for _, n in fusion.rules.items():
        if n > 1:
            raise SolverError("pentagon solver requires all multiplicities <= 1")
    if len(fusion.labels) > 4:
        raise SolverError("pentagon solver is limited to at most 4 labels")
    field = CycField(field_order)
    keys = admissible_tuples(fusion)
    assignment: dict = {}
    unknowns = []
    for key in keys:
        pin = pinned_value(fusion, key, field)
        if pin is None:
            unknowns.append(key)
        else:
            assignment[key] = pin
    assignment.update(_gauge_fix(fusion, unknowns, field))

    equations = _pentagon_equations(fusion, keys)
    solutions: list[dict] = []
    _pentagon_dfs(fusion, field, equations, assignment, unknowns, solutions, limit)
    # normalize and deduplicate
    uniq = []
    seen = set()
    for sol in solutions:
        sig = tuple(sorted((k, tuple(sorted((e2, c.numerator, c.denominator)
                                            for e2, c in v.coeffs.items())))
                           for k, v in sol.items()))
        if sig not in seen:
            seen.add(sig)
            uniq.append(sol)
    return uniq


def _pentagon_equations(fusion: FusionData, keys):
    """Pentagon instances as (lhs-triples, rhs-pairs) of key6 tuples."""
    labels = fusion.labels
    n = fusion.n
    eqs = []
    keyset = set(keys)
    for a1, a2, a3, a4, dd in product(labels, repeat=5):
        lefts = [(b, c) for b in labels for c in labels
                 if n(a1, b, dd) and n(a2, c, b) and n(a3, a4, c)]
        rights = [(v, s) for v in labels for s in labels
                  if n(v, a4, dd) and n(s, a3, v) and n(a1, a2, s)]
        for (b, c) in lefts:
            for (v, s) in rights:
                lhs = []
                for u in labels:
                    k1 = (a2, c, b, a3, a4, u)
                    k2 = (a1, b, dd, u, a4, v)
                    k3 = (a1, u, v, a2, a3, s)
                    if k1 in keyset and k2 in keyset and k3 in keyset:
                        lhs.append((k1, k2, k3))
                rhs = []
                k4 = (a1, b, dd, a2, c, s)
                k5 = (s, c, dd, a3, a4, v)
                if k4 in keyset and k5 in keyset:
                    rhs.append((k4, k5))
                if lhs or rhs:
                    eqs.append((lhs, rhs))
    return eqs


def _normalize_terms(eq, state, field):
    """Substituted term list [(coeff, sorted-vars)] for lhs - rhs = 0.

    ``state`` maps solved variables to scalars and substituted variables to
    (coeff, vars) monomial expressions.
    """
    lhs, rhs = eq
    terms = []
    for sgn, side in ((1, lhs), (-1, rhs)):
        for term in side:
            coeff = field.one() if sgn == 1 else field.rational(-1)
            varlist: list = []
            stack = list(term)
            while stack:
                k = stack.pop()
                got = state.get(k)
                if got is None:
                    varlist.append(k)
                elif isinstance(got, CycScalar):
                    coeff = coeff * got
                else:
                    sub_coeff, sub_vars = got
                    coeff = coeff * sub_coeff
                    stack.extend(sub_vars)
            if coeff:
                terms.append((coeff, tuple(sorted(varlist))))
    # merge identical monomials
    merged: dict[tuple, CycScalar] = {}
    for coeff, vars in terms:
        cur = merged.get(vars)
        tot = coeff if cur is None else cur + coeff
        if tot:
            merged[vars] = tot
        elif cur is not None:
            del merged[vars]
    return [(c, v) for v, c in merged.items()]


def _single_var_solve(terms, field):
    """Solve sum c_t x^d_t = 0 in one variable; list of roots or None."""
    deg_coeff: dict[int, CycScalar] = {}
    for coeff, vars in terms:
        deg_coeff[len(vars)] = deg_coeff.get(len(vars), field.zero()) + coeff
    degs = sorted(dg for dg, cf in deg_coeff.items() if cf)
    zero = field.zero()
    if degs == [0]:
        return []  # contradiction
    if not degs:
        return None  # vacuous
    if degs == [1]:
        return [zero]
    if degs == [2]:
        return [zero]
    if degs == [0, 1]:
        return [(-deg_coeff[0]) / deg_coeff[1]]
    if degs == [0, 2]:
        target = (-deg_coeff[0]) / deg_coeff[2]
        root = field.sqrt(target)
        return [] if root is None else [root, -root]
    if degs == [1, 2]:
        return [zero, (-deg_coeff[1]) / deg_coeff[2]]
    if degs == [0, 1, 2]:
        a, b, c = deg_coeff[2], deg_coeff[1], deg_coeff[0]
        disc = b * b - 4 * a * c
        root = field.sqrt(disc)
        if root is None:
            return []
        return list({((-b) + root) / (2 * a), ((-b) - root) / (2 * a)})
    return None  # degree too high for this solver


def _expand_mono(coeff, vars, state):
    """Expand a scalar-times-monomial through the current state.

    Returns (coeff, tuple of unresolved variables); substitution targets are
    always stored fully expanded, so one pass suffices per variable.
    """
    out_vars: list = []
    stack = list(vars)
    guard = 0
    while stack:
        guard += 1
        if guard > 10_000:
            raise SolverError("substitution expansion did not terminate")
        v = stack.pop()
        got = state.get(v)
        if got is None:
            out_vars.append(v)
        elif isinstance(got, CycScalar):
            coeff = coeff * got
        else:
            c2, vs2 = got
            coeff = coeff * c2
            stack.extend(vs2)
    return coeff, tuple(sorted(out_vars))


def _resolve_state(state, unknowns, field):
    """Fully evaluate substituted variables; None if anything is unresolved."""
    out = {}
    for k in unknowns:
        got = state.get(k)
        if got is None:
            return None
        if isinstance(got, CycScalar):
            out[k] = got
            continue
        coeff, vars = _expand_mono(got[0], got[1], state)
        if vars:
            return None
        out[k] = coeff
    return out


def _pentagon_dfs(fusion, field, equations, state, unknowns, solutions, limit,
                  depth=0):
    """Propagation with nonzero-cancellation and monomial substitution.

    Solutions with vanishing admissible entries are not searched: the
    downstream pairing machinery needs invertible contractions anyway.
    """
    if len(solutions) >= limit or depth > 80:
        return
    state = dict(state)
    progress = True
    while progress:
        progress = False
        for eq in equations:
            terms = _normalize_terms(eq, state, field)
            if not terms:
                continue
            varset = {v for _, vs in terms for v in vs}
            if not varset:
                return  # nonzero constant = 0
            if len(varset) == 1:
                (var,) = varset
                roots = _single_var_solve(terms, field)
                if roots is None:
                    continue
                roots = [r for r in roots if r]  # nonzero solutions only
                if not roots:
                    return
                if len(roots) == 1:
                    state[var] = roots[0]
                    progress = True
                    continue
                for cand in roots:
                    _pentagon_dfs(fusion, field, equations, {**state, var: cand},
                                  unknowns, solutions, limit, depth + 1)
                return
            if len(terms) == 2:
                # cancel the common factor (entries are assumed nonzero)
                (c1, v1), (c2, v2) = terms
                common: list = []
                l1, l2 = list(v1), list(v2)
                for v in list(l1):
                    if v in l2:
                        l1.remove(v)
                        l2.remove(v)
                        common.append(v)
                if not common:
                    # substitution x := expr when one side is a bare variable
                    bare, other, cb, co = None, None, None, None
                    if len(l1) == 1:
                        bare, other, cb, co = l1[0], l2, c1, c2
                    elif len(l2) == 1:
                        bare, other, cb, co = l2[0], l1, c2, c1
                    if bare is not None and bare not in other:
                        coeff, vars = _expand_mono((-co) / cb, tuple(other), state)
                        if bare not in vars:
                            state[bare] = (coeff, vars)
                            progress = True
                    continue
                red = [(c1, tuple(sorted(l1))), (c2, tuple(sorted(l2)))]
                redvars = {v for _, vs in red for v in vs}
                if len(redvars) == 0:
                    if c1 + c2:
                        return
                    continue
                if len(redvars) == 1:
                    (var,) = redvars
                    roots = _single_var_solve(red, field)
                    if roots is None:
                        continue
                    roots = [r for r in roots if r]
                    if not roots:
                        return
                    if len(roots) == 1:
                        state[var] = roots[0]
                        progress = True
                        continue
                    for cand in roots:
                        _pentagon_dfs(fusion, field, equations, {**state, var: cand},
                                      unknowns, solutions, limit, depth + 1)
                    return
                if len(l1) == 1 and l1[0] not in l2:
                    coeff, vars = _expand_mono((-c2) / c1, tuple(l2), state)
                    if l1[0] not in vars:
                        state[l1[0]] = (coeff, vars)
                        progress = True
                elif len(l2) == 1 and l2[0] not in l1:
                    coeff, vars = _expand_mono((-c1) / c2, tuple(l1), state)
                    if l2[0] not in vars:
                        state[l2[0]] = (coeff, vars)
                        progress = True
    resolved = _resolve_state(state, unknowns, field)
    if resolved is not None:
        if any(not v for v in resolved.values()):
            return
        for eq in equations:
            terms = _normalize_terms(eq, {**state, **resolved}, field)
            if terms:
                return
        solutions.append(resolved)
        return
    # residual freedom: guess simple units for an untouched variable
    remaining = [k for k in unknowns if k not in state]
    if not remaining:
        return
    var = remaining[0]
    guesses = [field.one(), field.rational(-1)]
    for cand in guesses:
        _pentagon_dfs(fusion, field, equations, {**state, var: cand},
                      unknowns, solutions, limit, depth + 1)
