"""Exact rational linear feasibility/optimization over entropy coordinates.

The decision path is exact: every returned witness or certificate is
re-derivable by rational arithmetic. A floating-point warm start
(scipy/HiGHS) merely *suggests* an active set or a Farkas support; the
suggestion is then solved and verified exactly, and on any mismatch we
fall back to the pure exact simplex in ``_simplex``.

Certificate convention (Farkas): a map constraint-index -> multiplier
lam with lam_i >= 0 on ">=" rows, lam_i <= 0 on "<=" rows, free on "=="
rows, such that sum lam_i * a_i is the zero functional while
sum lam_i * b_i > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ._rational import ONE, ZERO, format_rational, rational
from ._simplex import EQ, GE, LE, simplex_solve
from .core import DomainError, EntropyVector, GroundSet, LinearFunctional

RELATIONS = {">=": GE, "<=": LE, "=": EQ, "==": EQ, "≥": GE, "≤": LE}

_ANCHOR_DEN = 10**12
_ACTIVE_TOL = 1e-7
_SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class LinearConstraint:
    functional: LinearFunctional
    relation: str  # ">=", "<=", "=="
    rhs: object

    def __init__(self, functional, relation, rhs):
        try:
            rel = RELATIONS[relation]
        except KeyError:
            raise DomainError(f"unknown relation {relation!r}") from None
        object.__setattr__(self, "functional", functional)
        object.__setattr__(self, "relation", rel)
        object.__setattr__(self, "rhs", rational(rhs))

    def holds_at(self, h: EntropyVector) -> bool:
        lhs = self.functional.evaluate(h)
        if self.relation == GE:
            return lhs >= self.rhs
        if self.relation == LE:
            return lhs <= self.rhs
        return lhs == self.rhs

    def render(self, ground: GroundSet) -> str:
        rel = {GE: ">=", LE: "<=", EQ: "="}[self.relation]
        return f"{self.functional.render(ground)} {rel} {format_rational(self.rhs)}"


@dataclass(frozen=True)
class LinearSystem:
    ground: GroundSet
    constraints: tuple[LinearConstraint, ...]
    objective: Optional[LinearFunctional] = None

    def __init__(self, ground, constraints, objective=None):
        constraints = tuple(constraints)
        limit = ground.full_mask
        for c in constraints:
            if any(mask > limit for mask, _ in c.functional.terms):
                raise DomainError("constraint references a subset outside the ground set")
        if objective is not None and any(m > limit for m, _ in objective.terms):
            raise DomainError("objective references a subset outside the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "objective", objective)

    def render(self) -> str:
        return "\n".join(c.render(self.ground) for c in self.constraints)


@dataclass(frozen=True)
class Feasible:
    witness: EntropyVector


@dataclass(frozen=True)
class Infeasible:
    certificate: Mapping[int, object]  # constraint index -> multiplier


@dataclass(frozen=True)
class Optimal:
    value: object
    witness: EntropyVector
    dual_certificate: Optional[Mapping[int, object]] = None


@dataclass(frozen=True)
class Unbounded:
    witness: EntropyVector
    ray: Mapping[int, object]  # mask -> direction component


# --- canonical matrix view ----------------------------------------------------


class _Canon:
    """Dense column-indexed view of a system, after redundancy pre-pass."""

    def __init__(self, sys: LinearSystem, objective: LinearFunctional | None):
        masks = set()
        for c in sys.constraints:
            masks.update(m for m, _ in c.functional.terms)
        if objective is not None:
            masks.update(m for m, _ in objective.terms)
        self.cols = sorted(masks)  # deterministic: lexicographic by bitmask
        self.col_index = {m: i for i, m in enumerate(self.cols)}
        self.sys = sys
        self.conflict: Optional[Infeasible] = None

        # Redundancy pre-pass: drop duplicate functionals keeping the
        # binding rhs; detect flat contradictions among identical rows.
        best: dict[tuple, tuple[int, object]] = {}
        trivial_bad: Optional[int] = None
        kept: list[int] = []
        for idx, c in enumerate(sys.constraints):
            if not c.functional.terms:
                ok = (
                    (c.relation == GE and 0 >= c.rhs)
                    or (c.relation == LE and 0 <= c.rhs)
                    or (c.relation == EQ and c.rhs == 0)
                )
                if not ok and trivial_bad is None:
                    trivial_bad = idx
                continue
            scale = ONE / abs(c.functional.terms[0][1])
            rel = c.relation
            if rel != EQ and c.functional.terms[0][1] < 0:
                # normalize leading coefficient positive, flipping inequality
                scale = -scale
                rel = GE if rel == LE else LE
            key = (tuple((m, v * scale) for m, v in c.functional.terms), rel)
            rhs = c.rhs * scale
            prev = best.get(key)
            if prev is None:
                best[key] = (idx, rhs)
                kept.append(idx)
            else:
                pidx, prhs = prev
                if rel == EQ and prhs != rhs:
                    self.conflict = self._equality_conflict(pidx, idx)
                elif (rel == GE and rhs > prhs) or (rel == LE and rhs < prhs):
                    best[key] = (idx, rhs)
                    kept.remove(pidx)
                    kept.append(idx)
        if trivial_bad is not None and self.conflict is None:
            c = sys.constraints[trivial_bad]
            lam = ONE if c.relation != LE else -ONE
            if c.relation == EQ and c.rhs < 0:
                lam = -ONE
            self.conflict = Infeasible({trivial_bad: lam})
        self.row_index = sorted(kept)
        self.rows = []
        for idx in self.row_index:
            c = sys.constraints[idx]
            dense = [ZERO] * len(self.cols)
            for m, v in c.functional.terms:
                dense[self.col_index[m]] = v
            self.rows.append((dense, c.relation, c.rhs))
        self.objective_dense = [ZERO] * len(self.cols)
        if objective is not None:
            for m, v in objective.terms:
                self.objective_dense[self.col_index[m]] = v

    def _equality_conflict(self, i: int, j: int) -> Infeasible:
        a = self.sys.constraints[i]
        b = self.sys.constraints[j]
        sa = a.functional.terms[0][1]
        sb = b.functional.terms[0][1]
        # a/sa - b/sb = 0 functional; pick orientation with positive rhs gap.
        gap = a.rhs / sa - b.rhs / sb
        sign = ONE if gap > 0 else -ONE
        return Infeasible({i: sign / sa, j: -sign / sb})

    def witness_from(self, x: Sequence) -> EntropyVector:
        values = {m: rational(v) for m, v in zip(self.cols, x)}
        return EntropyVector(self.sys.ground, values, exact=True)

    def multipliers_from_dict(self, lam: Mapping[int, object]) -> dict[int, object]:
        return {self.row_index[i]: rational(v) for i, v in lam.items() if v != 0}


# --- exact linear algebra helpers ---------------------------------------------


def _anchored_solve(rows, rhs, anchor):
    """One exact solution of ``rows @ x = rhs`` with free columns pinned
    to ``anchor`` values; returns None if inconsistent."""
    n = len(anchor)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for _ in range(len(aug)):
        if r >= len(aug):
            break
        # next pivot: first row at/under r with a nonzero in a fresh column
        placed = False
        for i in range(r, len(aug)):
            row = aug[i]
            col = next((j for j in range(n) if row[j] != 0), None)
            if col is None:
                if row[n] != 0:
                    return None
                continue
            aug[r], aug[i] = aug[i], aug[r]
            row = aug[r]
            inv = ONE / row[col]
            aug[r] = row = [v * inv for v in row]
            for k in range(len(aug)):
                if k != r and aug[k][col] != 0:
                    f = aug[k][col]
                    aug[k] = [a - f * b for a, b in zip(aug[k], row)]
            pivots.append((r, col))
            r += 1
            placed = True
            break
        if not placed:
            break
    for i in range(r, len(aug)):
        if any(v != 0 for v in aug[i][:n]):
            continue  # unreachable: rows below r are fully reduced
        if aug[i][n] != 0:
            return None
    x = list(anchor)
    pivot_cols = {c for _, c in pivots}
    for row_i, col in pivots:
        row = aug[row_i]
        x[col] = row[n] - sum(
            (row[j] * x[j] for j in range(n) if j != col and j not in pivot_cols and row[j] != 0),
            ZERO,
        )
    return x


def _rationalize(values, max_den=_ANCHOR_DEN):
    return [rational(Fraction(float(v)).limit_denominator(max_den)) for v in values]


# --- floating-point warm start -------------------------------------------------


def _float_stage(canon: _Canon, objective=None):
    import numpy as np
    from scipy.optimize import linprog

    n = len(canon.cols)
    a_ub, b_ub, ub_idx = [], [], []
    a_eq, b_eq, eq_idx = [], [], []
    for i, (dense, rel, rhs) in enumerate(canon.rows):
        coeffs = [float(v) for v in dense]
        if rel == EQ:
            a_eq.append(coeffs)
            b_eq.append(float(rhs))
            eq_idx.append(i)
        elif rel == LE:
            a_ub.append(coeffs)
            b_ub.append(float(rhs))
            ub_idx.append(i)
        else:
            a_ub.append([-v for v in coeffs])
            b_ub.append(-float(rhs))
            ub_idx.append(i)
    c = [float(v) for v in (objective or [0] * n)]
    res = linprog(
        c,
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(a_eq) if a_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=(None, None),
        method="highs",
    )
    return res, ub_idx, eq_idx


def _verify_point(canon: _Canon, x) -> bool:
    for dense, rel, rhs in canon.rows:
        lhs = sum((a * v for a, v in zip(dense, x) if a != 0), ZERO)
        if rel == GE and lhs < rhs:
            return False
        if rel == LE and lhs > rhs:
            return False
        if rel == EQ and lhs != rhs:
            return False
    return True


def _exact_point_from_float(canon: _Canon, x_float):
    """Exactify a float point: solve the active rows exactly, anchored at
    the rationalized float solution, then verify everything."""
    anchor = _rationalize(x_float)
    if _verify_point(canon, anchor):
        return anchor
    active_rows, active_rhs = [], []
    for dense, rel, rhs in canon.rows:
        if rel == EQ:
            active_rows.append(dense)
            active_rhs.append(rhs)
    for dense, rel, rhs in canon.rows:
        if rel != EQ:
            resid = float(rhs) - sum(
                float(a) * x_float[j] for j, a in enumerate(dense) if a != 0
            )
            if abs(resid) < _ACTIVE_TOL:
                active_rows.append(dense)
                active_rhs.append(rhs)
    x = _anchored_solve(active_rows, active_rhs, anchor)
    if x is not None and _verify_point(canon, x):
        return x
    return None


def _farkas_rows(canon: _Canon):
    """Rows oriented for the public multiplier convention (see module doc)."""
    out = []
    for dense, rel, rhs in canon.rows:
        out.append((dense, rel, rhs))
    return out


def _exact_farkas_from_float(canon: _Canon):
    """Find a Farkas certificate: float dual ray (L1-minimized for a small
    support), then exact anchored solve on the support, then verification."""
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import lil_matrix

    rows = _farkas_rows(canon)
    m = len(rows)
    ncols = len(canon.cols)
    # variables: z_i >= 0 per row; eq rows get a second (negative) part.
    var_rows = []  # (row index, sign of lam contribution)
    for i, (_, rel, _) in enumerate(rows):
        var_rows.append((i, 1 if rel != LE else -1))
    for i, (_, rel, _) in enumerate(rows):
        if rel == EQ:
            var_rows.append((i, -1))
    nv = len(var_rows)
    a_eq = lil_matrix((ncols + 1, nv))
    for v, (i, sgn) in enumerate(var_rows):
        dense, _, rhs = rows[i]
        for j, coeff in enumerate(dense):
            if coeff != 0:
                a_eq[j, v] = sgn * float(coeff)
        a_eq[ncols, v] = sgn * float(rhs)
    b_eq = np.zeros(ncols + 1)
    b_eq[ncols] = 1.0  # normalize sum lam_i * b_i = 1
    res = linprog(
        np.ones(nv),
        A_eq=a_eq.tocsr(),
        b_eq=b_eq,
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        return None
    lam_float = [0.0] * m
    for v, (i, sgn) in enumerate(var_rows):
        lam_float[i] += sgn * res.x[v]
    support = [i for i in range(m) if abs(lam_float[i]) > _SUPPORT_TOL]
    if not support:
        return None
    # Exact system over the support: zero out every touched column and
    # normalize the rhs combination to 1.
    touched = sorted(
        {j for i in support for j, v in enumerate(rows[i][0]) if v != 0}
    )
    sys_rows = []
    sys_rhs = []
    for j in touched:
        sys_rows.append([rows[i][0][j] for i in support])
        sys_rhs.append(ZERO)
    sys_rows.append([rows[i][2] for i in support])
    sys_rhs.append(ONE)
    anchor = _rationalize([lam_float[i] for i in support])
    lam_exact = _anchored_solve(sys_rows, sys_rhs, anchor)
    if lam_exact is None:
        return None
    lam = {i: v for i, v in zip(support, lam_exact) if v != 0}
    if _check_farkas(rows, lam):
        return lam
    return None


def _check_farkas(rows, lam: Mapping[int, object]) -> bool:
    if not lam:
        return False
    combo: dict[int, object] = {}
    total = ZERO
    for i, mult in lam.items():
        dense, rel, rhs = rows[i]
        if rel == GE and mult < 0:
            return False
        if rel == LE and mult > 0:
            return False
        for j, v in enumerate(dense):
            if v != 0:
                combo[j] = combo.get(j, ZERO) + mult * v
        total += mult * rhs
    return all(v == 0 for v in combo.values()) and total > 0


# --- public operations ----------------------------------------------------------


def solve_feasibility(sys: LinearSystem, warm_start: bool = True):
    """Exact feasibility: Feasible(witness) or Infeasible(certificate)."""
    canon = _Canon(sys, None)
    if canon.conflict is not None:
        return canon.conflict
    if not canon.rows:
        return Feasible(canon.witness_from([ZERO] * len(canon.cols)))
    if warm_start:
        try:
            res, _, _ = _float_stage(canon)
        except Exception:
            res = None
        if res is not None and res.status == 0:
            x = _exact_point_from_float(canon, list(res.x))
            if x is not None:
                return Feasible(canon.witness_from(x))
        elif res is not None and res.status == 2:
            lam = _exact_farkas_from_float(canon)
            if lam is not None:
                return Infeasible(canon.multipliers_from_dict(lam))
    result = simplex_solve(len(canon.cols), canon.rows)
    if result.status == "infeasible":
        lam = {i: v for i, v in enumerate(result.duals) if v != 0}
        return Infeasible(canon.multipliers_from_dict(lam))
    return Feasible(canon.witness_from(result.x))


def minimize(sys: LinearSystem, objective: LinearFunctional | None = None):
    """Exact two-phase optimization; Optimal/Unbounded/Infeasible."""
    objective = objective or sys.objective
    if objective is None:
        raise DomainError("minimize requires an objective")
    canon = _Canon(sys, objective)
    if canon.conflict is not None:
        return canon.conflict
    try:
        res, _, _ = _float_stage(canon, objective=canon.objective_dense)
    except Exception:
        res = None
    if res is not None and res.status == 2:
        lam = _exact_farkas_from_float(canon)
        if lam is not None:
            return Infeasible(canon.multipliers_from_dict(lam))
    if res is not None and res.status == 3:
        unb = _exact_unbounded(canon, objective)
        if unb is not None:
            return unb
    if res is not None and res.status == 0:
        opt = _exact_optimal_from_float(canon, res)
        if opt is not None:
            return opt
    result = simplex_solve(len(canon.cols), canon.rows, objective=canon.objective_dense)
    if result.status == "infeasible":
        lam = {i: v for i, v in enumerate(result.duals) if v != 0}
        return Infeasible(canon.multipliers_from_dict(lam))
    if result.status == "unbounded":
        ray = {m: v for m, v in zip(canon.cols, result.ray) if v != 0}
        return Unbounded(canon.witness_from(result.x), ray)
    lam = {i: v for i, v in enumerate(result.duals) if v != 0}
    return Optimal(
        result.value, canon.witness_from(result.x), canon.multipliers_from_dict(lam)
    )


def _exact_optimal_from_float(canon: _Canon, res):
    x = _exact_point_from_float(canon, list(res.x))
    if x is None:
        return None
    value = sum((c * v for c, v in zip(canon.objective_dense, x)), ZERO)
    # exact dual certificate from the float marginals
    lam_float = [0.0] * len(canon.rows)
    marg_eq = getattr(res.eqlin, "marginals", None) if hasattr(res, "eqlin") else None
    marg_ub = getattr(res.ineqlin, "marginals", None) if hasattr(res, "ineqlin") else None
    eq_at = ub_at = 0
    for i, (_, rel, _) in enumerate(canon.rows):
        if rel == EQ:
            if marg_eq is not None and eq_at < len(marg_eq):
                lam_float[i] = -float(marg_eq[eq_at])
            eq_at += 1
        else:
            if marg_ub is not None and ub_at < len(marg_ub):
                v = -float(marg_ub[ub_at])
                lam_float[i] = v if rel == GE else -v
            ub_at += 1
    lam = _exact_duals(canon, lam_float, value)
    return Optimal(value, canon.witness_from(x), lam)


def _exact_duals(canon: _Canon, lam_float, value):
    """Exactify dual multipliers: sum lam_i a_i = objective, sum lam_i b_i = value."""
    rows = canon.rows
    support = [i for i, v in enumerate(lam_float) if abs(v) > _SUPPORT_TOL]
    if not support:
        support = [i for i, (_, rel, _) in enumerate(rows) if rel == EQ]
        if not support:
            return None
    touched = sorted(
        {
            j
            for i in support
            for j, v in enumerate(rows[i][0])
            if v != 0
        }
        | {j for j, v in enumerate(canon.objective_dense) if v != 0}
    )
    sys_rows, sys_rhs = [], []
    for j in touched:
        sys_rows.append([rows[i][0][j] for i in support])
        sys_rhs.append(canon.objective_dense[j])
    sys_rows.append([rows[i][2] for i in support])
    sys_rhs.append(value)
    anchor = _rationalize([lam_float[i] for i in support])
    lam_exact = _anchored_solve(sys_rows, sys_rhs, anchor)
    if lam_exact is None:
        return None
    lam = {i: v for i, v in zip(support, lam_exact) if v != 0}
    for i, mult in lam.items():
        rel = rows[i][1]
        if rel == GE and mult < 0:
            return None
        if rel == LE and mult > 0:
            return None
    return canon.multipliers_from_dict(lam)


def _exact_unbounded(canon: _Canon, objective: LinearFunctional):
    """Certify unboundedness: exact feasible point plus exact descent ray."""
    base = solve_feasibility(canon.sys)
    if not isinstance(base, Feasible):
        return None
    ground = canon.sys.ground
    ray_constraints = []
    for c in canon.sys.constraints:
        if not c.functional.terms:
            continue
        rel = {GE: ">=", LE: "<=", EQ: "="}[c.relation]
        ray_constraints.append(LinearConstraint(c.functional, rel, 0))
    ray_constraints.append(LinearConstraint(objective, "=", -1))
    ray_sys = LinearSystem(ground, ray_constraints)
    ray_res = solve_feasibility(ray_sys)
    if not isinstance(ray_res, Feasible):
        return None
    ray = {m: v for m, v in ray_res.witness.values.items() if v != 0}
    return Unbounded(base.witness, ray)


def verify_certificate(sys: LinearSystem, result) -> bool:
    """Re-validate a result by exact arithmetic, independent of the solver."""
    if isinstance(result, Feasible):
        return all(c.holds_at(result.witness) for c in sys.constraints)
    if isinstance(result, Optimal):
        if not all(c.holds_at(result.witness) for c in sys.constraints):
            return False
        if result.dual_certificate is None:
            return True
        objective = sys.objective
        if objective is None:
            return True
        combo: dict[int, object] = {}
        total = ZERO
        for i, mult in result.dual_certificate.items():
            c = sys.constraints[i]
            if c.relation == GE and mult < 0:
                return False
            if c.relation == LE and mult > 0:
                return False
            for m, v in c.functional.terms:
                combo[m] = combo.get(m, ZERO) + mult * v
            total += mult * c.rhs
        target = dict(objective.terms)
        for m in set(combo) | set(target):
            if combo.get(m, ZERO) != target.get(m, ZERO):
                return False
        return total == result.value
    if isinstance(result, Infeasible):
        combo = {}
        total = ZERO
        for i, mult in result.certificate.items():
            c = sys.constraints[i]
            if c.relation == GE and mult < 0:
                return False
            if c.relation == LE and mult > 0:
                return False
            for m, v in c.functional.terms:
                combo[m] = combo.get(m, ZERO) + mult * v
            total += mult * c.rhs
        return all(v == 0 for v in combo.values()) and total > 0
    if isinstance(result, Unbounded):
        if not all(c.holds_at(result.witness) for c in sys.constraints):
            return False
        objective = sys.objective
        ray = result.ray
        for c in sys.constraints:
            d = sum((v * ray.get(m, ZERO) for m, v in c.functional.terms), ZERO)
            if c.relation == GE and d < 0:
                return False
            if c.relation == LE and d > 0:
                return False
            if c.relation == EQ and d != 0:
                return False
        if objective is None:
            return True
        slope = sum((v * ray.get(m, ZERO) for m, v in objective.terms), ZERO)
        return slope < 0
    raise DomainError(f"unknown result type {type(result).__name__}")


def dump_system(sys: LinearSystem) -> str:
    """Text dump, one constraint per line: `<coeff>*h{A,B} ... <rel> <rhs>`."""
    return sys.render()


