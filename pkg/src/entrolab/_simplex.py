"""Dense exact two-phase simplex with Bland's anti-cycling rule.

Works over the rational backend end-to-end: no floating point touches
the decision path. Free variables are split into nonnegative pairs and
inequality rows get slacks; phase 1 minimizes artificial variables.

This is the authoritative fallback solver. The warm-started pipeline in
``lp`` only short-circuits it when an exactly verified witness or
certificate can be recovered from a floating-point solve.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._rational import ONE, ZERO, rational

LE, GE, EQ = "<=", ">=", "=="


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None  # point in the original free-variable space
    value: object | None = None
    duals: list | None = None  # public-convention multipliers per input row
    ray: list | None = None  # unbounded direction in the original space


def _public_multipliers(y, flips, signs):
    # Map standard-form duals to multipliers on the rows as written:
    # lam_i >= 0 for ">=", lam_i <= 0 for "<=", free for "==".
    return [y_i * f * s for y_i, f, s in zip(y, flips, signs)]


def simplex_solve(ncols: int, rows, objective=None) -> SimplexResult:
    """Solve min objective.x subject to ``rows`` over free variables.

    rows: sequence of (coeffs list length ncols, rel in {<=, >=, ==}, rhs).
    objective: coefficient list, or None for pure feasibility.

    For "infeasible" the duals are a Farkas certificate: sum lam_i*a_i = 0,
    sum lam_i*b_i > 0, with the sign convention above. For "optimal" they
    certify optimality: sum lam_i*a_i = objective, sum lam_i*b_i = value.
    """
    m = len(rows)
    c_obj = [rational(v) for v in (objective or [0] * ncols)]

    # Canonical <=/== rows; signs map back to the as-written orientation.
    g_rows, rels, h_vec, signs = [], [], [], []
    for coeffs, rel, rhs in rows:
        coeffs = [rational(v) for v in coeffs]
        rhs = rational(rhs)
        if rel == GE:
            coeffs, rhs, s = [-v for v in coeffs], -rhs, -1
            rel = LE
        else:
            s = 1
        g_rows.append(coeffs)
        rels.append(rel)
        h_vec.append(rhs)
        signs.append(s)

    # Standard form M z = d, z >= 0:
    # columns: u_0..u_{n-1}, w_0..w_{n-1} (x = u - w), slacks, artificials.
    nslack = sum(1 for r in rels if r == LE)
    nstruct = 2 * ncols + nslack
    width = nstruct + m + 1  # +1 for rhs
    tableau: list[list] = []
    flips = []
    slack_at = 0
    for i in range(m):
        row = [ZERO] * width
        for j, v in enumerate(g_rows[i]):
            row[j] = v
            row[ncols + j] = -v
        if rels[i] == LE:
            row[2 * ncols + slack_at] = ONE
            slack_at += 1
        d = h_vec[i]
        flip = 1
        if d < 0:
            flip = -1
            row = [-v for v in row]
            d = -d
        row[nstruct + i] = ONE  # artificial
        row[-1] = d
        tableau.append(row)
        flips.append(flip)

    basis = [nstruct + i for i in range(m)]
    art_cols = set(range(nstruct, nstruct + m))

    def pivot(obj_row, r, col):
        pr = tableau[r]
        pv = pr[col]
        inv = ONE / pv
        tableau[r] = pr = [v * inv for v in pr]
        for i in range(m):
            if i != r:
                row = tableau[i]
                f = row[col]
                if f != 0:
                    tableau[i] = [a - f * b for a, b in zip(row, pr)]
        f = obj_row[col]
        if f != 0:
            obj_row[:] = [a - f * b for a, b in zip(obj_row, pr)]
        basis[r] = col

    def run(obj_row, allowed):
        # Bland: entering = lowest-index negative reduced cost.
        while True:
            col = next(
                (j for j in range(width - 1) if j in allowed and obj_row[j] < 0), None
            )
            if col is None:
                return None  # optimal
            best_r, best_ratio = None, None
            for i in range(m):
                t = tableau[i][col]
                if t > 0:
                    ratio = tableau[i][-1] / t
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best_r])
                    ):
                        best_r, best_ratio = i, ratio
            if best_r is None:
                return col  # unbounded in this column
            pivot(obj_row, best_r, col)

    # Phase 1: minimize sum of artificials (all basic initially).
    obj_row = [ZERO] * width
    for j in range(width):
        obj_row[j] = -sum((tableau[i][j] for i in range(m)), ZERO)
    for j in art_cols:
        obj_row[j] += ONE
    allowed = set(range(nstruct))
    run(obj_row, allowed)

    if -obj_row[-1] > 0:  # infeasible: phase-1 optimum positive
        y = [ONE - obj_row[nstruct + i] for i in range(m)]
        lam = _public_multipliers(y, flips, signs)
        return SimplexResult(status="infeasible", duals=lam)

    # Drive artificials out of the basis; redundant rows keep a zero-level
    # artificial which is then frozen (its column can never re-enter).
    for r in range(m):
        if basis[r] in art_cols:
            col = next((j for j in range(nstruct) if tableau[r][j] != 0), None)
            if col is not None:
                pivot(obj_row, r, col)

    # Phase 2.
    c_full = [ZERO] * width
    for j in range(ncols):
        c_full[j] = c_obj[j]
        c_full[ncols + j] = -c_obj[j]
    obj_row = list(c_full)
    for i in range(m):
        cb = c_full[basis[i]]
        if cb != 0:
            obj_row = [a - cb * b for a, b in zip(obj_row, tableau[i])]
    unbounded_col = run(obj_row, allowed)

    def current_x():
        z = {basis[i]: tableau[i][-1] for i in range(m)}
        return [z.get(j, ZERO) - z.get(ncols + j, ZERO) for j in range(ncols)]

    if unbounded_col is not None:
        ray_z = {unbounded_col: ONE}
        for i in range(m):
            t = tableau[i][unbounded_col]
            if t != 0:
                ray_z[basis[i]] = -t
        ray = [ray_z.get(j, ZERO) - ray_z.get(ncols + j, ZERO) for j in range(ncols)]
        return SimplexResult(status="unbounded", x=current_x(), ray=ray)

    y = [-obj_row[nstruct + i] for i in range(m)]
    lam = _public_multipliers(y, flips, signs)
    x = current_x()
    value = sum((ci * xi for ci, xi in zip(c_obj, x)), ZERO)
    return SimplexResult(status="optimal", x=x, value=value, duals=lam)
