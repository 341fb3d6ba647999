"""Constructions of auxiliary random variables that tighten network LPs.

Three constructions:

* the maximal common function of a pair (connected components of the
  bipartite support graph), exact;
* a seeded local search for a variable K making H(K|X), H(K|Y) and
  I(X;Y|K) simultaneously small (an upper bound on the best possible
  max of the three; the landscape is non-convex and no optimality is
  claimed);
* a shared basis for sources that are uniform over subspaces of F_q^m,
  yielding auxiliaries K_1..K_m with pinned entropies.
"""

from __future__ import annotations

import itertools
import math
import random
import warnings as _warnings
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ._rational import ZERO, rational
from .core import DomainError, JointDistribution, _entropy_of_probs
from .network import AuxFunction, AuxSpec, NetworkProblem


# --- maximal common function ---------------------------------------------------


@dataclass(frozen=True)
class GKDecomposition:
    components: tuple[tuple[tuple, ...], ...]  # each a tuple of joint outcomes
    x_label: Mapping[str, str]  # value of X -> component label
    y_label: Mapping[str, str]
    entropy: object  # H(K), rational bits
    exact: bool

    def label_of(self, x_value: str) -> str:
        return self.x_label[x_value]


def gk_common_information(dist: JointDistribution) -> GKDecomposition:
    """Maximal variable that is a function of each coordinate separately.

    Two outcomes share a component when they share an X value or a Y
    value (transitively); K is the component index."""
    if len(dist.names) != 2:
        raise DomainError("common-information decomposition needs exactly two variables")
    support = sorted(dist.pmf)
    parent: dict = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for x, y in support:
        for node in (("x", x), ("y", y)):
            parent.setdefault(node, node)
        union(("x", x), ("y", y))
    roots = sorted({find(("x", x)) for x, _ in support})
    label = {root: str(i) for i, root in enumerate(roots)}
    comps: dict[str, list] = {l: [] for l in label.values()}
    probs: dict[str, object] = {l: ZERO for l in label.values()}
    x_label: dict[str, str] = {}
    y_label: dict[str, str] = {}
    for outcome in support:
        x, y = outcome
        l = label[find(("x", x))]
        comps[l].append(outcome)
        probs[l] += dist.pmf[outcome]
        x_label[x] = l
        y_label[y] = l
    h, exact = _entropy_of_probs(list(probs.values()))
    components = tuple(tuple(comps[l]) for l in sorted(comps))
    return GKDecomposition(components, x_label, y_label, h, exact)


# --- relaxed common information ------------------------------------------------


@dataclass(frozen=True)
class DeltaSearchResult:
    delta_achieved: float
    conditional: tuple[tuple[float, ...], ...]  # rows indexed by support pairs
    support: tuple[tuple, ...]
    components: tuple[float, float, float]  # (H(K|X), H(K|Y), I(X;Y|K))


def _plogp(p: float) -> float:
    return -p * math.log2(p) if p > 0 else 0.0


def _delta_components(pairs, probs, q, k_size):
    """(H(K|X), H(K|Y), I(X;Y|K)) for conditional rows ``q`` over pairs."""
    xs = sorted({x for x, _ in pairs})
    ys = sorted({y for _, y in pairs})
    hkx = 0.0
    for xv in xs:
        rows = [(probs[i], q[i]) for i, (x, _) in enumerate(pairs) if x == xv]
        px = sum(p for p, _ in rows)
        for k in range(k_size):
            hkx += px * _plogp(sum(p * row[k] for p, row in rows) / px)
    hky = 0.0
    for yv in ys:
        rows = [(probs[i], q[i]) for i, (_, y) in enumerate(pairs) if y == yv]
        py = sum(p for p, _ in rows)
        for k in range(k_size):
            hky += py * _plogp(sum(p * row[k] for p, row in rows) / py)
    ixy_k = 0.0
    for k in range(k_size):
        rk = sum(probs[i] * q[i][k] for i in range(len(pairs)))
        if rk <= 0:
            continue
        hx = hy = hxy = 0.0
        for xv in xs:
            hx += _plogp(
                sum(probs[i] * q[i][k] for i, (x, _) in enumerate(pairs) if x == xv) / rk
            )
        for yv in ys:
            hy += _plogp(
                sum(probs[i] * q[i][k] for i, (_, y) in enumerate(pairs) if y == yv) / rk
            )
        for i in range(len(pairs)):
            hxy += _plogp(probs[i] * q[i][k] / rk)
        ixy_k += rk * (hx + hy - hxy)
    return hkx, hky, max(ixy_k, 0.0)


def delta_star_search(
    dist: JointDistribution,
    k_alphabet: Optional[int] = None,
    resolution: int = 8,
    restarts: int = 4,
    seed: int = 0,
) -> DeltaSearchResult:
    """Minimize max(H(K|X), H(K|Y), I(X;Y|K)) over conditionals P(K|X,Y).

    Multi-start coordinate descent over a quantized simplex; the result
    is an upper bound on the true minimum, deterministic given the seed.
    Deterministic starting points (constant K, K=X, K=Y, K = maximal
    common function) are always included, so the result never exceeds
    their best value."""
    if len(dist.names) != 2:
        raise DomainError("search needs exactly two variables")
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    pairs = sorted(dist.pmf)
    probs = [float(dist.pmf[o]) for o in pairs]
    xs = sorted({x for x, _ in pairs})
    ys = sorted({y for _, y in pairs})
    if k_alphabet is None:
        k_alphabet = min(len(xs) * len(ys), 16)
    k = max(int(k_alphabet), 1)

    def pure(assign):
        return [tuple(1.0 if j == assign(o) else 0.0 for j in range(k)) for o in pairs]

    gk = gk_common_information(dist)
    starts = [pure(lambda o: 0)]
    if k >= len(xs):
        starts.append(pure(lambda o: xs.index(o[0])))
    if k >= len(ys):
        starts.append(pure(lambda o: ys.index(o[1])))
    if k >= len(gk.components):
        starts.append(pure(lambda o: int(gk.label_of(o[0]))))
    rng = random.Random(seed)
    for r in range(restarts):
        sub = random.Random(rng.randrange(1 << 30))
        q = []
        for _ in pairs:
            row = [sub.random() for _ in range(k)]
            s = sum(row)
            q.append(tuple(v / s for v in row))
        starts.append(q)

    def score(q):
        return max(_delta_components(pairs, probs, q, k))

    best_q, best = None, math.inf
    for q in starts:
        q = [tuple(r) for r in q]
        val = score(q)
        improved = True
        while improved:
            improved = False
            for i in range(len(pairs)):
                cur_row = q[i]
                for target in range(k):
                    e = tuple(1.0 if j == target else 0.0 for j in range(k))
                    for step in range(1, resolution + 1):
                        w = step / resolution
                        row = tuple((1 - w) * a + w * b for a, b in zip(cur_row, e))
                        q[i] = row
                        v = score(q)
                        if v < val - 1e-12:
                            val, cur_row, improved = v, row, True
                        else:
                            q[i] = cur_row
        if val < best:
            best, best_q = val, q
    comps = _delta_components(pairs, probs, best_q, k)
    return DeltaSearchResult(best, tuple(best_q), tuple(pairs), comps)


# --- pairwise auxiliaries for a network -----------------------------------------


def pairwise_aux_for_network(p: NetworkProblem, mode: str = "gk", **delta_params):
    """One auxiliary per unordered source pair.

    ``gk`` mode returns functional auxiliaries (the maximal common
    function of each pair, constant ones dropped); ``delta`` mode
    returns constraint rows H(K|Y_i) <= d, H(K|Y_j) <= d,
    I(Y_i;Y_j|K) <= d with d from the search. Returns (AuxSpec, rows)
    where rows is the list of emitted inequality templates."""
    dist = p.source_model.distribution
    if dist is None:
        raise DomainError("pairwise auxiliaries need an explicit source model")
    src = list(p.source_ids())
    functions: list[AuxFunction] = []
    rows: list = []
    names: list[str] = []
    for i, j in itertools.combinations(range(len(src)), 2):
        a, b = src[i], src[j]
        pair = dist.restrict([a, b])
        kid = f"K{i + 1}{j + 1}"
        if mode == "gk":
            gk = gk_common_information(pair)
            if len(gk.components) <= 1:
                continue  # constant: vacuous
            functions.append(AuxFunction(kid, (a,), dict(gk.x_label)))
        elif mode == "delta":
            res = delta_star_search(pair, **delta_params)
            d = rational(res.delta_achieved)
            names.append(kid)
            one = rational(1)
            rows.extend(
                [
                    (((one, (kid, a)), (-one, (a,))), "<=", d),
                    (((one, (kid, b)), (-one, (b,))), "<=", d),
                    (
                        (
                            (one, (a, kid)),
                            (one, (b, kid)),
                            (-one, (a, b, kid)),
                            (-one, (kid,)),
                        ),
                        "<=",
                        d,
                    ),
                ]
            )
        else:
            raise DomainError(f"unknown mode {mode!r}")
    if mode == "gk":
        return AuxSpec(functions=tuple(functions)), []
    return AuxSpec(constraints=tuple(rows), names=tuple(names)), rows


# --- finite fields ----------------------------------------------------------------


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise DomainError("field order must be at least 2")
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise DomainError(f"{q} is not a prime power")
            return p, k
    raise DomainError(f"{q} is not a prime power")


class GF:
    """Arithmetic in F_q, q = p^k <= 256; elements are ints 0..q-1,
    base-p digits being polynomial coefficients (low degree first)."""

    def __init__(self, q: int):
        if q > 256:
            raise DomainError("field order limited to 256")
        self.q = q
        self.p, self.k = _factor_prime_power(q)
        if self.k == 1:
            self._mul = lambda a, b: a * b % self.p
        else:
            self.poly = self._find_irreducible()
            self._exp, self._log = self._build_tables()
            self._mul = self._table_mul

    # polynomial helpers over F_p, coefficient lists low-first
    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k + 1):
            out.append(a % self.p)
            a //= self.p
        return out

    def _poly_mul_mod(self, a: int, b: int, mod: list[int]) -> int:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k + 2)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        # reduce by the monic modulus
        deg = len(mod) - 1
        while len(prod) > deg:
            lead = prod.pop()
            if lead:
                for i in range(deg):
                    prod[len(prod) - deg + i] = (prod[len(prod) - deg + i] - lead * mod[i]) % self.p
        val = 0
        for c in reversed(prod):
            val = val * self.p + c
        return val

    def _find_irreducible(self) -> list[int]:
        p, k = self.p, self.k
        for tail in itertools.product(range(p), repeat=k):
            mod = list(tail) + [1]
            if self._is_irreducible(mod):
                return mod
        raise DomainError("no irreducible polynomial found")  # unreachable

    def _is_irreducible(self, mod: list[int]) -> bool:
        p, k = self.p, self.k
        if mod[0] == 0:
            return False
        # trial division by all monic polynomials of degree 1..k//2
        for d in range(1, k // 2 + 1):
            for tail in itertools.product(range(p), repeat=d):
                div = list(tail) + [1]
                if self._poly_divides(div, mod):
                    return False
        return True

    def _poly_divides(self, div: list[int], mod: list[int]) -> bool:
        rem = list(mod)
        p = self.p
        inv_lead = pow(div[-1], p - 2, p)
        while len(rem) >= len(div) and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) < len(div):
                break
            f = rem[-1] * inv_lead % p
            off = len(rem) - len(div)
            for i, c in enumerate(div):
                rem[off + i] = (rem[off + i] - f * c) % p
        return not any(rem)

    def _build_tables(self):
        q = self.q
        for g in range(2, q):
            seen = [0] * q
            exp = []
            x = 1
            ok = True
            for _ in range(q - 1):
                if seen[x]:
                    ok = False
                    break
                seen[x] = 1
                exp.append(x)
                x = self._poly_mul_mod(x, g, self.poly)
            if ok:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                return exp, log
        raise DomainError("no generator found")  # unreachable

    def _table_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        val = 0
        for x, y in zip(reversed(da), reversed(db)):
            val = val * self.p + (x + y) % self.p
        return val

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        val = 0
        for x in reversed(self._digits(a)):
            val = val * self.p + (-x) % self.p
        return val

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return self._mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero has no inverse")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]


def _column_reduce(field: GF, columns: list[list[int]], context: str) -> list[list[int]]:
    """Independent subset of the given column vectors, in order."""
    basis: list[tuple[list[int], int]] = []  # (reduced vector, pivot index)
    kept = []
    for col in columns:
        v = list(col)
        for bvec, piv in basis:
            if v[piv]:
                f = field.mul(v[piv], field.inv(bvec[piv]))
                v = [field.sub(a, field.mul(f, b)) for a, b in zip(v, bvec)]
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            _warnings.warn(f"{context}: dependent generator column dropped")
            continue
        basis.append((v, piv))
        kept.append(list(col))
    return kept


@dataclass(frozen=True)
class SubspaceModel:
    """Sources uniform over subspaces of F_q^m with a shared basis.

    ``generators`` maps a source name to its generator matrix, stored as
    a list of columns, each a length-m vector over F_q."""

    q: int
    m: int
    generators: Mapping[str, Sequence[Sequence[int]]]

    def __post_init__(self):
        field = GF(self.q)
        gens = {}
        for name, cols in dict(self.generators).items():
            cols = [list(c) for c in cols]
            for c in cols:
                if len(c) != self.m:
                    raise DomainError(f"{name}: generator column has wrong dimension")
                if any(not (0 <= v < self.q) for v in c):
                    raise DomainError(f"{name}: entry outside the field")
            gens[name] = _column_reduce(field, cols, name)
        object.__setattr__(self, "generators", gens)

    def distribution(self, include_aux: bool = True) -> JointDistribution:
        """Uniform joint distribution of the basis variables K_1..K_m
        and the sources Y = K A (components joined by ``,``)."""
        field = GF(self.q)
        knames = [f"K{j + 1}" for j in range(self.m)]
        pmf = {}
        p = rational(1, self.q**self.m)
        for kvec in itertools.product(range(self.q), repeat=self.m):
            outcome = [str(v) for v in kvec]
            for name in self.generators:
                comps = []
                for col in self.generators[name]:
                    acc = 0
                    for kj, aj in zip(kvec, col):
                        acc = field.add(acc, field.mul(kj, aj))
                    comps.append(str(acc))
                outcome.append(",".join(comps))
            pmf[tuple(outcome)] = p
        names = knames + list(self.generators)
        alphabets = [tuple(str(v) for v in range(self.q))] * self.m + [
            tuple(sorted({o[self.m + i] for o in pmf}))
            for i in range(len(self.generators))
        ]
        dist = JointDistribution(names, alphabets, pmf)
        if include_aux:
            return dist
        return dist.restrict(list(self.generators))


def _uniform_entropy(count: int):
    h, _ = _entropy_of_probs([rational(1, count)] * count)
    return h


def linear_basis_aux(model: SubspaceModel):
    """Auxiliaries K_1..K_m (i.i.d. uniform over F_q) and the rows they
    satisfy jointly with the sources. Returns (AuxSpec, rows); rows are
    also embedded in the AuxSpec as constraint templates."""
    m, q = model.m, model.q
    knames = [f"K{j + 1}" for j in range(m)]
    one = rational(1)
    rows: list = []
    for r in range(1, m + 1):
        for combo in itertools.combinations(knames, r):
            rows.append((((one, combo),), "==", _uniform_entropy(q**r)))
    for name, cols in model.generators.items():
        support = [knames[j] for j in range(m) if any(col[j] for col in cols)]
        if support:
            # the source is a function of its supporting basis variables
            rows.append(
                (((one, tuple([name] + support)), (-one, tuple(support))), "==", ZERO)
            )
            # and its entropy is its dimension (independent columns) in
            # units of log2 q
            rows.append((((one, (name,)),), "==", _uniform_entropy(q ** len(cols))))
        else:
            rows.append((((one, (name,)),), "==", ZERO))
    return AuxSpec(constraints=tuple(rows), names=tuple(knames)), rows
