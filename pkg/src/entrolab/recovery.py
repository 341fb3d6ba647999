"""Recovering a distribution (up to permutation) from entropies alone.

For an n-ary positive variable X with atoms labelled 1..n by descending
probability, the indicator family attaches a binary variable to every
nonempty subset ``a`` of {2..n}: the indicator of X falling in ``a``.
The entropies of these indicators (and of small groups of them)
determine the probability vector of X up to permutation, and the
recovery procedure here is constructive: it identifies the singleton
indicators one atom at a time, from the smallest atom upward, using
only entropy queries.

Everything is label-blind: the oracle may present the family members
under arbitrary names, and recovery relies purely on argmin/min
structure, never on the labels.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .core import (
    DomainError,
    JointDistribution,
    binary_entropy_inverse,
)

TOLERANCE = 1e-9


class NotIndicatorConsistent(ValueError):
    """The entropy oracle is not consistent with any indicator family."""

    def __init__(self, step: str, detail: str = ""):
        self.step = step
        super().__init__(f"{step}: {detail}" if detail else step)


def _entropy_of_groups(probs: Sequence[float], keys: Sequence[int]) -> float:
    groups: dict[int, float] = {}
    for p, k in zip(probs, keys):
        groups[k] = groups.get(k, 0.0) + p
    h = 0.0
    for g in groups.values():
        if g > 0:
            h -= g * math.log2(g)
    return h


@dataclass(frozen=True)
class IndicatorFamily:
    """All indicators of subsets of the non-top atoms of a distribution.

    ``masks[label]`` is a bitmask over atoms 0..n-1 (atom 0 the most
    probable); the member is 1 exactly on the atoms in its mask."""

    probabilities: tuple[float, ...]  # descending, positive
    labels: tuple[str, ...]
    masks: Mapping[str, int]

    @property
    def n(self) -> int:
        return len(self.probabilities)

    def entropy(self, members: Sequence[str]) -> float:
        keys = []
        masks = [self.masks[m] for m in members]
        for atom in range(self.n):
            sig = 0
            for j, mask in enumerate(masks):
                if mask >> atom & 1:
                    sig |= 1 << j
            keys.append(sig)
        return _entropy_of_groups(self.probabilities, keys)

    def entropy_with_base(self, members: Sequence[str]) -> float:
        """Entropy of (X, members): atoms are distinct, so this is H(X)."""
        return _entropy_of_groups(self.probabilities, list(range(self.n)))

    def member_label(self, atoms: frozenset) -> str:
        """Label of the member indicating the given 1-based atom set."""
        target = 0
        for a in atoms:
            target |= 1 << (a - 1)
        for l, m in self.masks.items():
            if m == target:
                return l
        raise KeyError(atoms)


def _check_sorted_positive(probs) -> tuple[float, ...]:
    p = [float(v) for v in probs]
    if len(p) < 2:
        raise DomainError("need at least two atoms")
    if any(v <= 0 for v in p):
        raise DomainError("all atoms must have positive probability")
    if abs(sum(p) - 1.0) > 1e-9:
        raise DomainError("probabilities must sum to 1")
    if any(p[i] < p[i + 1] - 1e-12 for i in range(len(p) - 1)):
        raise DomainError("atoms must be sorted by descending probability")
    return tuple(p)


def build_indicator_family(dist) -> IndicatorFamily:
    """``dist``: a probability sequence (descending) or a one-variable
    JointDistribution whose outcomes are already sorted that way."""
    if isinstance(dist, JointDistribution):
        if len(dist.names) != 1:
            raise DomainError("indicator family needs a single variable")
        probs = [float(dist.pmf[o]) for o in sorted(dist.pmf)]
    else:
        probs = list(dist)
    p = _check_sorted_positive(probs)
    n = len(p)
    labels = []
    masks = {}
    for r in range(1, n):
        for combo in itertools.combinations(range(2, n + 1), r):
            label = "a{" + ",".join(map(str, combo)) + "}"
            mask = 0
            for atom in combo:
                mask |= 1 << (atom - 1)
            labels.append(label)
            masks[label] = mask
    return IndicatorFamily(p, tuple(labels), masks)


@dataclass(frozen=True)
class RecoveryInput:
    """A label-blind entropy oracle over family member names."""

    n: int
    labels: tuple[str, ...]
    entropy: Callable[[Sequence[str]], float]

    @staticmethod
    def from_family(
        family: IndicatorFamily, shuffle_seed: Optional[int] = None
    ) -> "RecoveryInput":
        labels = list(family.labels)
        if shuffle_seed is not None:
            rng = random.Random(shuffle_seed)
            shuffled = [f"M{i}" for i in range(len(labels))]
            rng.shuffle(labels)
            alias = dict(zip(shuffled, labels))
            return RecoveryInput(
                family.n,
                tuple(shuffled),
                lambda ms: family.entropy([alias[m] for m in ms]),
            )
        return RecoveryInput(family.n, tuple(labels), family.entropy)

    @staticmethod
    def from_table(n: int, labels: Sequence[str], table: Mapping[str, float]) -> "RecoveryInput":
        def query(members: Sequence[str]) -> float:
            key = ",".join(sorted(members))
            try:
                return table[key]
            except KeyError:
                raise NotIndicatorConsistent(
                    "oracle", f"no entropy value supplied for {{{key}}}"
                ) from None

        return RecoveryInput(n, tuple(labels), query)


@dataclass(frozen=True)
class RecoveredDistribution:
    probabilities: tuple[float, ...]  # descending
    provenance: Mapping[str, int]  # member label -> atom index (2..n)


def _conditional(inp: RecoveryInput, a: str, given: Sequence[str]) -> float:
    return inp.entropy([a] + list(given)) - inp.entropy(list(given))


def _has_chain(
    inp: RecoveryInput, base: tuple[str, ...], length: int, tol: float
) -> bool:
    """Does a chain of ``length`` members exist, each with positive
    entropy given the base and its predecessors? Depth-first with
    memoization on the chosen set (order irrelevant for existence)."""
    if length == 0:
        return True
    others = [l for l in inp.labels if l not in base]
    seen: set[frozenset] = set()

    def extend(chain: tuple[str, ...]) -> bool:
        if len(chain) == length:
            return True
        key = frozenset(chain)
        if key in seen:
            return False
        seen.add(key)
        given = list(base) + list(chain)
        h_given = inp.entropy(given)
        for cand in others:
            if cand in chain:
                continue
            if inp.entropy([cand] + given) - h_given > tol:
                if extend(chain + (cand,)):
                    return True
        return False

    return extend(())


def recover_distribution(inp: RecoveryInput, tolerance: float = TOLERANCE) -> RecoveredDistribution:
    n = inp.n
    labels = list(inp.labels)
    if len(labels) != (1 << (n - 1)) - 1:
        raise NotIndicatorConsistent(
            "support", f"expected {(1 << (n - 1)) - 1} members for n={n}, got {len(labels)}"
        )
    singles = {l: inp.entropy([l]) for l in labels}
    # distinctness: every pair must have positive conditional entropy
    # both ways
    for a, b in itertools.combinations(labels, 2):
        joint = inp.entropy([a, b])
        if joint - singles[b] <= tolerance or joint - singles[a] <= tolerance:
            raise NotIndicatorConsistent("distinct", f"{a} and {b} are not distinct")
    # binarity: a binary member admits a chain of n-2 further members
    # each adding fresh uncertainty; a larger-alphabet member cannot,
    # because each step grows the joint support and support is capped
    # by the atom count
    for l in labels:
        if not _has_chain(inp, (l,), n - 2, tolerance):
            raise NotIndicatorConsistent("binary", f"{l} is not a binary indicator")
    # smallest atom first, then walk upward by minimal fresh conditional
    # entropy
    order = sorted(labels, key=lambda l: (singles[l], l))
    a_n = order[0]
    probs: dict[int, float] = {n: binary_entropy_inverse(singles[a_n])}
    provenance: dict[str, int] = {a_n: n}
    selected = [a_n]
    for i in range(n - 1, 1, -1):
        h_sel = inp.entropy(selected)
        candidates = []
        for l in labels:
            if l in provenance:
                continue
            cond = inp.entropy([l] + selected) - h_sel
            if cond > tolerance:
                candidates.append((cond, singles[l], l))
        if not candidates:
            raise NotIndicatorConsistent("select", f"no candidate member at atom {i}")
        candidates.sort()
        _, h_single, choice = candidates[0]
        probs[i] = binary_entropy_inverse(h_single)
        provenance[choice] = i
        selected.append(choice)
    p1 = 1.0 - sum(probs.values())
    if p1 <= 0 or p1 < probs[2] - tolerance:
        raise NotIndicatorConsistent(
            "top-atom", f"residual probability {p1} below second atom {probs[2]}"
        )
    ordered = (p1,) + tuple(probs[i] for i in range(2, n + 1))
    return RecoveredDistribution(ordered, provenance)


def check_permutation_equivalence(p, q, tolerance: float = TOLERANCE) -> bool:
    p = sorted(float(v) for v in p)
    q = sorted(float(v) for v in q)
    if len(p) != len(q):
        return False
    return all(abs(a - b) <= tolerance for a, b in zip(p, q))


# --- property verification --------------------------------------------------------


@dataclass(frozen=True)
class PropertyReport:
    violations: tuple[str, ...]
    ties: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_properties(dist, tolerance: float = TOLERANCE) -> PropertyReport:
    """Check the five structural properties of an indicator family by
    direct oracle evaluation; returns violations (expected none) and
    benign ties."""
    family = build_indicator_family(dist)
    n = family.n
    inp = RecoveryInput.from_family(family)
    labels = list(family.labels)
    singles = {l: inp.entropy([l]) for l in labels}
    violations: list[str] = []
    ties: list[str] = []

    def singleton(atom: int) -> str:
        return family.member_label(frozenset([atom]))

    # P1: all pairs mutually distinct
    for a, b in itertools.combinations(labels, 2):
        joint = inp.entropy([a, b])
        if joint - singles[b] <= tolerance:
            violations.append(f"P1: H({a}|{b}) = 0")
        if joint - singles[a] <= tolerance:
            violations.append(f"P1: H({b}|{a}) = 0")
    # P2: conditioning on singleton indicators of a set b kills a
    # member exactly when the member is inside b
    atom_sets = {l: frozenset(
        i + 1 for i in range(n) if family.masks[l] >> i & 1
    ) for l in labels}
    for l in labels:
        for r in range(0, n):
            for b in itertools.combinations(range(2, n + 1), r):
                given = [singleton(i) for i in b]
                cond = _conditional(inp, l, given) if given else singles[l]
                expect_positive = bool(atom_sets[l] - set(b))
                if expect_positive and cond <= tolerance:
                    violations.append(f"P2: H({l}|atoms {b}) = 0 but should be positive")
                if not expect_positive and cond > tolerance:
                    violations.append(f"P2: H({l}|atoms {b}) > 0 but should vanish")
    # P3: every member admits a full fresh-uncertainty chain
    for l in labels:
        if not _has_chain(inp, (l,), n - 2, tolerance):
            violations.append(f"P3: no chain of length {n - 2} from {l}")
    # P4: the smallest atom's singleton attains the minimum entropy
    h_min = min(singles.values())
    l_n = singleton(n)
    if singles[l_n] > h_min + tolerance:
        violations.append("P4: smallest-atom singleton does not attain the minimum")
    elif sum(1 for v in singles.values() if abs(v - h_min) <= tolerance) > 1:
        ties.append("P4: minimum entropy attained by several members")
    # P5: the singleton of atom i is minimal among members still
    # uncertain given the smaller atoms' singletons
    for i in range(2, n):
        given = [singleton(j) for j in range(i + 1, n + 1)]
        h_i = _conditional(inp, singleton(i), given)
        if h_i <= tolerance:
            violations.append(f"P5a: H(atom {i} indicator | smaller atoms) = 0")
        for l in labels:
            if l == singleton(i):
                continue
            cond = _conditional(inp, l, given)
            if cond > tolerance:
                if h_i > cond + tolerance:
                    violations.append(f"P5b: {l} beats the singleton of atom {i}")
                if singles[singleton(i)] > singles[l] + tolerance:
                    violations.append(f"P5c: H of singleton {i} exceeds H({l})")
    return PropertyReport(tuple(violations), tuple(ties))


# --- multi-variable extension ------------------------------------------------------


@dataclass(frozen=True)
class MultivarIndicatorInput:
    """Flattened indicator oracle for a product variable, with the
    single-axis event indicators marked per axis (``anchors[i]`` lists
    one member label per value of axis i, in arbitrary order)."""

    n: int  # flattened atom count
    labels: tuple[str, ...]
    entropy: Callable[[Sequence[str]], float]
    anchors: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class RecoveredJoint:
    pmf: Mapping[tuple, float]  # per-axis value-index tuples -> probability
    axis_sizes: tuple[int, ...]
    anchor_order: tuple[tuple[str, ...], ...]  # value index -> anchor label


def build_multivar_indicators(dist: JointDistribution) -> MultivarIndicatorInput:
    """Flatten a positive joint distribution and build every indicator
    over the flattened atoms except the most probable one."""
    m = len(dist.names)
    sizes = [len(a) for a in dist.alphabets]
    if any(s < 3 for s in sizes):
        raise DomainError("every axis needs an alphabet of size at least 3")
    outcomes = sorted(dist.pmf)
    if len(outcomes) != math.prod(sizes):
        raise DomainError("joint distribution must be strictly positive")
    probs = [float(dist.pmf[o]) for o in outcomes]
    top = max(range(len(outcomes)), key=lambda i: (probs[i], outcomes[i]))
    rest = [i for i in range(len(outcomes)) if i != top]
    n = len(outcomes)
    # atom order: designated atom first, the rest in outcome order
    atom_of = {top: 0}
    for k, i in enumerate(rest):
        atom_of[i] = k + 1
    p_ordered = [probs[top]] + [probs[i] for i in rest]

    masks: dict[str, int] = {}
    labels: list[str] = []
    counter = 0
    mask_label: dict[int, str] = {}
    for r in range(1, n):
        for combo in itertools.combinations(range(1, n), r):
            mask = 0
            for a in combo:
                mask |= 1 << a
            label = f"M{counter}"
            counter += 1
            labels.append(label)
            masks[label] = mask
            mask_label[mask] = label
    anchors = []
    for axis in range(m):
        per_value = []
        for value in dist.alphabets[axis]:
            mask = 0
            for i, o in enumerate(outcomes):
                if o[axis] == value and atom_of[i] != 0:
                    mask |= 1 << atom_of[i]
            per_value.append(mask_label[mask])
        anchors.append(tuple(per_value))

    def entropy(members: Sequence[str]) -> float:
        ms = [masks[x] for x in members]
        keys = []
        for atom in range(n):
            sig = 0
            for j, mask in enumerate(ms):
                if mask >> atom & 1:
                    sig |= 1 << j
            keys.append(sig)
        return _entropy_of_groups(p_ordered, keys)

    return MultivarIndicatorInput(n, tuple(labels), entropy, tuple(anchors))


def recover_multivar(
    inp: MultivarIndicatorInput,
    alphabets: Optional[Sequence[int]] = None,
    tolerance: float = TOLERANCE,
) -> RecoveredJoint:
    """Recover the flattened atom probabilities, then read each atom's
    per-axis coordinates off the anchor memberships. The designated
    (most probable) atom belongs to exactly one value class per axis:
    the one whose anchor indicates one atom fewer than the others."""
    flat = RecoveryInput(inp.n, inp.labels, inp.entropy)
    rec = recover_distribution(flat, tolerance)
    n = inp.n
    sizes = tuple(len(a) for a in inp.anchors)
    if alphabets is not None and tuple(alphabets) != sizes:
        raise DomainError(f"anchor structure implies alphabet sizes {sizes}")
    if math.prod(sizes) != n:
        raise NotIndicatorConsistent("anchors", "axis sizes do not factor the atom count")
    by_atom = {i: l for l, i in rec.provenance.items()}  # atom index 2..n -> label
    # anchor membership per recovered atom: conditioning on every other
    # singleton leaves residual uncertainty exactly when the atom is in
    # the anchor's event
    coords: dict[int, list] = {atom: [] for atom in range(2, n + 1)}
    designated_coord: list[int] = []
    for axis, per_value in enumerate(inp.anchors):
        covered: set[int] = set()
        deficient = []
        for value_index, anchor in enumerate(per_value):
            members = set()
            for atom in range(2, n + 1):
                given = [by_atom[j] for j in range(2, n + 1) if j != atom]
                if anchor in given:
                    # the anchor itself was identified as this atom's
                    # singleton; impossible for a genuine product family
                    raise NotIndicatorConsistent(
                        "anchors", f"anchor {anchor} identified as a singleton"
                    )
                if inp.entropy([anchor] + given) - inp.entropy(given) > tolerance:
                    members.add(atom)
            if members & covered:
                raise NotIndicatorConsistent(
                    "anchors", f"axis {axis}: value classes overlap"
                )
            covered |= members
            for atom in members:
                coords[atom].append(value_index)
            deficiency = n // sizes[axis] - len(members)
            if deficiency == 1:
                deficient.append(value_index)
            elif deficiency != 0:
                raise NotIndicatorConsistent(
                    "anchors", f"axis {axis}: value class of impossible size"
                )
        if covered != set(range(2, n + 1)) or len(deficient) != 1:
            raise NotIndicatorConsistent(
                "anchors", f"axis {axis}: value classes do not partition the atoms"
            )
        designated_coord.append(deficient[0])
    pmf: dict[tuple, float] = {tuple(designated_coord): rec.probabilities[0]}
    for atom in range(2, n + 1):
        if len(coords[atom]) != len(sizes):
            raise NotIndicatorConsistent("anchors", f"atom {atom} missing a coordinate")
        pmf[tuple(coords[atom])] = rec.probabilities[atom - 1]
    if len(pmf) != n:
        raise NotIndicatorConsistent("anchors", "coordinate collision between atoms")
    return RecoveredJoint(pmf, sizes, inp.anchors)


def find_axis_permutations(
    recovered: RecoveredJoint, reference: JointDistribution, tolerance: float = TOLERANCE
):
    """Per-axis permutations aligning a recovered joint pmf with a
    reference distribution, or None. Brute force over all per-axis
    permutations; the certificate is directly checkable by comparing
    pmf values."""
    sizes = recovered.axis_sizes
    if tuple(len(a) for a in reference.alphabets) != sizes:
        return None
    ref = {
        tuple(reference.alphabets[i].index(v) for i, v in enumerate(o)): float(p)
        for o, p in reference.pmf.items()
    }
    for perms in itertools.product(*(itertools.permutations(range(s)) for s in sizes)):
        if all(
            abs(ref[tuple(perm[c] for perm, c in zip(perms, coord))] - p) <= tolerance
            for coord, p in recovered.pmf.items()
        ):
            return perms
    return None
