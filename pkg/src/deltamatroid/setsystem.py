"""Set systems, delta-matroids and matroids over small ground sets.

A ground set holds up to 64 labelled elements; subsets are plain Python ints
used as bit-vectors (bit i = element with index i).  A set system is a ground
set plus a family of feasible subsets kept in canonical order (cardinality,
then numeric bit value).  Delta-matroids are set systems satisfying the
symmetric exchange axiom; matroids are delta-matroids whose feasible sets
(bases) all have the same size.

All objects are immutable after construction and every operation is a pure
function, so values can be shared freely across threads.
"""

from __future__ import annotations

import json
from enum import Enum
from typing import Iterable, Iterator, Sequence

MAX_GROUND = 64


class ImproperSetSystemError(ValueError):
    """Raised when an operation needs a proper (non-empty) feasible family."""


class AxiomViolationError(ValueError):
    """Raised when a checked construction fails the symmetric exchange axiom
    or the equicardinality requirement for matroids."""


class SizeGuardError(ValueError):
    """Raised when an exponential search would exceed its size cap."""


# ---------------------------------------------------------------------------
# bit-vector helpers
# ---------------------------------------------------------------------------

def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask``, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def bit_indices(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def canonical_sort_key(mask: int) -> tuple:
    return (popcount(mask), mask)


# ---------------------------------------------------------------------------
# ground sets
# ---------------------------------------------------------------------------

class GroundSet:
    """An ordered list of distinct element labels, at most 64 of them.

    The construction order is the canonical element order for all output.
    """

    __slots__ = ("labels", "index", "n", "full_mask")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("ground set labels must be distinct")
        if len(labels) > MAX_GROUND:
            raise SizeGuardError(f"ground set capped at {MAX_GROUND} elements")
        self.labels = labels
        self.index = {lab: i for i, lab in enumerate(labels)}
        self.n = len(labels)
        self.full_mask = (1 << self.n) - 1

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            lab = str(lab)
            if lab not in self.index:
                raise ValueError(f"unknown element {lab!r}")
            m |= 1 << self.index[lab]
        return m

    def singleton(self, label: str) -> int:
        return self.mask([label])

    def labels_of(self, mask: int) -> tuple:
        if mask & ~self.full_mask:
            raise ValueError("mask has bits outside the ground set")
        return tuple(self.labels[i] for i in bit_indices(mask))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroundSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"GroundSet({list(self.labels)!r})"


# ---------------------------------------------------------------------------
# set systems
# ---------------------------------------------------------------------------

class SetSystem:
    """A ground set together with a family of subsets (possibly empty)."""

    __slots__ = ("ground", "feasible")

    def __init__(self, ground: GroundSet, feasible: Iterable[int]):
        self.ground = ground
        feas = sorted(set(feasible), key=canonical_sort_key)
        for m in feas:
            if m & ~ground.full_mask:
                raise ValueError("feasible set has bits outside the ground set")
        self.feasible = tuple(feas)

    @property
    def is_proper(self) -> bool:
        return bool(self.feasible)

    def require_proper(self) -> None:
        if not self.feasible:
            raise ImproperSetSystemError("set system has no feasible sets")

    def feasible_labels(self) -> list:
        return [list(self.ground.labels_of(m)) for m in self.feasible]

    def _family_key(self) -> frozenset:
        return frozenset(frozenset(self.ground.labels_of(m)) for m in self.feasible)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetSystem):
            return NotImplemented
        if set(self.ground.labels) != set(other.ground.labels):
            return False
        if self.ground.labels == other.ground.labels:
            return self.feasible == other.feasible
        return self._family_key() == other._family_key()

    def __hash__(self) -> int:
        return hash((frozenset(self.ground.labels), self._family_key()))

    def __repr__(self) -> str:
        fam = ",".join("{" + ",".join(self.ground.labels_of(m)) + "}" for m in self.feasible)
        return f"{type(self).__name__}({list(self.ground.labels)!r}, [{fam}])"


class DeltaMatroid(SetSystem):
    """A proper set system satisfying the symmetric exchange axiom.

    ``check=True`` runs the (exponential) axiom validation; ``check=False``
    records the caller's explicit assertion that the family is known to be a
    delta-matroid (e.g. produced by an operation that preserves the axiom).
    """

    __slots__ = ()

    def __init__(self, ground: GroundSet, feasible: Iterable[int], *, check: bool = True):
        super().__init__(ground, feasible)
        self.require_proper()
        if check and not validate_delta_matroid(self):
            raise AxiomViolationError(f"symmetric exchange axiom fails for {self!r}")

    @staticmethod
    def from_system(system: SetSystem, *, check: bool = True) -> "DeltaMatroid":
        return DeltaMatroid(system.ground, system.feasible, check=check)


class Matroid(DeltaMatroid):
    """A delta-matroid whose feasible sets (its bases) are equicardinal."""

    __slots__ = ()

    def __init__(self, ground: GroundSet, feasible: Iterable[int], *, check: bool = True):
        super().__init__(ground, feasible, check=check)
        sizes = {popcount(m) for m in self.feasible}
        if len(sizes) != 1:
            raise AxiomViolationError("matroid bases must be equicardinal")

    @property
    def bases(self) -> tuple:
        return self.feasible

    def full_rank(self) -> int:
        return popcount(self.feasible[0])

    def rank(self, subset: int) -> int:
        if subset & ~self.ground.full_mask:
            raise ValueError("subset outside ground set")
        return max(popcount(subset & base) for base in self.feasible)


# ---------------------------------------------------------------------------
# the symmetric exchange axiom
# ---------------------------------------------------------------------------

def validate_delta_matroid(system: SetSystem) -> bool:
    """Whether every pair X, Y of feasible sets admits symmetric exchanges.

    For each u in X symmetric-difference Y there must be some v in the same
    symmetric difference (v = u allowed) with X symmetric-difference {u,v}
    feasible again.
    """
    system.require_proper()
    feas = set(system.feasible)
    family = system.feasible
    for X in family:
        for Y in family:
            diff = X ^ Y
            for u in bit_indices(diff):
                ub = 1 << u
                # {u,v} is a one-element set when v = u, hence the bitwise or
                if not any((X ^ (ub | (1 << v))) in feas for v in bit_indices(diff)):
                    return False
    return True


# ---------------------------------------------------------------------------
# twists, loop complementation and friends
# ---------------------------------------------------------------------------

def _check_subset(system: SetSystem, subset: int) -> None:
    if subset & ~system.ground.full_mask:
        raise ValueError("twisting set outside the ground set")


def twist(system: SetSystem, subset: int) -> SetSystem:
    """The system with every feasible set replaced by its symmetric
    difference with ``subset``.  Preserves the exchange axiom."""
    _check_subset(system, subset)
    return SetSystem(system.ground, (m ^ subset for m in system.feasible))


def dual(system: SetSystem) -> SetSystem:
    """Twist by the full ground set."""
    return twist(system, system.ground.full_mask)


def loop_complement(system: SetSystem, subset: int) -> SetSystem:
    """Loop complementation on each element of ``subset`` in turn.

    One element e toggles membership of F | {e} for every feasible F not
    containing e.  The result can fail the exchange axiom, so a plain
    SetSystem is returned.  Element order does not matter.
    """
    _check_subset(system, subset)
    feas = set(system.feasible)
    for e in bit_indices(subset):
        ebit = 1 << e
        for m in [m for m in feas if not m & ebit]:
            feas.symmetric_difference_update({m | ebit})
    return SetSystem(system.ground, feas)


def dual_pivot(system: SetSystem, subset: int) -> SetSystem:
    """The composite twist-then-loop-complement-then-twist on ``subset``."""
    return twist(loop_complement(twist(system, subset), subset), subset)


def apply_word(system: SetSystem, word: Sequence[tuple]) -> SetSystem:
    """Apply a left-to-right word of ("twist"|"loopc", subset) operations."""
    out = system
    for gen, subset in word:
        if gen in ("twist", "*"):
            out = twist(out, subset)
        elif gen in ("loopc", "+"):
            out = loop_complement(out, subset)
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return out


# ---------------------------------------------------------------------------
# loops, coloops, minors
# ---------------------------------------------------------------------------

def is_coloop(system: SetSystem, element: int) -> bool:
    """An element lying in every feasible set."""
    system.require_proper()
    ebit = 1 << element
    return all(m & ebit for m in system.feasible)


def is_loop(system: SetSystem, element: int) -> bool:
    """An element lying in no feasible set."""
    system.require_proper()
    ebit = 1 << element
    return not any(m & ebit for m in system.feasible)


def _one_point_minor(system: SetSystem, element: int, contract_it: bool) -> list:
    ebit = 1 << element
    if is_coloop(system, element):
        return [m & ~ebit for m in system.feasible]
    if is_loop(system, element):
        return list(system.feasible)
    if contract_it:
        return [m & ~ebit for m in system.feasible if m & ebit]
    return [m for m in system.feasible if not m & ebit]


def _drop_element(ground: GroundSet, element: int) -> GroundSet:
    return GroundSet(lab for i, lab in enumerate(ground.labels) if i != element)


def _compress_mask(mask: int, element: int) -> int:
    low = mask & ((1 << element) - 1)
    high = mask >> (element + 1)
    return low | (high << element)


def _minor_step(D, element: int, contract_it: bool):
    feas = _one_point_minor(D, element, contract_it)
    ground = _drop_element(D.ground, element)
    feas = [_compress_mask(m, element) for m in feas]
    cls = type(D) if isinstance(D, DeltaMatroid) else SetSystem
    if cls is Matroid:
        return Matroid(ground, feas, check=False)
    if cls is DeltaMatroid or issubclass(cls, DeltaMatroid):
        return DeltaMatroid(ground, feas, check=False)
    return SetSystem(ground, feas)


def delete(D: SetSystem, label: str):
    """Remove one element; falls back to contraction when it is a coloop."""
    return _minor_step(D, D.ground.index[str(label)], contract_it=False)


def contract(D: SetSystem, label: str):
    """Contract one element; falls back to deletion when it is a loop."""
    return _minor_step(D, D.ground.index[str(label)], contract_it=True)


def minor(D: SetSystem, delete_labels: Iterable[str], contract_labels: Iterable[str]):
    """Delete and contract disjoint label sets; order-independent."""
    dels = [str(x) for x in delete_labels]
    cons = [str(x) for x in contract_labels]
    if set(dels) & set(cons):
        raise ValueError("delete and contract sets must be disjoint")
    out = D
    for lab in dels:
        out = delete(out, lab)
    for lab in cons:
        out = contract(out, lab)
    return out


def restrict(D: SetSystem, subset: int):
    """Delete everything outside ``subset``."""
    _check_subset(D, subset)
    out = D
    for lab in D.ground.labels_of(D.ground.full_mask & ~subset):
        out = delete(out, lab)
    return out


def direct_sum(D1: SetSystem, D2: SetSystem) -> SetSystem:
    """Disjoint union of ground sets; feasible sets are all unions.

    Label collisions are an error rather than being renamed away.
    """
    clash = set(D1.ground.labels) & set(D2.ground.labels)
    if clash:
        raise ValueError(f"ground sets share labels: {sorted(clash)}")
    ground = GroundSet(D1.ground.labels + D2.ground.labels)
    shift = D1.ground.n
    feas = [m1 | (m2 << shift) for m1 in D1.feasible for m2 in D2.feasible]
    if isinstance(D1, DeltaMatroid) and isinstance(D2, DeltaMatroid):
        if isinstance(D1, Matroid) and isinstance(D2, Matroid):
            return Matroid(ground, feas, check=False)
        return DeltaMatroid(ground, feas, check=False)
    return SetSystem(ground, feas)


# ---------------------------------------------------------------------------
# upper and lower matroids, distances
# ---------------------------------------------------------------------------

def lower_matroid(D: SetSystem) -> Matroid:
    """The matroid whose bases are the minimum-size feasible sets."""
    D.require_proper()
    low = min(popcount(m) for m in D.feasible)
    return Matroid(D.ground, (m for m in D.feasible if popcount(m) == low), check=False)


def upper_matroid(D: SetSystem) -> Matroid:
    """The matroid whose bases are the maximum-size feasible sets."""
    D.require_proper()
    high = max(popcount(m) for m in D.feasible)
    return Matroid(D.ground, (m for m in D.feasible if popcount(m) == high), check=False)


def d_min(D: SetSystem) -> int:
    """Size of the smallest feasible set."""
    D.require_proper()
    return min(popcount(m) for m in D.feasible)


def rho(D: SetSystem, subset: int) -> int:
    """|E| minus the distance from ``subset`` to the feasible family."""
    _check_subset(D, subset)
    D.require_proper()
    return D.ground.n - min(popcount(subset ^ m) for m in D.feasible)


def is_even(D: SetSystem) -> bool:
    """Whether all feasible sets share one cardinality parity."""
    D.require_proper()
    parity = popcount(D.feasible[0]) & 1
    return all(popcount(m) & 1 == parity for m in D.feasible)


def is_matroid(D: SetSystem) -> bool:
    """Whether all feasible sets are equicardinal."""
    D.require_proper()
    return len({popcount(m) for m in D.feasible}) == 1


# ---------------------------------------------------------------------------
# matroid connectivity
# ---------------------------------------------------------------------------

def _splits(M: Matroid) -> Iterator[int]:
    """Non-trivial subsets A (containing element 0) with r(A)+r(E-A) = r(E)."""
    full = M.ground.full_mask
    r_full = M.full_rank()
    rest = full & ~1
    for sub in submasks(rest):
        part = sub | 1
        if part == full:
            continue
        if M.rank(part) + M.rank(full & ~part) == r_full:
            yield part

def is_separable(D: SetSystem) -> bool:
    """Whether the lower matroid splits as a direct sum across some
    non-trivial bipartition of the ground set (rank additivity test)."""
    M = lower_matroid(D)
    if M.ground.n <= 1:
        return False
    return next(_splits(M), None) is not None


def matroid_components(M: Matroid) -> list:
    """The finest partition of the ground set with ranks adding up.

    Returned as a list of label tuples, ordered by first element.
    """
    if M.ground.n == 0:
        return []
    for part in _splits(M):
        comp = M.ground.full_mask & ~part
        left = matroid_components(_restrict_matroid(M, part))
        right = matroid_components(_restrict_matroid(M, comp))
        out = left + right
        out.sort(key=lambda labs: M.ground.index[labs[0]])
        return out
    return [M.ground.labels]


def _restrict_matroid(M: Matroid, subset: int) -> Matroid:
    out = restrict(M, subset)
    assert isinstance(out, Matroid)
    return out


# ---------------------------------------------------------------------------
# ribbon-loop taxonomy
# ---------------------------------------------------------------------------

class ElementKind(Enum):
    COLOOP = "coloop"
    DM_LOOP = "dm-loop"  # = trivial orientable ribbon loop
    NONTRIVIAL_ORIENTABLE_RIBBON_LOOP = "nontrivial-orientable-ribbon-loop"
    TRIVIAL_NONORIENTABLE_RIBBON_LOOP = "trivial-nonorientable-ribbon-loop"
    NONTRIVIAL_NONORIENTABLE_RIBBON_LOOP = "nontrivial-nonorientable-ribbon-loop"
    ORDINARY = "ordinary"


def _loop_in_lower(system: SetSystem, element: int) -> bool:
    """Whether the element avoids every minimum-size feasible set."""
    low = d_min(system)
    ebit = 1 << element
    return not any(m & ebit for m in system.feasible if popcount(m) == low)


def element_kind(D: SetSystem, label: str) -> ElementKind:
    """Classify one element as coloop / ribbon-loop flavour / ordinary.

    The orientable-vs-non-orientable resolution uses the minimum-size
    trichotomy of (D, D twisted at e, D dual-pivoted at e) and is
    cross-checked against the definitional tests; disagreement means the
    input was not a delta-matroid (or not vf-safe enough to classify), and
    raises AssertionError.
    """
    D.require_proper()
    e = D.ground.index[str(label)]
    ebit = 1 << e
    if is_coloop(D, e):
        return ElementKind.COLOOP
    if is_loop(D, e):
        return ElementKind.DM_LOOP

    tw = twist(D, ebit)
    dp = dual_pivot(D, ebit)
    d0, d1, d2 = d_min(D), d_min(tw), d_min(dp)
    lows = sorted((d0, d1, d2))
    assert lows[0] == lows[1] and lows[2] == lows[0] + 1, (
        f"minimum-size trichotomy fails at {label!r}: {(d0, d1, d2)}")

    ribbon_loop = _loop_in_lower(D, e)
    in_twist = _loop_in_lower(tw, e)
    in_pivot = _loop_in_lower(dp, e)
    assert [ribbon_loop, in_twist, in_pivot].count(True) == 2, (
        f"element {label!r} should be a lower-matroid loop exactly twice")

    if not ribbon_loop:
        return ElementKind.ORDINARY
    if in_twist:
        # non-orientable; trivial iff membership of e never matters
        feas = set(D.feasible)
        trivial = all((m | ebit) in feas for m in feas if not m & ebit) and \
            all((m & ~ebit) in feas for m in feas if m & ebit)
        lc = loop_complement(D, ebit)
        assert trivial == is_loop(lc, e), (
            f"trivial non-orientable cross-check fails at {label!r}")
        if trivial:
            return ElementKind.TRIVIAL_NONORIENTABLE_RIBBON_LOOP
        return ElementKind.NONTRIVIAL_NONORIENTABLE_RIBBON_LOOP
    assert in_pivot, f"ribbon loop {label!r} neither orientable nor non-orientable"
    return ElementKind.NONTRIVIAL_ORIENTABLE_RIBBON_LOOP


# ---------------------------------------------------------------------------
# vf-safety
# ---------------------------------------------------------------------------

def is_vf_safe(D: SetSystem, max_n: int = 10) -> bool:
    """Whether every image under twist/loop-complement words keeps the
    exchange axiom.  Brute-force orbit walk, guarded by ``max_n``."""
    D.require_proper()
    if D.ground.n > max_n:
        raise SizeGuardError(
            f"vf-safety search capped at {max_n} elements (got {D.ground.n})")
    if not validate_delta_matroid(D):
        return False
    seen = {D.feasible}
    queue = [D]
    while queue:
        cur = queue.pop()
        for e in range(D.ground.n):
            ebit = 1 << e
            for image in (twist(cur, ebit), loop_complement(cur, ebit)):
                if image.feasible in seen:
                    continue
                seen.add(image.feasible)
                if not image.is_proper or not validate_delta_matroid(image):
                    return False
                queue.append(image)
    return True


# ---------------------------------------------------------------------------
# the delta-matroid file format
# ---------------------------------------------------------------------------

def parse_set_system(text: str) -> SetSystem:
    """Read the JSON shape {"ground": [...], "feasible": [[...], ...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("top level must be an object")
    for field in ("ground", "feasible"):
        if field not in data:
            raise ValueError(f"missing field {field!r}")
    ground_field = data["ground"]
    if not isinstance(ground_field, list) or not all(isinstance(x, str) for x in ground_field):
        raise ValueError("field 'ground' must be a list of strings")
    ground = GroundSet(ground_field)
    feas_field = data["feasible"]
    if not isinstance(feas_field, list):
        raise ValueError("field 'feasible' must be a list of lists")
    masks = []
    for entry in feas_field:
        if not isinstance(entry, list) or not all(isinstance(x, str) for x in entry):
            raise ValueError("field 'feasible' must contain lists of strings")
        masks.append(ground.mask(entry))
    return SetSystem(ground, masks)


def serialize_set_system(system: SetSystem) -> str:
    """Canonical single-line JSON; inverse of parse on canonical input."""
    data = {
        "ground": list(system.ground.labels),
        "feasible": system.feasible_labels(),
    }
    return json.dumps(data)
