"""Binary matroids as GF(2) matrices with int-bitmask rows.

Bit j of a row is the entry in the column labelled ``labels[j]``.  The cycle
space is the null space of the representation, the cocycle space its row
space; the two are orthogonal complements under the GF(2) dot product, and
the bicycle space is their intersection.

Circuit enumeration and the circuit-partition predicates also exist in
brute-force form for abstract (bases-list) matroids; those are the oracles
the linear-algebra routes are tested against.
"""

from __future__ import annotations

import itertools
import json
from typing import Iterable, List, Sequence

from .laurent import LaurentPoly
from .setsystem import (GroundSet, Matroid, SizeGuardError, bit_indices,
                        direct_sum, popcount, submasks)

MATROID_ENUM_CAP = 16


def _dot(a: int, b: int) -> int:
    return popcount(a & b) & 1


def gf2_rref(rows: Sequence[int], ncols: int) -> list:
    """Reduced row-echelon basis (lowest column index as pivot first)."""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
            # keep earlier rows reduced against the new pivot
            low = row & -row
            for i in range(len(basis) - 1):
                if basis[i] & low:
                    basis[i] ^= row
    basis.sort(key=lambda r: r & -r)
    return basis


def gf2_rank(rows: Sequence[int], ncols: int) -> int:
    return len(gf2_rref(rows, ncols))


class Gf2Matrix:
    """A matrix over GF(2) with labelled columns."""

    __slots__ = ("labels", "rows", "ncols", "index")

    def __init__(self, labels: Sequence[str], rows: Iterable[int]):
        self.labels = tuple(str(x) for x in labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("column labels must be distinct")
        self.ncols = len(self.labels)
        self.rows = tuple(rows)
        full = (1 << self.ncols) - 1
        for r in self.rows:
            if r & ~full:
                raise ValueError("row has bits outside the column range")
        self.index = {lab: j for j, lab in enumerate(self.labels)}

    def rank(self) -> int:
        return gf2_rank(self.rows, self.ncols)

    def column_rank(self, subset: int) -> int:
        return gf2_rank([r & subset for r in self.rows], self.ncols)

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            lab = str(lab)
            if lab not in self.index:
                raise ValueError(f"unknown column {lab!r}")
            m |= 1 << self.index[lab]
        return m

    def full_mask(self) -> int:
        return (1 << self.ncols) - 1

    def __repr__(self) -> str:
        shown = [format(r, f"0{self.ncols}b")[::-1] for r in self.rows]
        return f"Gf2Matrix({list(self.labels)!r}, {shown!r})"


class Gf2Subspace:
    """A subspace of GF(2)^n held as a reduced row-echelon basis."""

    __slots__ = ("ncols", "basis")

    def __init__(self, ncols: int, vectors: Iterable[int]):
        self.ncols = ncols
        self.basis = tuple(gf2_rref(list(vectors), ncols))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, vector: int) -> bool:
        for b in self.basis:
            if vector & (b & -b):
                vector ^= b
        return vector == 0

    def members(self):
        """All 2^dim vectors; guarded against large dimensions."""
        if self.dim > 20:
            raise SizeGuardError(f"refusing to enumerate 2^{self.dim} vectors")
        for coeffs in range(1 << self.dim):
            v = 0
            for i in bit_indices(coeffs):
                v ^= self.basis[i]
            yield v

    def orthogonal_complement(self) -> "Gf2Subspace":
        return Gf2Subspace(self.ncols, _null_space_of_rows(self.basis, self.ncols))

    def intersect(self, other: "Gf2Subspace") -> "Gf2Subspace":
        if self.ncols != other.ncols:
            raise ValueError("subspaces live in different ambient spaces")
        joined = list(self.orthogonal_complement().basis) + \
            list(other.orthogonal_complement().basis)
        return Gf2Subspace(self.ncols, _null_space_of_rows(joined, self.ncols))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Subspace):
            return NotImplemented
        return self.ncols == other.ncols and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ncols, self.basis))

    def __repr__(self) -> str:
        return f"Gf2Subspace(ncols={self.ncols}, dim={self.dim})"


def _null_space_of_rows(rows: Sequence[int], ncols: int) -> list:
    """Basis of {v : row · v = 0 for all rows}."""
    rref = gf2_rref(rows, ncols)
    pivots = [(b & -b).bit_length() - 1 for b in rref]
    pivot_set = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for b, p in zip(rref, pivots):
            if b >> free & 1:
                v |= 1 << p
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# matroid extraction and minors at the matrix level
# ---------------------------------------------------------------------------

def matroid_of(mtx: Gf2Matrix) -> Matroid:
    """The column matroid: bases are maximal independent column sets."""
    if mtx.ncols > MATROID_ENUM_CAP:
        raise SizeGuardError(
            f"basis enumeration capped at {MATROID_ENUM_CAP} columns")
    r = mtx.rank()
    ground = GroundSet(mtx.labels)
    bases = []
    for cols in itertools.combinations(range(mtx.ncols), r):
        sub = 0
        for c in cols:
            sub |= 1 << c
        if mtx.column_rank(sub) == r:
            bases.append(sub)
    return Matroid(ground, bases, check=False)


def delete_column(mtx: Gf2Matrix, label: str) -> Gf2Matrix:
    j = mtx.index[str(label)]
    lowmask = (1 << j) - 1
    rows = [(r & lowmask) | ((r >> (j + 1)) << j) for r in mtx.rows]
    labels = mtx.labels[:j] + mtx.labels[j + 1:]
    return Gf2Matrix(labels, [r for r in rows if r])


def contract_column(mtx: Gf2Matrix, label: str) -> Gf2Matrix:
    j = mtx.index[str(label)]
    jbit = 1 << j
    pivot_at = next((i for i, r in enumerate(mtx.rows) if r & jbit), None)
    if pivot_at is None:
        # zero column = loop; contraction coincides with deletion
        return delete_column(mtx, label)
    pivot = mtx.rows[pivot_at]
    rows = [r ^ pivot if r & jbit else r
            for i, r in enumerate(mtx.rows) if i != pivot_at]
    return delete_column(Gf2Matrix(mtx.labels, rows), label)


def dual_matrix(mtx: Gf2Matrix) -> Gf2Matrix:
    """A representation of the dual matroid: the null-space basis as rows."""
    return Gf2Matrix(mtx.labels, _null_space_of_rows(mtx.rows, mtx.ncols))


def restrict_matrix(mtx: Gf2Matrix, keep: Iterable[str]) -> Gf2Matrix:
    keep = set(str(x) for x in keep)
    out = mtx
    for lab in mtx.labels:
        if lab not in keep:
            out = delete_column(out, lab)
    return out


def contract_columns(mtx: Gf2Matrix, away: Iterable[str]) -> Gf2Matrix:
    out = mtx
    for lab in [str(x) for x in away]:
        out = contract_column(out, lab)
    return out


# ---------------------------------------------------------------------------
# cycle, cocycle and bicycle spaces
# ---------------------------------------------------------------------------

def cycle_space(mtx: Gf2Matrix) -> Gf2Subspace:
    return Gf2Subspace(mtx.ncols, _null_space_of_rows(mtx.rows, mtx.ncols))


def cocycle_space(mtx: Gf2Matrix) -> Gf2Subspace:
    return Gf2Subspace(mtx.ncols, mtx.rows)


def bicycle_space(mtx: Gf2Matrix) -> Gf2Subspace:
    return cycle_space(mtx).intersect(cocycle_space(mtx))


def is_eulerian(mtx: Gf2Matrix) -> bool:
    """The whole ground set is a disjoint union of circuits."""
    return mtx.full_mask() in cycle_space(mtx)


def is_bipartite(mtx: Gf2Matrix) -> bool:
    """Every circuit is even, i.e. the all-ones vector is a cocycle."""
    return mtx.full_mask() in cocycle_space(mtx)


# ---------------------------------------------------------------------------
# brute-force circuit machinery for abstract matroids (test oracles)
# ---------------------------------------------------------------------------

def matroid_circuits(M: Matroid) -> list:
    """All circuits (minimal dependent sets), by increasing subset sweep."""
    n = M.ground.n
    if n > 14:
        raise SizeGuardError("circuit sweep capped at 14 elements")
    circuits = []
    for size in range(1, n + 1):
        for cols in itertools.combinations(range(n), size):
            mask = 0
            for c in cols:
                mask |= 1 << c
            if M.rank(mask) == size:
                continue  # independent
            if any(c & mask == c for c in circuits):
                continue  # contains a smaller circuit
            circuits.append(mask)
    return circuits


def matroid_is_bipartite(M: Matroid) -> bool:
    return all(popcount(c) % 2 == 0 for c in matroid_circuits(M))


def matroid_is_eulerian(M: Matroid) -> bool:
    """Search for disjoint circuits covering the ground set."""
    circuits = matroid_circuits(M)
    full = M.ground.full_mask

    seen = set()

    def cover(remaining: int) -> bool:
        if remaining == 0:
            return True
        if remaining in seen:
            return False
        low = remaining & -remaining
        for c in circuits:
            if c & low and c & remaining == c and cover(remaining & ~c):
                return True
        seen.add(remaining)
        return False

    return cover(full)


def circuit_space_bruteforce(M: Matroid) -> set:
    """All disjoint unions of circuits, as a set of masks (includes 0)."""
    circuits = matroid_circuits(M)
    out = {0}
    frontier = [0]
    while frontier:
        base = frontier.pop()
        for c in circuits:
            if base & c == 0 and base | c not in out:
                out.add(base | c)
                frontier.append(base | c)
    return out


# ---------------------------------------------------------------------------
# twists of binary matroids
# ---------------------------------------------------------------------------

def twist_min_decomposition(mtx: Gf2Matrix, subset) -> Matroid:
    """The stated lower-matroid shape of a twist: M/A plus the dual of the
    restriction to A, as a direct sum."""
    amask = subset if isinstance(subset, int) else mtx.mask(subset)
    a_labels = [lab for j, lab in enumerate(mtx.labels) if amask >> j & 1]
    contracted = matroid_of(contract_columns(mtx, a_labels))
    restricted_dual = matroid_of(dual_matrix(restrict_matrix(mtx, a_labels)))
    out = direct_sum(contracted, restricted_dual)
    assert isinstance(out, Matroid)
    return out


def twist_max_decomposition(mtx: Gf2Matrix, subset) -> Matroid:
    """The stated upper-matroid shape of a twist: M restricted away from A
    plus the dual of M contracted onto A, as a direct sum."""
    amask = subset if isinstance(subset, int) else mtx.mask(subset)
    a_labels = [lab for j, lab in enumerate(mtx.labels) if amask >> j & 1]
    rest = [lab for j, lab in enumerate(mtx.labels) if not amask >> j & 1]
    deleted = matroid_of(restrict_matrix(mtx, rest))
    contracted_dual = matroid_of(dual_matrix(contract_columns(mtx, rest)))
    out = direct_sum(deleted, contracted_dual)
    assert isinstance(out, Matroid)
    return out


def bipartite_eulerian_twist_test(mtx: Gf2Matrix, subset) -> tuple:
    """(bipartite?, Eulerian?) for the lower matroid of the twist by the
    subset, computed from first principles on the abstract matroid."""
    from .setsystem import lower_matroid, twist
    amask = subset if isinstance(subset, int) else mtx.mask(subset)
    D = twist(matroid_of(mtx), amask)
    low = lower_matroid(D)
    return (matroid_is_bipartite(low), matroid_is_eulerian(low))


# ---------------------------------------------------------------------------
# the binary Penrose polynomial
# ---------------------------------------------------------------------------

def penrose_binary(mtx: Gf2Matrix, assert_closure: bool = True) -> LaurentPoly:
    """Alternating state sum of l^dim over the subspaces
    B(X) = {A in cycle space : A ∩ X in cocycle space}.

    The dimension comes from a solved linear system (never from enumerating
    the cycle space): with N a cycle-space basis, membership of A = sum c_i N_i
    is c Q = 0 for the Gram-type matrix Q[i][j] = |N_i ∩ X ∩ N_j| mod 2.
    ``assert_closure`` re-checks, on every X, that the computed basis and its
    pairwise sums really satisfy the defining membership predicate.
    """
    n = mtx.ncols
    if n > 20:
        raise SizeGuardError("state sum capped at 20 columns")
    cyc = cycle_space(mtx)
    coc = cocycle_space(mtx)
    N = cyc.basis
    k = len(N)
    total = LaurentPoly()
    for X in range(1 << n):
        gram = []
        for i in range(k):
            row = 0
            for j in range(k):
                row |= _dot(N[i] & X, N[j]) << j
            gram.append(row)
        sol = _null_space_of_rows(gram, k)
        dim = len(sol)
        if assert_closure:
            vectors = [_combine(N, c) for c in sol]
            for v in vectors:
                assert v in cyc and (v & X) in coc, "solution fails membership"
            for va, vb in itertools.combinations(vectors, 2):
                w = va ^ vb
                assert w in cyc and (w & X) in coc, "not closed under addition"
        sign = -1 if popcount(X) & 1 else 1
        total = total + LaurentPoly.monomial({"l": dim}, sign)
    return total


def _combine(basis: Sequence[int], coeffs: int) -> int:
    v = 0
    for i in bit_indices(coeffs):
        v ^= basis[i]
    return v


# ---------------------------------------------------------------------------
# the matrix file format
# ---------------------------------------------------------------------------

def parse_gf2_matrix(text: str) -> Gf2Matrix:
    """Read {"labels": [...], "rows": ["0110", ...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("top level must be an object")
    for field in ("labels", "rows"):
        if field not in data:
            raise ValueError(f"missing field {field!r}")
    labels = data["labels"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise ValueError("field 'labels' must be a list of strings")
    rows = []
    for s in data["rows"]:
        if not isinstance(s, str) or len(s) != len(labels) or set(s) - {"0", "1"}:
            raise ValueError("field 'rows' must hold strings over 0/1 of label length")
        rows.append(sum(1 << j for j, ch in enumerate(s) if ch == "1"))
    return Gf2Matrix(labels, rows)


def serialize_gf2_matrix(mtx: Gf2Matrix) -> str:
    rows = ["".join("1" if r >> j & 1 else "0" for j in range(mtx.ncols))
            for r in mtx.rows]
    return json.dumps({"labels": list(mtx.labels), "rows": rows})
