"""The GF(2) cohomology ring of the no-k-equal configuration space.

Classes are stored as GF(2) sums of basic preorders (the additive basis);
addition is symmetric difference of term sets. A product of elementary
generators is canonically represented by its closure, which is either
admissible (every Full block of size k-1) or zero.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    AmbientMismatch,
    NotAdmissible,
    NotElementary,
    NotString,
    ParameterOutOfRange,
    RewriteCycle,
    TooLarge,
)
from .preorder import (
    RelationMatrix,
    StringPreorder,
    _assemble,
    admissible_blocks,
    classify,
    count_admissible,
    discrete,
    elems_of,
    enumerate_admissible,
    enumerate_basic,
    factor_admissible,
    make_preorder,
    to_matrix,
    to_string_form,
    transitive_closure,
)

DEFAULT_ORACLE_CAP = 100_000


@dataclass(frozen=True)
class CohClass:
    """GF(2) linear combination of basic preorders."""

    k: int
    n: int
    terms: frozenset[StringPreorder]

    @classmethod
    def zero(cls, k: int, n: int) -> "CohClass":
        return cls(k, n, frozenset())

    @classmethod
    def of(cls, k: int, n: int, preorders: Iterable[StringPreorder]) -> "CohClass":
        return cls(k, n, frozenset(preorders))

    @classmethod
    def unit(cls, k: int, n: int) -> "CohClass":
        return cls(k, n, frozenset([discrete(n)]))

    def __add__(self, other: "CohClass") -> "CohClass":
        if (self.k, self.n) != (other.k, other.n):
            raise AmbientMismatch("classes live in different rings")
        return CohClass(self.k, self.n, self.terms ^ other.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return "+".join(str(t) for t in sorted(self.terms, key=lambda t: t.sort_key()))


@dataclass(frozen=True)
class RelationInstance:
    """One instance of the rewriting relation: a partition [n] = A u B u C
    with card(B) = k-2. Encodes the GF(2) identity

        sum_{a in A} (A\\a)[{a} u B](C)  +  sum_{c in C} (A)[B u {c}](C\\c) = 0.
    """

    k: int
    n: int
    a_mask: int
    b_mask: int
    c_mask: int

    def __post_init__(self):
        if self.a_mask & self.b_mask or self.a_mask & self.c_mask or self.b_mask & self.c_mask:
            raise ParameterOutOfRange("A, B, C must be disjoint")
        if self.a_mask | self.b_mask | self.c_mask != (1 << self.n) - 1:
            raise ParameterOutOfRange("A, B, C must cover 1..n")
        if self.b_mask.bit_count() != self.k - 2:
            raise ParameterOutOfRange("card(B) must be k-2")

    def row_terms(self) -> list[StringPreorder]:
        """All elementary terms of the identity (their GF(2) sum is zero)."""
        out = []
        for a in elems_of(self.a_mask):
            bit = 1 << (a - 1)
            out.append(_assemble(self.n, [(self.a_mask ^ bit, False),
                                          (self.b_mask | bit, True),
                                          (self.c_mask, False)]))
        for c in elems_of(self.c_mask):
            bit = 1 << (c - 1)
            out.append(_assemble(self.n, [(self.a_mask, False),
                                          (self.b_mask | bit, True),
                                          (self.c_mask ^ bit, False)]))
        return out


def monomial_closure(factors: Sequence[StringPreorder], k: int, n: int):
    """Closure of a product of elementary generators.

    Returns the admissible closure (one Full block per factor), or None when
    the product is zero: a repeated factor (exterior square over GF(2)) or a
    merged Full block of size != k-1.
    """
    if not factors:
        return discrete(n)
    for f in factors:
        if f.n != n:
            raise AmbientMismatch("factor has wrong ambient size")
        if not classify(f, k).is_elementary:
            raise NotElementary(f"{f} is not elementary for k={k}")
    if len(set(factors)) != len(factors):
        return None
    rows = [0] * n
    for f in factors:
        for i, row in enumerate(to_matrix(f).rows):
            rows[i] |= row
    closed = transitive_closure(n, rows)
    try:
        p = to_string_form(RelationMatrix(n, closed))
    except NotString:
        # Not expected in practice; a non-string closure cannot be admissible.
        return None
    blocks = admissible_blocks(p, k)
    if blocks is None:
        return None
    assert len(blocks) == len(factors)
    return p


_nf_memo: dict[tuple[int, StringPreorder], frozenset] = {}


def normalize(p: StringPreorder, k: int) -> CohClass:
    """Express an admissible preorder in the basic basis.

    Rewrites right-to-left: for the rightmost block [J_i](I_i) whose maximum
    m = max(J_i u I_i) sits in the bracket (I_i = empty included), apply the
    relation instance A = prefix, B = J_i \\ m, C = suffix u {m}, which
    exchanges m out of the bracket into the suffix; the replacement factors
    are re-closed against the remaining ones and the process recurses.
    Degrees above floor(n/k) vanish outright (no basic preorders exist
    there). Cycles fall back to the Gaussian-elimination oracle.
    """
    if admissible_blocks(p, k) is None:
        raise NotAdmissible(f"{p} is not admissible for k={k}")
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20_000))
    try:
        terms = _nf(p, k, set())
    except RewriteCycle:
        d = len(admissible_blocks(p, k))
        oracle = oracle_normal_form(k, p.n, d)
        terms = oracle.normal_form[p]
    finally:
        sys.setrecursionlimit(old_limit)
    return CohClass(k, p.n, terms)


def _nf(p: StringPreorder, k: int, active: set) -> frozenset:
    key = (k, p)
    cached = _nf_memo.get(key)
    if cached is not None:
        return cached
    n = p.n
    blocks = admissible_blocks(p, k)
    d = len(blocks)
    violating = [i for i, (j_mask, i_mask) in enumerate(blocks)
                 if (j_mask | i_mask).bit_length() == j_mask.bit_length()]
    if not violating:
        result = frozenset([p])
    elif d > n // k:
        result = frozenset()
    else:
        if key in active:
            raise RewriteCycle(str(p))
        active.add(key)
        try:
            i = violating[-1]
            factors = factor_admissible(p, k)
            j_mask, i_mask = blocks[i]
            m_bit = 1 << (j_mask.bit_length() - 1)
            all_mask = (1 << n) - 1
            # prefix/suffix of the elementary factor at block i
            suffix = 0
            for b in range(i + 1, d):
                suffix |= blocks[b][0] | blocks[b][1]
            suffix |= i_mask
            prefix = all_mask & ~j_mask & ~suffix
            j0 = j_mask ^ m_bit
            replacements = []
            for a in elems_of(prefix):
                bit = 1 << (a - 1)
                replacements.append(_assemble(n, [(prefix ^ bit, False),
                                                  (j0 | bit, True),
                                                  (suffix | m_bit, False)]))
            for c in elems_of(suffix):
                bit = 1 << (c - 1)
                replacements.append(_assemble(n, [(prefix, False),
                                                  (j0 | bit, True),
                                                  ((suffix | m_bit) ^ bit, False)]))
            acc: set[StringPreorder] = set()
            for repl in replacements:
                mono = monomial_closure(factors[:i] + [repl] + factors[i + 1:], k, n)
                if mono is not None:
                    acc ^= _nf(mono, k, active)
            result = frozenset(acc)
        finally:
            active.discard(key)
    _nf_memo[key] = result
    return result


def cup(a: CohClass, b: CohClass) -> CohClass:
    """Cup product, bilinear over the basic basis."""
    if (a.k, a.n) != (b.k, b.n):
        raise AmbientMismatch("classes live in different rings")
    k, n = a.k, a.n
    acc: set[StringPreorder] = set()
    for pa in a.terms:
        fa = factor_admissible(pa, k)
        for pb in b.terms:
            fb = factor_admissible(pb, k)
            mono = monomial_closure(fa + fb, k, n)
            if mono is not None:
                acc ^= normalize(mono, k).terms
    return CohClass(k, n, frozenset(acc))


@lru_cache(maxsize=None)
def betti(k: int, n: int, d: int) -> int:
    """Rank of the degree-d part: number of basic preorders with d blocks."""
    return sum(1 for _ in enumerate_basic(k, n, d))


def cup_length(k: int, n: int) -> int:
    """Largest number of positive-degree classes with nonzero product.

    Certified below by the explicit basic witness
    [1..k-1](k)[k+1..2k-1](2k)...[(q-1)k+1..qk-1](qk..n) with q = floor(n/k)
    (a basis element, hence nonzero), and above by the grading bound: any
    product of more than floor(n/k) blocks lands in a vanishing degree.
    """
    if not 3 <= k:
        raise ParameterOutOfRange("k must be >= 3")
    q = n // k
    if q == 0:
        return 0
    w = cat_witness(k, n)
    assert classify(w, k).is_basic
    assert betti(k, n, q + 1) == 0
    return q


def cat_witness(k: int, n: int) -> StringPreorder:
    """The basic witness product of q = floor(n/k) elementary factors."""
    q = n // k
    if q == 0:
        raise ParameterOutOfRange(f"n={n} < k={k}: no positive-degree witness")
    parts: list[tuple[int, bool]] = []
    for j in range(1, q + 1):
        bracket = 0
        for e in range((j - 1) * k + 1, j * k):
            bracket |= 1 << (e - 1)
        parts.append((bracket, True))
        hole = 0
        top = n + 1 if j == q else j * k + 1
        for e in range(j * k, top):
            hole |= 1 << (e - 1)
        parts.append((hole, False))
    return _assemble(n, parts)


# ---------------------------------------------------------------------------
# Independent Gaussian-elimination oracle
# ---------------------------------------------------------------------------

@dataclass
class OracleNormalForm:
    """Quotient of the admissible span by all relation rows in one degree."""

    k: int
    n: int
    d: int
    basis: list[StringPreorder]
    normal_form: dict[StringPreorder, frozenset[StringPreorder]]
    rank: int
    consistent: bool
    issues: list[str] = field(default_factory=list)


def _oracle_cap() -> int:
    raw = os.environ.get("NOKEQUAL_MAX_ORACLE_DIM")
    return int(raw) if raw else DEFAULT_ORACLE_CAP


def _violation_key(p: StringPreorder, k: int) -> tuple:
    blocks = admissible_blocks(p, k)
    bad = sum(1 for j, i in blocks
              if (j | i).bit_length() == j.bit_length())
    return (bad, p.sort_key())


def oracle_normal_form(k: int, n: int, d: int) -> OracleNormalForm:
    """Brute-force normal forms in degree d via GF(2) Gaussian elimination.

    Spans all admissible preorders of degree d, imposes every relation
    instance (for d = 2, every instance multiplied by every nesting
    elementary factor), eliminates, and reads normal forms off the reduced
    rows. Feasible for d <= 2 at desk scale (documented: k=3 n<=7 and
    k=4 n<=9); degree >= 3 is rejected as TooLarge.
    """
    if d < 0:
        raise ParameterOutOfRange("d must be non-negative")
    if d >= 3 or count_admissible(k, n, d) > _oracle_cap():
        raise TooLarge(f"oracle infeasible at (k={k}, n={n}, d={d})")
    admissibles = list(enumerate_admissible(k, n, d))
    if d == 0:
        p = admissibles[0]
        return OracleNormalForm(k, n, 0, [p], {p: frozenset([p])}, 0, True)

    # Columns: basics first, then non-basics ordered by increasing violation,
    # so that leading-bit pivoting lands on the most violating columns.
    basics = [p for p in admissibles if classify(p, k).is_basic]
    non_basics = [p for p in admissibles if not classify(p, k).is_basic]
    non_basics.sort(key=lambda p: _violation_key(p, k))
    columns = sorted(basics, key=lambda p: p.sort_key()) + non_basics
    index = {p: i for i, p in enumerate(columns)}
    n_basic = len(basics)

    rows = set()
    for row in _relation_rows(k, n, d):
        bits = 0
        for t in row:
            bits ^= 1 << index[t]
        if bits:
            rows.add(bits)

    pivots: dict[int, int] = {}
    issues: list[str] = []
    for row in sorted(rows, reverse=True):
        while row:
            lead = row.bit_length() - 1
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                break
            row ^= piv
    # Full back-substitution: ascending pivot columns, so lower pivots are
    # already reduced to free bits when a higher pivot consumes them.
    for lead in sorted(pivots):
        row = pivots[lead]
        rest = row ^ (1 << lead)
        reduced = 1 << lead
        while rest:
            b = rest.bit_length() - 1
            if b in pivots:
                # b < lead, so pivots[b] is already fully reduced
                rest ^= pivots[b]
            else:
                reduced |= 1 << b
                rest ^= 1 << b
        pivots[lead] = reduced

    rank = len(pivots)
    free = [i for i in range(len(columns)) if i not in pivots]
    basis = [columns[i] for i in free if i < n_basic]
    expected = betti(k, n, d)
    consistent = True
    if rank != len(admissibles) - expected:
        consistent = False
        issues.append(f"rank {rank} != {len(admissibles)} - betti {expected}")
    if any(i >= n_basic for i in free):
        consistent = False
        issues.append("a non-basic column survived as a free generator")
    if any(i < n_basic for i in pivots):
        consistent = False
        issues.append("a basic column was eliminated")

    nf: dict[StringPreorder, frozenset[StringPreorder]] = {}
    for i, p in enumerate(columns):
        piv = pivots.get(i)
        if piv is None:
            nf[p] = frozenset([p])
        else:
            nf[p] = frozenset(columns[b] for b in _bits_of(piv ^ (1 << i)))
    return OracleNormalForm(k, n, d, basis, nf, rank, consistent, issues)


def _bits_of(x: int):
    while x:
        b = x.bit_length() - 1
        yield b
        x ^= 1 << b


def relation_instances(k: int, n: int):
    """All relation instances: partitions [n] = A u B u C, card(B) = k-2."""
    from .preorder import _ksubsets, _submasks

    all_mask = (1 << n) - 1
    for b_mask in _ksubsets(all_mask, k - 2):
        rest = all_mask & ~b_mask
        for a_mask in _submasks(rest):
            yield RelationInstance(k, n, a_mask, b_mask, rest & ~a_mask)


def _relation_rows(k: int, n: int, d: int):
    """Relation rows in degree d as lists of admissible preorders.

    Degree 1: the instance identities themselves. Degree 2: each instance
    multiplied by every elementary factor that nests with its terms (any
    other factor kills every term). Products are written with the nested
    closed form, keeping the oracle independent of the Warshall route used
    by the production code.
    """
    from .preorder import _ksubsets, _submasks

    if d == 1:
        for inst in relation_instances(k, n):
            yield inst.row_terms()
        return
    assert d == 2
    for inst in relation_instances(k, n):
        A, B, C = inst.a_mask, inst.b_mask, inst.c_mask
        # Family "above": factors (I)[J](K) with I containing A u B, i.e.
        # J inside C; every product has the fixed tail [J](K).
        for j_mask in _ksubsets(C, k - 1):
            rest = C & ~j_mask
            for extra in _submasks(rest):
                k_mask = rest & ~extra
                row = []
                for a in elems_of(A):
                    bit = 1 << (a - 1)
                    row.append(_assemble(n, [(A ^ bit, False),
                                             (B | bit, True),
                                             (extra, False),
                                             (j_mask, True),
                                             (k_mask, False)]))
                for c in elems_of(extra):
                    bit = 1 << (c - 1)
                    row.append(_assemble(n, [(A, False),
                                             (B | bit, True),
                                             (extra ^ bit, False),
                                             (j_mask, True),
                                             (k_mask, False)]))
                if row:
                    yield row
        # Family "below": factors (I)[J](K) with I u J inside A; every
        # product has the fixed head (I)[J].
        for j_mask in _ksubsets(A, k - 1):
            for i_mask in _submasks(A & ~j_mask):
                head = i_mask | j_mask
                row = []
                for a in elems_of(A & ~head):
                    bit = 1 << (a - 1)
                    row.append(_assemble(n, [(i_mask, False),
                                             (j_mask, True),
                                             (A & ~head & ~bit, False),
                                             (B | bit, True),
                                             (C, False)]))
                for c in elems_of(C):
                    bit = 1 << (c - 1)
                    row.append(_assemble(n, [(i_mask, False),
                                             (j_mask, True),
                                             (A & ~head, False),
                                             (B | bit, True),
                                             (C ^ bit, False)]))
                if row:
                    yield row
