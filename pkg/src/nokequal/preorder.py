"""String preorders on {1..n}: parsing, composition, classification.

A string preorder is an ordered list of level sets, each either Full
(``[...]``, all elements mutually equivalent) or Empty (``(...)``, elements
mutually incomparable), with lower levels strictly below higher ones.
Element sets are stored as integer bitmasks (element e <-> bit e-1), which
caps the ambient size at 64.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, NamedTuple, Sequence

from .errors import (
    AmbientMismatch,
    MalformedSyntax,
    NotAdmissible,
    NotAPartition,
    NotString,
    IndexOutOfRange,
    ParameterOutOfRange,
)

MAX_N = 64


def mask_of(elements) -> int:
    """Bitmask of an iterable of 1-based elements."""
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elems_of(mask: int) -> list[int]:
    """Sorted 1-based elements of a bitmask."""
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


class LevelSet(NamedTuple):
    """One level of a string preorder: an element set plus its bracket kind."""

    mask: int
    full: bool


def _level(mask: int, full: bool) -> LevelSet:
    # A singleton level is Empty by convention.
    return LevelSet(mask, full and mask.bit_count() > 1)


@dataclass(frozen=True)
class StringPreorder:
    """Immutable string preorder on {1..n}."""

    n: int
    levels: tuple[LevelSet, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ParameterOutOfRange(f"ambient size {self.n} not in 1..{MAX_N}")
        seen = 0
        for lv in self.levels:
            if lv.mask == 0:
                raise NotAPartition("empty level set")
            if lv.full and lv.mask.bit_count() == 1:
                raise NotAPartition("singleton level must be Empty")
            if seen & lv.mask:
                raise NotAPartition("repeated element across levels")
            seen |= lv.mask
        if seen != (1 << self.n) - 1:
            raise NotAPartition(f"levels do not cover 1..{self.n}")

    def __str__(self) -> str:
        parts = []
        for mask, full in self.levels:
            body = ",".join(str(e) for e in elems_of(mask))
            parts.append(f"[{body}]" if full else f"({body})")
        return "".join(parts)

    def sort_key(self) -> tuple:
        return (self.n, self.levels)

    @property
    def full_blocks(self) -> list[int]:
        return [mask for mask, full in self.levels if full]


def make_preorder(n: int, levels: Sequence[tuple[int, bool]]) -> StringPreorder:
    """Build a StringPreorder, normalizing singleton levels to Empty."""
    return StringPreorder(n, tuple(_level(m, f) for m, f in levels))


def discrete(n: int) -> StringPreorder:
    """The empty (discrete) preorder: a single Empty level holding 1..n."""
    return StringPreorder(n, (LevelSet((1 << n) - 1, False),))


_GROUP_RE = re.compile(r"([(\[])([^()\[\]]*)([)\]])")


def parse_preorder(text: str, n: int | None = None) -> StringPreorder:
    """Parse bracket notation like ``(1)[2,3](4,5)`` into a StringPreorder.

    With n omitted it is inferred as the maximum element (the levels must
    then partition 1..max exactly).
    """
    stripped = re.sub(r"\s+", "", text)
    if not stripped:
        raise MalformedSyntax("empty preorder string")
    levels: list[tuple[int, bool]] = []
    pos = 0
    max_seen = 0
    for m in _GROUP_RE.finditer(stripped):
        if m.start() != pos:
            raise MalformedSyntax(f"unexpected text at position {pos}: {stripped[pos:]!r}")
        opener, body, closer = m.groups()
        if (opener, closer) not in (("(", ")"), ("[", "]")):
            raise MalformedSyntax(f"mismatched brackets {opener}...{closer}")
        if not body:
            raise MalformedSyntax("empty bracket group")
        try:
            elements = [int(tok) for tok in body.split(",")]
        except ValueError:
            raise MalformedSyntax(f"non-integer element in {body!r}") from None
        if any(e < 1 for e in elements):
            raise MalformedSyntax("elements must be positive integers")
        mask = mask_of(elements)
        if mask.bit_count() != len(elements):
            raise NotAPartition(f"repeated element within {body!r}")
        levels.append((mask, opener == "["))
        max_seen = max(max_seen, max(elements))
        pos = m.end()
    if pos != len(stripped):
        raise MalformedSyntax(f"trailing text {stripped[pos:]!r}")
    if n is None:
        n = max_seen
    if max_seen > n:
        raise NotAPartition(f"element {max_seen} exceeds ambient size {n}")
    return make_preorder(n, levels)


@dataclass(frozen=True)
class RelationMatrix:
    """Reflexive transitive relation on {1..n}; row i is the bitmask of
    successors of element i+1 (0-based rows)."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise AmbientMismatch("row count differs from n")
        for i, row in enumerate(self.rows):
            if not row >> i & 1:
                raise NotAPartition(f"relation not reflexive at {i + 1}")
        for i in range(self.n):
            acc = self.rows[i]
            for j in elems_of(self.rows[i]):
                acc |= self.rows[j - 1]
            if acc != self.rows[i]:
                raise NotAPartition(f"relation not transitive at {i + 1}")

    def related(self, i: int, j: int) -> bool:
        """Whether i <= j (1-based)."""
        return bool(self.rows[i - 1] >> (j - 1) & 1)


def transitive_closure(n: int, rows: Sequence[int]) -> tuple[int, ...]:
    """Reflexive-transitive closure of bitmask rows (Warshall)."""
    work = [rows[i] | (1 << i) for i in range(n)]
    for via in range(n):
        via_row = work[via]
        for i in range(n):
            if work[i] >> via & 1:
                work[i] |= via_row
    return tuple(work)


def to_matrix(p: StringPreorder) -> RelationMatrix:
    """Relation matrix: i <= j iff level(i) is earlier than level(j), i = j,
    or i and j share a Full level."""
    rows = [0] * p.n
    above = (1 << p.n) - 1
    for mask, full in p.levels:
        above &= ~mask
        for e in elems_of(mask):
            rows[e - 1] = above | (1 << (e - 1)) | (mask if full else 0)
    return RelationMatrix(p.n, tuple(rows))


def to_string_form(r: RelationMatrix) -> StringPreorder:
    """Unique string form of a relation matrix, or raise NotString.

    Classes of mutually related elements are layered by the number of
    classes strictly below them; the matrix is string iff the layers are
    totally ordered, layers of incomparable elements contain only
    singleton classes, and every class of size >= 2 sits alone in its layer.
    """
    n = r.n
    # Equivalence classes of mutual relation.
    class_of: dict[int, int] = {}
    classes: list[int] = []
    for i in range(n):
        if i in class_of:
            continue
        cls = 0
        for j in range(n):
            if r.rows[i] >> j & 1 and r.rows[j] >> i & 1:
                cls |= 1 << j
                class_of[j] = len(classes)
        classes.append(cls)

    def strictly_below(a: int, b: int) -> bool:
        ia = classes[a].bit_length() - 1
        ib = classes[b].bit_length() - 1
        return bool(r.rows[ia] >> ib & 1) and a != b

    below_count = [sum(strictly_below(b, a) for b in range(len(classes)))
                   for a in range(len(classes))]
    layers: dict[int, list[int]] = {}
    for c, cnt in enumerate(below_count):
        layers.setdefault(cnt, []).append(c)
    ordered = sorted(layers)
    # Validate the layering.
    for pos, cnt in enumerate(ordered):
        members = layers[cnt]
        for a, b in combinations(members, 2):
            if strictly_below(a, b) or strictly_below(b, a):
                raise NotString("incomparability is not transitive")
        if len(members) > 1 and any(classes[c].bit_count() > 1 for c in members):
            raise NotString("full class shares a height with another class")
        for later_cnt in ordered[pos + 1:]:
            for a in members:
                for b in layers[later_cnt]:
                    if not strictly_below(a, b):
                        raise NotString("classes not totally ordered by height")
    levels = []
    for cnt in ordered:
        members = layers[cnt]
        mask = 0
        for c in members:
            mask |= classes[c]
        full = len(members) == 1 and classes[members[0]].bit_count() > 1
        levels.append((mask, full))
    return make_preorder(n, levels)


def compose(p: StringPreorder, q: StringPreorder) -> StringPreorder:
    """Closure product: transitive closure of the union of both relations.

    Raises NotString when the closure is not a string preorder (cannot
    happen for single-block operands).
    """
    if p.n != q.n:
        raise AmbientMismatch(f"ambient sizes differ: {p.n} vs {q.n}")
    mp, mq = to_matrix(p), to_matrix(q)
    rows = transitive_closure(p.n, [a | b for a, b in zip(mp.rows, mq.rows)])
    return to_string_form(RelationMatrix(p.n, rows))


def admissible_blocks(p: StringPreorder, k: int) -> list[tuple[int, int]] | None:
    """Blocks (J_i, I_i) of an admissible preorder, or None.

    Admissible means the levels read (I_0) [J_1] (I_1) ... [J_d] (I_d) with
    every Full block of size k-1 and at most one Empty level between
    consecutive blocks (I_i possibly absent).
    """
    blocks: list[tuple[int, int]] = []
    levels = p.levels
    i = 0
    if i < len(levels) and not levels[i].full:
        i += 1  # leading Empty region I_0
    while i < len(levels):
        mask, full = levels[i]
        if not full or mask.bit_count() != k - 1:
            return None
        i += 1
        i_mask = 0
        if i < len(levels) and not levels[i].full:
            i_mask = levels[i].mask
            i += 1
        blocks.append((mask, i_mask))
    return blocks


@dataclass(frozen=True)
class PreorderClass:
    """Classification of a string preorder for a collision parameter k."""

    kind: str  # 'basic' | 'admissible' | 'non_admissible'
    d: int | None
    k: int

    @property
    def is_admissible(self) -> bool:
        return self.kind in ("basic", "admissible")

    @property
    def is_basic(self) -> bool:
        return self.kind == "basic"

    @property
    def is_elementary(self) -> bool:
        return self.is_admissible and self.d == 1

    @property
    def dimension(self) -> int | None:
        return None if self.d is None else (self.k - 2) * self.d


def classify(p: StringPreorder, k: int) -> PreorderClass:
    """Classify p as basic / admissible / non-admissible for parameter k."""
    if not 3 <= k <= p.n:
        raise ParameterOutOfRange(f"need 3 <= k <= n, got k={k}, n={p.n}")
    blocks = admissible_blocks(p, k)
    if blocks is None:
        return PreorderClass("non_admissible", None, k)
    basic = all(i_mask and max(elems_of(j_mask | i_mask)) in elems_of(i_mask)
                for j_mask, i_mask in blocks)
    return PreorderClass("basic" if basic else "admissible", len(blocks), k)


def factor_admissible(p: StringPreorder, k: int) -> list[StringPreorder]:
    """Factor an admissible preorder into its elementary closure factors.

    The i-th factor is (everything before J_i) [J_i] (everything after).
    """
    blocks = admissible_blocks(p, k)
    if blocks is None:
        raise NotAdmissible(f"{p} is not admissible for k={k}")
    all_mask = (1 << p.n) - 1
    factors = []
    before = 0
    for idx, (mask, full) in enumerate(p.levels):
        if full:
            after = all_mask & ~before & ~mask
            levels = []
            if before:
                levels.append((before, False))
            levels.append((mask, True))
            if after:
                levels.append((after, False))
            factors.append(make_preorder(p.n, levels))
        before |= mask
    return factors


def _submasks(pool: int) -> Iterator[int]:
    """All submasks of pool in increasing integer order (including 0)."""
    s = 0
    while True:
        yield s
        if s == pool:
            return
        s = (s - pool) & pool


def _ksubsets(pool: int, size: int) -> list[int]:
    """Size-subsets of pool as bitmasks, in increasing integer order."""
    bits = [1 << (e - 1) for e in elems_of(pool)]
    out = []
    for combo in combinations(range(len(bits)), size):
        m = 0
        for c in combo:
            m |= bits[c]
        out.append(m)
    out.sort()
    return out


def _assemble(n: int, parts: Sequence[tuple[int, bool]]) -> StringPreorder:
    return make_preorder(n, [(m, f) for m, f in parts if m])


def enumerate_basic(k: int, n: int, d: int) -> Iterator[StringPreorder]:
    """All basic preorders with d Full blocks, each exactly once.

    Order: depth-first lexicographic on the sequence (J_1, I_1, ..., J_d, I_d)
    encoded as bitmask integers, smallest first; I_0 is the remainder.
    """
    if not 3 <= k <= n:
        raise ParameterOutOfRange(f"need 3 <= k <= n, got k={k}, n={n}")
    if d < 0:
        raise ParameterOutOfRange("d must be non-negative")
    if d == 0:
        yield discrete(n)
        return
    all_mask = (1 << n) - 1

    def rec(pool: int, chosen: list[tuple[int, int]]):
        if len(chosen) == d:
            i0 = pool
            parts: list[tuple[int, bool]] = [(i0, False)]
            for j_mask, i_mask in chosen:
                parts.append((j_mask, True))
                parts.append((i_mask, False))
            yield _assemble(n, parts)
            return
        for j_mask in _ksubsets(pool, k - 1):
            rest = pool & ~j_mask
            j_max = j_mask.bit_length()  # 1-based max element of J
            for i_mask in _submasks(rest):
                # basic: I nonempty and max(J u I) in I
                if i_mask and i_mask.bit_length() > j_max:
                    yield from rec(rest & ~i_mask, chosen + [(j_mask, i_mask)])

    yield from rec(all_mask, [])


def enumerate_admissible(k: int, n: int, d: int) -> Iterator[StringPreorder]:
    """All admissible preorders with d Full blocks, each exactly once.

    Same deterministic order as enumerate_basic, without the basic filter
    (the I_i may be empty).
    """
    if not 3 <= k <= n:
        raise ParameterOutOfRange(f"need 3 <= k <= n, got k={k}, n={n}")
    if d < 0:
        raise ParameterOutOfRange("d must be non-negative")
    if d == 0:
        yield discrete(n)
        return
    all_mask = (1 << n) - 1

    def rec(pool: int, chosen: list[tuple[int, int]]):
        if len(chosen) == d:
            parts: list[tuple[int, bool]] = [(pool, False)]
            for j_mask, i_mask in chosen:
                parts.append((j_mask, True))
                parts.append((i_mask, False))
            yield _assemble(n, parts)
            return
        for j_mask in _ksubsets(pool, k - 1):
            rest = pool & ~j_mask
            for i_mask in _submasks(rest):
                yield from rec(rest & ~i_mask, chosen + [(j_mask, i_mask)])

    yield from rec(all_mask, [])


def count_admissible(k: int, n: int, d: int) -> int:
    """Number of admissible preorders with d blocks (no enumeration)."""
    from math import comb

    if d == 0:
        return 1
    free = n - d * (k - 1)
    if free < 0:
        return 0
    count = 1
    remaining = n
    for _ in range(d):
        count *= comb(remaining, k - 1)
        remaining -= k - 1
    return count * (d + 1) ** free


def make_x(m: int, k: int, n: int, primed: bool = False) -> StringPreorder:
    """The generators x_m (primed=False) and x'_m (primed=True).

    x_m  = (1..m-1)[m..m+k-2](m+k-1..n)
    x'_m = (1..m-2,m)[m-1,m+1..m+k-2](m+k-1..n), defined for m >= 2.
    Empty () regions are suppressed.
    """
    if m < 1 or m + k > n + 2:
        raise IndexOutOfRange(f"need 1 <= m and m+k <= n+2, got m={m}, k={k}, n={n}")
    if primed and m < 2:
        raise IndexOutOfRange("x'_m requires m >= 2")
    prefix = mask_of(range(1, m))
    bracket = mask_of(range(m, m + k - 1))
    suffix = mask_of(range(m + k - 1, n + 1))
    if primed:
        prefix = (prefix & ~(1 << (m - 2))) | (1 << (m - 1))
        bracket = (bracket & ~(1 << (m - 1))) | (1 << (m - 2))
    return _assemble(n, [(prefix, False), (bracket, True), (suffix, False)])


def single_block(p: StringPreorder) -> tuple[int, int, int]:
    """Decompose a single-block preorder as masks (I, J, K)."""
    fulls = [(i, lv) for i, lv in enumerate(p.levels) if lv.full]
    if len(fulls) != 1:
        raise NotAdmissible(f"{p} is not a single-block preorder")
    idx, (j_mask, _) = fulls[0]
    if idx > 1 or len(p.levels) - 1 - idx > 1:
        raise NotAdmissible(f"{p} is not of the form (I)[J](K)")
    i_mask = p.levels[0].mask if idx == 1 else 0
    k_mask = p.levels[-1].mask if idx < len(p.levels) - 1 else 0
    return i_mask, j_mask, k_mask


def nested_product(p: StringPreorder, q: StringPreorder) -> StringPreorder:
    """Closed form (I)[J](K n I')[J'](K') for single-block operands with
    I u J contained in I'. Test oracle for compose; also used by the
    Gaussian-elimination oracle where the inclusion holds by construction."""
    if p.n != q.n:
        raise AmbientMismatch("ambient sizes differ")
    i1, j1, k1 = single_block(p)
    i2, j2, k2 = single_block(q)
    if (i1 | j1) & ~i2:
        raise NotAdmissible("nested form requires I u J contained in I'")
    return _assemble(p.n, [(i1, False), (j1, True), (k1 & i2, False),
                           (j2, True), (k2, False)])


def merged_product(p: StringPreorder, q: StringPreorder) -> StringPreorder:
    """Closed form (I n I')[J u J' u (I n K') u (I' n K)](K n K') for
    single-block operands with neither nesting inclusion. Test oracle."""
    if p.n != q.n:
        raise AmbientMismatch("ambient sizes differ")
    i1, j1, k1 = single_block(p)
    i2, j2, k2 = single_block(q)
    if not ((i1 | j1) & ~i2) or not ((i2 | j2) & ~i1):
        raise NotAdmissible("merged form requires neither nesting inclusion")
    middle = j1 | j2 | (i1 & k2) | (i2 & k1)
    return _assemble(p.n, [(i1 & i2, False), (middle, True), (k1 & k2, False)])
