"""Tensor powers of the cohomology ring, zero-divisors, witness products.

A TensorClass is a GF(2) sum of s-tuples of basic preorders (the tensor
basis). Products of zero-divisors built here certify the lower bounds for
topological complexity and its higher analogues.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Optional

from .cohomology import CohClass, betti, cup, normalize
from .errors import (
    AmbientMismatch,
    IndexOutOfRange,
    MalformedSyntax,
    ParameterOutOfRange,
)
from .preorder import StringPreorder, classify, discrete, make_x, parse_preorder

TENSOR_SIGN = "⊗"
TENSOR_ASCII = "(x)"


@dataclass(frozen=True)
class TensorClass:
    """GF(2) linear combination of s-tuples of basic preorders."""

    k: int
    n: int
    s: int
    terms: frozenset[tuple[StringPreorder, ...]]

    def __post_init__(self):
        for t in self.terms:
            if len(t) != self.s:
                raise AmbientMismatch(f"term of length {len(t)} in power {self.s}")

    @classmethod
    def zero(cls, k: int, n: int, s: int) -> "TensorClass":
        return cls(k, n, s, frozenset())

    @classmethod
    def unit(cls, k: int, n: int, s: int) -> "TensorClass":
        return cls(k, n, s, frozenset([(discrete(n),) * s]))

    @classmethod
    def pure(cls, slots: Iterable[CohClass], k: int, n: int) -> "TensorClass":
        """Tensor product of s cohomology classes, one per slot."""
        factors = list(slots)
        terms = frozenset(iproduct(*(sorted(c.terms, key=lambda p: p.sort_key())
                                     for c in factors)))
        return cls(k, n, len(factors), terms)

    def __add__(self, other: "TensorClass") -> "TensorClass":
        if (self.k, self.n, self.s) != (other.k, other.n, other.s):
            raise AmbientMismatch("tensor classes live in different rings")
        return TensorClass(self.k, self.n, self.s, self.terms ^ other.terms)

    def __mul__(self, other: "TensorClass") -> "TensorClass":
        return tensor_cup(self, other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def swap(self) -> "TensorClass":
        """Reverse the slots of every term (the coordinate-switch involution)."""
        return TensorClass(self.k, self.n, self.s,
                           frozenset(t[::-1] for t in self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keyed = sorted(self.terms, key=lambda t: tuple(p.sort_key() for p in t))
        return "+".join(TENSOR_SIGN.join(str(p) for p in t) for t in keyed)


def parse_tensor(text: str, k: int, n: int, s: int) -> TensorClass:
    """Parse a "+"-joined, tensor-joined class; accepts the "(x)" alias."""
    text = text.strip()
    if text == "0":
        return TensorClass.zero(k, n, s)
    terms = set()
    for chunk in text.split("+"):
        parts = chunk.replace(TENSOR_ASCII, TENSOR_SIGN).split(TENSOR_SIGN)
        if len(parts) != s:
            raise MalformedSyntax(f"expected {s} tensor factors in {chunk!r}")
        tup = tuple(parse_preorder(p.strip(), n) for p in parts)
        for p in tup:
            cls = classify(p, k)
            if not (cls.is_basic or cls.d == 0):
                raise MalformedSyntax(f"{p} is not a basic preorder for k={k}")
        terms ^= {tup}
    return TensorClass(k, n, s, frozenset(terms))


@dataclass(frozen=True)
class ZeroDivisorSpec:
    """Parameters of the zero-divisor z_{m,q}: x_m in slot q plus x_m in
    slot s. For s=2, q=1 this is y_m = x_m⊗1 + 1⊗x_m."""

    k: int
    n: int
    m: int
    q: int = 1
    s: int = 2
    primed: bool = False

    def __post_init__(self):
        if not 1 <= self.q <= self.s - 1:
            raise IndexOutOfRange(f"slot q={self.q} outside 1..{self.s - 1}")
        if self.m + self.k > self.n + 2:
            raise IndexOutOfRange(f"m={self.m} needs m+k <= n+2")


@lru_cache(maxsize=None)
def _generator_class(k: int, n: int, m: int, primed: bool) -> CohClass:
    # x_{n-k+2} is elementary but not basic; express it in the basis
    p = make_x(m, k, n, primed)
    if classify(p, k).is_basic:
        return CohClass.of(k, n, [p])
    return normalize(p, k)


def zero_divisor(spec: ZeroDivisorSpec) -> TensorClass:
    k, n, s = spec.k, spec.n, spec.s
    x = _generator_class(k, n, spec.m, spec.primed)
    one = CohClass.unit(k, n)
    first = TensorClass.pure([x if j == spec.q else one for j in range(1, s + 1)], k, n)
    last = TensorClass.pure([x if j == s else one for j in range(1, s + 1)], k, n)
    z = first + last
    image = multiplication_image(z)
    assert image.is_zero, "zero-divisor escaped the kernel of multiplication"
    return z


def y(k: int, n: int, m: int, primed: bool = False) -> TensorClass:
    """The s=2 zero-divisor y_m = x_m⊗1 + 1⊗x_m."""
    return zero_divisor(ZeroDivisorSpec(k, n, m, q=1, s=2, primed=primed))


@lru_cache(maxsize=None)
def _cup_basics(k: int, n: int, a: StringPreorder, b: StringPreorder) -> frozenset:
    return cup(CohClass.of(k, n, [a]), CohClass.of(k, n, [b])).terms


def tensor_cup(a: TensorClass, b: TensorClass) -> TensorClass:
    """Slotwise cup product (no signs over GF(2)), bilinear over terms."""
    if (a.k, a.n, a.s) != (b.k, b.n, b.s):
        raise AmbientMismatch("tensor classes live in different rings")
    k, n, s = a.k, a.n, a.s
    cap = n // k
    acc: set[tuple[StringPreorder, ...]] = set()
    for ta in a.terms:
        for tb in b.terms:
            # degree bound per slot: more than floor(n/k) blocks is zero
            if any(classify(pa, k).d + classify(pb, k).d > cap
                   for pa, pb in zip(ta, tb)):
                continue
            slot_terms = [_cup_basics(k, n, pa, pb) for pa, pb in zip(ta, tb)]
            if any(not st for st in slot_terms):
                continue
            for combo in iproduct(*slot_terms):
                acc ^= {combo}
    return TensorClass(k, n, s, frozenset(acc))


def multiplication_image(t: TensorClass) -> CohClass:
    """Image under the s-fold cup multiplication map H^{⊗s} -> H."""
    k, n = t.k, t.n
    out = CohClass.zero(k, n)
    for tup in t.terms:
        prod = CohClass.of(k, n, [tup[0]])
        for p in tup[1:]:
            prod = cup(prod, CohClass.of(k, n, [p]))
            if prod.is_zero:
                break
        out = out + prod
    return out


def witness_product(k: int, n: int, i: int, s: int = 2) -> TensorClass:
    """The structured product of s*i zero-divisors, fully normalized.

    s=2: prod_j y_{(j-1)k+1} y_{(j-1)k+2}. s>2: the singles
    z_{(j-1)k+1,q} for q = 1..s-2 followed by the slot-(s-1) doubles
    z_{(j-1)k+1,s-1} z_{(j-1)k+2,s-1}. Factors are multiplied
    left-to-right so that zero terms are pruned as early as possible.
    """
    if i < 1 or i * k > n or s < 2:
        raise ParameterOutOfRange(f"need 1 <= i, ik <= n, s >= 2; got i={i}, s={s}")
    factors: list[TensorClass] = []
    if s == 2:
        for j in range(1, i + 1):
            m = (j - 1) * k + 1
            factors.append(y(k, n, m))
            factors.append(y(k, n, m + 1))
    else:
        for q in range(1, s - 1):
            for j in range(1, i + 1):
                factors.append(zero_divisor(ZeroDivisorSpec(k, n, (j - 1) * k + 1, q, s)))
        for j in range(1, i + 1):
            m = (j - 1) * k + 1
            factors.append(zero_divisor(ZeroDivisorSpec(k, n, m, s - 1, s)))
            factors.append(zero_divisor(ZeroDivisorSpec(k, n, m + 1, s - 1, s)))
    out = factors[0]
    for f in factors[1:]:
        out = tensor_cup(out, f)
        if out.is_zero:
            break
    return out


def p_witness(i: int, variant: int, k: int, n: int) -> CohClass:
    """The alternating witness monomial p_{i,1} or p_{i,2} when n = ik.

    Even i=2a: x_1 (x_{k+1} x'_{2k+1} ... x_{(2a-3)k+1} x'_{(2a-2)k+1})
    x_{(2a-1)k+1}; odd i=2a+1 keeps the full alternating run. Variant 2
    swaps primed and unprimed throughout (x_1 stays unprimed).
    """
    if variant not in (1, 2):
        raise ParameterOutOfRange("variant must be 1 or 2")
    if i < 2 or i * k != n:
        raise ParameterOutOfRange(f"p witnesses need i >= 2 and ik = n; got i={i}, n={n}")
    swap = variant == 2
    factors = [make_x(1, k, n)]
    a, odd = divmod(i, 2)
    top = a if odd else a - 1
    for j in range(1, top + 1):
        factors.append(make_x((2 * j - 1) * k + 1, k, n, primed=swap))
        factors.append(make_x(2 * j * k + 1, k, n, primed=not swap))
    if not odd:
        factors.append(make_x((2 * a - 1) * k + 1, k, n, primed=swap))
    from .cohomology import monomial_closure

    mono = monomial_closure(factors, k, n)
    assert mono is not None and classify(mono, k).is_basic
    return CohClass.of(k, n, [mono])


def expected_witness_term(k: int, n: int, i: int) -> tuple[StringPreorder, StringPreorder]:
    """The designated tensor basis element of the s=2 witness product:
    prod x_{(j-1)k+1} ⊗ prod x_{(j-1)k+2} when ik < n, else p_{i,1}⊗p_{i,2}."""
    from .cohomology import monomial_closure

    if i * k > n:
        raise ParameterOutOfRange("need ik <= n")
    if i * k < n:
        out = []
        for off in (1, 2):
            mono = monomial_closure(
                [make_x((j - 1) * k + off, k, n) for j in range(1, i + 1)], k, n)
            assert mono is not None and classify(mono, k).is_basic
            out.append(mono)
        return out[0], out[1]
    (p1,) = p_witness(i, 1, k, n).terms
    (p2,) = p_witness(i, 2, k, n).terms
    return p1, p2


def _exhaustive_zcl(k: int, n: int) -> int:
    """Longest nonzero product of y-type zero-divisors; only for n <= 2k,
    s=2, where the slot degree bound caps products at two factors."""
    ms = [(m, primed)
          for m in range(1, n - k + 3)
          for primed in ((False, True) if m >= 2 else (False,))]
    divisors = [y(k, n, m, primed) for m, primed in ms]
    best = 0
    stack: list[tuple[TensorClass, int, int]] = [(d, j, 1) for j, d in enumerate(divisors)]
    while stack:
        prod, j, depth = stack.pop()
        if prod.is_zero:
            continue
        best = max(best, depth)
        for j2 in range(j, len(divisors)):
            nxt = tensor_cup(prod, divisors[j2])
            if nxt:
                stack.append((nxt, j2, depth + 1))
    return best


def zcl_lower(k: int, n: int, s: int = 2) -> int:
    """Certified lower bound for the s-th zero-divisor cup-length.

    Each bound is backed by an explicitly nonzero product: s*floor(n/k)
    structured factors for n > k, the chain z_{1,1}...z_{1,s-1} for n = k,
    and nothing below. For n <= 2k with s=2 a small exhaustive search over
    y-type divisors double-checks the structured bound.
    """
    if s < 2:
        raise ParameterOutOfRange("s must be >= 2")
    if n < k:
        return 0
    if n == k:
        factors = [zero_divisor(ZeroDivisorSpec(k, n, 1, q, s)) for q in range(1, s)]
        prod = factors[0]
        for f in factors[1:]:
            prod = tensor_cup(prod, f)
        assert prod, "n=k chain product unexpectedly vanished"
        return s - 1
    i = n // k
    prod = witness_product(k, n, i, s)
    assert prod, "structured witness product unexpectedly vanished"
    bound = s * i
    if s == 2 and n <= 2 * k:
        bound = max(bound, _exhaustive_zcl(k, n))
    return bound
