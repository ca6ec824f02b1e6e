"""Exact arithmetic for finite truncations of bounded Vilenkin groups.

A group truncation is described by its digit bases ``m_0, ..., m_{N-1}``
(every entry at least 2).  Scale factors follow the mixed-radix recursion
``M_0 = 1``, ``M_{k+1} = m_k * M_k``, and every integer ``0 <= n < M_N``
has a unique expansion ``n = sum_j n_j * M_j`` with ``0 <= n_j < m_j``.
Points of the group are digit tuples of the same shape; the depth-``n``
cylinder through a point fixes its first ``n`` coordinates and carries
Haar measure ``1 / M_n``.

Everything in this module is exact: bases, scale factors and digit values
are Python integers, measures are :class:`fractions.Fraction`.  Floating
point only enters in the transform layer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "GroupSpec",
    "GroupPattern",
    "IndexDigits",
    "Point",
    "Cylinder",
    "build_group_spec",
    "digit_decompose",
    "digit_compose",
    "point_from_index",
    "point_to_index",
    "cylinder_of",
    "q_number",
    "materialize_group",
    "parse_group_text",
    "all_cylinders",
]


@dataclass(frozen=True)
class GroupSpec:
    """A concrete truncated group: digit bases plus precomputed scales.

    ``scales`` has length ``resolution + 1`` with ``scales[0] == 1`` and
    ``scales[k + 1] == digits[k] * scales[k]``.  ``bound`` is the largest
    base; the group is "bounded" in the intended sense when ``bound`` stays
    fixed while the resolution grows.
    """

    digits: tuple[int, ...]
    scales: tuple[int, ...] = field(repr=False, default=())
    bound: int = 0

    def __post_init__(self):
        if any(m < 2 for m in self.digits):
            raise DomainError(f"digit bases must all be >= 2, got {self.digits}")
        if not self.scales:
            scales = [1]
            for m in self.digits:
                scales.append(scales[-1] * m)
            object.__setattr__(self, "scales", tuple(scales))
            object.__setattr__(self, "bound", max(self.digits, default=1))
        else:
            # Trust but verify precomputed fields (cheap, and keeps
            # deserialized specs honest).
            if len(self.scales) != len(self.digits) + 1 or self.scales[0] != 1:
                raise DomainError("scales do not match digits")
            for k, m in enumerate(self.digits):
                if self.scales[k + 1] != m * self.scales[k]:
                    raise DomainError("scales do not match digits")

    @property
    def resolution(self) -> int:
        return len(self.digits)

    @property
    def size(self) -> int:
        """Number of points, ``M_resolution``."""
        return self.scales[-1]

    def truncate(self, resolution: int) -> "GroupSpec":
        """The depth-``resolution`` prefix of this group."""
        if not 0 <= resolution <= self.resolution:
            raise DomainError(
                f"cannot truncate resolution-{self.resolution} group to {resolution}"
            )
        return GroupSpec(self.digits[:resolution])

    def haar_weight(self) -> Fraction:
        """Mass of a single point, ``1 / M_resolution``."""
        return Fraction(1, self.size)


def build_group_spec(digits) -> GroupSpec:
    """Validate a digit-base sequence and attach its scale factors.

    The sequence must be nonempty with every entry at least 2.
    """
    digits = tuple(int(m) for m in digits)
    if not digits:
        raise DomainError("digit-base sequence must be nonempty")
    return GroupSpec(digits)


@dataclass(frozen=True)
class IndexDigits:
    """Mixed-radix expansion of a frequency index."""

    digits: tuple[int, ...]
    group: GroupSpec

    @property
    def support(self) -> tuple[int, ...]:
        """Positions with a nonzero digit."""
        return tuple(j for j, d in enumerate(self.digits) if d)


@dataclass(frozen=True)
class Point:
    """A point of the truncated group, stored as its coordinate digits."""

    coords: tuple[int, ...]


def digit_decompose(n: int, group: GroupSpec) -> IndexDigits:
    """Expand ``0 <= n < M_N`` in the group's mixed-radix system."""
    n = int(n)
    if not 0 <= n < group.size:
        raise DomainError(f"index {n} outside [0, {group.size})")
    out = []
    for m in group.digits:
        n, d = divmod(n, m)
        out.append(d)
    return IndexDigits(tuple(out), group)


def digit_compose(digits, group: GroupSpec) -> int:
    """Inverse of :func:`digit_decompose`; rejects out-of-range digits."""
    digits = tuple(int(d) for d in digits)
    if len(digits) != group.resolution:
        raise DomainError(
            f"expected {group.resolution} digits, got {len(digits)}"
        )
    n = 0
    for j in reversed(range(len(digits))):
        d = digits[j]
        if not 0 <= d < group.digits[j]:
            raise DomainError(f"digit {d} at position {j} outside base {group.digits[j]}")
        n = n * group.digits[j] + d
    return n


def point_from_index(idx: int, group: GroupSpec) -> Point:
    """The enumeration of points mirrors the frequency expansion."""
    return Point(digit_decompose(idx, group).digits)


def point_to_index(x: Point, group: GroupSpec) -> int:
    return digit_compose(x.coords, group)


@dataclass(frozen=True)
class Cylinder:
    """The set of points agreeing with ``prefix`` on the first coordinates."""

    group: GroupSpec
    prefix: tuple[int, ...]

    def __post_init__(self):
        if len(self.prefix) > self.group.resolution:
            raise DomainError("cylinder deeper than the group resolution")
        for j, d in enumerate(self.prefix):
            if not 0 <= d < self.group.digits[j]:
                raise DomainError(f"prefix digit {d} outside base {self.group.digits[j]}")

    @property
    def depth(self) -> int:
        return len(self.prefix)

    @property
    def measure(self) -> Fraction:
        """Haar measure, exactly ``1 / M_depth``."""
        return Fraction(1, self.group.scales[self.depth])

    @property
    def base_index(self) -> int:
        """Index of the lexicographically least point of the cylinder."""
        n = 0
        for j in reversed(range(self.depth)):
            n = n * self.group.digits[j] + self.prefix[j]
        return n

    def contains_index(self, idx: int) -> bool:
        return digit_decompose(idx, self.group).digits[: self.depth] == self.prefix


def cylinder_of(x: Point, n: int, group: GroupSpec) -> Cylinder:
    """Depth-``n`` cylinder through ``x``."""
    n = int(n)
    if not 0 <= n <= group.resolution:
        raise DomainError(f"cylinder depth {n} outside [0, {group.resolution}]")
    if len(x.coords) != group.resolution:
        raise DomainError("point has the wrong number of coordinates")
    return Cylinder(group, x.coords[:n])


def all_cylinders(group: GroupSpec, depth: int):
    """Iterate over every depth-``depth`` cylinder (small groups only)."""
    if not 0 <= depth <= group.resolution:
        raise DomainError(f"depth {depth} outside [0, {group.resolution}]")
    for prefix in itertools.product(*(range(m) for m in group.digits[:depth])):
        yield Cylinder(group, prefix)


def q_number(a: int, group: GroupSpec) -> int:
    """The sparse index ``q_a = M_{2a} + M_{2a-2} + ... + M_2 + M_0``.

    Its digit expansion has a one in every even position up to ``2a`` and
    zeros elsewhere, which makes it the canonical test order for the
    Cesaro-mean lower bounds.  Satisfies ``q_a = M_{2a} + q_{a-1}`` and,
    with all bases at least 2, ``q_a <= 2 M_{2a}``.  Requires
    ``2a <= resolution``.
    """
    a = int(a)
    if a < 0:
        raise DomainError(f"sparse-index level must be >= 0, got {a}")
    if 2 * a > group.resolution:
        raise DomainError(
            f"level {a} needs resolution >= {2 * a}, group has {group.resolution}"
        )
    return sum(group.scales[2 * j] for j in range(a + 1))


@dataclass(frozen=True)
class GroupPattern:
    """A periodic digit-base pattern, extendable to any resolution.

    This is how unbounded-resolution objects are described: the pattern
    pins the repeating bases while the consumer chooses how far to
    materialize.  All the scale arithmetic below is closed-form exact, so
    quantities like ``M_{2 * alpha}`` are available long before any grid of
    that size could exist.
    """

    base: tuple[int, ...]

    def __post_init__(self):
        if not self.base:
            raise DomainError("pattern must contain at least one digit base")
        if any(m < 2 for m in self.base):
            raise DomainError(f"digit bases must all be >= 2, got {self.base}")

    @property
    def bound(self) -> int:
        return max(self.base)

    def digit(self, j: int) -> int:
        if j < 0:
            raise DomainError(f"digit position must be >= 0, got {j}")
        return self.base[j % len(self.base)]

    def scale(self, j: int) -> int:
        """``M_j`` for the cyclically extended base sequence, exactly."""
        if j < 0:
            raise DomainError(f"scale index must be >= 0, got {j}")
        period = 1
        for m in self.base:
            period *= m
        full, rest = divmod(j, len(self.base))
        tail = 1
        for m in self.base[:rest]:
            tail *= m
        return period**full * tail

    def group(self, resolution: int) -> GroupSpec:
        if resolution < 1:
            raise DomainError(f"resolution must be >= 1, got {resolution}")
        reps = -(-resolution // len(self.base))
        return GroupSpec((self.base * reps)[:resolution])

    def q_number(self, a: int) -> int:
        """``q_a = sum_{j <= a} M_{2j}`` without materializing a group.

        Evaluated in closed form: group the terms by ``j`` modulo the
        pattern's half-period, where each class is a geometric series in
        the per-period product.  This keeps ``q_a`` affordable for the
        enormous ``a`` the growth conditions force (the naive sum would
        add hundreds of thousands of huge integers).
        """
        a = int(a)
        if a < 0:
            raise DomainError(f"sparse-index level must be >= 0, got {a}")
        length = len(self.base)
        period = self.scale(length)
        # j and j + L2 give digit positions 2j and 2j + 2*L2 that agree mod
        # the pattern length, so scale(2j) grows by period**step per hop
        g = math.gcd(2, length)
        l2 = length // g
        step = 2 // g
        ratio = period**step
        total = 0
        for r in range(min(l2, a + 1)):
            count = (a - r) // l2 + 1
            e0, c = divmod(2 * r, length)
            geometric = (ratio**count - 1) // (ratio - 1)
            total += self.scale(c) * period**e0 * geometric
        return total


def materialize_group(g, resolution: int | None = None) -> GroupSpec:
    """Resolve a :class:`GroupSpec` or :class:`GroupPattern` to a concrete group."""
    if isinstance(g, GroupSpec):
        if resolution is None or resolution == g.resolution:
            return g
        if resolution < g.resolution:
            return g.truncate(resolution)
        raise DomainError(
            f"group has resolution {g.resolution}; cannot extend a concrete "
            f"group to {resolution} (use a pattern)"
        )
    if isinstance(g, GroupPattern):
        if resolution is None:
            raise DomainError("a pattern needs an explicit resolution")
        return g.group(resolution)
    raise DomainError(f"expected GroupSpec or GroupPattern, got {type(g).__name__}")


def parse_group_text(text: str) -> tuple[GroupPattern, int | None]:
    """Parse the command-line group syntax.

    ``"const:b"`` gives the constant pattern with base ``b`` and no fixed
    resolution; ``"const:b^N"`` fixes resolution ``N``; ``"a,b,c"`` gives the
    pattern ``(a, b, c)`` with default resolution equal to its length.
    """
    text = text.strip()
    if not text:
        raise DomainError("empty group description")
    if text.startswith("const:"):
        body = text[len("const:") :]
        if "^" in body:
            base_text, _, res_text = body.partition("^")
            try:
                base, res = int(base_text), int(res_text)
            except ValueError as exc:
                raise DomainError(f"cannot parse group description {text!r}") from exc
            if res < 1:
                raise DomainError(f"resolution must be >= 1, got {res}")
            return GroupPattern((base,)), res
        try:
            base = int(body)
        except ValueError as exc:
            raise DomainError(f"cannot parse group description {text!r}") from exc
        return GroupPattern((base,)), None
    try:
        bases = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise DomainError(f"cannot parse group description {text!r}") from exc
    return GroupPattern(bases), len(bases)
