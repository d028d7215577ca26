"""Boolean-cube machinery: subsets of (Z/2Z)^m as dense bitmasks.

The group G = (Z/2Z)^m is the integers [0, 2^m) under XOR.  A subset is a
single 2^m-bit Python integer whose bit z records membership of z, which
makes sumsets word-parallel and keeps every count exact.  Witness counting
(how many ordered pairs (x, y) in X x Y satisfy x XOR y = z) has two
independent implementations: a vectorized naive enumeration, and the
Walsh-Hadamard transform route, which diagonalizes XOR convolution.  Their
agreement is part of the test suite's oracle discipline.

The layer split of the m = 3k+1 cube colors weights 1..2k "red" and
weights 2k+1..3k+1 "blue"; the blue layer is sum-free, which is what makes
these partitions useful seeds for representation search.  A hand-tuned
refinement of the k = 3 blue layer into two parts, shipped as data, gives
an exact 1024-point representation of the two-blue algebra; the verifier
here checks such colorings against any member of the family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .algebra import AlgebraSpec, ColorId, blue, is_mandatory, red

CUBE_DIM_CAP = 24  # dense 2^m-bit masks; int64 transform stays exact below this


class ResourceLimitError(RuntimeError):
    """Raised when an operation would exceed the configured memory budget."""


def _check_dim(m: int) -> None:
    if not 1 <= m <= CUBE_DIM_CAP:
        raise ResourceLimitError(f"dimension m={m} outside supported range 1..{CUBE_DIM_CAP}")


def weight(x: int) -> int:
    """Hamming weight of a cube element."""
    return x.bit_count()


@lru_cache(maxsize=None)
def _low_half_pattern(m: int, b: int) -> int:
    # bit z set iff bit b of z is clear; built by doubling, not by looping 2^m times
    block = (1 << (1 << b)) - 1
    width = 1 << (b + 1)
    pat = block
    total = 1 << m
    while width < total:
        pat |= pat << width
        width <<= 1
    return pat


def _xor_translate(mask: int, x: int, m: int) -> int:
    """Mask of {z XOR x : z in mask}, one butterfly swap per set bit of x."""
    b = 0
    while x:
        if x & 1:
            low = _low_half_pattern(m, b)
            s = 1 << b
            mask = ((mask & low) << s) | ((mask >> s) & low)
        x >>= 1
        b += 1
    return mask


@dataclass(frozen=True, slots=True)
class CubeSubset:
    """An immutable subset of (Z/2Z)^m stored as a 2^m-bit mask."""

    m: int
    mask: int

    def __post_init__(self) -> None:
        _check_dim(self.m)
        if self.mask < 0 or self.mask >> (1 << self.m):
            raise ValueError("mask has bits outside [0, 2^m)")

    @classmethod
    def from_elements(cls, m: int, elements: Iterable[int]) -> "CubeSubset":
        _check_dim(m)
        top = 1 << m
        # dense indicator then packbits: linear, unlike 2^m-bit int updates
        bits = np.zeros(top, dtype=np.uint8)
        for x in elements:
            if not 0 <= x < top:
                raise ValueError(f"element {x} outside [0, 2^{m})")
            bits[x] = 1
        packed = np.packbits(bits, bitorder="little").tobytes()
        return cls(m, int.from_bytes(packed, "little"))

    @classmethod
    def empty(cls, m: int) -> "CubeSubset":
        return cls(m, 0)

    @classmethod
    def full(cls, m: int) -> "CubeSubset":
        return cls(m, (1 << (1 << m)) - 1)

    @classmethod
    def from_indicator(cls, m: int, indicator: np.ndarray) -> "CubeSubset":
        _check_dim(m)
        bits = np.asarray(indicator != 0, dtype=np.uint8)
        if bits.shape != (1 << m,):
            raise ValueError("indicator length must be 2^m")
        packed = np.packbits(bits, bitorder="little").tobytes()
        return cls(m, int.from_bytes(packed, "little"))

    def __contains__(self, x: int) -> bool:
        return 0 <= x < (1 << self.m) and bool((self.mask >> x) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def elements(self) -> Iterator[int]:
        """Members in ascending order."""
        yield from self.to_array().tolist()

    def min_element(self) -> int:
        if not self.mask:
            raise ValueError("empty subset has no minimum")
        return (self.mask & -self.mask).bit_length() - 1

    def to_array(self) -> np.ndarray:
        """Members as an ascending int64 array."""
        return np.nonzero(self.indicator())[0].astype(np.int64)

    def indicator(self) -> np.ndarray:
        """Dense 0/1 vector of length 2^m, int64."""
        nbytes = max(1, ((1 << self.m) + 7) // 8)
        raw = np.frombuffer(self.mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: 1 << self.m].astype(np.int64)

    def _require_same_dim(self, other: "CubeSubset") -> None:
        if self.m != other.m:
            raise ValueError(f"dimension mismatch: m={self.m} vs m={other.m}")

    def __or__(self, other: "CubeSubset") -> "CubeSubset":
        self._require_same_dim(other)
        return CubeSubset(self.m, self.mask | other.mask)

    def __and__(self, other: "CubeSubset") -> "CubeSubset":
        self._require_same_dim(other)
        return CubeSubset(self.m, self.mask & other.mask)

    def __sub__(self, other: "CubeSubset") -> "CubeSubset":
        self._require_same_dim(other)
        return CubeSubset(self.m, self.mask & ~other.mask)

    def __xor__(self, other: "CubeSubset") -> "CubeSubset":
        self._require_same_dim(other)
        return CubeSubset(self.m, self.mask ^ other.mask)

    def complement(self) -> "CubeSubset":
        return CubeSubset.full(self.m) - self

    def without_zero(self) -> "CubeSubset":
        return CubeSubset(self.m, self.mask & ~1)

    def issubset(self, other: "CubeSubset") -> bool:
        self._require_same_dim(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "CubeSubset") -> bool:
        self._require_same_dim(other)
        return self.mask & other.mask == 0


def singleton(m: int, x: int) -> CubeSubset:
    return CubeSubset.from_elements(m, (x,))


def sumset(x: CubeSubset, y: CubeSubset) -> CubeSubset:
    """The XOR sumset {a XOR b : a in x, b in y}.

    Translates the larger operand's mask by each element of the smaller one,
    so cost is |smaller| butterfly passes over a 2^m-bit integer.
    """
    x._require_same_dim(y)
    if not x or not y:
        return CubeSubset.empty(x.m)
    small, large = (x, y) if len(x) <= len(y) else (y, x)
    out = 0
    for e in small.elements():
        out |= _xor_translate(large.mask, e, large.m)
    return CubeSubset(x.m, out)


# ---------------------------------------------------------------------------
# exact pair counting: naive and transform routes
# ---------------------------------------------------------------------------


def pair_counts_naive(x: CubeSubset, y: CubeSubset) -> np.ndarray:
    """counts[z] = #{(a, b) in x X y : a XOR b = z}, by direct enumeration."""
    x._require_same_dim(y)
    n = 1 << x.m
    if not x or not y:
        return np.zeros(n, dtype=np.int64)
    xs = x.to_array()
    ys = y.to_array()
    xors = np.bitwise_xor.outer(xs, ys).ravel()
    return np.bincount(xors, minlength=n).astype(np.int64)


def walsh_hadamard(vec: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform of an int64 vector, input left untouched.

    Unnormalized: applying it twice multiplies by the length.
    """
    n = vec.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    vec = vec.copy()  # the butterfly below writes through reshape views
    h = 1
    while h < n:
        blocks = vec.reshape(-1, 2, h)
        top = blocks[:, 0, :] + blocks[:, 1, :]
        bottom = blocks[:, 0, :] - blocks[:, 1, :]
        blocks[:, 0, :] = top
        blocks[:, 1, :] = bottom
        h <<= 1
    return vec


def pair_counts(x: CubeSubset, y: CubeSubset) -> np.ndarray:
    """Same counts as pair_counts_naive, via XOR convolution.

    Transform both indicators, multiply pointwise, transform back, divide
    by 2^m.  All arithmetic is int64 and exact: indicators are 0/1, so
    transform entries are bounded by 2^m and every intermediate stays
    within 2^(2m) <= 2^48 for m <= 24.
    """
    x._require_same_dim(y)
    fx = walsh_hadamard(x.indicator())
    fy = walsh_hadamard(y.indicator())
    prod = walsh_hadamard(fx * fy)
    if (prod & ((1 << x.m) - 1)).any():
        raise AssertionError("transform output not divisible by 2^m; overflow?")
    return prod >> x.m


def support(counts: np.ndarray, m: int) -> CubeSubset:
    """The subset where a count vector is nonzero."""
    return CubeSubset.from_indicator(m, counts != 0)


# ---------------------------------------------------------------------------
# layer partitions of the m = 3k+1 cube
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LayerPartition:
    """Diversity split of (Z/2Z)^(3k+1) into low layers R and high layers B."""

    k: int
    R: CubeSubset
    B: CubeSubset

    @property
    def m(self) -> int:
        return 3 * self.k + 1


def _weights_vector(m: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << m, dtype=np.uint32)).astype(np.int64)


def layer_partition(k: int) -> LayerPartition:
    """Build the weight-layer split at parameter k and check its identities.

    R holds weights 1..2k and B weights 2k+1..3k+1.  Construction asserts
    R+R = G, R+B = G minus 0, and B+B = R plus 0 (B is sum-free), via the
    transform route's supports.
    """
    if k < 1:
        raise ValueError("k >= 1 required")
    m = 3 * k + 1
    _check_dim(m)
    w = _weights_vector(m)
    r_part = CubeSubset.from_indicator(m, (w >= 1) & (w <= 2 * k))
    b_part = CubeSubset.from_indicator(m, w >= 2 * k + 1)

    full = CubeSubset.full(m)
    diversity = full.without_zero()
    zero = singleton(m, 0)
    assert support(pair_counts(r_part, r_part), m) == full
    assert support(pair_counts(r_part, b_part), m) == diversity
    assert support(pair_counts(b_part, b_part), m) == r_part | zero
    return LayerPartition(k, r_part, b_part)


class WitnessStat(NamedTuple):
    min_count: int
    argmin: int


WITNESS_CASES: tuple[tuple[str, str, str, str], ...] = (
    ("R<=B+B", "R", "B", "B"),
    ("B<=B+R", "B", "B", "R"),
    ("B<=R+R", "B", "R", "R"),
    ("R<=B+R", "R", "B", "R"),
    ("R<=R+R", "R", "R", "R"),
)


def witness_minima(part: LayerPartition, k_cap: int = 5) -> dict[str, WitnessStat]:
    """Minimum witness multiplicities for the five coarse coverage cases.

    For each case "T<=L+Rt" the value is min over z in T of the exact count
    of ordered pairs (x, y) in L x Rt with x XOR y = z, with the smallest
    minimizing z.  A minimum of at least 2^k for every case is what makes
    an n-way random split of the layers succeed with positive probability
    once 2^k outruns n^2.
    """
    if part.k > k_cap:
        raise ResourceLimitError(f"k={part.k} exceeds cap {k_cap}; raise k_cap to force")
    layers = {"R": part.R, "B": part.B}
    out: dict[str, WitnessStat] = {}
    for label, target, left, right in WITNESS_CASES:
        counts = pair_counts(layers[left], layers[right])
        targets = layers[target].to_array()
        restricted = counts[targets]
        pos = int(np.argmin(restricted))
        out[label] = WitnessStat(int(restricted[pos]), int(targets[pos]))
    return out


# ---------------------------------------------------------------------------
# colorings of the cube and their verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupColoring:
    """Assignment of every nonzero cube element to one diversity color.

    Parts must be pairwise disjoint nonempty subsets excluding 0 whose
    union is all of G minus 0.
    """

    m: int
    parts: dict[ColorId, CubeSubset] = field(compare=False)

    def __post_init__(self) -> None:
        _check_dim(self.m)
        union = 0
        for c, part in self.parts.items():
            if not c.is_diversity:
                raise ValueError("parts must be keyed by diversity colors")
            if part.m != self.m:
                raise ValueError("part dimension mismatch")
            if not part:
                raise ValueError(f"part {c!r} is empty")
            if 0 in part:
                raise ValueError("0 belongs to the identity, not to any part")
            if union & part.mask:
                raise ValueError("parts overlap")
            union |= part.mask
        if union != CubeSubset.full(self.m).without_zero().mask:
            raise ValueError("parts must cover exactly the nonzero elements")

    def colors(self) -> list[ColorId]:
        return sorted(self.parts, key=ColorId.sort_key)

    def part(self, c: ColorId) -> CubeSubset:
        return self.parts[c]

    def color_of(self, x: int) -> ColorId:
        for c, part in self.parts.items():
            if x in part:
                return c
        raise KeyError(f"{x} not in any part")

    def merged(self, groups: dict[ColorId, tuple[ColorId, ...]]) -> "GroupColoring":
        """Coarsen by unioning listed parts under new color keys."""
        parts = {}
        for new_color, old in groups.items():
            acc = CubeSubset.empty(self.m)
            for c in old:
                acc = acc | self.parts[c]
            parts[new_color] = acc
        return GroupColoring(self.m, parts)


@dataclass(frozen=True, slots=True)
class Violation:
    """One way a coloring fails to represent an algebra."""

    kind: str  # missing-part | identity-wrong | missing-need | forbidden-hit
    c1: ColorId | None
    c2: ColorId | None
    z: int | None
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.message}"


@dataclass(frozen=True, slots=True)
class VerifyResult:
    ok: bool
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_group_representation(
    coloring: GroupColoring,
    spec: AlgebraSpec,
    assignment: dict[ColorId, ColorId] | None = None,
    collect_all: bool = False,
) -> VerifyResult:
    """Check that a cube coloring realizes the algebra's composition law.

    For every ordered pair of diversity colors the sumset of their parts
    must contain 0 exactly when the colors coincide, cover the parts of
    every color their composition mandates, and avoid the parts of every
    color it forbids.  `assignment` maps the algebra's colors to the
    coloring's part keys (identity mapping by default).  The scan order is
    deterministic (colors ranked reds-then-blues, elements ascending) and
    stops at the first violation unless `collect_all` is set.
    """
    colors = spec.diversity_colors()
    if assignment is None:
        assignment = {c: c for c in colors}
    if set(assignment) != set(colors):
        raise ValueError("assignment must cover exactly the algebra's diversity colors")
    assigned = [assignment[c] for c in colors]
    if len(set(assigned)) != len(assigned):
        raise ValueError("assignment must be injective")
    if not set(coloring.parts) <= set(assigned):
        raise ValueError("coloring has parts the assignment never uses")

    violations: list[Violation] = []

    def note(v: Violation) -> bool:
        violations.append(v)
        return not collect_all

    empty = CubeSubset.empty(coloring.m)
    parts: dict[ColorId, CubeSubset] = {}
    for c in colors:
        part = coloring.parts.get(assignment[c], empty)
        parts[c] = part
        if not part:
            if note(
                Violation("missing-part", c, None, None,
                          f"no points realize color {spec.color_name(c)}")
            ):
                return VerifyResult(False, tuple(violations))

    sums: dict[frozenset[ColorId], CubeSubset] = {}

    def sum_of(c1: ColorId, c2: ColorId) -> CubeSubset:
        key = frozenset((c1, c2))
        if key not in sums:
            sums[key] = sumset(parts[c1], parts[c2])
        return sums[key]

    for c1 in colors:
        for c2 in colors:
            s = sum_of(c1, c2)
            n1, n2 = spec.color_name(c1), spec.color_name(c2)
            if (0 in s) != (c1 == c2):
                expect = "contain" if c1 == c2 else "omit"
                if note(
                    Violation("identity-wrong", c1, c2, 0,
                              f"{n1}+{n2} must {expect} 0")
                ):
                    return VerifyResult(False, tuple(violations))
            for c3 in colors:
                n3 = spec.color_name(c3)
                if is_mandatory(spec, c1, c2, c3):
                    missing = parts[c3] - s
                    if missing:
                        z = missing.min_element()
                        if note(
                            Violation("missing-need", c1, c2, z,
                                      f"{z} (color {n3}) unreachable as {n1}+{n2}")
                        ):
                            return VerifyResult(False, tuple(violations))
                else:
                    hit = parts[c3] & s
                    if hit:
                        z = hit.min_element()
                        if note(
                            Violation("forbidden-hit", c1, c2, z,
                                      f"{z} (color {n3}) produced by forbidden {n1}+{n2}")
                        ):
                            return VerifyResult(False, tuple(violations))
    return VerifyResult(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# the embedded 1024-point split
# ---------------------------------------------------------------------------

# Hand-tuned refinement of the k=3 blue layer; its sumset closure generates
# the whole red layer, realizing the two-blue algebra on 1024 points.
EMBEDDED_B_ELEMENTS: tuple[int, ...] = (
    127, 223, 239, 251, 253, 255, 367,
    375, 381, 382, 431, 443, 446, 471, 475,
    477, 478, 487, 491, 494, 499, 505, 509,
    607, 635, 637, 639, 701, 702, 703, 719,
    727, 733, 734, 743, 750, 751, 758, 763,
    766, 815, 823, 827, 829, 847, 859, 862,
    863, 877, 879, 883, 886, 887, 890, 893,
    894, 919, 923, 925, 927, 935, 941, 943,
    949, 950, 953, 954, 958, 979, 981, 982,
    990, 991, 995, 1001, 1002, 1003, 1005,
    1011, 1012, 1013, 1014, 1015, 1016,
    1017, 1019, 1021, 1022,
)

EMBEDDED_B_ASSET = "embedded_b_elements.txt"


def load_embedded_b_asset() -> tuple[int, ...]:
    """Read the shipped text copy of the embedded blue part."""
    text = resources.files("redblue.data").joinpath(EMBEDDED_B_ASSET).read_text()
    return tuple(int(tok) for tok in text.split())


def embedded_split_1024() -> GroupColoring:
    """The exact 1024-point coloring representing the two-blue algebra.

    The first blue part is the embedded 88-element set b; red is the
    nonzero part of b+b; the second blue part is everything else.
    """
    m = 10
    b = CubeSubset.from_elements(m, EMBEDDED_B_ELEMENTS)
    a = sumset(b, b).without_zero()
    c = CubeSubset.full(m).without_zero() - a - b
    return GroupColoring(m, {red(0): a, blue(0): b, blue(1): c})


# ---------------------------------------------------------------------------
# split text format
# ---------------------------------------------------------------------------


def _part_names(coloring: GroupColoring) -> dict[ColorId, str]:
    reds = [c for c in coloring.colors() if c.is_red]
    names = {}
    for c in coloring.colors():
        if c.is_red:
            names[c] = "r" if len(reds) == 1 else f"r{c.index + 1}"
        else:
            names[c] = f"b{c.index + 1}"
    return names


def write_split(coloring: GroupColoring) -> str:
    """Serialize a coloring in the split text format.

    Line 1 is `cube m=<m> colors=<t>`; then one `<name>: <elements>` line
    per color in red-then-blue order, elements ascending.
    """
    names = _part_names(coloring)
    lines = [f"cube m={coloring.m} colors={len(coloring.parts)}"]
    for c in coloring.colors():
        elems = " ".join(str(x) for x in coloring.parts[c].elements())
        lines.append(f"{names[c]}: {elems}")
    return "\n".join(lines) + "\n"


def parse_split(text: str) -> GroupColoring:
    """Parse the split text format back into a coloring."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty split file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "cube":
        raise ValueError(f"bad header {lines[0]!r}")
    fields = dict(item.split("=", 1) for item in header[1:])
    m = int(fields["m"])
    t = int(fields["colors"])
    if len(lines) - 1 != t:
        raise ValueError(f"expected {t} color lines, found {len(lines) - 1}")
    parts: dict[ColorId, CubeSubset] = {}
    for line in lines[1:]:
        name, _, rest = line.partition(":")
        name = name.strip()
        if name == "r":
            color = red(0)
        elif name[:1] in ("r", "b") and name[1:].isdigit():
            idx = int(name[1:]) - 1
            color = red(idx) if name[0] == "r" else blue(idx)
        else:
            raise ValueError(f"unrecognized color name {name!r}")
        elements = [int(tok) for tok in rest.split()]
        for x in elements:
            if not 1 <= x < (1 << m):
                raise ValueError(f"element {x} outside [1, 2^{m})")
        if color in parts:
            raise ValueError(f"duplicate color line {name!r}")
        parts[color] = CubeSubset.from_elements(m, elements)
    return GroupColoring(m, parts)
