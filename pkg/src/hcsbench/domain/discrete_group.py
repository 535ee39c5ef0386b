"""Finitely generated discrete subgroups Γ ⊂ SL(n,ℝ) and functions on them.

Balls are enumerated breadth-first by right multiplication with the
symmetric generating set. Enumeration order is deterministic, so the ball of
radius R is an index prefix of every larger ball of the same presentation;
functions can be moved between nested balls without re-keying.

Canonical keys are the raw bytes of an ``int64`` entry row: exact integer
entries in ``exact-integer`` mode, entries rounded to a quantum in
``floating`` mode.
"""

from __future__ import annotations

import hashlib
import logging
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt

from .enums import Arithmetic
from .errors import (
    BallOverflowError,
    ConfigurationError,
    DimensionMismatchError,
    IntegerOverflowError,
    KeyCollisionError,
    NonFiniteError,
    TargetTooSmallError,
)
from .haar_integration import XiEvaluator
from .lie_core import FloatArray, GroupElement, format_matrix_literal, length_batch, parse_matrix_literal
from .parallel import SEQUENTIAL, ParallelContext
from .tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

IntArray = npt.NDArray[np.int64]

DEFAULT_BALL_CAP = 5_000_000
#: Largest entry magnitude kept in exact-integer mode (exactly representable as float64).
SAFE_INTEGER = 2**53
_CAP_WARNING_FRACTION = 0.8
_PRODUCT_CHUNK = 1_000_000


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


def _integer_inverse(matrices: IntArray) -> IntArray:
    """Exact inverses of integer matrices with determinant 1.

    n = 2 and n = 3 use the adjugate; larger n round the float inverse and
    verify the product.
    """
    n = matrices.shape[-1]
    if n == 2:  # noqa: PLR2004
        a, b = matrices[..., 0, 0], matrices[..., 0, 1]
        c, d = matrices[..., 1, 0], matrices[..., 1, 1]
        return np.stack([np.stack([d, -b], axis=-1), np.stack([-c, a], axis=-1)], axis=-2)
    if n == 3:  # noqa: PLR2004
        r0, r1, r2 = matrices[..., 0, :], matrices[..., 1, :], matrices[..., 2, :]
        return np.stack([np.cross(r1, r2), np.cross(r2, r0), np.cross(r0, r1)], axis=-1)
    inverse = np.rint(np.linalg.inv(matrices.astype(np.float64))).astype(np.int64)
    identity = np.eye(matrices.shape[-1], dtype=np.int64)
    if not np.array_equal(matrices @ inverse, np.broadcast_to(identity, matrices.shape)):
        raise IntegerOverflowError("integer inverse could not be recovered exactly")
    return inverse


def _inverse_name(name: str) -> str:
    if len(name) == 1 and name.islower():
        return name.upper()
    return f"{name}^-1"


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    """Named list of matrix generators.

    Attributes:
        name: Identifier used in reports and serialized balls.
        generators: Generators as group elements; inverses are added by
            :meth:`symmetric_generators`.
        arithmetic: ``exact-integer`` requires integer entries with integer
            inverses; ``floating`` keys elements by rounded entries.
        generator_names: Symbols used to spell words.

    Example:
        >>> sanov = builtin_presentation("sanov")
        >>> sanov.n, sanov.arithmetic.value
        (2, 'exact-integer')
        >>> sanov.symmetric_generators()[1]
        ('a', 'b', 'A', 'B')
    """

    name: str
    generators: tuple[GroupElement, ...]
    arithmetic: Arithmetic = Arithmetic.EXACT_INTEGER
    generator_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.generators:
            raise ConfigurationError(f"presentation {self.name!r} has no generators")
        dims = {g.dim for g in self.generators}
        if len(dims) != 1:
            raise DimensionMismatchError(expected=self.generators[0].dim, actual=max(dims))
        if not self.generator_names:
            letters = "abcdefghijklmnopqrstuvwxyz"
            names = tuple(letters[i] if i < len(letters) else f"g{i}" for i in range(len(self.generators)))
            object.__setattr__(self, "generator_names", names)
        if len(self.generator_names) != len(self.generators):
            raise ConfigurationError(f"presentation {self.name!r}: one name per generator required")
        if self.arithmetic is Arithmetic.EXACT_INTEGER:
            stack = self.stack
            if not np.array_equal(stack, np.rint(stack)):
                raise ConfigurationError(
                    f"presentation {self.name!r}: exact-integer arithmetic needs integer entries; use floating"
                )
            _integer_inverse(np.rint(stack).astype(np.int64))

    @property
    def n(self) -> int:
        return self.generators[0].dim

    @property
    def stack(self) -> FloatArray:
        return np.stack([g.entries for g in self.generators])

    @property
    def fingerprint(self) -> str:
        """Stable digest of name, arithmetic and generator entries."""
        digest = hashlib.sha256(f"{self.name}|{self.arithmetic.value}".encode())
        digest.update(np.ascontiguousarray(self.stack).tobytes())
        return digest.hexdigest()[:16]

    def symmetric_generators(self) -> tuple[FloatArray, tuple[str, ...]]:
        """Generators followed by their inverses, dropping involutions and repeats."""
        stack = self.stack
        if self.arithmetic is Arithmetic.EXACT_INTEGER:
            inverses = _integer_inverse(np.rint(stack).astype(np.int64)).astype(np.float64)
        else:
            inverses = np.linalg.inv(stack)
        candidates = np.concatenate([stack, inverses])
        names = list(self.generator_names) + [_inverse_name(name) for name in self.generator_names]
        kept: list[int] = []
        identity = np.eye(self.n)
        for i, matrix in enumerate(candidates):
            if np.allclose(matrix, identity, rtol=0.0, atol=1e-12):
                continue
            if any(np.allclose(matrix, candidates[j], rtol=0.0, atol=1e-12) for j in kept):
                continue
            kept.append(i)
        return candidates[kept], tuple(names[i] for i in kept)

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "arithmetic": self.arithmetic.value,
            "generators": [format_matrix_literal(g.entries) for g in self.generators],
        }

    @classmethod
    def from_literals(
        cls, name: str, literals: Sequence[str], arithmetic: Arithmetic | None = None
    ) -> GroupPresentation:
        """Build a presentation from ``"a,b;c,d"`` literals.

        Arithmetic defaults to ``exact-integer`` when every entry is integral.
        """
        matrices = [parse_matrix_literal(literal) for literal in literals]
        if arithmetic is None:
            integral = all(np.array_equal(m, np.rint(m)) for m in matrices)
            arithmetic = Arithmetic.EXACT_INTEGER if integral else Arithmetic.FLOATING
        return cls(name=name, generators=tuple(GroupElement(m) for m in matrices), arithmetic=arithmetic)


def _elementary(n: int, i: int, j: int) -> GroupElement:
    matrix = np.eye(n)
    matrix[i, j] = 1.0
    return GroupElement(matrix)


def builtin_presentation(name: str) -> GroupPresentation:
    """Built-in presentations: ``sanov`` (free of rank 2), ``sl2z`` and ``sl3z``."""
    key = name.strip().lower()
    if key == "sanov":
        return GroupPresentation(
            "sanov",
            (GroupElement(np.array([[1.0, 2.0], [0.0, 1.0]])), GroupElement(np.array([[1.0, 0.0], [2.0, 1.0]]))),
            Arithmetic.EXACT_INTEGER,
            ("a", "b"),
        )
    if key == "sl2z":
        return GroupPresentation(
            "sl2z",
            (GroupElement(np.array([[0.0, -1.0], [1.0, 0.0]])), GroupElement(np.array([[1.0, 1.0], [0.0, 1.0]]))),
            Arithmetic.EXACT_INTEGER,
            ("s", "t"),
        )
    if key == "sl3z":
        pairs = [(i, j) for i in range(3) for j in range(3) if i != j]
        return GroupPresentation(
            "sl3z",
            tuple(_elementary(3, i, j) for i, j in pairs),
            Arithmetic.EXACT_INTEGER,
            tuple(f"e{i + 1}{j + 1}" for i, j in pairs),
        )
    raise ConfigurationError(f"unknown group {name!r}; expected one of {', '.join(BUILTIN_GROUPS)}")


BUILTIN_GROUPS = ("sanov", "sl2z", "sl3z")


# ---------------------------------------------------------------------------
# Balls
# ---------------------------------------------------------------------------


def _row_keys(rows: IntArray) -> list[bytes]:
    contiguous = np.ascontiguousarray(rows.reshape(rows.shape[0], -1))
    return [contiguous[i].tobytes() for i in range(contiguous.shape[0])]


def rounded_entries(stack: FloatArray, quantum: float) -> IntArray:
    scaled = stack / quantum
    if np.any(np.abs(scaled) >= 2.0**62):
        raise IntegerOverflowError(f"entries too large for rounded keys at quantum {quantum:g}")
    return np.rint(scaled).astype(np.int64)


@dataclass(frozen=True, eq=False)
class BallIndex:
    """Breadth-first ball of radius R in the Cayley graph of a presentation.

    Attributes:
        presentation: Generating data.
        radius: Word-length radius R.
        stack: ``(N, n, n)`` float entries, identity first.
        integer_stack: Exact entries in exact-integer mode, else None.
        word_length: Word length of every element.
        parent: Index of the element one generator shorter (−1 for e).
        last_generator: Index into the symmetric generator list (−1 for e).
        generator_names: Symbols of the symmetric generators.
        lookup: Canonical key → index.
        quantum: Rounding quantum of floating keys.
    """

    presentation: GroupPresentation
    radius: int
    stack: FloatArray
    integer_stack: IntArray | None
    word_length: IntArray
    parent: IntArray
    last_generator: IntArray
    generator_names: tuple[str, ...]
    lookup: dict[bytes, int] = field(repr=False)
    quantum: float = DEFAULT_TOLERANCES.float_key
    _xi_cache: dict[Any, FloatArray] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return int(self.stack.shape[0])

    @property
    def n(self) -> int:
        return int(self.stack.shape[-1])

    @property
    def exact(self) -> bool:
        return self.integer_stack is not None

    def keys_of(self, stack: npt.ArrayLike) -> list[bytes]:
        """Canonical keys of arbitrary matrices under this ball's arithmetic."""
        values = np.asarray(stack)
        if values.ndim == 2:  # noqa: PLR2004
            values = values[np.newaxis]
        if self.exact:
            return _row_keys(np.rint(values).astype(np.int64))
        return _row_keys(rounded_entries(np.asarray(values, dtype=np.float64), self.quantum))

    def index_of(self, matrix: npt.ArrayLike | GroupElement) -> int | None:
        entries = matrix.entries if isinstance(matrix, GroupElement) else matrix
        return self.lookup.get(self.keys_of(entries)[0])

    def indices_of(self, stack: npt.ArrayLike) -> IntArray:
        """Indices of a matrix stack; −1 where the element lies outside the ball."""
        return np.fromiter((self.lookup.get(key, -1) for key in self.keys_of(stack)), dtype=np.int64)

    def element(self, index: int) -> GroupElement:
        return GroupElement(self.stack[index])

    def elements(self) -> Iterator[GroupElement]:
        for index in range(len(self)):
            yield self.element(index)

    def word(self, index: int) -> str:
        """Spelling of the BFS word reaching ``index``; ``e`` for the identity."""
        letters: list[str] = []
        current = index
        while current > 0:
            letters.append(self.generator_names[int(self.last_generator[current])])
            current = int(self.parent[current])
        return " ".join(reversed(letters)) if letters else "e"

    def layer_end(self, radius: int) -> int:
        """Number of elements of word length ≤ ``radius`` (a prefix length)."""
        return int(np.searchsorted(self.word_length, radius, side="right"))

    def extends(self, other: BallIndex) -> bool:
        """True when ``other`` is an index prefix of this ball."""
        return self.presentation.fingerprint == other.presentation.fingerprint and self.radius >= other.radius

    @cached_property
    def lengths(self) -> FloatArray:
        return length_batch(self.stack)

    @cached_property
    def inverse_index(self) -> IntArray:
        """Index of γ⁻¹ for every γ (balls are closed under inversion)."""
        if self.integer_stack is not None:
            inverses = _integer_inverse(self.integer_stack).astype(np.float64)
        else:
            inverses = np.linalg.inv(self.stack)
        return self.indices_of(inverses)

    def xi_values(self, xi: XiEvaluator) -> FloatArray:
        """Ξ on every ball element, cached per evaluator."""
        cached = self._xi_cache.get(xi)
        if cached is None:
            cached = np.asarray(xi(self.stack), dtype=np.float64)
            cached.setflags(write=False)
            self._xi_cache[xi] = cached
        return cached

    def xi_on(self, xi: XiEvaluator, indices: npt.ArrayLike) -> FloatArray:
        """Ξ on selected elements; reuses the full-ball cache when present."""
        selected = np.asarray(indices, dtype=np.int64)
        cached = self._xi_cache.get(xi)
        if cached is not None:
            return cached[selected]
        return np.asarray(xi(self.stack[selected]), dtype=np.float64)

    def layer_counts(self) -> list[int]:
        return np.bincount(self.word_length, minlength=self.radius + 1).tolist()


def generate_ball(
    presentation: GroupPresentation,
    radius: int,
    cap: int = DEFAULT_BALL_CAP,
    quantum: float = DEFAULT_TOLERANCES.float_key,
) -> BallIndex:
    """Enumerate the ball of word length ≤ ``radius``.

    Example:
        >>> [len(generate_ball(builtin_presentation("sanov"), r)) for r in range(4)]
        [1, 5, 17, 53]
        >>> ball = generate_ball(builtin_presentation("sanov"), 2)
        >>> ball.word(5), int(ball.word_length[5])
        ('a a', 2)
    """
    if radius < 0:
        raise ConfigurationError(f"ball radius must be >= 0, got {radius}")
    generators, names = presentation.symmetric_generators()
    exact = presentation.arithmetic is Arithmetic.EXACT_INTEGER
    n = presentation.n
    count = generators.shape[0]
    gen_int = np.rint(generators).astype(np.int64)
    gen_bound = int(np.abs(gen_int).max())

    identity = np.eye(n)
    float_blocks: list[FloatArray] = [identity[np.newaxis]]
    int_blocks: list[IntArray] = [np.eye(n, dtype=np.int64)[np.newaxis]]
    lengths: list[IntArray] = [np.zeros(1, dtype=np.int64)]
    parents: list[IntArray] = [np.full(1, -1, dtype=np.int64)]
    last: list[IntArray] = [np.full(1, -1, dtype=np.int64)]
    key_of_identity = _row_keys(int_blocks[0] if exact else rounded_entries(identity[np.newaxis], quantum))[0]
    lookup: dict[bytes, int] = {key_of_identity: 0}

    frontier = np.zeros(1, dtype=np.int64)
    frontier_float = identity[np.newaxis]
    frontier_int = int_blocks[0]
    size = 1
    for level in range(1, radius + 1):
        if frontier.size == 0:
            break
        if exact:
            if int(np.abs(frontier_int).max()) * gen_bound * n >= 2**62:
                raise IntegerOverflowError(f"exact entries overflow int64 at word length {level}")
            candidates_int = (frontier_int[:, np.newaxis] @ gen_int[np.newaxis]).reshape(-1, n, n)
            if int(np.abs(candidates_int).max()) > SAFE_INTEGER:
                raise IntegerOverflowError(f"exact entries exceed 2^53 at word length {level}")
            candidates = candidates_int.astype(np.float64)
            keys = _row_keys(candidates_int)
        else:
            candidates = (frontier_float[:, np.newaxis] @ generators[np.newaxis]).reshape(-1, n, n)
            candidates_int = rounded_entries(candidates, quantum)
            keys = _row_keys(candidates_int)

        fresh: list[int] = []
        hits: list[tuple[int, int]] = []
        for position, key in enumerate(keys):
            existing = lookup.get(key)
            if existing is None:
                lookup[key] = size + len(fresh)
                fresh.append(position)
            elif not exact:
                hits.append((position, existing))
        if hits:
            _audit_collisions(candidates, hits, float_blocks, fresh, candidates_int, quantum)

        size += len(fresh)
        if size > cap:
            raise BallOverflowError(cap=cap, radius=radius)
        chosen = np.asarray(fresh, dtype=np.int64)
        new_float = candidates[chosen]
        float_blocks.append(new_float)
        int_blocks.append(candidates_int[chosen])
        lengths.append(np.full(chosen.size, level, dtype=np.int64))
        parents.append(np.repeat(frontier, count)[chosen])
        last.append(np.tile(np.arange(count, dtype=np.int64), frontier.size)[chosen])
        frontier = np.arange(size - chosen.size, size, dtype=np.int64)
        frontier_float = new_float
        frontier_int = candidates_int[chosen]

    if size > _CAP_WARNING_FRACTION * cap:
        logger.warning("ball close to element cap", extra={"size": size, "cap": cap, "radius": radius})
    stack = np.concatenate(float_blocks)
    stack.setflags(write=False)
    integer_stack = np.concatenate(int_blocks) if exact else None
    ball = BallIndex(
        presentation=presentation,
        radius=radius,
        stack=stack,
        integer_stack=integer_stack,
        word_length=np.concatenate(lengths),
        parent=np.concatenate(parents),
        last_generator=np.concatenate(last),
        generator_names=names,
        lookup=lookup,
        quantum=quantum,
    )
    logger.debug(
        "ball generated",
        extra={"group": presentation.name, "radius": radius, "size": size, "layers": ball.layer_counts()},
    )
    return ball


def _audit_collisions(
    candidates: FloatArray,
    hits: list[tuple[int, int]],
    blocks: list[FloatArray],
    fresh: list[int],
    keys: IntArray,
    quantum: float,
) -> None:
    """Compare every key hit with the element it merged into, earlier layers and the current one alike."""
    known = np.concatenate(blocks)
    fresh_start = known.shape[0]
    positions = np.array([p for p, _ in hits])
    targets = np.array([t for _, t in hits])
    # targets past the stored blocks are fresh candidates of the current layer
    same_layer = targets >= fresh_start
    references = np.empty_like(candidates[positions])
    references[~same_layer] = known[targets[~same_layer]]
    if np.any(same_layer):
        references[same_layer] = candidates[np.asarray(fresh)[targets[same_layer] - fresh_start]]
    scale = np.maximum(1.0, np.abs(references).reshape(positions.size, -1).max(axis=1))
    diffs = np.abs(candidates[positions] - references).reshape(positions.size, -1).max(axis=1) / scale
    worst = int(np.argmax(diffs))
    if diffs[worst] > quantum * 1e-3:
        offending = positions[worst]
        raise KeyCollisionError(key=tuple(int(v) for v in keys[offending].ravel()), distance=float(diffs[worst]))


def ball_to_dict(ball: BallIndex, f: GroupFunction | None = None) -> dict[str, Any]:
    """Serializable layout ``{presentation, radius, elements, values}``."""
    elements = [
        {
            "index": index,
            "word": ball.word(index),
            "matrix": ball.stack[index].tolist(),
            "word_length": int(ball.word_length[index]),
        }
        for index in range(len(ball))
    ]
    payload: dict[str, Any] = {"presentation": ball.presentation.name, "radius": ball.radius, "elements": elements}
    if f is not None:
        values = f.as_complex()
        payload["values"] = [[float(v.real), float(v.imag)] for v in values]
    return payload


def ball_table_rows(ball: BallIndex, xi: XiEvaluator, f: GroupFunction | None = None) -> list[dict[str, Any]]:
    """Per-element rows (index, word, word_length, L, Ξ, value)."""
    xi_values = ball.xi_values(xi)
    values = f.as_complex() if f is not None else np.zeros(len(ball), dtype=np.complex128)
    return [
        {
            "index": index,
            "word": ball.word(index),
            "word_length": int(ball.word_length[index]),
            "length": float(ball.lengths[index]),
            "xi": float(xi_values[index]),
            "value_re": float(values[index].real),
            "value_im": float(values[index].imag),
        }
        for index in range(len(ball))
    ]


# ---------------------------------------------------------------------------
# Functions on Γ
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """Finitely supported function on Γ stored densely over a ball.

    ``values`` is complex, or an ``object`` array of :class:`fractions.Fraction`
    for exact rational arithmetic.

    Example:
        >>> ball = generate_ball(builtin_presentation("sanov"), 1)
        >>> f = GroupFunction.delta(ball, 2)
        >>> f.support_indices().tolist(), f.support_radius
        ([2], 1)
    """

    ball: BallIndex
    values: npt.NDArray[Any]

    def __post_init__(self) -> None:
        raw = np.asarray(self.values)
        values = raw.copy() if raw.dtype == object else np.array(raw, dtype=np.complex128, copy=True)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.shape != (len(self.ball),):
            raise DimensionMismatchError(expected=len(self.ball), actual=int(values.size))
        if values.dtype != object and not np.all(np.isfinite(values)):
            raise NonFiniteError("group function values")

    @classmethod
    def zeros(cls, ball: BallIndex, exact: bool = False) -> GroupFunction:
        if exact:
            return cls(ball, np.array([Fraction(0)] * len(ball), dtype=object))
        return cls(ball, np.zeros(len(ball), dtype=np.complex128))

    @classmethod
    def delta(cls, ball: BallIndex, index: int, value: complex = 1.0) -> GroupFunction:
        values = np.zeros(len(ball), dtype=np.complex128)
        values[index] = value
        return cls(ball, values)

    @classmethod
    def from_mapping(cls, ball: BallIndex, mapping: Mapping[int, complex | Fraction]) -> GroupFunction:
        if any(isinstance(v, Fraction) for v in mapping.values()):
            rational: npt.NDArray[Any] = np.array([Fraction(0)] * len(ball), dtype=object)
            for index, value in mapping.items():
                rational[index] = _as_fraction(value)
            return cls(ball, rational)
        values = np.zeros(len(ball), dtype=np.complex128)
        for index, value in mapping.items():
            values[index] = complex(value)
        return cls(ball, values)

    @classmethod
    def indicator(cls, ball: BallIndex, indices: npt.ArrayLike) -> GroupFunction:
        values = np.zeros(len(ball), dtype=np.complex128)
        values[np.asarray(indices, dtype=np.int64)] = 1.0
        return cls(ball, values)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def as_complex(self) -> npt.NDArray[np.complex128]:
        if self.exact:
            return np.array([complex(v) for v in self.values], dtype=np.complex128)
        return self.values

    def support_indices(self) -> IntArray:
        if self.exact:
            return np.flatnonzero(np.array([v != 0 for v in self.values], dtype=bool))
        return np.flatnonzero(self.values != 0)

    @property
    def support_radius(self) -> int:
        support = self.support_indices()
        return int(self.ball.word_length[support].max()) if support.size else 0

    @property
    def is_nonnegative(self) -> bool:
        values = self.as_complex()
        return bool(np.all(values.imag == 0) and np.all(values.real >= 0))

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.as_complex())))

    def value_at(self, index: int) -> complex:
        return complex(self.values[index])

    def scaled(self, factor: complex) -> GroupFunction:
        return GroupFunction(self.ball, self.values * factor)

    def __add__(self, other: GroupFunction) -> GroupFunction:
        left, right = _aligned(self, other)
        return GroupFunction(left.ball, left.values + right.values)

    def __sub__(self, other: GroupFunction) -> GroupFunction:
        left, right = _aligned(self, other)
        return GroupFunction(left.ball, left.values - right.values)

    def absolute(self) -> GroupFunction:
        return GroupFunction(self.ball, np.abs(self.as_complex()))

    def moved_to(self, target: BallIndex) -> GroupFunction:
        """The same function stored over another ball of the same presentation."""
        if target is self.ball:
            return self
        support = self.support_indices()
        if target.extends(self.ball):
            indices = support
        else:
            indices = target.indices_of(self.ball.stack[support])
            if np.any(indices < 0):
                raise TargetTooSmallError(needed=self.support_radius, available=target.radius)
        values = np.array([Fraction(0)] * len(target), dtype=object) if self.exact else np.zeros(len(target), np.complex128)
        values[indices] = self.values[support]
        return GroupFunction(target, values)


def _aligned(a: GroupFunction, b: GroupFunction) -> tuple[GroupFunction, GroupFunction]:
    if a.ball is b.ball:
        return a, b
    if a.ball.extends(b.ball):
        return a, b.moved_to(a.ball)
    return a.moved_to(b.ball), b


def convolve(f1: GroupFunction, f2: GroupFunction, target: BallIndex) -> GroupFunction:
    """(f₁∗f₂)(g) = Σ_γ f₁(γ) f₂(γ⁻¹g), stored over ``target``.

    Every product γ·h of support elements lands at word length ≤ the sum of
    the support radii, so the target radius must reach that sum. Exact
    rational values are accumulated exactly.

    Example:
        >>> ball = generate_ball(builtin_presentation("sanov"), 2)
        >>> a = GroupFunction.delta(ball, 1)
        >>> product = convolve(a, a, ball)
        >>> ball.word(int(product.support_indices()[0]))
        'a a'
    """
    exact_values = f1.exact or f2.exact
    table = product_table(f1, f2, target)
    if table.left.size == 0:
        return GroupFunction.zeros(target, exact=exact_values)
    if exact_values:
        accumulator: npt.NDArray[Any] = np.array([Fraction(0)] * len(target), dtype=object)
        for i, j, k in zip(table.left.tolist(), table.right.tolist(), table.product.tolist(), strict=True):
            accumulator[k] += _as_fraction(f1.values[i]) * _as_fraction(f2.values[j])
        return GroupFunction(target, accumulator)
    weights = f1.as_complex()[table.left] * f2.as_complex()[table.right]
    real = np.bincount(table.product, weights=weights.real, minlength=len(target))
    imag = np.bincount(table.product, weights=weights.imag, minlength=len(target))
    return GroupFunction(target, real + 1j * imag)


@dataclass(frozen=True, slots=True)
class ProductTable:
    """Support pairs (γ, h) of two functions and the target index of γ·h."""

    left: IntArray
    right: IntArray
    product: IntArray


def product_table(f1: GroupFunction, f2: GroupFunction, target: BallIndex) -> ProductTable:
    """Index every product γ·h with γ ∈ supp f₁ and h ∈ supp f₂ inside ``target``."""
    needed = f1.support_radius + f2.support_radius
    if target.radius < needed:
        raise TargetTooSmallError(needed=needed, available=target.radius)
    s1 = f1.support_indices()
    s2 = f2.support_indices()
    if s1.size == 0 or s2.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return ProductTable(empty, empty, empty)
    left = _support_stack(f1.ball, s1)
    right = _support_stack(f2.ball, s2)
    rows_per_chunk = max(1, _PRODUCT_CHUNK // s2.size)
    blocks: list[IntArray] = []
    for start in range(0, s1.size, rows_per_chunk):
        block = left[start : start + rows_per_chunk]
        products = (block[:, np.newaxis] @ right[np.newaxis]).reshape(-1, target.n, target.n)
        indices = target.indices_of(products)
        if np.any(indices < 0):
            raise TargetTooSmallError(needed=needed, available=target.radius)
        blocks.append(indices)
    return ProductTable(left=np.repeat(s1, s2.size), right=np.tile(s2, s1.size), product=np.concatenate(blocks))


def _support_stack(ball: BallIndex, indices: IntArray) -> npt.NDArray[Any]:
    if ball.integer_stack is not None:
        return ball.integer_stack[indices]
    return ball.stack[indices]


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    number = complex(value)
    if number.imag != 0:
        raise ConfigurationError("exact convolution needs real rational values")
    return Fraction(number.real)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def sobolev_norm(f: GroupFunction, d: float, ctx: ParallelContext = SEQUENTIAL) -> float:
    """(Σ |f(γ)|²(1+L(γ))^{2d})^{1/2}.

    Example:
        >>> ball = generate_ball(builtin_presentation("sanov"), 1)
        >>> sobolev_norm(GroupFunction.delta(ball, 0), 3.0)
        1.0
    """
    support = f.support_indices()
    if support.size == 0:
        return 0.0
    magnitudes = np.abs(f.as_complex()[support])
    terms = magnitudes**2 * (1.0 + f.ball.lengths[support]) ** (2.0 * d)
    return math.sqrt(ctx.reduce_sum(terms))


def phi_weights(ball: BallIndex, d: float, xi: XiEvaluator) -> FloatArray:
    """φ_d(γ) = Ξ(γ)(1+L(γ))^{−d} over the ball."""
    return ball.xi_values(xi) * (1.0 + ball.lengths) ** (-d)


def schwartz_norm(f: GroupFunction, d: float, xi: XiEvaluator) -> float:
    """max over the support of |f(γ)|(1+L(γ))^d / Ξ(γ).

    Example:
        >>> from hcsbench.domain.boundary_rep import HorocyclicXi
        >>> ball = generate_ball(builtin_presentation("sanov"), 1)
        >>> round(schwartz_norm(GroupFunction.delta(ball, 0), 2.0, HorocyclicXi()), 12)
        1.0
    """
    support = f.support_indices()
    if support.size == 0:
        return 0.0
    xi_values = f.ball.xi_on(xi, support)
    if np.any(xi_values <= 0):
        offender = int(support[int(np.argmin(xi_values))])
        raise NonFiniteError(f"Ξ underflows to 0 at {f.ball.word(offender)!r}")
    magnitudes = np.abs(f.as_complex()[support])
    return float(np.max(magnitudes * (1.0 + f.ball.lengths[support]) ** d / xi_values))


def sobolev_schwartz_gap(f: GroupFunction, d: float, d_prime: float, xi: XiEvaluator) -> float:
    """RHS − LHS of ‖f‖_{H^d} ≤ ‖f‖_{S^{d′}}·(Σ_ball Ξ²(1+L)^{2d−2d′})^{1/2}."""
    ball = f.ball
    weights = ball.xi_values(xi) ** 2 * (1.0 + ball.lengths) ** (2.0 * d - 2.0 * d_prime)
    rhs = schwartz_norm(f, d_prime, xi) * math.sqrt(float(np.sum(weights)))
    return rhs - sobolev_norm(f, d)


@dataclass(frozen=True, slots=True)
class SummabilityProfile:
    """Partial sums of Σ Ξ²(γ)(1+L(γ))^{−2d} over balls of radius 1..R."""

    d: float
    partial_sums: tuple[float, ...]

    @property
    def increments(self) -> tuple[float, ...]:
        sums = self.partial_sums
        return tuple(b - a for a, b in zip(sums, sums[1:], strict=False))

    @property
    def increment_ratios(self) -> tuple[float, ...]:
        steps = self.increments
        return tuple(b / a if a > 0 else math.inf for a, b in zip(steps, steps[1:], strict=False))


def summability_from_ball(ball: BallIndex, d: float, xi: XiEvaluator) -> SummabilityProfile:
    terms = ball.xi_values(xi) ** 2 * (1.0 + ball.lengths) ** (-2.0 * d)
    per_layer = np.bincount(ball.word_length, weights=terms, minlength=ball.radius + 1)
    return SummabilityProfile(d=d, partial_sums=tuple(np.cumsum(per_layer)[1:].tolist()))


def xi_summability_partial(
    presentation: GroupPresentation,
    d: float,
    radius: int,
    xi: XiEvaluator,
    cap: int = DEFAULT_BALL_CAP,
) -> list[float]:
    """Partial sums over balls of radius 1..``radius`` (one enumeration, prefix sums per layer)."""
    if radius < 1:
        raise ConfigurationError(f"summability radius must be >= 1, got {radius}")
    ball = generate_ball(presentation, radius, cap=cap)
    return list(summability_from_ball(ball, d, xi).partial_sums)


__all__ = [
    "BUILTIN_GROUPS",
    "DEFAULT_BALL_CAP",
    "SAFE_INTEGER",
    "BallIndex",
    "GroupFunction",
    "GroupPresentation",
    "SummabilityProfile",
    "ball_table_rows",
    "ball_to_dict",
    "builtin_presentation",
    "convolve",
    "generate_ball",
    "ProductTable",
    "phi_weights",
    "product_table",
    "rounded_entries",
    "schwartz_norm",
    "sobolev_norm",
    "sobolev_schwartz_gap",
    "summability_from_ball",
    "xi_summability_partial",
]
