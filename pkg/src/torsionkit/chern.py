"""Integer Chern-matrix calculus on the product threefold.

A Chern character is stored as a 2x3 integer matrix ``((a00, a01, a02),
(a10, a11, a12))`` where ``a00`` is the rank and ``a10`` the fiber degree.
Python ints are used throughout, so there is no overflow; the batch helpers
work on numpy ``int64`` arrays and refuse entries that could overflow.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

N_DIM = 3  # dimension of the threefold


class ChernError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ChernMatrix:
    row0: tuple[int, int, int]
    row1: tuple[int, int, int]

    def __post_init__(self):
        for row in (self.row0, self.row1):
            if len(row) != 3 or not all(isinstance(a, int) and not isinstance(a, bool) for a in row):
                raise ChernError(f"a Chern matrix needs two rows of three integers, got {row!r}")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "ChernMatrix":
        if len(rows) != 2:
            raise ChernError(f"expected 2 rows, got {len(rows)}")
        return cls(tuple(int(a) for a in rows[0]), tuple(int(a) for a in rows[1]))

    @classmethod
    def parse(cls, text: str) -> "ChernMatrix":
        """Parse the row-major text form ``[[a00,a01,a02],[a10,a11,a12]]``."""
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ChernError(f"malformed matrix {text!r}: {exc.msg}") from None
        if (not isinstance(rows, list) or len(rows) != 2
                or not all(isinstance(r, list) and len(r) == 3 for r in rows)
                or not all(isinstance(a, int) and not isinstance(a, bool) for r in rows for a in r)):
            raise ChernError(f"malformed matrix {text!r}: need [[int,int,int],[int,int,int]]")
        return cls.of(rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.row0, self.row1)[i][j]

    def rows(self) -> list[list[int]]:
        return [list(self.row0), list(self.row1)]

    def entries(self) -> Iterator[tuple[int, int, int]]:
        for i, row in enumerate((self.row0, self.row1)):
            for j, a in enumerate(row):
                yield i, j, a

    def is_zero(self) -> bool:
        return not any(self.row0) and not any(self.row1)

    def __str__(self) -> str:
        return json.dumps(self.rows(), separators=(",", ":"))


ZERO = ChernMatrix((0, 0, 0), (0, 0, 0))


def _neg(row):
    return tuple(-a for a in row)


def apply_phi(m: ChernMatrix) -> ChernMatrix:
    """Chern character of the Fourier-Mukai image: swap rows, negate the new second row."""
    return ChernMatrix(m.row1, _neg(m.row0))


def apply_shift(m: ChernMatrix) -> ChernMatrix:
    return ChernMatrix(_neg(m.row0), _neg(m.row1))


def apply_phi_hat(m: ChernMatrix) -> ChernMatrix:
    # Within the row-swap/negate family this is the only action with
    # apply_phi(apply_phi_hat(m)) == apply_shift(m) for every m.
    return ChernMatrix(m.row1, _neg(m.row0))


def _require_nonzero(m: ChernMatrix) -> None:
    if m.is_zero():
        raise ChernError("codim undefined for the zero class")


def codim(m: ChernMatrix) -> int:
    _require_nonzero(m)
    return min(i + j for i, j, a in m.entries() if a != 0)


def dim_sheaf(m: ChernMatrix) -> int:
    return N_DIM - codim(m)


def dpi_upper(m: ChernMatrix) -> int:
    """Dimension of the image of the support in the base, read off row 1.

    A vanishing second row returns 0 (empty-max convention); see
    :func:`dpi_upper_note` for callers that need to know.
    """
    _require_nonzero(m)
    return max((2 - j for j, a in enumerate(m.row1) if a != 0), default=0)


def dpi_upper_note(m: ChernMatrix) -> str | None:
    if not any(m.row1):
        return "empty-max convention: row 1 vanishes, dpi taken as 0"
    return None


def row_dpi(row: Sequence[int]) -> int:
    return max((2 - j for j, a in enumerate(row) if a != 0), default=0)


def leading_entries(m: ChernMatrix) -> list[int]:
    c = codim(m)
    return [a for i, j, a in m.entries() if i + j == c]


def is_sheaf_admissible(m: ChernMatrix, *, strict_leading: bool = True) -> bool:
    """Numerical admissibility of ``m`` as the class of a nonzero sheaf.

    Requires a positive leading antidiagonal sum; with ``strict_leading``
    (the default) each leading entry must also be nonnegative.
    """
    if m.is_zero():
        return False
    lead = leading_entries(m)
    if sum(lead) <= 0:
        return False
    return not strict_leading or all(a >= 0 for a in lead)


def wit_necessary(m: ChernMatrix, i: int, *, strict_leading: bool = True) -> bool:
    """Necessary numerical condition for ``m`` to be the class of a WIT_i sheaf."""
    _require_nonzero(m)
    if i not in (0, 1):
        raise ChernError(f"WIT index must be 0 or 1, got {i}")
    image = apply_phi(m)
    if i == 1:
        image = apply_shift(image)
    return image.is_zero() or is_sheaf_admissible(image, strict_leading=strict_leading)


def transform_map(i: int) -> dict[tuple[int, int], tuple[int, tuple[int, int]]]:
    """Entry map of ``shift^i . phi``: target position -> (sign, source position).

    Computed by pushing a matrix of distinct position labels through the
    actual operations, so it cannot drift from :func:`apply_phi`.
    """
    label = ChernMatrix((1, 2, 3), (4, 5, 6))
    image = apply_phi(label)
    if i == 1:
        image = apply_shift(image)
    out = {}
    for r, c, v in image.entries():
        src = abs(v) - 1
        out[(r, c)] = (1 if v > 0 else -1, (src // 3, src % 3))
    return out


# ---------------------------------------------------------------------------
# batch (numpy) versions used by the exhaustive search drivers

_INT64_SAFE = 2**62


def box(bound: int, first: int | None = None) -> np.ndarray:
    """All matrices with entries in [-bound, bound], shape (N, 2, 3), lexicographic.

    With ``first`` given, only the slab with ``a00 == first``.
    """
    if bound < 0:
        raise ChernError("bound must be nonnegative")
    if bound >= _INT64_SAFE:
        raise OverflowError("bound too large for int64 batch search")
    vals = np.arange(-bound, bound + 1, dtype=np.int64)
    lead = vals if first is None else np.array([first], dtype=np.int64)
    grids = np.meshgrid(lead, vals, vals, vals, vals, vals, indexing="ij")
    flat = np.stack([g.reshape(-1) for g in grids], axis=1)
    return flat.reshape(-1, 2, 3)


def phi_batch(ms: np.ndarray) -> np.ndarray:
    return np.stack([ms[:, 1, :], -ms[:, 0, :]], axis=1)


def shift_batch(ms: np.ndarray) -> np.ndarray:
    return -ms


# i+j for each entry, flattened row-major
_ANTIDIAG = np.array([0, 1, 2, 1, 2, 3])


def codim_batch(ms: np.ndarray) -> np.ndarray:
    """Codimension per matrix; -1 marks the zero matrix."""
    flat = ms.reshape(len(ms), 6)
    ad = _ANTIDIAG
    big = np.where(flat != 0, ad[None, :], 99)
    c = big.min(axis=1)
    return np.where(c == 99, -1, c)


def admissible_batch(ms: np.ndarray, *, strict_leading: bool = True) -> np.ndarray:
    flat = ms.reshape(len(ms), 6)
    c = codim_batch(ms)
    lead = _ANTIDIAG[None, :] == c[:, None]
    total = np.where(lead, flat, 0).sum(axis=1)
    ok = (c >= 0) & (total > 0)
    if strict_leading:
        ok &= ~np.any(lead & (flat < 0), axis=1)
    return ok


def dpi_upper_batch(ms: np.ndarray) -> np.ndarray:
    row1 = ms[:, 1, :]
    out = np.zeros(len(ms), dtype=np.int64)
    for j in (2, 1, 0):
        out = np.where(row1[:, j] != 0, 2 - j, out)
    return out


def wit_necessary_batch(ms: np.ndarray, i: int, *, strict_leading: bool = True) -> np.ndarray:
    image = phi_batch(ms)
    if i == 1:
        image = shift_batch(image)
    zero = ~np.any(image.reshape(len(ms), 6) != 0, axis=1)
    return zero | admissible_batch(image, strict_leading=strict_leading)


def as_matrices(ms: np.ndarray) -> Iterable[ChernMatrix]:
    for m in ms.tolist():
        yield ChernMatrix.of(m)
