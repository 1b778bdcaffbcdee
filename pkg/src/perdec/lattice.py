"""Finite windows of Z^d with coordinate unit shifts.

Distinct unit shifts are unrelated: a word in two of them can only revisit
a point if the exponents match exactly, so no self-relations exist and the
vanishing mixed difference alone already characterizes decomposability.
The decomposition is a telescoping induction along the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .core import (
    InternalContractViolation,
    PreconditionError,
    RangeError,
    RationalFunction,
    as_fraction,
    integer_values,
)
from .oracle import DualCertificate, linear_feasibility
from .star import StarViolation, check_star_abelian


@dataclass(frozen=True)
class ShiftVector:
    """A nonzero integer translation vector."""

    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise RangeError("shift vector needs at least one component")
        for c in comps:
            if not isinstance(c, int) or isinstance(c, bool):
                raise RangeError(f"component {c!r} is not an integer")
        if all(c == 0 for c in comps):
            raise RangeError("shift vector must be nonzero")
        object.__setattr__(self, "components", comps)


def unrelated_check(v: ShiftVector, w: ShiftVector) -> bool:
    """True iff no nonzero integer pair (p, q) satisfies p*v = q*w.

    For integer vectors that is exactly non-parallelism, decided by the
    2x2 cross minors.
    """
    a, b = v.components, w.components
    if len(a) != len(b):
        raise PreconditionError("shift vectors live in different dimensions")
    d = len(a)
    for i in range(d):
        for j in range(i + 1, d):
            if a[i] * b[j] != a[j] * b[i]:
                return True
    return False


@dataclass(frozen=True)
class LatticeWindow:
    """A rational-valued table on a box window of Z^d.

    values are row-major with the last axis fastest; every extent is at
    least 2 so each axis difference is evaluable somewhere.
    """

    dims: tuple[int, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        dims = tuple(self.dims)
        if not dims:
            raise RangeError("window needs at least one axis")
        size = 1
        for w in dims:
            if not isinstance(w, int) or isinstance(w, bool) or w < 2:
                raise RangeError(f"extent {w!r} must be an integer >= 2")
            size *= w
        values = tuple(as_fraction(v) for v in self.values)
        if len(values) != size:
            raise RangeError(
                f"expected {size} values for dims {dims}, got {len(values)}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        out = 1
        for w in self.dims:
            out *= w
        return out

    def strides(self) -> tuple[int, ...]:
        out = [1] * len(self.dims)
        for i in range(len(self.dims) - 2, -1, -1):
            out[i] = out[i + 1] * self.dims[i + 1]
        return tuple(out)

    def get(self, coords: Sequence[int]) -> Fraction:
        return self.values[self.index(coords)]

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.dims):
            raise RangeError("coordinate arity does not match dims")
        idx = 0
        for c, w, st in zip(coords, self.dims, self.strides()):
            if not 0 <= c < w:
                raise RangeError(f"coordinate {c} outside [0, {w})")
            idx += c * st
        return idx

    def coords(self, idx: int) -> tuple[int, ...]:
        out = []
        for w, st in zip(self.dims, self.strides()):
            out.append(idx // st % w)
        return tuple(out)

    def restrict(self, new_dims: Sequence[int]) -> "LatticeWindow":
        """Sub-window keeping coordinates below new_dims on every axis."""
        nd = tuple(new_dims)
        if len(nd) != len(self.dims) or any(a > b for a, b
                                            in zip(nd, self.dims)):
            raise RangeError("restriction must shrink within the window")
        sub = _Raw(nd, [Fraction(0)] * _prod(nd))
        for idx in range(sub.size):
            sub.values[idx] = self.get(sub.coords(idx))
        return LatticeWindow(nd, tuple(sub.values))


def _prod(dims: Sequence[int]) -> int:
    out = 1
    for w in dims:
        out *= w
    return out


class _Raw:
    """Mutable window scratch that tolerates extent-1 axes mid-recursion."""

    def __init__(self, dims: Sequence[int], values: List[Fraction]):
        self.dims = tuple(dims)
        self.values = values
        self.size = _prod(dims)
        st = [1] * len(dims)
        for i in range(len(dims) - 2, -1, -1):
            st[i] = st[i + 1] * dims[i + 1]
        self.strides = tuple(st)

    def coords(self, idx: int) -> tuple[int, ...]:
        return tuple(idx // st % w
                     for w, st in zip(self.dims, self.strides))

    def index(self, coords: Sequence[int]) -> int:
        return sum(c * st for c, st in zip(coords, self.strides))


def _mixed_delta_witness(raw: _Raw) -> Optional[tuple[int, ...]]:
    """First point (lexicographic) where the full mixed difference is nonzero."""
    d = len(raw.dims)
    for idx in range(raw.size):
        base = raw.coords(idx)
        if any(base[j] + 1 >= raw.dims[j] for j in range(d)):
            continue
        total = Fraction(0)
        for mask in range(1 << d):
            offset_idx = idx
            applied = 0
            for j in range(d):
                if mask >> j & 1:
                    offset_idx += raw.strides[j]
                    applied += 1
            value = raw.values[offset_idx]
            total += value if (d - applied) % 2 == 0 else -value
        if total != 0:
            return base
    return None


def mixed_delta_witness(f: LatticeWindow) -> Optional[tuple[int, ...]]:
    """First point where the d-fold mixed forward difference is nonzero,
    or None when it vanishes wherever evaluable."""
    raw = _Raw(f.dims, list(f.values))
    return _mixed_delta_witness(raw)


def lattice_mixed_delta_zero(f: LatticeWindow) -> bool:
    """True iff the d-fold mixed forward difference vanishes wherever it
    is evaluable (all coordinates at least one away from the upper edge)."""
    return mixed_delta_witness(f) is None


def _axis_delta(raw: _Raw, axis: int) -> _Raw:
    """Forward difference along one axis; the window shrinks there by one."""
    dims = list(raw.dims)
    dims[axis] -= 1
    out = _Raw(dims, [Fraction(0)] * _prod(dims))
    for idx in range(out.size):
        coords = out.coords(idx)
        here = raw.index(coords)
        out.values[idx] = raw.values[here + raw.strides[axis]] - raw.values[here]
    return out


def _axis_constant_violation(raw: _Raw, axis: int) -> Optional[tuple[int, ...]]:
    for idx in range(raw.size):
        coords = raw.coords(idx)
        if coords[axis] + 1 >= raw.dims[axis]:
            continue
        if raw.values[idx + raw.strides[axis]] != raw.values[idx]:
            return coords
    return None


def _lift(part: _Raw, axis: int, new_extent: int, base: int) -> _Raw:
    """Cumulative sum along `axis` from the hyperplane coordinate = base.

    The result has the given extent on that axis, vanishes on the base
    hyperplane, and its forward axis difference reproduces `part`.
    """
    dims = list(part.dims)
    dims[axis] = new_extent
    out = _Raw(dims, [Fraction(0)] * _prod(dims))
    for idx in range(out.size):
        coords = list(out.coords(idx))
        c = coords[axis]
        acc = Fraction(0)
        if c > base:
            for i in range(base, c):
                coords[axis] = i
                acc += part.values[part.index(coords)]
        elif c < base:
            for i in range(c, base):
                coords[axis] = i
                acc -= part.values[part.index(coords)]
        out.values[idx] = acc
    return out


def _decompose_axes(raw: _Raw, axes: Sequence[int], base: int) -> List[_Raw]:
    """Split raw into one part per axis in `axes`, each constant along its
    axis; assumes the mixed difference over `axes` vanishes."""
    if len(axes) == 1:
        return [_Raw(raw.dims, list(raw.values))]
    last = axes[-1]
    diff = _axis_delta(raw, last)
    sub_parts = _decompose_axes(diff, axes[:-1], base)
    base_eff = min(base, raw.dims[last] - 1)
    parts = [_lift(p, last, raw.dims[last], base_eff) for p in sub_parts]
    residue = _Raw(raw.dims, list(raw.values))
    for p in parts:
        for i in range(residue.size):
            residue.values[i] -= p.values[i]
    parts.append(residue)
    return parts


def lattice_decompose(f: LatticeWindow,
                      base: int = 0) -> Tuple[LatticeWindow, ...]:
    """Split f into d parts, part j constant along axis j, summing to f.

    Requires the mixed difference of f to vanish (PreconditionError names
    the violating point otherwise).  The construction differences along
    the last axis, recursively decomposes, and lifts back by cumulative
    summation from the hyperplane at coordinate `base` (clamped to the
    current extent), so different bases exercise the gauge freedom.
    """
    if base < 0:
        raise PreconditionError(f"base hyperplane must be >= 0, got {base}")
    raw = _Raw(f.dims, list(f.values))
    witness = _mixed_delta_witness(raw)
    if witness is not None:
        raise PreconditionError(
            f"mixed difference is nonzero at {witness}")
    d = len(f.dims)
    parts_raw = _decompose_axes(raw, list(range(d)), base)
    parts = tuple(LatticeWindow(f.dims, tuple(p.values)) for p in parts_raw)
    total = [Fraction(0)] * f.size
    for p in parts_raw:
        for i in range(f.size):
            total[i] += p.values[i]
    if total != list(f.values):
        raise InternalContractViolation("parts do not sum to the input")
    for j, p in enumerate(parts_raw):
        if _axis_constant_violation(p, j) is not None:
            raise InternalContractViolation(
                f"part {j} varies along its own axis")
    return parts


def lattice_oracle_decompose(
    f: LatticeWindow,
) -> Union[Tuple[LatticeWindow, ...], DualCertificate]:
    """Window-level linear feasibility, independent of the construction.

    Unknowns are one value per (axis, complement slice); feasibility gives
    parts directly, infeasibility an exact dual functional on the window.
    """
    d = len(f.dims)
    strides = f.strides()
    # unknown ids: for axis j, one per combination of the other coordinates
    offsets = [0]
    slice_sizes = []
    for j in range(d):
        slice_sizes.append(f.size // f.dims[j])
        offsets.append(offsets[-1] + slice_sizes[-1])
    ncols = offsets[-1]

    def slice_id(j: int, coords: Sequence[int]) -> int:
        sid = 0
        for i, (c, w) in enumerate(zip(coords, f.dims)):
            if i == j:
                continue
            sid = sid * w + c
        return offsets[j] + sid

    rows = []
    for idx in range(f.size):
        coords = f.coords(idx)
        row = [0] * ncols
        for j in range(d):
            row[slice_id(j, coords)] += 1
        rows.append(row)
    func = RationalFunction(f.values)
    rhs, denom = integer_values(func)
    solution, dual = linear_feasibility(rows, rhs, ncols)
    if dual is not None:
        certificate = DualCertificate(RationalFunction(
            tuple(Fraction(w) for w in dual)))
        if certificate.pair(func) == 0:
            raise InternalContractViolation("window dual pairs to zero with f")
        return certificate
    parts = []
    for j in range(d):
        values = tuple(solution[slice_id(j, f.coords(idx))] / denom
                       for idx in range(f.size))
        parts.append(LatticeWindow(f.dims, values))
    return tuple(parts)


@dataclass(frozen=True)
class ZWindowDemo:
    """The canonical negative example: f(x) = x against two unit shifts."""

    length: int
    shifts: tuple[int, int]
    mixed_delta_zero: bool
    violation: Optional[StarViolation]


def z_window_counterexample(length: int = 10) -> ZWindowDemo:
    """f(x) = x on a window of Z with shifts (1, 1).

    The two shifts agree, so the double difference f(x+2) - 2 f(x+1) + f(x)
    vanishes identically; still no split into two shift-invariant parts
    exists, and the arithmetic checker returns the blocking instance
    (both indices in one block, exponent 1).
    """
    if length < 3:
        raise PreconditionError("window must have length at least 3")
    f = RationalFunction(tuple(Fraction(x) for x in range(length)))
    shifts = (1, 1)
    mixed_ok = True
    for z in range(length - 2):
        if f[z + 2] - 2 * f[z + 1] + f[z] != 0:
            mixed_ok = False
            break
    violation = check_star_abelian(None, shifts, f)
    return ZWindowDemo(length, shifts, mixed_ok, violation)
