"""Exact arithmetic on ultimately periodic subsets of the positive integers.

An ultimately periodic set is described by a finite "head" (membership of
1..T decided explicitly) and a periodic "tail" (membership of m > T decided
by m mod p).  The class of such sets is closed under union, intersection and
difference, and emptiness / finiteness / cardinality are all decidable, which
is what makes infinite edge ranges computable downstream.

Values are canonical: the period is minimal, the threshold is the least one
consistent with that period.  Canonical form makes structural equality equal
extensional equality, so UPSets can key dicts and sets.  Instances are
immutable and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

__all__ = ["UPSet", "Cardinality"]


@dataclass(frozen=True)
class Cardinality:
    """Cardinality of a UPSet: an exact count, or infinite (count is None)."""

    count: int | None

    @property
    def is_finite(self) -> bool:
        return self.count is not None

    @classmethod
    def finite(cls, n: int) -> "Cardinality":
        return cls(n)

    @classmethod
    def infinite(cls) -> "Cardinality":
        return cls(None)

    def __repr__(self) -> str:
        return "Infinite" if self.count is None else f"Finite({self.count})"


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class UPSet:
    """An ultimately periodic subset of {1, 2, 3, ...} in canonical form.

    Membership of m <= threshold is decided by ``transient``; membership of
    m > threshold by ``(m mod period) in residues``.  The set is finite iff
    ``residues`` is empty.
    """

    __slots__ = ("threshold", "transient", "period", "residues", "_hash")

    def __init__(self, threshold, transient, period, residues):
        # Raw constructor: callers must pass canonical data. Use the
        # factories below for arbitrary data.
        object.__setattr__(self, "threshold", int(threshold))
        object.__setattr__(self, "transient", frozenset(transient))
        object.__setattr__(self, "period", int(period))
        object.__setattr__(self, "residues", frozenset(residues))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("UPSet is immutable")

    # -- construction ----------------------------------------------------

    @classmethod
    def _from_arrays(cls, threshold: int, head: np.ndarray, period: int,
                     tail: np.ndarray) -> "UPSet":
        """Canonicalize (head over 1..threshold, tail over residues mod period)."""
        # minimal period: strip one prime factor at a time
        p = period
        while True:
            for q in _prime_factors(p):
                d = p // q
                if (tail.reshape(q, d) == tail[:d]).all():
                    p, tail = d, tail[:d]
                    break
            else:
                break
        # minimal threshold consistent with the tail
        t = threshold
        while t > 0 and bool(head[t - 1]) == bool(tail[t % p]):
            t -= 1
        head = head[:t]
        return cls(t, (np.flatnonzero(head) + 1).tolist(), p,
                   np.flatnonzero(tail).tolist())

    @classmethod
    def from_data(cls, threshold: int, transient, period: int, residues) -> "UPSet":
        """Build (and canonicalize) from arbitrary threshold/period data."""
        if period < 1:
            raise ValueError("period must be positive")
        if threshold < 0:
            raise ValueError("threshold must be nonnegative")
        head = np.zeros(threshold, dtype=bool)
        for m in transient:
            if not 1 <= m <= threshold:
                raise ValueError(f"transient member {m} outside 1..{threshold}")
            head[m - 1] = True
        tail = np.zeros(period, dtype=bool)
        for r in residues:
            if not 0 <= r < period:
                raise ValueError(f"residue {r} outside 0..{period - 1}")
            tail[r] = True
        return cls._from_arrays(threshold, head, period, tail)

    @classmethod
    def empty(cls) -> "UPSet":
        return cls(0, (), 1, ())

    @classmethod
    def naturals(cls) -> "UPSet":
        return cls(0, (), 1, (0,))

    @classmethod
    def from_members(cls, members) -> "UPSet":
        members = sorted(set(members))
        if members and members[0] < 1:
            raise ValueError("members must be positive integers")
        t = members[-1] if members else 0
        return cls._from_arrays(t, np.isin(np.arange(1, t + 1), members), 1,
                                np.zeros(1, dtype=bool))

    @classmethod
    def multiples(cls, d: int) -> "UPSet":
        """All positive multiples of d."""
        if d < 1:
            raise ValueError("divisor must be positive")
        return cls.from_data(0, (), d, (0,))

    @classmethod
    def at_most(cls, bound: int) -> "UPSet":
        """{1, ..., bound} (empty when bound < 1)."""
        return cls.from_members(range(1, bound + 1))

    @classmethod
    def at_least(cls, bound: int) -> "UPSet":
        """{bound, bound+1, ...}."""
        t = max(bound - 1, 0)
        return cls._from_arrays(t, np.zeros(t, dtype=bool), 1,
                                np.ones(1, dtype=bool))

    @classmethod
    def singleton(cls, m: int) -> "UPSet":
        return cls.from_members([m])

    # -- internal dense views --------------------------------------------

    def _tail_array(self, period: int) -> np.ndarray:
        tail = np.zeros(self.period, dtype=bool)
        if self.residues:
            tail[sorted(self.residues)] = True
        reps = period // self.period
        return np.tile(tail, reps) if reps > 1 else tail

    def _head_array(self, threshold: int, tail: np.ndarray) -> np.ndarray:
        """Membership of 1..threshold, with threshold >= self.threshold."""
        head = np.zeros(threshold, dtype=bool)
        if self.transient:
            head[np.asarray(sorted(self.transient)) - 1] = True
        if threshold > self.threshold and self.residues:
            ms = np.arange(self.threshold + 1, threshold + 1)
            head[ms - 1] = tail[ms % len(tail)]
        return head

    def _combine(self, other: "UPSet", op) -> "UPSet":
        p = lcm(self.period, other.period)
        t = max(self.threshold, other.threshold)
        tail_a, tail_b = self._tail_array(p), other._tail_array(p)
        head = op(self._head_array(t, tail_a), other._head_array(t, tail_b))
        return UPSet._from_arrays(t, head, p, op(tail_a, tail_b))

    # -- Boolean algebra --------------------------------------------------

    def union(self, other: "UPSet") -> "UPSet":
        return self._combine(other, np.logical_or)

    def intersect(self, other: "UPSet") -> "UPSet":
        return self._combine(other, np.logical_and)

    def difference(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a & ~b)

    def complement(self) -> "UPSet":
        """Complement within the positive integers."""
        return UPSet.naturals().difference(self)

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    # -- queries -----------------------------------------------------------

    def contains(self, m: int) -> bool:
        if m < 1:
            return False
        if m <= self.threshold:
            return m in self.transient
        return (m % self.period) in self.residues

    __contains__ = contains

    def is_empty(self) -> bool:
        return not self.transient and not self.residues

    def is_finite(self) -> bool:
        return not self.residues

    def cardinality(self) -> Cardinality:
        if self.residues:
            return Cardinality.infinite()
        return Cardinality.finite(len(self.transient))

    def enumerate(self, limit: int) -> list[int]:
        """All members <= limit, in increasing order."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        out = sorted(m for m in self.transient if m <= limit)
        if self.residues and limit > self.threshold:
            for m in range(self.threshold + 1, limit + 1):
                if (m % self.period) in self.residues:
                    out.append(m)
        return out

    def members(self) -> list[int]:
        """All members of a finite set, in increasing order."""
        if not self.is_finite():
            raise ValueError("members() on an infinite set")
        return sorted(self.transient)

    def min_element(self) -> int | None:
        if self.transient:
            return min(self.transient)
        if self.residues:
            for m in range(self.threshold + 1, self.threshold + self.period + 1):
                if (m % self.period) in self.residues:
                    return m
        return None

    # -- identity ----------------------------------------------------------

    def _key(self):
        return (self.threshold, self.transient, self.period, self.residues)

    def __eq__(self, other):
        return isinstance(other, UPSet) and self._key() == other._key()

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    # -- serialization -------------------------------------------------------

    def serialize(self) -> str:
        """Textual form used in JSON exports; round-trips exactly."""
        tr = ",".join(str(m) for m in sorted(self.transient))
        rs = ",".join(str(r) for r in sorted(self.residues))
        return (f"upset{{T={self.threshold}; transient={tr}; "
                f"p={self.period}; residues={rs}}}")

    @classmethod
    def deserialize(cls, text: str) -> "UPSet":
        import re

        m = re.fullmatch(
            r"upset\{T=(\d+); transient=([\d,]*); p=(\d+); residues=([\d,]*)\}",
            text.strip())
        if not m:
            raise ValueError(f"not a upset literal: {text!r}")
        csv = lambda s: [int(x) for x in s.split(",") if x]
        got = cls.from_data(int(m.group(1)), csv(m.group(2)),
                            int(m.group(3)), csv(m.group(4)))
        if got.serialize() != text.strip():
            raise ValueError(f"non-canonical upset literal: {text!r}")
        return got

    def __repr__(self):
        if self.is_finite():
            if len(self.transient) <= 8:
                return f"UPSet{{{', '.join(map(str, sorted(self.transient)))}}}"
            return f"UPSet(finite, {len(self.transient)} members)"
        return (f"UPSet(T={self.threshold}, p={self.period}, "
                f"{len(self.residues)} residues)")
