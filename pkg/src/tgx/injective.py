"""Exact injective building blocks.

Two ways of turning structured values into collision-free codes live here:

* :func:`intern` assigns consecutive integer ids to structurally distinct
  values (a constructive injection, valid within one process run);
* :func:`injective_multiset_sum` maps bounded multisets of
  ``(feature, edge_feature, timestamp)`` triples to exact rationals by giving
  every distinct element its own block of base-``b`` digits.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable

__all__ = [
    "AggParams",
    "CanonicalId",
    "InjectivityReport",
    "enumerate_pair",
    "exhaustive_injectivity",
    "unpair",
    "injective_multiset_sum",
    "intern",
    "registry_size",
    "time_decay_term",
]


@dataclass(frozen=True, order=True)
class CanonicalId:
    """Interned identifier. Never equal to a plain ``int``."""

    id: int

    def __repr__(self) -> str:
        return f"#{self.id}"


class _Registry:
    def __init__(self) -> None:
        self._ids: dict[Hashable, CanonicalId] = {}
        self._lock = threading.Lock()

    def intern(self, value: Hashable) -> CanonicalId:
        found = self._ids.get(value)
        if found is not None:
            return found
        with self._lock:
            # first writer wins
            found = self._ids.get(value)
            if found is None:
                found = CanonicalId(len(self._ids))
                self._ids[value] = found
            return found

    def __len__(self) -> int:
        return len(self._ids)


_REGISTRY = _Registry()


def intern(value: Hashable) -> CanonicalId:
    """Return the process-wide id of ``value``, assigning a fresh one on first sight."""
    return _REGISTRY.intern(value)


def registry_size() -> int:
    return len(_REGISTRY)


def enumerate_pair(a: int, b: int) -> int:
    """Cantor pairing ``(a+b)(a+b+1)/2 + b``, a bijection N x N -> N."""
    if a < 0 or b < 0:
        raise ValueError("pairing is defined on non-negative integers")
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(z: int) -> tuple[int, int]:
    """Inverse of :func:`enumerate_pair`."""
    if z < 0:
        raise ValueError("z must be non-negative")
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


@dataclass(frozen=True)
class AggParams:
    """Bounds for :func:`injective_multiset_sum`.

    ``N`` bounds the multiset size (``|M| < N``), ``t_max`` the timestamps.
    ``beta`` digits per timestamp slot and ``k`` digits per element block are
    derived as ``ceil(log_base N)`` and ``beta * (t_max + 1)``.
    """

    N: int
    t_max: int
    base: int = 10
    beta: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self) -> None:
        if self.N < 1 or self.t_max < 0 or self.base < 2:
            raise ValueError("AggParams need N >= 1, t_max >= 0, base >= 2")
        object.__setattr__(self, "beta", max(1, _ceil_log(self.N, self.base)))
        object.__setattr__(self, "k", self.beta * (self.t_max + 1))


def _ceil_log(n: int, base: int) -> int:
    # exact integer ceil(log_base n)
    p, power = 0, 1
    while power < n:
        power *= base
        p += 1
    return p


def injective_multiset_sum(
    M: Iterable[tuple[int, int, int]],
    p: AggParams,
    index: Callable[[int, int], int] = enumerate_pair,
) -> Fraction:
    """Sum ``base**(-k*psi(x, e)) * base**(-beta*t)`` over the multiset ``M``.

    ``index`` is the enumeration ``psi`` of (feature, edge-feature) pairs; Cantor
    pairing by default. Any injective enumeration keeps the sum injective.
    """
    items = list(M)
    if len(items) >= p.N:
        raise ValueError(f"multiset of size {len(items)} violates |M| < N={p.N}")
    exps: dict[int, int] = {}
    for x, e, t in items:
        if not 0 <= t <= p.t_max:
            raise ValueError(f"timestamp {t} outside [0, {p.t_max}]")
        e_ = p.k * index(x, e) + p.beta * t
        exps[e_] = exps.get(e_, 0) + 1
    if not exps:
        return Fraction(0)
    # common denominator base**max_exp keeps this a single big-int build
    top = max(exps)
    num = sum(c * p.base ** (top - e_) for e_, c in exps.items())
    return Fraction(num, p.base**top)


def time_decay_term(dt: int, alpha: int | Fraction, beta: int | Fraction) -> Fraction:
    """Exact ``alpha ** (-beta * dt)``.

    Rational ``beta = num/den`` is accepted only when ``alpha`` is a perfect
    ``den``-th power, so the result stays rational.
    """
    if dt < 0:
        raise ValueError("dt must be non-negative")
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    root = _exact_root(alpha, beta.denominator)
    if root is None:
        raise ValueError(f"alpha={alpha} ** (-{beta}) is not rational")
    return root ** (-beta.numerator * dt)


def _exact_root(x: Fraction, n: int) -> Fraction | None:
    if n == 1:
        return x
    num, den = _int_root(x.numerator, n), _int_root(x.denominator, n)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(v: int, n: int) -> int | None:
    r = round(v ** (1.0 / n))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**n == v:
            return c
    return None


@dataclass(frozen=True)
class InjectivityReport:
    multisets: int
    distinct: int
    pairs: int
    params: AggParams

    @property
    def injective(self) -> bool:
        return self.multisets == self.distinct


def exhaustive_injectivity(
    features: int,
    edge_features: int,
    times: Iterable[int],
    N: int,
    base: int = 10,
) -> InjectivityReport:
    """Sum every multiset with ``|M| < N`` over the given domain and count collisions."""
    times = sorted(set(times))
    if not times:
        raise ValueError("need at least one timestamp")
    p = AggParams(N, max(times), base)
    domain = [(x, e, t) for x in range(features) for e in range(edge_features) for t in times]
    total = 0
    seen: set[Fraction] = set()
    for size in range(N):
        for m in itertools.combinations_with_replacement(domain, size):
            seen.add(injective_multiset_sum(m, p))
            total += 1
    return InjectivityReport(total, len(seen), total * (total - 1) // 2, p)
