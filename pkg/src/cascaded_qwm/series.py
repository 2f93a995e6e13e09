"""Truncated power series in the four drive components.

A monomial ``p-**a * p+**b * s+**c * s-**d`` oscillates as
``exp(i n theta)`` with ``n = -a + b + c - d``, so every series splits
exactly into harmonic sub-series.  Coefficients are complex numbers at a
fixed numeric ``(r, alpha)``.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .model import DriveAmplitudes

__all__ = [
    "MonomialKey",
    "DriveSeries",
    "TruncationMismatch",
    "ONE",
    "P_MINUS",
    "P_PLUS",
    "S_PLUS",
    "S_MINUS",
    "UNIT_KEYS",
    "series_add",
    "series_scale_mul",
    "harmonic_component",
    "evaluate",
    "series_table",
    "linear_combination",
    "DEFAULT_TRUNCATION",
    "DEFAULT_PRUNE",
]

DEFAULT_TRUNCATION = 7
DEFAULT_PRUNE = 1e-14


class TruncationMismatch(ValueError):
    pass


class MonomialKey(NamedTuple):
    """Exponents of ``p-``, ``p+``, ``s+``, ``s-``."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0

    @property
    def total_order(self) -> int:
        return self.a + self.b + self.c + self.d

    @property
    def harmonic(self) -> int:
        return -self.a + self.b + self.c - self.d

    @property
    def source_factors(self) -> int:
        return self.c + self.d

    def shift(self, other: "MonomialKey") -> "MonomialKey":
        return MonomialKey(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def value(self, d: DriveAmplitudes) -> complex:
        return d.p_minus**self.a * d.p_plus**self.b * d.s_plus**self.c * d.s_minus**self.d

    def label(self) -> str:
        parts = []
        for name, k in zip(("p-", "p+", "s+", "s-"), self):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts) or "1"


ONE = MonomialKey()
P_MINUS = MonomialKey(1, 0, 0, 0)
P_PLUS = MonomialKey(0, 1, 0, 0)
S_PLUS = MonomialKey(0, 0, 1, 0)
S_MINUS = MonomialKey(0, 0, 0, 1)
# same order as the fields of DriveAmplitudes
UNIT_KEYS = (P_MINUS, P_PLUS, S_PLUS, S_MINUS)


def _sort_key(k: MonomialKey):
    return (k.total_order, k.a, k.b, k.c, k.d)


class DriveSeries:
    """Map from :class:`MonomialKey` to complex coefficient, truncated in total order.

    Keys above ``truncation_order`` are silently dropped and coefficients
    with magnitude below ``prune`` are removed.  Iteration is in
    ``(total_order, a, b, c, d)`` order.
    """

    __slots__ = ("_terms", "truncation_order", "prune")

    def __init__(self, terms=None, truncation_order=DEFAULT_TRUNCATION, prune=DEFAULT_PRUNE):
        self.truncation_order = int(truncation_order)
        self.prune = float(prune)
        self._terms = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for key, coeff in items:
                key = MonomialKey(*key)
                if key.total_order > self.truncation_order:
                    continue
                self._terms[key] = self._terms.get(key, 0j) + complex(coeff)
            self._prune()

    def _prune(self):
        self._terms = {
            k: v for k, v in sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))
            if abs(v) >= self.prune and abs(v) > 0
        }

    def _like(self, terms):
        return DriveSeries(terms, self.truncation_order, self.prune)

    @classmethod
    def zero(cls, truncation_order=DEFAULT_TRUNCATION, prune=DEFAULT_PRUNE):
        return cls(None, truncation_order, prune)

    def __getitem__(self, key) -> complex:
        return self._terms.get(MonomialKey(*key), 0j)

    def __contains__(self, key) -> bool:
        return MonomialKey(*key) in self._terms

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __eq__(self, other):
        if not isinstance(other, DriveSeries):
            return NotImplemented
        return (
            self.truncation_order == other.truncation_order
            and self._terms == other._terms
        )

    def __repr__(self):
        body = ", ".join(f"{k.label()}: {v:.6g}" for k, v in self._terms.items())
        return f"DriveSeries({{{body}}}, order={self.truncation_order})"

    def __add__(self, other):
        return series_add(self, other)

    def __neg__(self):
        return self.scaled(-1.0)

    def __sub__(self, other):
        return series_add(self, -other)

    def scaled(self, factor: complex) -> "DriveSeries":
        return self._like({k: v * factor for k, v in self._terms.items()})

    def order_layer(self, order: int) -> "DriveSeries":
        return self._like({k: v for k, v in self._terms.items() if k.total_order == order})

    def orders(self) -> set:
        return {k.total_order for k in self._terms}

    def allclose(self, other, rtol=1e-10, atol=1e-14) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self[k] - other[k]) <= atol + rtol * max(abs(self[k]), abs(other[k]))
            for k in keys
        )


def series_add(x: DriveSeries, y: DriveSeries) -> DriveSeries:
    if x.truncation_order != y.truncation_order:
        raise TruncationMismatch(
            f"cannot add series truncated at {x.truncation_order} and {y.truncation_order}"
        )
    terms = dict(x.items())
    for k, v in y.items():
        terms[k] = terms.get(k, 0j) + v
    return x._like(terms)


def series_scale_mul(x: DriveSeries, mono: MonomialKey, coeff: complex = 1.0) -> DriveSeries:
    """Multiply every term by ``coeff * mono``; keys beyond truncation are dropped."""
    mono = MonomialKey(*mono)
    return x._like({k.shift(mono): v * coeff for k, v in x.items()})


def harmonic_component(x: DriveSeries, n: int) -> DriveSeries:
    return x._like({k: v for k, v in x.items() if k.harmonic == n})


def evaluate(x: DriveSeries, d: DriveAmplitudes) -> complex:
    return complex(sum((v * k.value(d) for k, v in x.items()), 0j))


def linear_combination(coeffs: Iterable[complex], series: Iterable[DriveSeries]) -> DriveSeries:
    """``sum_j c_j * x_j`` over series sharing a truncation order."""
    series = list(series)
    terms = {}
    for c, s in zip(coeffs, series):
        if c == 0:
            continue
        for k, v in s.items():
            terms[k] = terms.get(k, 0j) + c * v
    return series[0]._like(terms)


def series_table(x: DriveSeries):
    """Rows ``(a, b, c, d, n, re, im)`` sorted by total order, then exponents."""
    return [
        (k.a, k.b, k.c, k.d, k.harmonic, float(np.real(v)), float(np.imag(v)))
        for k, v in x.items()
    ]
