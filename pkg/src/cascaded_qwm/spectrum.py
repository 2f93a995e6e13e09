"""Harmonic amplitudes of the probe coherence and their CSV/JSON export."""

from __future__ import annotations

import dataclasses
import io
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Spectrum", "format_float"]


def format_float(x: float) -> str:
    return "%.17g" % x


@dataclass
class Spectrum:
    """Coefficients of ``exp(i n delta_omega t)`` in ``<sigma_-^pr>``.

    ``method`` is one of ``"exact"``, ``"neumann:N"`` or ``"ode"``;
    ``samples`` is the number of phase (or time) samples behind the numbers.
    """

    amplitudes: dict
    method: str
    params: object = None
    samples: int | None = None
    extra: dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> complex:
        return self.amplitudes.get(n, 0j)

    @property
    def harmonics(self):
        return sorted(self.amplitudes)

    def abs(self, n: int) -> float:
        return abs(self[n])

    def subset(self, harmonics) -> "Spectrum":
        return dataclasses.replace(
            self, amplitudes={n: self[n] for n in harmonics}
        )

    def metadata(self) -> dict:
        meta = {"method": self.method, "samples": self.samples}
        p = self.params
        if p is not None:
            meta["params"] = {
                "gamma_s": p.gamma_s,
                "gamma_pr": p.gamma_pr,
                "mu": p.mu,
                "omega_s_re": p.omega_s_amp.real,
                "omega_s_im": p.omega_s_amp.imag,
                "omega_pr_re": p.omega_pr_amp.real,
                "omega_pr_im": p.omega_pr_amp.imag,
                "delta_omega": p.delta_omega,
                "r": p.r,
                "alpha": p.alpha,
            }
        meta.update(self.extra)
        return meta

    def rows(self):
        for n in self.harmonics:
            a = complex(self.amplitudes[n])
            yield n, a.real, a.imag, abs(a)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,re,im,abs\n")
        for n, re, im, ab in self.rows():
            buf.write(f"{n},{format_float(re)},{format_float(im)},{format_float(ab)}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "metadata": self.metadata(),
            "columns": ["n", "re", "im", "abs"],
            "rows": [list(row) for row in self.rows()],
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_csv(cls, text: str, method: str = "csv") -> "Spectrum":
        lines = text.strip().splitlines()
        if lines[0].strip() != "n,re,im,abs":
            raise ValueError("not a spectrum table")
        amps = {}
        for line in lines[1:]:
            n, re, im, _ = line.split(",")
            amps[int(n)] = complex(float(re), float(im))
        return cls(amps, method)

    def as_array(self, harmonics) -> np.ndarray:
        return np.array([self[n] for n in harmonics], dtype=complex)
