"""Jones polynomial values from path-model amplitudes, checked against the oracle."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Iterable

from .braid import BraidWord, format_braid_word, plat_components
from .pathmodel import apply_braid, cap_index, cap_state, enumerate_paths
from .skein import RootOfUnity, evaluate_at, jones_oracle

__all__ = [
    "JonesComparison",
    "plat_amplitude",
    "path_model_factor",
    "jones_via_path_model",
    "cross_check",
    "relative_error",
    "comparisons_to_csv",
    "is_universal_root",
]

REL_TOL = 1e-9


def is_universal_root(k: int) -> bool:
    """k = 5 or k >= 7: the non-lattice roots where the representation is universal."""
    return k == 5 or k >= 7


def plat_amplitude(b: BraidWord, k: int) -> complex:
    """``<cap| rho_k(b) |cap>``."""
    basis = enumerate_paths(b.n, k)
    out = apply_braid(b, cap_state(basis))
    return complex(out.amplitudes[cap_index(basis)])


def path_model_factor(b: BraidWord, k: int, w: int | None = None) -> complex:
    """``(-A)**(-3w) d**(n-1)``, turning the cap amplitude into V(omega)."""
    root = RootOfUnity(k)
    if w is None:
        w = plat_components(b).writhe
    sign = -1 if w % 2 else 1
    return sign * root.A_power(-3 * w) * root.d ** (b.n - 1)


def jones_via_path_model(b: BraidWord, k: int) -> complex:
    return path_model_factor(b, k) * plat_amplitude(b, k)


def relative_error(reference: complex, value: complex) -> float:
    err = abs(reference - value)
    scale = abs(reference)
    if scale == 0.0:
        return 0.0 if err == 0.0 else float("inf")
    return err / scale


@dataclass(frozen=True)
class JonesComparison:
    braid: BraidWord
    k: int
    via_oracle: complex
    via_path_model: complex
    abs_error: float
    rel_error: float
    tolerance: float = REL_TOL

    @property
    def ok(self) -> bool:
        return self.rel_error <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "braid": format_braid_word(self.braid),
            "strands": self.braid.strands,
            "k": self.k,
            "via_oracle": [self.via_oracle.real, self.via_oracle.imag],
            "via_path_model": [self.via_path_model.real, self.via_path_model.imag],
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "tolerance": self.tolerance,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def cross_check(b: BraidWord, k: int, tolerance: float = REL_TOL, budget: int | None = None) -> JonesComparison:
    oracle = evaluate_at(jones_oracle(b, budget), k)
    path = jones_via_path_model(b, k)
    return JonesComparison(
        braid=b,
        k=k,
        via_oracle=oracle,
        via_path_model=path,
        abs_error=abs(oracle - path),
        rel_error=relative_error(oracle, path),
        tolerance=tolerance,
    )


def comparisons_to_csv(rows: Iterable[JonesComparison]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "braid", "strands", "k", "oracle_re", "oracle_im", "path_re", "path_im", "abs_error", "rel_error",
    ])
    for r in rows:
        writer.writerow([
            format_braid_word(r.braid), r.braid.strands, r.k,
            repr(r.via_oracle.real), repr(r.via_oracle.imag),
            repr(r.via_path_model.real), repr(r.via_path_model.imag),
            repr(r.abs_error), repr(r.rel_error),
        ])
    return buf.getvalue()
