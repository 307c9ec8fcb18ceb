"""Comparison reports: JSON (lossless floats) and an aligned text table."""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .._io import atomic_write_text
from ..zeta import DEFAULT, PrecisionConfig
from ..zeta.zeros import ZeroList, snap_endpoint
from .constants import MainTermConstants
from .direct import discrete_sum, m0_direct, shu_partial_sums
from .mainterm import m0_main_term, shu_main_term, theorem1_main_term
from .params import MeanValueParams
from .quadrature import sr_quadrature

TARGETS = ("value", "real")


def rel_error(direct: float, main: float) -> float:
    return abs(direct - main) / max(abs(main), 1e-30)


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


@dataclass(frozen=True)
class ComparisonRow:
    """One sweep point. With ``target == "real"`` only Re(direct) is compared."""

    params: dict
    direct_value: complex
    main_term: float
    target: str = "value"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")

    @property
    def compared(self) -> float | complex:
        return self.direct_value.real if self.target == "real" else self.direct_value

    @property
    def abs_error(self) -> float:
        return abs(self.compared - self.main_term)

    @property
    def rel_error(self) -> float:
        return rel_error(self.compared, self.main_term)

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "direct_value": _cplx(self.direct_value),
            "main_term": self.main_term,
            "target": self.target,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "extra": {k: (_cplx(v) if isinstance(v, complex) else v) for k, v in self.extra.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComparisonRow":
        extra = {}
        for k, v in d.get("extra", {}).items():
            extra[k] = complex(*v) if isinstance(v, list) and len(v) == 2 else v
        return cls(d["params"], complex(*d["direct_value"]), d["main_term"], d.get("target", "value"), extra)


@dataclass
class ComparisonReport:
    rows: list[ComparisonRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def rel_errors(self) -> list[float]:
        return [r.rel_error for r in self.rows]

    # Python's float repr is the shortest string that round-trips, so JSON
    # output is exact (at most 17 significant digits).
    def dumps(self) -> str:
        return json.dumps({"metadata": self.metadata, "sweep": [r.to_dict() for r in self.rows]}, indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ComparisonReport":
        d = json.loads(text)
        return cls([ComparisonRow.from_dict(r) for r in d["sweep"]], d.get("metadata", {}))

    def table(self) -> str:
        keys = []
        for r in self.rows:
            for k in r.params:
                if k not in keys:
                    keys.append(k)
        head = keys + ["Re direct", "Im direct", "main term", "abs error", "rel error"]
        body = []
        for r in self.rows:
            z = complex(r.direct_value)
            body.append(
                [_fmt(r.params.get(k, "")) for k in keys]
                + [f"{z.real:.10g}", f"{z.imag:.4g}", f"{r.main_term:.10g}", f"{r.abs_error:.4g}", f"{r.rel_error:.4g}"]
            )
        widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(head)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
        lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> tuple[Path, Path]:
        """Write ``<path>`` (JSON) and ``<path>.txt`` (table)."""
        path = Path(path)
        txt = path.with_name(path.name + ".txt")
        atomic_write_text(path, self.dumps())
        atomic_write_text(txt, self.table())
        return path, txt

    @classmethod
    def load(cls, path: str | Path) -> "ComparisonReport":
        return cls.loads(Path(path).read_text())


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def trend_inversions(values) -> int:
    """Number of increases along a sequence that should be non-increasing."""
    return sum(1 for a, b in zip(values, values[1:]) if b > a)


def zero_cache_id(zeros: ZeroList) -> dict:
    digest = hashlib.sha256(zeros.dumps().encode()).hexdigest()[:16]
    return {"T": zeros.T, "count": len(zeros), "abs_error": zeros.abs_error, "sha256_16": digest}


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _base_meta(constants: MainTermConstants | None) -> dict:
    meta = {"created": _now()}
    if constants is not None:
        meta["constants"] = constants.to_dict()
    return meta


def shu_sum_check(h: int, k: int, x_values, constants: MainTermConstants, form: str = "residue") -> ComparisonReport:
    """Brute-force shifted sums against their main term across an x sweep."""
    xs = list(x_values)
    brute = shu_partial_sums(h, k, xs)
    rows = [
        ComparisonRow({"h": h, "k": k, "x": float(x)}, complex(b), shu_main_term(h, k, x, constants, form))
        for x, b in zip(xs, brute)
    ]
    meta = _base_meta(constants)
    meta["form"] = form
    return ComparisonReport(rows, meta)


def m0_report(sweep: list[MeanValueParams], constants: MainTermConstants, cfg: PrecisionConfig = DEFAULT) -> ComparisonReport:
    rows = [
        ComparisonRow(p.describe(), complex(m0_direct(p, cfg)), m0_main_term(p, constants))
        for p in sweep
    ]
    return ComparisonReport(rows, _base_meta(constants))


def end_to_end_report(
    sweep: list[MeanValueParams],
    constants: MainTermConstants,
    zeros: ZeroList,
    cfg: PrecisionConfig = DEFAULT,
    identity: bool = True,
) -> ComparisonReport:
    """Re(discrete_sum) against theorem1_main_term at each (snapped) sweep point.

    With ``identity`` the mid-level check sr_quadrature - conj(m0_direct) is
    also evaluated; its gap to the discrete sum is reported, never asserted.
    """
    rows = []
    for p in sweep:
        Ts = snap_endpoint(p.T, zeros)
        q = p if Ts == p.T else p.with_T(Ts)
        d = discrete_sum(q, zeros, cfg)
        main = theorem1_main_term(q, constants)
        extra = {"T_raw": p.T, "imag": d.imag, "modulus": abs(d)}
        if identity:
            sr = sr_quadrature(q, cfg)
            m0 = m0_direct(q, cfg)
            mid = sr - complex(m0).conjugate()
            extra.update(sr_quadrature=sr, m0_direct=m0, identity_rel_gap=abs(d - mid) / max(abs(d), 1e-30))
        rows.append(ComparisonRow(q.describe(), d, main, "real", extra))
    meta = _base_meta(constants)
    meta.update(
        zero_cache=zero_cache_id(zeros),
        first_sum_form="x_u y_{nu}",
        first_sum_alternative="x_u x_{nu} (agrees only when x == y; not used)",
    )
    return ComparisonReport(rows, meta)
