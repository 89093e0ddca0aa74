"""JSON and CSV serialization for factored specs and reports.

JSON documents round-trip field-exactly: floats are emitted with the
shortest representation that parses back to the identical double, and
spec dictionaries are written with sorted keys so identical inputs
produce identical bytes.  Output files are written to a temporary and
renamed into place, so readers never observe a half-written file.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .errors import SpecFormatError
from .hardy import (
    AtomicMeasure,
    BoundaryLogModulus,
    DiscFactorization,
    ZeroMultiset,
)
from .harness import VerificationReport
from .solutions import (
    FlipSelection,
    OddSingularPerturbation,
    OuterModifier,
    SolutionRequest,
)
from .strip import StripFunction, StripSideData


def disc_to_dict(spec: DiscFactorization) -> dict:
    return {
        "phase": spec.phase,
        "zeros": [{"re": a.real, "im": a.imag, "mult": m}
                  for a, m in spec.zeros.entries],
        "atoms": [{"theta": t, "mass": m} for t, m in spec.singular.atoms],
        "outer": {"M": spec.outer.grid_size,
                  "samples": [float(s) for s in spec.outer.samples]},
    }


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise SpecFormatError(f"{where} is missing the {key!r} field")
    return d[key]


def disc_from_dict(d: dict) -> DiscFactorization:
    if not isinstance(d, dict):
        raise SpecFormatError("disc spec must be a JSON object")
    phase = float(_need(d, "phase", "disc spec"))
    zeros = []
    for i, z in enumerate(_need(d, "zeros", "disc spec")):
        zeros.append((complex(float(_need(z, "re", f"zeros[{i}]")),
                              float(_need(z, "im", f"zeros[{i}]"))),
                      int(z.get("mult", 1))))
    atoms = []
    for i, a in enumerate(_need(d, "atoms", "disc spec")):
        atoms.append((float(_need(a, "theta", f"atoms[{i}]")),
                      float(_need(a, "mass", f"atoms[{i}]"))))
    outer = _need(d, "outer", "disc spec")
    samples = np.asarray(_need(outer, "samples", "outer"), dtype=float)
    declared = int(_need(outer, "M", "outer"))
    if declared != samples.size:
        raise SpecFormatError(
            f"outer.M = {declared} disagrees with {samples.size} samples")
    try:
        return DiscFactorization(phase, ZeroMultiset(tuple(zeros)),
                                 AtomicMeasure(tuple(atoms)),
                                 BoundaryLogModulus(samples))
    except ValueError as exc:
        raise SpecFormatError(f"invalid disc spec: {exc}") from exc


def strip_to_dict(f: StripFunction) -> dict:
    return {
        "disc": disc_to_dict(f.disc),
        "corner_plus": f.corner_plus,
        "corner_minus": f.corner_minus,
        "scale": f.scale,
        "eta": f.eta,
    }


def strip_from_dict(d: dict) -> StripFunction:
    if not isinstance(d, dict):
        raise SpecFormatError("strip spec must be a JSON object")
    disc = disc_from_dict(_need(d, "disc", "strip spec"))
    try:
        return StripFunction(disc,
                             float(d.get("corner_plus", 0.0)),
                             float(d.get("corner_minus", 0.0)),
                             float(d.get("scale", 1.0)),
                             float(d.get("eta", 0.0)))
    except ValueError as exc:
        raise SpecFormatError(f"invalid strip spec: {exc}") from exc


def spec_to_dict(spec) -> dict:
    if isinstance(spec, StripFunction):
        return strip_to_dict(spec)
    if isinstance(spec, DiscFactorization):
        return disc_to_dict(spec)
    raise TypeError(f"not a serializable spec: {type(spec)!r}")


def spec_from_dict(d: dict):
    if isinstance(d, dict) and "disc" in d:
        return strip_from_dict(d)
    return disc_from_dict(d)


def strip_side_from_dict(d: dict) -> StripSideData:
    """Parse factored strip-side input (the lift format)."""
    if not isinstance(d, dict):
        raise SpecFormatError("strip-side data must be a JSON object")
    zeros = tuple(
        (complex(float(_need(z, "re", f"zeros[{i}]")),
                 float(_need(z, "im", f"zeros[{i}]"))), int(z.get("mult", 1)))
        for i, z in enumerate(d.get("zeros", ())))
    atoms = []
    for i, a in enumerate(d.get("boundary_atoms", ())):
        side = _need(a, "side", f"boundary_atoms[{i}]")
        if side in ("+", "+1", 1):
            side = 1
        elif side in ("-", "-1", -1):
            side = -1
        else:
            raise SpecFormatError(f"boundary_atoms[{i}].side must be '+' or '-'")
        atoms.append((float(_need(a, "x", f"boundary_atoms[{i}]")), side,
                      float(_need(a, "mass", f"boundary_atoms[{i}]"))))
    corners = d.get("corners", (0.0, 0.0))
    if len(corners) != 2:
        raise SpecFormatError("corners must be a [plus, minus] pair")
    top = tuple((float(x), float(v)) for x, v in d.get("outer_top", ()))
    bottom = tuple((float(x), float(v)) for x, v in d.get("outer_bottom", ()))
    return StripSideData(zeros, tuple(atoms), (float(corners[0]), float(corners[1])),
                         top, bottom)


def modifier_to_dict(u: OuterModifier) -> dict:
    if u.kind == "exponential":
        return {"kind": "exponential", "eta": u.eta}
    if u.kind == "star_quotient":
        return {"kind": "star_quotient"}
    return {"kind": "odd_boundary", "samples": [float(s) for s in u.samples]}


def modifier_from_dict(d: dict) -> OuterModifier:
    kind = _need(d, "kind", "outer modifier")
    if kind == "exponential":
        return OuterModifier.exponential(float(_need(d, "eta", "exponential modifier")))
    if kind == "star_quotient":
        return OuterModifier.star_quotient()
    if kind == "odd_boundary":
        return OuterModifier.odd_boundary(
            np.asarray(_need(d, "samples", "odd modifier"), dtype=float))
    raise SpecFormatError(f"unknown outer modifier kind {kind!r}")


def request_from_dict(d: dict) -> SolutionRequest:
    """Parse a solution request.

    ``flip`` lists kept zero entries, either bare indices or
    [index, kept_count] pairs; a missing flip keeps everything.
    """
    if not isinstance(d, dict):
        raise SpecFormatError("solution request must be a JSON object")
    flip = None
    if "flip" in d and d["flip"] is not None:
        kept = []
        for item in d["flip"]:
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise SpecFormatError("flip pairs must be [index, kept_count]")
                kept.append((int(item[0]), int(item[1])))
            else:
                kept.append((int(item), None))
        flip = FlipSelection(tuple(kept))
    sigma = None
    if d.get("sigma_plus"):
        atoms = tuple((float(_need(a, "theta", "sigma_plus")),
                       float(_need(a, "mass", "sigma_plus")))
                      for a in d["sigma_plus"])
        sigma = OddSingularPerturbation(AtomicMeasure(atoms))
    outer = modifier_from_dict(d["outer"]) if d.get("outer") else None
    return SolutionRequest(flip=flip, sigma_plus=sigma, outer=outer,
                           phase=float(d.get("phase", 0.0)),
                           eta=float(d.get("eta", 0.0)),
                           star=bool(d.get("star", False)))


def report_to_dict(report: VerificationReport) -> dict:
    checks = []
    for c in report.checks:
        entry = {"name": c.name, "passed": c.passed, "max_err": _json_float(c.max_err),
                 "tol": c.tol}
        if c.argmax is not None:
            if isinstance(c.argmax, complex):
                entry["argmax"] = [c.argmax.real, c.argmax.imag]
            else:
                entry["argmax"] = c.argmax
        if c.note:
            entry["note"] = c.note
        checks.append(entry)
    return {"passed": report.passed, "checks": checks,
            "metadata": _jsonable(report.metadata)}


def _json_float(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return _json_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dump_json(obj: dict) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temporary file and an atomic rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_json(path: str, obj: dict) -> None:
    atomic_write_text(path, dump_json(obj))


def load_json(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecFormatError(f"{path} is not valid JSON: {exc}") from exc


def load_spec(path: str):
    return spec_from_dict(load_json(path))


def save_spec(path: str, spec) -> None:
    save_json(path, spec_to_dict(spec))


def write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    """Write aligned columns as CSV with round-trip-exact floats."""
    n = len(columns[0])
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(repr(float(col[i])) for col in columns))
    atomic_write_text(path, "\n".join(lines) + "\n")
