"""JSON and CSV readers/writers for signals, reports, regions and studies.

JSON floats are written with Python's shortest round-trip repr; CSV floats
with 17 significant digits. Both are lossless in double precision.
"""

import csv
import io
import json
import math

from lib.ambiguity import intensity_gap
from lib.errors import FormatError
from lib.signals import DEFAULT_SAMPLES, Autocorrelation, Signal

# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------


def _load_json(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: invalid JSON ({exc})") from exc


def _numbers(values, field, source):
    if not isinstance(values, list) or not values:
        raise FormatError(f"{source}: '{field}' must be a non-empty list of numbers")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise FormatError(f"{source}: '{field}' holds a non-number {v!r}")
        if not math.isfinite(v):
            raise FormatError(f"{source}: '{field}' holds a non-finite value")
    return tuple(float(v) for v in values)


def parse_input(text, source="<input>", tol=None):
    """Read a Signal or an Autocorrelation document.

    Accepted shapes: {"offset", "values"} (signal), {"coeffs"}
    (autocorrelation a[0..N-1]) and {"intensity"} (equispaced samples of
    |X(w)|^2 on [0, 2pi)).
    """
    doc = _load_json(text, source)
    if not isinstance(doc, dict):
        raise FormatError(f"{source}: expected a JSON object")
    try:
        if "values" in doc:
            offset = doc.get("offset", 0)
            if isinstance(offset, bool) or not isinstance(offset, int):
                raise FormatError(f"{source}: 'offset' must be an integer")
            return Signal(offset, _numbers(doc["values"], "values", source))
        if "coeffs" in doc:
            return Autocorrelation(_numbers(doc["coeffs"], "coeffs", source))
        if "intensity" in doc:
            samples = _numbers(doc["intensity"], "intensity", source)
            return Autocorrelation.from_intensity_samples(samples, tol)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from exc
    raise FormatError(
        f"{source}: expected one of the keys 'values', 'coeffs' or 'intensity'"
    )


def parse_zero_set(text, source="<input>"):
    """Read [{"re": .., "im": ..}, ...] into a list of complex numbers."""
    doc = _load_json(text, source)
    if isinstance(doc, dict) and "zeros" in doc:
        doc = doc["zeros"]
    if not isinstance(doc, list):
        raise FormatError(f"{source}: expected a list of {{'re', 'im'}} objects")
    zeros = []
    for entry in doc:
        if not isinstance(entry, dict) or "re" not in entry:
            raise FormatError(f"{source}: zero entry {entry!r} lacks 're'")
        re, im = _numbers([entry["re"], entry.get("im", 0.0)], "re/im", source)
        zeros.append(complex(re, im))
    return zeros


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------


def dump_json(doc):
    """Indented JSON text with a trailing newline."""
    return json.dumps(doc, indent=2) + "\n"


def signal_to_json(x):
    return {"offset": x.offset, "values": list(x.values)}


def autocorrelation_to_json(a):
    return {"coeffs": list(a.coeffs)}


def zeros_to_json(zeros):
    return [{"re": complex(z).real, "im": complex(z).imag} for z in zeros]


def _unit_to_json(unit):
    return {
        "kind": unit.kind,
        "flippable": unit.flippable,
        "gammas": zeros_to_json(p.gamma for p in unit.pairs),
        "mirrors": zeros_to_json(p.mirror for p in unit.pairs),
    }


def analysis_to_json(x, a, zeros, units):
    """Summary emitted by ``analyze``: autocorrelation, zeros and flip units."""
    flippable = sum(1 for u in units if u.flippable)
    return {
        "signal": signal_to_json(x),
        "autocorrelation": autocorrelation_to_json(a),
        "zeros": zeros_to_json(zeros),
        "units": [_unit_to_json(u) for u in units],
        "flippable_units": flippable,
        "max_classes": 2**flippable,
    }


def report_to_json(report, nonneg_only=False, a=None, samples=DEFAULT_SAMPLES):
    """AmbiguityReport document; ``a`` adds each solution's intensity gap."""
    solutions = report.nonnegative_solutions() if nonneg_only else report.solutions
    entries = []
    for s in solutions:
        entry = {
            "values": list(s.signal.values),
            "zeros": zeros_to_json(s.chosen_zeros),
            "nonnegative": s.nonnegative,
            "min_component": s.min_component,
            "flip_mask": s.flip_mask,
        }
        if s.sign_ambiguous:
            entry["sign_ambiguous"] = True
        if a is not None:
            entry["intensity_gap"] = intensity_gap(s.signal, a, samples)
        entries.append(entry)
    return {
        "total_classes": report.total_classes,
        "nonnegative_classes": report.nonnegative_classes,
        "upper_bound": report.upper_bound,
        "solutions": entries,
        "warnings": list(report.warnings),
    }


def region_to_json(region, verdicts=None):
    doc = {
        "halfplane_re_max": region.halfplane_bound,
        "excluded_discs": [
            {"center_re": d.center, "radius": d.radius} for d in region.discs
        ],
    }
    if verdicts is not None:
        doc["beta_verdicts"] = verdicts
    return doc


# ---------------------------------------------------------------------------
# CSV documents
# ---------------------------------------------------------------------------


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return value


def _csv_text(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def solutions_csv(report, nonneg_only=False):
    solutions = report.nonnegative_solutions() if nonneg_only else report.solutions
    width = max((s.signal.support_length for s in report.solutions), default=0)
    header = ["class", "nonnegative", "min_component"]
    header += [f"x{k}" for k in range(width)]
    rows = (
        [i, s.nonnegative, s.min_component, *s.signal.values]
        for i, s in enumerate(solutions)
    )
    return _csv_text(header, rows)


def raster_csv(rows):
    return _csv_text(["re", "im", "feasible"], rows)


def perturb_csv(study):
    header = [
        "trial",
        "max_root_displacement",
        "total_classes",
        "nonnegative_classes",
        "error",
    ]
    rows = (
        [
            r.index,
            r.max_root_displacement,
            r.total_classes,
            r.nonnegative_classes,
            r.error,
        ]
        for r in study.results
    )
    return _csv_text(header, rows)


def plot_data_csv(zeros, units, circle):
    """Point sets for external plotting: zeros, pair members, unit circle."""
    rows = [("zero", z.real, z.imag) for z in map(complex, zeros)]
    for unit in units:
        for pair in unit.pairs:
            rows.append(("gamma", pair.gamma.real, pair.gamma.imag))
            rows.append(("mirror", pair.mirror.real, pair.mirror.imag))
    rows.extend(("unit-circle", float(p.real), float(p.imag)) for p in circle)
    return _csv_text(["set", "re", "im"], rows)


def parse_raster(spec):
    """Parse "re_min,re_max,im_min,im_max,step" into five floats."""
    parts = spec.split(",")
    if len(parts) != 5:
        raise FormatError(
            f"--raster expects re_min,re_max,im_min,im_max,step; got {spec!r}"
        )
    try:
        re_min, re_max, im_min, im_max, step = (float(p) for p in parts)
    except ValueError as exc:
        raise FormatError(f"--raster holds a non-number: {spec!r}") from exc
    if step <= 0 or re_min > re_max or im_min > im_max:
        raise FormatError(f"--raster window is empty or step is not positive: {spec!r}")
    return re_min, re_max, im_min, im_max, step
