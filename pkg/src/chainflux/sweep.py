"""Parameter sweeps over validated chain specs, with reproducible CSV output."""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, replace

import numpy as np

from ._version import __version__
from .errors import (
    ConfigSyntaxError,
    DegenerateTransition,
    NoConvergence,
    SpecError,
    SpecInvalid,
    UnknownKey,
)
from .model import ChainSpec, chain, conventions_fingerprint, validate_spec
from .observables import steady_report
from .operators import build_chain_hamiltonian, diagonalize

AXES = ("t1", "t2", "k", "eps")
APPROACHES = ("global", "local")
OUTPUTS = ("populations", "heat_flux", "rho_diagonals")

_AXIS_LABEL = {"t1": "T1", "t2": "T2", "k": "K", "eps": "eps"}

_KEYS = frozenset({
    "n_qubits", "epsilon", "epsilons", "coupling", "couplings",
    "t1", "t2", "gamma1", "gamma2", "axis", "grid", "approaches", "outputs",
})

ROW_RESIDUAL_LIMIT = 1e-9


@dataclass(frozen=True)
class SweepRequest:
    base: ChainSpec
    axis: str
    grid: tuple
    approaches: tuple
    outputs: tuple


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    approach: str
    populations: tuple
    fluxes: tuple
    diagonals: tuple
    residual: float


@dataclass(frozen=True)
class SkippedRow:
    axis_value: float
    approach: str
    reason: str


@dataclass(frozen=True)
class SweepTable:
    request: SweepRequest
    rows: tuple
    skipped: tuple
    metadata: tuple  # ordered (key, value) pairs


def apply_axis(spec: ChainSpec, axis: str, value: float) -> ChainSpec:
    """Copy of ``spec`` with the swept parameter replaced, then revalidated."""
    if axis == "t1":
        baths = (replace(spec.baths[0], temperature=value), spec.baths[1])
        spec = replace(spec, baths=baths)
    elif axis == "t2":
        baths = (spec.baths[0], replace(spec.baths[1], temperature=value))
        spec = replace(spec, baths=baths)
    elif axis == "k":
        spec = replace(spec, couplings=(value,) * len(spec.couplings))
    elif axis == "eps":
        spec = replace(spec, epsilons=(value,) * spec.n_qubits)
    else:
        raise ValueError(f"unknown sweep axis {axis!r}")
    return validate_spec(spec)


def _parse_floats(text: str, line: int) -> list:
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ConfigSyntaxError(f"empty entry in list {text!r}", line=line)
        try:
            out.append(float(token))
        except ValueError:
            raise ConfigSyntaxError(f"not a number: {token!r}", line=line) from None
    return out


def _parse_grid(text: str, line: int) -> tuple:
    if text.startswith(("linspace:", "logspace:")):
        kind, *parts = text.split(":")
        if len(parts) != 3:
            raise ConfigSyntaxError(
                f"{kind} descriptor needs start:stop:num, got {text!r}", line=line
            )
        try:
            start, stop = float(parts[0]), float(parts[1])
            num = int(parts[2])
        except ValueError:
            raise ConfigSyntaxError(f"bad {kind} descriptor {text!r}", line=line) from None
        if num < 1:
            raise ConfigSyntaxError("grid needs at least one point", line=line)
        if kind == "linspace":
            values = np.linspace(start, stop, num)
        else:
            if start <= 0 or stop <= 0:
                raise ConfigSyntaxError("logspace endpoints must be positive", line=line)
            values = np.logspace(np.log10(start), np.log10(stop), num)
        grid = tuple(float(v) for v in values)
    else:
        grid = tuple(_parse_floats(text, line))
    if not grid:
        raise ConfigSyntaxError("grid is empty", line=line)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigSyntaxError("grid must be strictly increasing", line=line)
    return grid


def parse_config(text: str) -> SweepRequest:
    """Parse the flat ``key = value`` sweep description.

    Unknown keys and malformed lines are hard errors carrying the line
    number; the assembled spec and every grid point are validated before the
    request is returned.
    """
    values = {}
    lines = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        stripped = rawline.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigSyntaxError(f"expected 'key = value', got {rawline!r}", line=lineno)
        key, _, val = stripped.partition("=")
        key = key.strip().lower()
        val = val.strip()
        if key not in _KEYS:
            raise UnknownKey(f"unknown key {key!r}", line=lineno)
        if key in values:
            raise ConfigSyntaxError(f"duplicate key {key!r}", line=lineno)
        if not val:
            raise ConfigSyntaxError(f"empty value for {key!r}", line=lineno)
        values[key] = val
        lines[key] = lineno

    required = ["n_qubits", "t1", "t2", "axis", "grid"]
    missing = [k for k in required if k not in values]
    if "epsilon" not in values and "epsilons" not in values:
        missing.append("epsilon(s)")
    if missing:
        raise ConfigSyntaxError(f"missing required keys: {', '.join(missing)}")
    if "epsilon" in values and "epsilons" in values:
        raise ConfigSyntaxError("give either epsilon or epsilons, not both",
                                line=lines["epsilons"])
    if "coupling" in values and "couplings" in values:
        raise ConfigSyntaxError("give either coupling or couplings, not both",
                                line=lines["couplings"])

    def number(key, default=None):
        if key not in values:
            return default
        try:
            return float(values[key])
        except ValueError:
            raise ConfigSyntaxError(f"not a number: {values[key]!r}",
                                    line=lines[key]) from None

    try:
        n = int(values["n_qubits"])
    except ValueError:
        raise ConfigSyntaxError(f"not an integer: {values['n_qubits']!r}",
                                line=lines["n_qubits"]) from None

    if "epsilons" in values:
        epsilons = _parse_floats(values["epsilons"], lines["epsilons"])
    else:
        epsilons = [number("epsilon")] * n
    if "couplings" in values:
        couplings = _parse_floats(values["couplings"], lines["couplings"])
    elif "coupling" in values:
        couplings = [number("coupling")] * max(n - 1, 0)
    else:
        couplings = []
        if n > 1:
            raise ConfigSyntaxError("missing required keys: coupling(s)")

    axis = values["axis"].lower()
    if axis not in AXES:
        raise ConfigSyntaxError(f"axis must be one of {AXES}, got {values['axis']!r}",
                                line=lines["axis"])
    grid = _parse_grid(values["grid"], lines["grid"])

    approaches_text = values.get("approaches", "both").lower()
    if approaches_text == "both":
        approaches = APPROACHES
    else:
        approaches = tuple(sorted({a.strip() for a in approaches_text.split(",")}))
        bad = [a for a in approaches if a not in APPROACHES]
        if bad:
            raise ConfigSyntaxError(f"unknown approach {bad[0]!r}",
                                    line=lines.get("approaches"))
    outputs_text = values.get("outputs", "populations, heat_flux").lower()
    outputs = tuple(o.strip() for o in outputs_text.split(","))
    bad = [o for o in outputs if o not in OUTPUTS]
    if bad:
        raise ConfigSyntaxError(f"unknown output {bad[0]!r}", line=lines.get("outputs"))
    outputs = tuple(o for o in OUTPUTS if o in outputs)

    try:
        base = chain(epsilons, couplings, number("t1"), number("t2"),
                     number("gamma1", 1.0), number("gamma2", 1.0))
    except SpecError as err:
        raise SpecInvalid(str(err)) from err

    request = SweepRequest(base=base, axis=axis, grid=grid,
                           approaches=approaches, outputs=outputs)
    _validate_grid_points(request)
    return request


def _validate_grid_points(request: SweepRequest) -> None:
    for value in request.grid:
        try:
            apply_axis(request.base, request.axis, value)
        except SpecError as err:
            raise SpecInvalid(
                f"grid point {request.axis} = {value!r}: {err}"
            ) from err


def format_config(request: SweepRequest) -> str:
    """Canonical text form of a request; parses back to an equal request."""
    base = request.base

    def fmt(x):
        return repr(float(x))

    lines = [
        f"n_qubits = {base.n_qubits}",
        f"epsilons = {', '.join(fmt(e) for e in base.epsilons)}",
    ]
    if base.couplings:
        lines.append(f"couplings = {', '.join(fmt(k) for k in base.couplings)}")
    lines += [
        f"t1 = {fmt(base.baths[0].temperature)}",
        f"t2 = {fmt(base.baths[1].temperature)}",
        f"gamma1 = {fmt(base.baths[0].gamma)}",
        f"gamma2 = {fmt(base.baths[1].gamma)}",
        f"axis = {request.axis}",
        f"grid = {', '.join(fmt(v) for v in request.grid)}",
        f"approaches = {', '.join(request.approaches)}",
        f"outputs = {', '.join(request.outputs)}",
    ]
    return "\n".join(lines) + "\n"


def _row_task(args):
    request, value, approach = args
    try:
        spec = apply_axis(request.base, request.axis, value)
        report = steady_report(spec, approach)
    except DegenerateTransition as err:
        return SkippedRow(axis_value=value, approach=approach,
                          reason=f"degenerate-transition (omega = {err.omega:.3e})")
    diagonals = ()
    if "rho_diagonals" in request.outputs:
        es = diagonalize(build_chain_hamiltonian(spec))
        rho_eig = es.vectors.conj().T @ report.rho @ es.vectors
        diagonals = tuple(float(x) for x in np.real(np.diag(rho_eig)))
    return SweepRow(
        axis_value=value,
        approach=approach,
        populations=report.populations if "populations" in request.outputs else (),
        fluxes=report.fluxes if "heat_flux" in request.outputs else (),
        diagonals=diagonals,
        residual=report.residual,
    )


def run_sweep(request: SweepRequest, workers: int = 1) -> SweepTable:
    """Run the full numeric pipeline at every (grid point, approach).

    Rows come out sorted by (approach, axis value) and are identical for any
    worker count; points where the eigenbasis construction degenerates are
    recorded as annotated skips instead of aborting the run.
    """
    tasks = [(request, value, approach)
             for approach in request.approaches
             for value in request.grid]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_row_task, tasks, chunksize=16))
    else:
        results = [_row_task(t) for t in tasks]

    rows = tuple(r for r in results if isinstance(r, SweepRow))
    skipped = tuple(r for r in results if isinstance(r, SkippedRow))
    worst = max((r.residual for r in rows), default=0.0)
    if worst > ROW_RESIDUAL_LIMIT:
        raise NoConvergence(f"row residual {worst:.3e} exceeds {ROW_RESIDUAL_LIMIT:.1e}")

    metadata = (("tool", f"chainflux {__version__}"),
                ("conventions", conventions_fingerprint()))
    return SweepTable(request=request, rows=rows, skipped=skipped, metadata=metadata)


def _columns(table: SweepTable) -> list:
    request = table.request
    cols = [_AXIS_LABEL[request.axis], "approach"]
    if "populations" in request.outputs:
        cols += [f"n{q + 1}" for q in range(request.base.n_qubits)]
    if "heat_flux" in request.outputs:
        cols += ["Q1", "Q2"]
    if "rho_diagonals" in request.outputs:
        cols += [f"rho_{i + 1}" for i in range(request.base.dim)]
    cols.append("residual")
    return cols


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def emit_csv(table: SweepTable, path) -> None:
    """Write the table as CSV with '#' metadata lines, LF endings, 17 digits."""
    lines = []
    for key, value in table.metadata:
        lines.append(f"# {key}: {value}")
    for cfgline in format_config(table.request).splitlines():
        lines.append(f"# config: {cfgline}")
    for skip in table.skipped:
        lines.append(
            f"# skipped: {skip.reason} "
            f"{table.request.axis}={_format_float(skip.axis_value)} "
            f"approach={skip.approach}"
        )
    lines.append(",".join(_columns(table)))
    for row in table.rows:
        fields = [_format_float(row.axis_value), row.approach]
        fields += [_format_float(x) for x in row.populations]
        fields += [_format_float(x) for x in row.fluxes]
        fields += [_format_float(x) for x in row.diagonals]
        fields.append(_format_float(row.residual))
        lines.append(",".join(fields))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def figure_requests() -> dict:
    """Preset sweeps behind the ``figures`` command.

    All four presets fix K = 1, T2 = 0, unit rates, and sweep T1 over 200
    log-spaced points covering [0.01, 100]; the gap is 1.5 for the
    population figure and {1.001, 2.5, 10} K for the three flux panels.
    """
    grid = tuple(float(v) for v in np.logspace(-2.0, 2.0, 200))
    presets = {}
    presets["figure2"] = SweepRequest(
        base=chain([1.5, 1.5], [1.0], t1=0.01, t2=0.0),
        axis="t1", grid=grid, approaches=APPROACHES,
        outputs=("populations", "heat_flux"),
    )
    for name, eps in (("figure3a", 1.001), ("figure3b", 2.5), ("figure3c", 10.0)):
        presets[name] = SweepRequest(
            base=chain([eps, eps], [1.0], t1=0.01, t2=0.0),
            axis="t1", grid=grid, approaches=APPROACHES,
            outputs=("heat_flux",),
        )
    return presets


def read_csv_table(path):
    """Read back an emitted CSV: (metadata lines, column names, rows).

    Numeric fields come back as floats; the approach column stays a string.
    """
    metadata = []
    header = None
    rows = []
    with open(path, newline="") as fh:
        for line in fh.read().splitlines():
            if not line:
                continue
            if line.startswith("#"):
                metadata.append(line)
                continue
            if header is None:
                header = line.split(",")
                continue
            fields = line.split(",")
            parsed = tuple(field if name == "approach" else float(field)
                           for name, field in zip(header, fields))
            rows.append(parsed)
    return metadata, header, rows
