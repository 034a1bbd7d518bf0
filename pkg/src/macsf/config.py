"""Flat ``key = value`` run configuration.

Syntax: one assignment per line, ``#`` starts a comment, arrays are written
``[v1, v2]``.  Recognised keys::

    N cfl t_max area_stop k_cap record_every
    initial (circle|ellipse|csv) rho0 a b csv_path
    connection (explicit|projective|semi_symmetric) T111 ... T222 U
    normalized_mode (posthoc|direct) tau_max

``Tkij`` is the tensor component ``<T(e_i, e_j), e_k>``.
"""

from dataclasses import dataclass
import csv
import math
import os

import numpy as np

from .contorsion import COMPONENT_KEYS, ContorsionTensor, projective, semi_symmetric
from .curve import SupportGrid, ellipse_support, grid_angles
from .errors import ParseError, ValidationError
from .flow import FlowConfig

INITIAL_KINDS = ("circle", "ellipse", "csv")
CONNECTIONS = ("explicit", "projective", "semi_symmetric")
NORMALIZED_MODES = ("posthoc", "direct")
DEFAULT_N = 256

_INT_KEYS = {"N", "record_every"}
_FLOAT_KEYS = {"cfl", "t_max", "area_stop", "k_cap", "rho0", "a", "b", "tau_max", *COMPONENT_KEYS}
_STR_KEYS = {"initial", "csv_path", "connection", "normalized_mode"}
_ARRAY_KEYS = {"U"}
KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _ARRAY_KEYS


@dataclass(frozen=True)
class RunConfig:
    initial: str
    n: int | None = None
    cfl: float = 0.2
    t_max: float = 10.0
    area_stop: float | None = None
    k_cap: float = 1e4
    record_every: int = 50
    rho0: float | None = None
    a: float | None = None
    b: float | None = None
    csv_path: str | None = None
    connection: str = "explicit"
    components: tuple = (0.0,) * 8
    U: tuple | None = None
    normalized_mode: str = "posthoc"
    tau_max: float = 5.0

    @property
    def grid_size(self):
        return DEFAULT_N if self.n is None else self.n

    def tensor(self):
        if self.connection == "projective":
            return projective(self.U)
        if self.connection == "semi_symmetric":
            return semi_symmetric(self.U)
        return ContorsionTensor(self.components)

    def flow_config(self, **overrides):
        kwargs = dict(cfl=self.cfl, t_max=self.t_max, area_stop=self.area_stop,
                      k_cap=self.k_cap, record_every=self.record_every)
        kwargs.update(overrides)
        return FlowConfig(**kwargs)

    def initial_support(self, base_dir=None):
        """Initial support grid described by the config."""
        if self.initial == "circle":
            return SupportGrid.constant(self.rho0, self.grid_size)
        if self.initial == "ellipse":
            return ellipse_support(self.a, self.b, self.grid_size)
        path = self.csv_path
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        grid = load_support_csv(path)
        if self.n is not None and grid.n != self.n:
            raise ValidationError("N", f"csv grid has {grid.n} points but N = {self.n}")
        return grid


def load_support_csv(path):
    """Read a support grid from CSV: columns ``theta,S`` with header, or a single ``S`` column."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise ValidationError("csv_path", f"cannot read {path}: {exc.strerror}") from exc
    if not rows:
        raise ValidationError("csv_path", f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if "S" in header:
        col = header.index("S")
        theta_col = header.index("theta") if "theta" in header else None
        rows = rows[1:]
    else:
        col = len(header) - 1
        theta_col = 0 if len(header) > 1 else None
    try:
        values = np.array([float(r[col]) for r in rows])
        thetas = None if theta_col is None else np.array([float(r[theta_col]) for r in rows])
    except (ValueError, IndexError) as exc:
        raise ValidationError("csv_path", f"malformed support CSV {path}: {exc}") from exc
    n = values.size
    if n < 16 or n % 2:
        raise ValidationError("csv_path", f"support CSV needs an even number >= 16 of rows, got {n}")
    if thetas is not None and not np.allclose(thetas, grid_angles(n), atol=1e-9):
        raise ValidationError("csv_path", "theta column is not the uniform grid 2*pi*i/N")
    try:
        return SupportGrid(values)
    except ValueError as exc:
        raise ValidationError("csv_path", str(exc)) from exc


def _parse_number(text, key, lineno, integer=False):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{key}: expected a number, got {text!r}", lineno) from None
    if integer:
        if not value.is_integer():
            raise ValidationError(key, f"must be an integer, got {text}")
        return int(value)
    return value


def _parse_array(text, key, lineno):
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"{key}: expected an array like [v1, v2], got {text!r}", lineno)
    body = text[1:-1].strip()
    if not body:
        return ()
    return tuple(_parse_number(x.strip(), key, lineno) for x in body.split(","))


def _tokenize(text):
    raw = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"expected 'key = value', got {stripped!r}", lineno)
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key:
            raise ParseError("missing key", lineno)
        if key not in KNOWN_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in raw:
            raise ParseError(f"duplicate key {key!r} (first on line {lines[key]})", lineno)
        if not value:
            raise ParseError(f"{key}: missing value", lineno)
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        raw[key] = value
        lines[key] = lineno
    return raw, lines


def parse_config(text):
    """Parse and validate configuration text into a :class:`RunConfig`."""
    raw, lines = _tokenize(text)
    vals = {}
    for key, value in raw.items():
        lineno = lines[key]
        if key in _INT_KEYS:
            vals[key] = _parse_number(value, key, lineno, integer=True)
        elif key in _FLOAT_KEYS:
            vals[key] = _parse_number(value, key, lineno)
        elif key in _ARRAY_KEYS:
            vals[key] = _parse_array(value, key, lineno)
        else:
            vals[key] = value
    return _build(vals)


def _positive(vals, key):
    if key in vals:
        v = vals[key]
        if not (math.isfinite(v) and v > 0):
            raise ValidationError(key, f"must be positive and finite, got {v}")


def _build(vals):
    if "initial" not in vals:
        raise ValidationError("initial", "required (circle, ellipse or csv)")
    initial = vals["initial"]
    if initial not in INITIAL_KINDS:
        raise ValidationError("initial", f"must be one of {', '.join(INITIAL_KINDS)}, got {initial!r}")

    if "N" in vals:
        n = vals["N"]
        if n < 16 or n % 2:
            raise ValidationError("N", f"must be even and >= 16, got {n}")
    for key in ("cfl", "t_max", "area_stop", "k_cap", "tau_max", "rho0", "a", "b"):
        _positive(vals, key)
    if "record_every" in vals and vals["record_every"] < 1:
        raise ValidationError("record_every", "must be >= 1")
    for key in COMPONENT_KEYS:
        if key in vals and not math.isfinite(vals[key]):
            raise ValidationError(key, "must be finite")

    shape_keys = {"circle": {"rho0"}, "ellipse": {"a", "b"}, "csv": {"csv_path"}}
    for kind, keys in shape_keys.items():
        if kind != initial:
            for key in sorted(keys & vals.keys()):
                raise ValidationError(key, f"not allowed with initial = {initial}")
    if initial == "ellipse":
        for key in ("a", "b"):
            if key not in vals:
                raise ValidationError(key, "required for initial = ellipse")
    if initial == "csv" and "csv_path" not in vals:
        raise ValidationError("csv_path", "required for initial = csv")

    connection = vals.get("connection", "explicit")
    if connection not in CONNECTIONS:
        raise ValidationError("connection", f"must be one of {', '.join(CONNECTIONS)}, got {connection!r}")
    given_components = [k for k in COMPONENT_KEYS if k in vals]
    if connection == "explicit":
        if "U" in vals:
            raise ValidationError("U", "only used with projective or semi_symmetric connections")
        U = None
    else:
        if given_components:
            raise ValidationError(given_components[0], f"not allowed with connection = {connection}")
        if "U" not in vals:
            raise ValidationError("U", f"required for connection = {connection}")
        U = vals["U"]
        if len(U) != 2 or not all(math.isfinite(x) for x in U):
            raise ValidationError("U", f"must be a finite 2-vector, got {list(U)}")

    mode = vals.get("normalized_mode", "posthoc")
    if mode not in NORMALIZED_MODES:
        raise ValidationError("normalized_mode", f"must be posthoc or direct, got {mode!r}")

    return RunConfig(
        initial=initial,
        n=vals.get("N"),
        cfl=vals.get("cfl", 0.2),
        t_max=vals.get("t_max", 10.0),
        area_stop=vals.get("area_stop"),
        k_cap=vals.get("k_cap", 1e4),
        record_every=vals.get("record_every", 50),
        rho0=vals.get("rho0", 1.0) if initial == "circle" else None,
        a=vals.get("a"),
        b=vals.get("b"),
        csv_path=vals.get("csv_path"),
        connection=connection,
        components=tuple(float(vals.get(k, 0.0)) for k in COMPONENT_KEYS),
        U=U,
        normalized_mode=mode,
        tau_max=vals.get("tau_max", 5.0),
    )


def serialize_config(cfg):
    """Inverse of :func:`parse_config` for validated configs."""
    out = [f"initial = {cfg.initial}"]
    if cfg.initial == "circle":
        out.append(f"rho0 = {cfg.rho0!r}")
    elif cfg.initial == "ellipse":
        out += [f"a = {cfg.a!r}", f"b = {cfg.b!r}"]
    else:
        out.append(f"csv_path = {cfg.csv_path}")
    if cfg.n is not None:
        out.append(f"N = {cfg.n}")
    out += [
        f"cfl = {cfg.cfl!r}",
        f"t_max = {cfg.t_max!r}",
        f"k_cap = {cfg.k_cap!r}",
        f"record_every = {cfg.record_every}",
    ]
    if cfg.area_stop is not None:
        out.append(f"area_stop = {cfg.area_stop!r}")
    out.append(f"connection = {cfg.connection}")
    if cfg.connection == "explicit":
        out += [f"{k} = {v!r}" for k, v in zip(COMPONENT_KEYS, cfg.components)]
    else:
        out.append(f"U = [{cfg.U[0]!r}, {cfg.U[1]!r}]")
    out += [f"normalized_mode = {cfg.normalized_mode}", f"tau_max = {cfg.tau_max!r}"]
    return "\n".join(out) + "\n"

