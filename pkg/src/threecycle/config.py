"""Run configuration: defaults, a key=value file, then command-line overrides."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .exact_arith import InputError

ENV_VAR = "THREECYCLE_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    window: int = 200            # zero_scan exponent window
    box: int = 0                 # elements_of_norm box; 0 means the size-based default
    k_assoc: int = 400           # associate exponent window
    mt_prime_limit: int = 10_000
    max_vertices: int = 500
    max_bits: int = 256
    scan_kmax: int = 10**6
    format: str = "json"
    workers: int = 1

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "format":
                if v not in ("json", "dot"):
                    raise InputError(f"format must be json or dot, got {v!r}")
            elif f.name == "box":
                if v < 0:
                    raise InputError("box must be non-negative")
            elif v <= 0:
                raise InputError(f"{f.name} must be positive, got {v}")
        if self.window < 20:
            raise InputError("window must be at least 20")

    def dumps(self) -> str:
        return "".join(f"{f.name}={getattr(self, f.name)}\n" for f in fields(self))

    def override(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def parse_config(text: str) -> dict:
    types = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in types:
            raise InputError(f"config line {lineno}: unknown key {key!r}")
        if types[key] in ("int", int):
            try:
                out[key] = int(val)
            except ValueError as exc:
                raise InputError(f"config line {lineno}: {key} needs an integer") from exc
        else:
            out[key] = val
    return out


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Defaults, then the file (``path`` or $THREECYCLE_CONFIG), then non-None overrides.

    Validation runs once on the merged values, so a flag can repair a bad file entry.
    """
    path = path or os.environ.get(ENV_VAR)
    values = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                values = parse_config(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
