"""Plain-text serialization of named complex matrices.

Format (one file holds any number of matrices):

    # comment lines start with '#'
    matrix <name> <rows> <cols>
    <entry> <entry> ...            one matrix row per line, row-major,
    ...                            each entry a token like 1.5-0.25j

Tokens parse with Python's complex(); no binary content anywhere.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .exceptions import ConfigurationError


def _token(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def write_matrices(path: str | Path, matrices: dict[str, np.ndarray], header: str = "") -> None:
    lines = []
    if header:
        for h in header.splitlines():
            lines.append(f"# {h}")
    for name, mat in matrices.items():
        arr = np.asarray(mat, dtype=np.complex128)
        if arr.ndim != 2:
            raise ConfigurationError(f"matrix {name!r} must be 2-D")
        if any(ch.isspace() for ch in name):
            raise ConfigurationError(f"matrix name {name!r} must not contain whitespace")
        lines.append(f"matrix {name} {arr.shape[0]} {arr.shape[1]}")
        for row in arr:
            lines.append(" ".join(_token(z) for z in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrices(path: str | Path) -> dict[str, np.ndarray]:
    matrices: dict[str, np.ndarray] = {}
    lines = Path(path).read_text().splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "matrix" or len(parts) != 4:
            raise ConfigurationError(f"malformed header line: {line!r}")
        name, rows, cols = parts[1], int(parts[2]), int(parts[3])
        data = np.zeros((rows, cols), dtype=np.complex128)
        for r in range(rows):
            if i >= len(lines):
                raise ConfigurationError(f"matrix {name!r}: file ended after {r} of {rows} rows")
            tokens = lines[i].split()
            i += 1
            if len(tokens) != cols:
                raise ConfigurationError(
                    f"matrix {name!r} row {r}: expected {cols} entries, got {len(tokens)}"
                )
            data[r] = [complex(tok) for tok in tokens]
        matrices[name] = data
    return matrices


def design_matrices(design) -> dict[str, np.ndarray]:
    """Flatten a LinearDesign into named matrices for serialization."""
    out = {}
    for (l, k), t in sorted(design.precoders.items()):
        out[f"precoder_{l}_{k}"] = t
    for m, p in sorted(design.combiners.items()):
        out[f"combiner_{m}"] = p
    return out
