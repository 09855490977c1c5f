"""Deterministic file output: CSV tables, JSON reports, run manifests.

Numbers are printed with repr-faithful %.12g so reruns of the same
configuration produce byte-identical tables.  The manifest carries the
fully resolved parameter set and the list of written files; its
generated_at stamp is the only line expected to differ between
identical reruns.
"""

import dataclasses
import datetime
import json
import os

import numpy as np

__all__ = ["OutputSink", "format_number", "write_csv", "write_json", "write_manifest"]


def format_number(value):
    if isinstance(value, str):
        cleaned = value.replace("\n", " ")
        if "," in cleaned or '"' in cleaned:
            return '"' + cleaned.replace('"', '""') + '"'
        return cleaned
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if np.isnan(v):
        return "nan"
    return f"{v:.12g}"


def write_csv(path, columns, rows):
    """rows: iterable of sequences matching columns; LF newlines."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(
                    f"row of width {len(row)} does not match {len(columns)} columns"
                )
            fh.write(",".join(format_number(v) for v in row) + "\n")


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return None if np.isnan(v) else v
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def write_json(path, payload):
    with open(path, "w", newline="\n") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(path, params, scenario, outputs, extra=None):
    from slowsound import __version__

    payload = {
        "scenario": scenario,
        "parameters": dataclasses.asdict(params),
        "package": "slowsound",
        "version": __version__,
        "outputs": sorted(os.path.basename(p) for p in outputs),
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        payload["notes"] = extra
    write_json(path, payload)


class OutputSink:
    """Tracks files written during a scenario so failures leave no debris.

    Use as a context manager: files registered through path() are removed
    if the block raises, and kept on success.
    """

    def __init__(self, outdir):
        self.outdir = outdir
        self.written = []

    def path(self, name):
        os.makedirs(self.outdir, exist_ok=True)
        full = os.path.join(self.outdir, name)
        self.written.append(full)
        return full

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            for full in self.written:
                try:
                    os.remove(full)
                except OSError:
                    pass
        return False
