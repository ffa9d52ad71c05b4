"""Durable scan output: CSV/JSONL reports, plot columns, and resumable
checkpointed scan execution.

All writers are deterministic: re-serializing the same report produces a
byte-identical file, which is what the resume differential tests lean on.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass

from .engine import (
    RangeFamily,
    GridSpec,
    PrimeCounter,
    ScanReport,
    ScanRow,
    Verdict,
    compute_scan_row,
    range_points,
    scan_meta,
    EmptyScanError,
)

CSV_HEADER = "x,y,pi_x,pi_y,pi_xy,margin,class,li_pred,err_rh,err_uncond,skipped"

_ROW_FIELDS = (
    "x", "y", "pi_x", "pi_y", "pi_xy", "margin",
    "class", "li_pred", "err_rh", "err_uncond", "skipped",
)

PLOT_COLUMNS = (
    "x", "y", "pi_x", "pi_y", "pi_xy", "margin",
    "li_pred", "err_rh", "err_uncond", "log10_x",
)


class CheckpointError(Exception):
    """Checkpoint file unusable or inconsistent with the requested scan."""


def _fmt_real(v: float | None) -> str:
    if v is None:
        return ""
    return f"{v:.17g}"


def _fmt_int(v: int | None) -> str:
    return "" if v is None else str(v)


def _row_csv(row: ScanRow) -> str:
    cls = row.verdict.value if row.verdict is not None else ""
    return ",".join(
        (
            str(row.x), str(row.y),
            _fmt_int(row.pi_x), _fmt_int(row.pi_y), _fmt_int(row.pi_xy),
            _fmt_int(row.margin), cls,
            _fmt_real(row.li_pred), _fmt_real(row.err_rh), _fmt_real(row.err_uncond),
            "1" if row.skipped else "0",
        )
    )


def write_csv(report: ScanReport, path) -> None:
    """Write the report with the fixed header, LF newlines, 17-digit reals."""
    try:
        with open(path, "w", newline="\n", encoding="utf-8") as f:
            f.write(CSV_HEADER + "\n")
            for row in report.rows:
                f.write(_row_csv(row) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing CSV report to {path}: {exc}") from exc


def _row_obj(row: ScanRow) -> dict:
    return {
        "x": row.x,
        "y": row.y,
        "pi_x": row.pi_x,
        "pi_y": row.pi_y,
        "pi_xy": row.pi_xy,
        "margin": row.margin,
        "class": row.verdict.value if row.verdict is not None else None,
        "li_pred": row.li_pred,
        "err_rh": row.err_rh,
        "err_uncond": row.err_uncond,
        "skipped": row.skipped,
    }


def _obj_row(obj: dict) -> ScanRow:
    cls = obj.get("class")
    return ScanRow(
        x=obj["x"], y=obj["y"], skipped=obj["skipped"],
        pi_x=obj["pi_x"], pi_y=obj["pi_y"], pi_xy=obj["pi_xy"],
        margin=obj["margin"],
        verdict=Verdict(cls) if cls is not None else None,
        li_pred=obj["li_pred"], err_rh=obj["err_rh"], err_uncond=obj["err_uncond"],
    )


def write_jsonl(report: ScanReport, path) -> None:
    """Meta object on line 1, then one row object per line."""
    try:
        with open(path, "w", newline="\n", encoding="utf-8") as f:
            f.write(json.dumps({"meta": report.meta}, sort_keys=True) + "\n")
            for row in report.rows:
                f.write(json.dumps(_row_obj(row), sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing JSONL report to {path}: {exc}") from exc


def read_jsonl(path) -> ScanReport:
    """Inverse of write_jsonl (used by resume and the round-trip tests)."""
    with open(path, encoding="utf-8") as f:
        first = f.readline()
        meta = json.loads(first)["meta"]
        rows = [_obj_row(json.loads(line)) for line in f if line.strip()]
    return ScanReport(meta=meta, rows=rows)


def write_plotdata(report: ScanReport, path, columns) -> None:
    """Whitespace-separated numeric columns; skipped rows excluded."""
    for name in columns:
        if name not in PLOT_COLUMNS:
            raise ValueError(
                f"unknown plot column {name!r}; valid names: {', '.join(PLOT_COLUMNS)}"
            )
    with open(path, "w", newline="\n", encoding="utf-8") as f:
        f.write("# " + " ".join(columns) + "\n")
        for row in report.active_rows:
            vals = []
            for name in columns:
                if name == "log10_x":
                    v = math.log10(row.x)
                else:
                    v = getattr(row, name if name != "class" else "verdict")
                vals.append(_fmt_real(float(v)) if isinstance(v, float) else str(v))
            f.write(" ".join(vals) + "\n")


# ---------------------------------------------------------------------------
# Checkpointed execution


def scan_identity_hash(meta: dict) -> str:
    """Stable digest of the scan-defining part of the meta block."""
    ident = {
        "family": meta["family"],
        "grid": meta["grid"],
        "counter_limit": meta["counter_limit"],
        "counter_method": meta["counter_method"],
    }
    blob = json.dumps(ident, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class Checkpoint:
    scan_hash: str
    last_x: int  # last completed x (-1 before any row)
    rows_emitted: int


def _atomic_write(path, text: str) -> None:
    tmp = str(path) + ".tmp"
    with open(tmp, "w", newline="\n", encoding="utf-8") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def checkpoint_save(cp: Checkpoint, path) -> None:
    _atomic_write(path, json.dumps(
        {"scan_hash": cp.scan_hash, "last_x": cp.last_x, "rows_emitted": cp.rows_emitted},
        sort_keys=True,
    ) + "\n")


def checkpoint_load(path) -> Checkpoint:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    try:
        obj = json.loads(text)
        return Checkpoint(
            scan_hash=obj["scan_hash"],
            last_x=int(obj["last_x"]),
            rows_emitted=int(obj["rows_emitted"]),
        )
    except json.JSONDecodeError as exc:
        raise CheckpointError(
            f"corrupt checkpoint {path}: parse error at byte {exc.pos}"
        ) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc


class ScanInterrupted(Exception):
    """Raised by the test hook that simulates a mid-run kill."""


def run_checkpointed_scan(
    counter: PrimeCounter,
    family: RangeFamily,
    grid: GridSpec | None,
    checkpoint_path,
    interrupt_after: int | None = None,
) -> ScanReport:
    """Execute a scan with exactly-once row checkpointing.

    Completed rows go to a JSONL sidecar (<checkpoint>.rows); the small
    checkpoint file is rewritten atomically after every row.  Resuming
    with a matching scan hash continues after the last completed row;
    a mismatched hash is refused.  ``interrupt_after`` aborts after that
    many newly computed rows (kill simulation for the differential tests).
    """
    pts = sorted(range_points(family, grid), key=lambda p: (p.x, p.y))
    if not any(not p.skipped for p in pts):
        raise EmptyScanError(f"no evaluable points: all {len(pts)} grid points skipped")
    meta = scan_meta(counter, family, grid, workers=1)
    want_hash = scan_identity_hash(meta)
    rows_path = str(checkpoint_path) + ".rows"

    done_rows: list[ScanRow] = []
    if os.path.exists(checkpoint_path):
        cp = checkpoint_load(checkpoint_path)
        if cp.scan_hash != want_hash:
            raise CheckpointError(
                f"checkpoint {checkpoint_path} belongs to a different scan "
                f"(hash {cp.scan_hash[:12]}… != {want_hash[:12]}…)"
            )
        if os.path.exists(rows_path):
            with open(rows_path, encoding="utf-8") as f:
                lines = f.readlines()
            # a torn final line (killed mid-write) is discarded; the
            # checkpoint count is authoritative
            for line in lines[: cp.rows_emitted]:
                done_rows.append(_obj_row(json.loads(line)))
        if len(done_rows) < cp.rows_emitted:
            raise CheckpointError(
                f"row sidecar {rows_path} has {len(done_rows)} rows, "
                f"checkpoint expects {cp.rows_emitted}"
            )
    else:
        with open(rows_path, "w", encoding="utf-8"):
            pass
        checkpoint_save(Checkpoint(want_hash, -1, 0), checkpoint_path)

    n_done = len(done_rows)
    new_count = 0
    with open(rows_path, "r+", newline="\n", encoding="utf-8") as f:
        # truncate any torn tail before appending
        kept = f.readlines()[:n_done]
        f.seek(0)
        f.truncate()
        f.writelines(kept)
        for pt in pts[n_done:]:
            if interrupt_after is not None and new_count >= interrupt_after:
                raise ScanInterrupted(f"interrupted after {new_count} new rows")
            row = compute_scan_row(counter, pt)
            f.write(json.dumps(_row_obj(row), sort_keys=True) + "\n")
            f.flush()
            done_rows.append(row)
            n_done += 1
            new_count += 1
            checkpoint_save(Checkpoint(want_hash, row.x, n_done), checkpoint_path)

    done_rows.sort(key=lambda r: (r.x, r.y))
    return ScanReport(meta=meta, rows=done_rows)
