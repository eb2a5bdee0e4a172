"""Command-line entry point: ``heckemap validate|analyze|batch|dessin``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .analysis import AnalysisOptions, ConsistencyError, analyze, report_json
from .maps import DecompositionError, build_map, dessin
from .symbol import SymbolError, hfs_from_json, parse_hfs, validate_hfs

EXIT_OK, EXIT_INVALID, EXIT_LIMIT, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    json: bool = False
    congruence: str = "both"
    max_oracle_size: int = 10**6
    face_budget: Optional[int] = None
    emit_generators: bool = False
    emit_dessin: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.max_oracle_size < 1:
            raise ValueError("--max-oracle-size must be >= 1")
        if self.face_budget is not None and self.face_budget < 1:
            raise ValueError("--face-budget must be >= 1")

    def options(self) -> AnalysisOptions:
        return AnalysisOptions(self.congruence, self.max_oracle_size, self.face_budget, self.emit_generators)


def load_symbol(path):
    """Read a symbol file in the text format or its JSON equivalent."""
    text = Path(path).read_text()
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        return hfs_from_json(text)
    return parse_hfs(text)


def _is_budget(exc):
    return isinstance(exc, DecompositionError) and "budget" in str(exc)


def cmd_validate(path, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        hfs = load_symbol(path)
    except OSError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return EXIT_IO
    except SymbolError as exc:
        _emit(cfg, out, {"file": str(path), "valid": False, "violations": [{"code": "SyntaxError", "detail": str(exc)}]},
              f"{path}: SyntaxError: {exc}")
        return EXIT_INVALID
    violations = validate_hfs(hfs, cfg.face_budget)
    payload = {"file": str(path), "valid": not violations,
               "violations": [{"code": v.code, "detail": v.detail} for v in violations]}
    text = f"{path}: valid" if not violations else "\n".join(f"{path}: {v}" for v in violations)
    _emit(cfg, out, payload, text)
    if any(v.code == "DecompositionFailed" and "budget" in str(v.detail) for v in violations):
        return EXIT_LIMIT
    return EXIT_OK if not violations else EXIT_INVALID


def _emit(cfg, out, payload, text):
    if cfg.json:
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        print(text, file=out)


def _table(report) -> str:
    d = report.as_dict()
    inv = d["invariants"]
    cong = d["congruence"]
    rows = [
        ("q", d["q"]),
        ("index", d["index"]),
        ("r1", d["r1"]),
        ("r2", d["r2"]),
        ("r0", d["r0"]),
        ("tau2", inv["tau2"]),
        ("v_r", ", ".join(f"v_{k}={v}" for k, v in inv["v"].items()) or "-"),
        ("vertices / edges / faces", f'{inv["vertices"]} / {inv["edges"]} / {inv["faces"]}'),
        ("vertex degrees", " ".join(map(str, inv["degrees"]))),
        ("genus", inv["genus"]),
        ("level", inv["level"]),
        ("monodromy order", d["monodromy_order"]),
        ("normal", d["normal"]),
        ("Aut order / exponent", f'{d["aut"]["order"]} / {d["aut"]["exponent"]}'),
        ("quasi-regular", d["quasi_regular"]),
        ("regular", d["regular"]),
        ("congruence", f'{cong["verdict"]} (method {cong["method"]}, modulus {cong["modulus"]})'),
    ]
    width = max(len(k) for k, _ in rows)
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    if report.generators:
        lines.append("generators")
        for lab, g in report.generators:
            lines.append(f"  {lab.text():>4}  {g.rows_text()}")
    return "\n".join(lines)


def _analyze_one(path, cfg: RunConfig):
    """Return (exit code, report or None, message)."""
    try:
        hfs = load_symbol(path)
    except OSError as exc:
        return EXIT_IO, None, str(exc)
    except SymbolError as exc:
        return EXIT_INVALID, None, f"SyntaxError: {exc}"
    violations = validate_hfs(hfs, cfg.face_budget)
    if violations:
        code = EXIT_LIMIT if any("budget" in str(v.detail) for v in violations) else EXIT_INVALID
        return code, None, "; ".join(map(str, violations))
    try:
        return EXIT_OK, analyze(hfs, cfg.options()), ""
    except DecompositionError as exc:
        return (EXIT_LIMIT if _is_budget(exc) else EXIT_INVALID), None, str(exc)


def cmd_analyze(path, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    code, report, msg = _analyze_one(path, cfg)
    if report is None:
        print(f"{path}: {msg}", file=sys.stderr)
        return code
    if cfg.json:
        print(report_json(report, cfg.emit_generators, cfg.emit_dessin), file=out)
    else:
        if not cfg.emit_generators:
            report.generators = []
        print(_table(report), file=out)
        if cfg.emit_dessin:
            s0, s1 = dessin(report.map)
            print(f"sigma0  {s0.to_cycles_str()}\nsigma1  {s1.to_cycles_str()}", file=out)
    return EXIT_OK


def _batch_row(path, cfg):
    code, report, msg = _analyze_one(path, cfg)
    row = {"name": Path(path).name, "status": code}
    if report is not None:
        row.update(q=report.q, index=report.index, normal=report.normal,
                   level=report.level, congruence=report.congruence["verdict"])
    else:
        row["error"] = msg
    return row


def cmd_batch(directory, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    d = Path(directory)
    if not d.is_dir():
        print(f"{directory}: not a directory", file=sys.stderr)
        return EXIT_IO
    files = sorted(p for p in d.iterdir() if p.is_file() and p.suffix in (".hfs", ".json", ".txt"))
    if cfg.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            rows = list(pool.map(_batch_row, files, [cfg] * len(files)))
    else:
        rows = [_batch_row(p, cfg) for p in files]
    if cfg.json:
        print(json.dumps(rows, sort_keys=True, indent=2), file=out)
    else:
        cols = ("name", "q", "index", "normal", "level", "congruence")
        print("\t".join(cols), file=out)
        for r in rows:
            if "error" in r:
                print(f'{r["name"]}\tERROR\t{r["error"]}', file=out)
            else:
                print("\t".join(str(r[c]) for c in cols), file=out)
    if rows and all(r["status"] != EXIT_OK for r in rows):
        return EXIT_INVALID
    return EXIT_OK


def cmd_dessin(path, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        hfs = load_symbol(path)
    except OSError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return EXIT_IO
    except SymbolError as exc:
        print(f"{path}: SyntaxError: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        m = build_map(hfs, cfg.face_budget)
    except SymbolError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return EXIT_LIMIT if _is_budget(exc) else EXIT_INVALID
    s0, s1 = dessin(m)
    _emit(cfg, out, {"degree": m.omega_size, "sigma0": s0.to_cycles_str(), "sigma1": s1.to_cycles_str()},
          f"sigma0  {s0.to_cycles_str()}\nsigma1  {s1.to_cycles_str()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heckemap", description="Hecke-Farey symbol analysis")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--congruence", choices=("hsu", "oracle", "both", "off"), default="both")
    common.add_argument("--max-oracle-size", type=int, default=10**6)
    common.add_argument("--face-budget", type=int, default=None)
    common.add_argument("--emit-generators", action="store_true")
    common.add_argument("--emit-dessin", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, arg in (("validate", "path"), ("analyze", "path"), ("dessin", "path"), ("batch", "directory")):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument(arg)
        if name == "batch":
            sp.add_argument("--jobs", type=int, default=1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    target = getattr(args, "path", None) or args.directory
    try:
        cfg = RunConfig(args.command, [target], args.json, args.congruence, args.max_oracle_size,
                        args.face_budget, args.emit_generators, args.emit_dessin, getattr(args, "jobs", 1))
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    handler = {"validate": cmd_validate, "analyze": cmd_analyze,
               "batch": cmd_batch, "dessin": cmd_dessin}[args.command]
    try:
        return handler(target, cfg)
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
