"""Command-line driver: parse, check and compile a ``.qml`` file, then run one backend."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import orth
from .circuit import morphism_to_json, render_text
from .compiler import compile_program
from .denote import matrix_to_json, run_i, run_m, run_s
from .errors import InternalError, QMLError
from .parser import parse_source
from .terms import IfQuantum, render_term, render_type, walk
from .typecheck import check

EMITS = ("circuit", "unitary", "isometry", "super", "orth")
FORMATS = ("text", "json")


@dataclass
class CliConfig:
    file: Path
    function: str
    emit: str = "circuit"
    format: str = "text"
    cap: int | None = None
    explain_orth: bool = False


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmlc", description="Compile QML programs to quantum circuits.")
    p.add_argument("file", type=Path)
    p.add_argument("--fn", dest="function", required=True, help="function to compile")
    p.add_argument("--emit", choices=EMITS, default="circuit")
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--cap", type=int, default=None, help="maximum simulated qubits (default: QMLC_CAP or 12/8)")
    p.add_argument("--explain-orth", action="store_true", help="print the orthogonality derivation of every ifq")
    return p


def _fmt_complex(z: complex) -> str:
    re = 0.0 if abs(z.real) < 5e-13 else z.real
    im = 0.0 if abs(z.imag) < 5e-13 else z.imag
    if im == 0:
        return f"{re:.6g}"
    if re == 0:
        return f"{im:.6g}i"
    return f"{re:.6g}{im:+.6g}i"


def format_matrix(a: np.ndarray) -> str:
    cells = [[_fmt_complex(complex(z)) for z in row] for row in np.asarray(a)]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def _orth_report(term) -> list[dict]:
    out = []
    for node in walk(term):
        if isinstance(node, IfQuantum):
            d = orth.derive(node.then, node.orelse)
            entry = {"then": render_term(node.then), "else": render_term(node.orelse), "rule": d.rule if d else None}
            entry["derivation"] = orth.explain(d)
            if d is not None:
                w = orth.witness(d)
                entry["witness"] = matrix_to_json(w.unitary, position=w.position, local=w.local)
            out.append(entry)
    return out


def run(cfg: CliConfig) -> str:
    source = cfg.file.read_text()
    program = parse_source(source)
    if cfg.function not in program.names():
        raise QMLError(f"no function named {cfg.function!r} in {cfg.file}")
    typed = check(program)
    ifqs = _orth_report(typed[cfg.function].term)
    if cfg.emit == "orth" and not ifqs:
        raise QMLError(f"function {cfg.function!r} contains no ifq, so there is nothing to explain")
    morphisms = compile_program(program, typed)
    m = morphisms[cfg.function]
    js = cfg.format == "json"
    lines: list[str] = []

    if cfg.emit == "circuit":
        lines.append(json.dumps(morphism_to_json(m), indent=2) if js else render_text(m))
    elif cfg.emit == "unitary":
        h, g, u = run_m(m, cfg.cap)
        lines.append(json.dumps(matrix_to_json(u, heap=h, garbage=g)) if js else f"heap={h} garbage={g}\n{format_matrix(u)}")
    elif cfg.emit == "isometry":
        g, iso = run_i(m, cfg.cap)
        lines.append(json.dumps(matrix_to_json(iso.matrix, garbage=g)) if js else f"garbage={g}\n{format_matrix(iso.matrix)}")
    elif cfg.emit == "super":
        s = run_s(m, cfg.cap)
        lines.append(json.dumps(matrix_to_json(s.matrix, vectorization="column")) if js else format_matrix(s.matrix))
    else:
        if js:
            lines.append(json.dumps(ifqs, indent=2))
        else:
            for e in ifqs:
                lines.append(e["derivation"])

    if cfg.explain_orth and cfg.emit != "orth":
        for e in ifqs:
            lines.append(e["derivation"])
    sig = ", ".join(f"{x}:{render_type(t)}" for x, t in typed[cfg.function].context.items())
    if not js and cfg.emit in ("unitary", "isometry", "super"):
        lines.insert(0, f"{cfg.function} ({sig}) : {render_type(typed[cfg.function].qtype)}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(args.file, args.function, args.emit, args.format, args.cap, args.explain_orth)
    try:
        sys.stdout.write(run(cfg))
    except QMLError as e:
        print(e.diagnostic(str(cfg.file)), file=sys.stderr)
        return 1
    except OSError as e:
        print(f"{cfg.file}: error: {e.strerror}", file=sys.stderr)
        return 1
    except InternalError as e:
        print(f"{cfg.file}: internal error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
