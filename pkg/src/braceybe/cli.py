"""Command-line interface.

Exit status: 0 for success or a positive answer, 1 for a mathematically
negative answer (not a brace, not a solution, not isomorphic, not basic,
incomplete), 2 for unusable input.  Reports go to stdout with a fixed field
order; elapsed time goes to stderr so reports stay byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Any

from . import io
from .basic import deletions, enlargements, is_basic
from .braces import (
    BraceAxiomError,
    additive_type,
    brace_automorphisms,
    enumerate_braces,
    mul_subgroups,
    orbit_decomposition,
    rump_brace,
    socle,
    stabilizer,
    trivial_brace,
)
from .enumeration import completeness_check, enumerate_solutions
from .groups import GroupAxiomError, abelian_group
from .isomorphism import expand_witness, solutions_isomorphic_bruteforce, solutions_isomorphic_thm
from .solutions import construct_solution, is_valid_config, verify_solution


class InputError(Exception):
    """Raised for input that cannot be used; maps to exit status 2."""


class Report:
    """Ordered payload plus the command echo and an input digest."""

    def __init__(self, argv: list[str]):
        self.command = " ".join(argv)
        self.inputs = ""
        self.result = ""
        self.fields: list[tuple[str, Any]] = []

    def seal(self, blobs: list[bytes]) -> None:
        digest = hashlib.sha256()
        for blob in blobs:
            digest.update(hashlib.sha256(blob).digest())
        self.inputs = "sha256:" + digest.hexdigest()

    def add(self, key: str, value: Any) -> None:
        self.fields.append((key, value))

    def to_json(self) -> str:
        payload = {"command": self.command, "inputs": self.inputs, "result": self.result}
        payload["payload"] = {k: v for k, v in self.fields}
        return json.dumps(payload, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"inputs: {self.inputs}", f"result: {self.result}"]
        for key, value in self.fields:
            if isinstance(value, list) and any(isinstance(v, (list, dict)) for v in value):
                lines.append(f"{key}:")
                lines.extend(f"  {_flat(item)}" for item in value)
            else:
                lines.append(f"{key}: {_flat(value)}")
        return "\n".join(lines) + "\n"


def _flat(value: Any) -> str:
    if isinstance(value, dict):
        return " ".join(f"{k}={_flat(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return json.dumps(value)
    return str(value)


# --- input helpers ---------------------------------------------------------------


class _Inputs:
    """Reads every input once and remembers its bytes for the digest."""

    def __init__(self):
        self.blobs: list[bytes] = []

    def text(self, source: str) -> str:
        text = io.read_text(source)
        self.blobs.append(text.encode())
        return text

    def brace(self, source: str):
        return io.brace_from_obj(io.load_json(self.text(source)))

    def config(self, source: str, brace=None):
        base = None if source == "-" else Path(source).parent
        return io.config_from_obj(io.load_json(self.text(source)), brace, base)

    def document(self, source: str):
        """A solution or a configuration, told apart by their fields."""
        obj = io.load_json(self.text(source))
        if isinstance(obj, dict) and "sigma" in obj:
            return "solution", io.solution_from_obj(obj)
        if isinstance(obj, dict) and "families" in obj:
            base = None if source == "-" else Path(source).parent
            return "config", io.config_from_obj(obj, None, base)
        raise InputError(f"{source}: neither a solution nor a configuration")


def _config_payload(cfg) -> dict:
    return {"orbits": list(cfg.reps), "families": [[list(K.elements) for K in fam] for fam in cfg.families]}


def _group_spec(spec: str) -> tuple[int, ...]:
    try:
        factors = tuple(int(part) for part in spec.split(","))
    except ValueError:
        raise InputError(f"group spec {spec!r}: expected comma-separated integers") from None
    if not factors or any(f < 1 for f in factors):
        raise InputError(f"group spec {spec!r}: factors must be positive")
    return factors


# --- subcommands -----------------------------------------------------------------


def cmd_gen(args, rep: Report, inp: _Inputs) -> int:
    if args.kind == "trivial":
        factors = _group_spec(args.group)
        B = trivial_brace(abelian_group(factors))
        meta = {"construction": "trivial", "group": list(factors)}
    else:
        try:
            B = rump_brace(args.p, args.n, args.i)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        meta = {"construction": "rump", "p": args.p, "n": args.n, "i": args.i}
    io.write_brace(B, args.output, meta)
    return 0


def cmd_validate(args, rep: Report, inp: _Inputs) -> int:
    try:
        B = inp.brace(args.brace)
    except (BraceAxiomError, GroupAxiomError) as exc:
        rep.result = "not a brace"
        rep.add("axiom", exc.axiom)
        rep.add("witness", list(exc.witness))
        rep.add("reason", str(exc))
        return 1
    rep.result = "brace"
    rep.add("order", B.order)
    rep.add("additive_type", list(additive_type(B)))
    rep.add("multiplicative_abelian", B.mul.is_abelian())
    rep.add("socle", list(socle(B).elements))
    return 0


def cmd_orbits(args, rep: Report, inp: _Inputs) -> int:
    B = inp.brace(args.brace)
    od = orbit_decomposition(B)
    rep.result = f"{len(od.orbits)} orbits"
    rep.add(
        "orbits",
        [{"rep": r, "elements": list(o), "stabilizer": list(s.elements)} for r, o, s in zip(od.reps, od.orbits, od.stabilizers)],
    )
    return 0


def cmd_subgroups(args, rep: Report, inp: _Inputs) -> int:
    B = inp.brace(args.brace)
    lattice = mul_subgroups(B)
    if args.of_stabilizer is not None:
        x = args.of_stabilizer
        if not 0 <= x < B.order:
            raise InputError(f"element {x} outside the brace of order {B.order}")
        inside = set(stabilizer(B, x).elements)
        lattice = [K for K in lattice if set(K.elements) <= inside]
    rep.result = f"{len(lattice)} subgroups"
    rep.add("subgroups", [list(K.elements) for K in lattice])
    return 0


def cmd_construct(args, rep: Report, inp: _Inputs) -> int:
    B = inp.brace(args.brace)
    cfg = inp.config(args.config, B)
    s = construct_solution(cfg)
    io.write_solution(s, args.output)
    return 0


def cmd_verify(args, rep: Report, inp: _Inputs) -> int:
    s = io.solution_from_obj(io.load_json(inp.text(args.solution)))
    report = verify_solution(s)
    rep.result = "solution" if report.ok else "not a solution"
    rep.add("size", s.size)
    rep.add("involutive", report.involutive)
    rep.add("nondegenerate", report.nondegenerate)
    rep.add("braid", report.braid)
    for key, value in report.witness.items():
        rep.add(f"witness_{key}", list(value))
    return 0 if report.ok else 1


def cmd_iso(args, rep: Report, inp: _Inputs) -> int:
    kind_a, a = inp.document(args.a)
    kind_b, b = inp.document(args.b)
    if kind_a == kind_b == "config" and not args.oracle:
        rep.add("method", "theorem")
        try:
            w = solutions_isomorphic_thm(a, b)
        except ValueError:
            rep.result = "not isomorphic"
            rep.add("reason", "the braces are not isomorphic")
            return 1
        if w is None:
            rep.result = "not isomorphic"
            return 1
        rep.result = "isomorphic"
        rep.add("psi", list(w.psi))
        rep.add("alpha", list(w.alpha))
        rep.add("beta", [list(r) for r in w.beta])
        rep.add("z", [list(r) for r in w.z])
        rep.add("bijection", list(expand_witness(w, a, b)))
        return 0
    rep.add("method", "oracle")
    s = a if kind_a == "solution" else construct_solution(a)
    t = b if kind_b == "solution" else construct_solution(b)
    F = solutions_isomorphic_bruteforce(s, t)
    if F is None:
        rep.result = "not isomorphic"
        return 1
    rep.result = "isomorphic"
    rep.add("bijection", list(F))
    return 0


def cmd_basic(args, rep: Report, inp: _Inputs) -> int:
    B = inp.brace(args.brace)
    cfg = inp.config(args.config, B)
    if is_basic(cfg):
        rep.result = "basic"
        return 0
    rep.result = "not basic"
    for (i, j), c in deletions(cfg):
        if is_valid_config(c):
            rep.add("deletable", {"orbit": i, "family": j})
            return 1
    for (i, j, L), c in enlargements(cfg):
        if is_valid_config(c):
            rep.add("enlargeable", {"orbit": i, "family": j, "to": list(L.elements)})
            return 1
    return 1


def cmd_enumerate(args, rep: Report, inp: _Inputs) -> int:
    B = inp.brace(args.brace)
    classes = enumerate_solutions(B, args.max_points, args.basic)
    rep.result = f"{len(classes)} classes"
    rep.add("basic_only", args.basic)
    rep.add("max_points", args.max_points)
    rep.add(
        "classes",
        [{"size": s.size, **_config_payload(cfg), "sigma": s.sigma.tolist()} for cfg, s in classes],
    )
    return 0


def cmd_census(args, rep: Report, inp: _Inputs) -> int:
    braces = enumerate_braces(args.order)
    rows = []
    for b, B in enumerate(braces):
        rows.append(
            {
                "index": b,
                "additive_type": list(additive_type(B)),
                "multiplicative_abelian": B.mul.is_abelian(),
                "socle_order": socle(B).order,
                "automorphisms": len(brace_automorphisms(B)),
                "orbits": len(orbit_decomposition(B).orbits),
            }
        )
    rep.result = f"{len(braces)} braces"
    rep.add("braces", rows)
    if args.write:
        out = Path(args.write)
        out.mkdir(parents=True, exist_ok=True)
        for b, B in enumerate(braces):
            io.write_brace(B, out / f"brace_{args.order}_{b}.json", {"census_order": args.order, "index": b})
    return 0


def cmd_completeness(args, rep: Report, inp: _Inputs) -> int:
    report = completeness_check(args.points, strict=False)
    rep.result = "complete" if report.complete else "incomplete"
    rep.add("solutions", len(report.rows))
    rep.add("matched", report.matched)
    rep.add(
        "rows",
        [
            {
                "sigma": r.solution.sigma.tolist(),
                "group_order": r.group_order,
                "brace": r.brace_index,
                "config": _config_payload(r.config) if r.config is not None else None,
                "bijection": list(r.bijection) if r.bijection is not None else None,
            }
            for r in report.rows
        ],
    )
    return 0 if report.complete else 1


# --- dispatch --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braceybe", description="Finite left braces and their YBE solutions.")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")
    sub = parser.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    gen = sub.add_parser("gen", help="write a brace file")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    triv = gen_sub.add_parser("trivial", help="trivial brace on an abelian group")
    triv.add_argument("--group", required=True, help="cyclic factor sizes, e.g. 2,4")
    rump = gen_sub.add_parser("rump", help="x.y = x+y+p^i xy on Z/p^n")
    for name in ("p", "n", "i"):
        rump.add_argument(f"--{name}", type=int, required=True)
    for p in (triv, rump):
        p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("validate", help="check the brace axioms")
    p.add_argument("brace")
    p = sub.add_parser("orbits", help="lambda-orbits with stabilizers")
    p.add_argument("brace")
    p = sub.add_parser("subgroups", help="subgroups of the multiplicative group")
    p.add_argument("brace")
    p.add_argument("--of-stabilizer", type=int, default=None, metavar="X")
    p = sub.add_parser("construct", help="build the solution of a configuration")
    p.add_argument("brace")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", default="-")
    p = sub.add_parser("verify", help="check a solution file")
    p.add_argument("solution")
    p = sub.add_parser("iso", help="decide isomorphism of two solutions or configurations")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--oracle", action="store_true", help="use the direct bijection search")
    p = sub.add_parser("basic", help="is the configuration basic")
    p.add_argument("brace")
    p.add_argument("--config", required=True)
    p = sub.add_parser("enumerate", help="solutions over a brace up to isomorphism")
    p.add_argument("brace")
    p.add_argument("--basic", action="store_true")
    p.add_argument("--max-points", type=int, default=8)
    p = sub.add_parser("census", help="braces of a given order up to isomorphism")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--write", metavar="DIR", help="also write one brace file per class")
    p = sub.add_parser("completeness", help="match every small solution against the construction")
    p.add_argument("--points", type=int, required=True)
    return parser


COMMANDS = {
    "gen": cmd_gen,
    "validate": cmd_validate,
    "orbits": cmd_orbits,
    "subgroups": cmd_subgroups,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "iso": cmd_iso,
    "basic": cmd_basic,
    "enumerate": cmd_enumerate,
    "census": cmd_census,
    "completeness": cmd_completeness,
}

# commands whose stdout is a data file rather than a report
FILE_COMMANDS = {"gen", "construct"}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    start = time.perf_counter()
    inp = _Inputs()
    rep = Report(argv)
    try:
        code = COMMANDS[args.command](args, rep, inp)
    except (InputError, ValueError) as exc:
        # format, axiom, config and bound errors are all ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command not in FILE_COMMANDS:
        rep.seal(inp.blobs)
        sys.stdout.write(rep.to_json() if args.json else rep.to_text())
    print(f"time: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
