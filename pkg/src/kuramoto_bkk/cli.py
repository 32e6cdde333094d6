"""Command-line interface: ``kuramoto-bkk <command> ...``.

JSON goes to stdout, a short human summary to stderr.  Exit codes:
0 ok/certified, 2 input error, 3 internal consistency failure, 4 refused,
5 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, kernels
from .certify import ConsistencyError, Status, check_main_condition, intersection_index
from .io import InputError, concrete_system, read_system
from .kuramoto import NetworkError, OscillatorNetwork, build_spaces, instantiate, read_graph
from .mixed_volume import DegenerateLifting, mixed_volume_audit, mv_via_interpolation
from .oracle.homotopy import PathTrackerConfig, count_torus_roots_homotopy
from .oracle.resultant import (
    NonFiniteRootSet,
    RootCountReport,
    count_torus_roots_bivariate,
    count_torus_roots_univariate,
)
from .polynomial import newton_polytope, space_newton_polytope

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3
EXIT_REFUSED = 4
EXIT_MISMATCH = 5

SEED_ENV = "KURAMOTO_BKK_SEED"
MAX_SOLVE_N = 4


@dataclass
class RunManifest:
    command: str
    inputs: list[str]
    seed: int | None
    flags: dict = field(default_factory=dict)
    started: float = field(default_factory=time.perf_counter)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "seed": self.seed,
            "flags": self.flags,
            "timing": {"wallSeconds": round(time.perf_counter() - self.started, 6)},
            "version": __version__,
            "kernelBackend": kernels.BACKEND,
        }


def _emit(doc: dict, manifest: RunManifest) -> None:
    doc = dict(doc)
    doc["manifest"] = manifest.to_json()
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{SEED_ENV}={env!r} is not an integer") from None


# -- commands -----------------------------------------------------------------------


def cmd_newton(args) -> int:
    spaces = read_system(args.system)
    man = RunManifest("newton", [args.system], None)
    out = []
    for i, L in enumerate(spaces):
        P = space_newton_polytope(L)
        gens = []
        for g in L.generators:
            Q = newton_polytope(g)
            gens.append({"polynomial": str(g), "polytope": Q.to_json(), "segment": Q.dim == 1 and len(Q.vertices) == 2})
        out.append({"index": i, "polytope": P.to_json(), "generators": gens})
        _say(f"space {i}: dim {P.dim}, {len(P.vertices)} vertices, {len(P.facets)} facets")
    _emit({"n": spaces[0].n, "spaces": out}, man)
    return EXIT_OK


def _square(spaces) -> None:
    n = spaces[0].n
    if len(spaces) != n:
        raise InputError(f"need exactly {n} spaces in {n} variables, got {len(spaces)}")


def cmd_mv(args) -> int:
    spaces = read_system(args.system)
    _square(spaces)
    seed = resolve_seed(args.seed)
    man = RunManifest("mv", [args.system], seed, {"method": args.method})
    polys = [space_newton_polytope(L) for L in spaces]
    doc: dict = {"method": args.method}
    cells_value = interp_value = None
    if args.method in ("cells", "both"):
        audit = mixed_volume_audit(polys, seed)
        cells_value = audit.total
        doc.update(audit.to_json())
    if args.method in ("interp", "both"):
        interp_value = mv_via_interpolation(polys)
        doc["interpolationValue"] = interp_value
    if args.method == "both" and cells_value != interp_value:
        doc["value"] = None
        doc["mismatch"] = True
        _emit(doc, man)
        _say(f"MISMATCH: cells {cells_value} vs interpolation {interp_value}")
        return EXIT_INTERNAL
    doc["value"] = cells_value if cells_value is not None else interp_value
    _emit(doc, man)
    _say(f"mixed volume = {doc['value']}")
    return EXIT_OK


def cmd_check(args) -> int:
    spaces = read_system(args.system)
    _square(spaces)
    man = RunManifest("check", [args.system], None)
    report = check_main_condition(spaces)
    _emit({"status": "certified" if report.overall else "refused", "report": report.to_json()}, man)
    _summarize_report(report)
    return EXIT_OK if report.overall else EXIT_REFUSED


def _summarize_report(report) -> None:
    for s in report.per_space:
        if not s.dim_ok:
            _say(f"space {s.index}: dim(Newt) = {s.dim} < {s.n}")
        for v in s.violations:
            verts = ", ".join("(" + ", ".join(str(c) for c in p) + ")" for p in v.face_vertices)
            _say(
                f"space {s.index}: face {v.face_id} conv{{{verts}}} (normal {list(v.normal)}) "
                f"meets generator {v.generator} in a {v.intersection_dim}-dimensional set"
            )
    _say("condition holds" if report.overall else "condition fails: not certified")


def cmd_index(args) -> int:
    spaces = read_system(args.system)
    _square(spaces)
    seed = resolve_seed(args.seed)
    man = RunManifest("index", [args.system], seed)
    res = intersection_index(spaces, seed)
    _emit(res.to_json(), man)
    if res.status is Status.CERTIFIED:
        _say(f"certified: intersection index = {res.value}")
        return EXIT_OK
    _summarize_report(res.report)
    return EXIT_REFUSED


def verify_network(
    net: OscillatorNetwork, seed: int, config: PathTrackerConfig | None = None, symmetric: bool = False
) -> RootCountReport | None:
    """Root-count a random instance: exact for n <= 2, homotopy for n <= 4."""
    n = net.n
    if n <= 2:
        inst = instantiate(net, seed, "rational", symmetric=symmetric)
        if n == 1:
            rep = count_torus_roots_univariate(inst.rational[0])
        else:
            rep = count_torus_roots_bivariate(*inst.rational)
        rep.seed = seed
        return rep
    if n <= MAX_SOLVE_N:
        inst = instantiate(net, seed, "complex", symmetric=symmetric)
        return count_torus_roots_homotopy(list(inst.complex_terms), seed, config)
    return None


def _kuramoto_one(path: str, verify: bool, seed: int, symmetric: bool) -> tuple[dict, int, str]:
    net = read_graph(path)
    res = intersection_index(build_spaces(net), seed)
    doc = res.to_json()
    doc["graph"] = {"path": path, "nodes": net.node_count, "edges": len(net.edges)}
    if res.status is not Status.CERTIFIED:
        return doc, EXIT_REFUSED, f"{path}: refused ({res.reason})"
    code = EXIT_OK
    msg = f"{path}: certified {res.value}"
    if verify:
        rep = verify_network(net, seed, symmetric=symmetric)
        if rep is None:
            doc["verification"] = {"skipped": f"n = {net.n} > {MAX_SOLVE_N}"}
            msg += ", verification skipped"
        else:
            doc["verification"] = rep.to_json()
            if rep.count != res.value or rep.failures:
                code = EXIT_MISMATCH
                msg += f", oracle MISMATCH ({rep.method} count {rep.count}, {rep.failures} failed paths)"
            else:
                msg += f", oracle {rep.method} {rep.count}"
    return doc, code, msg


def cmd_kuramoto(args) -> int:
    seed = resolve_seed(args.seed)
    target = Path(args.graph)
    flags = {"verify": args.verify, "symmetric": args.symmetric, "threads": args.threads}
    if not target.is_dir():
        man = RunManifest("kuramoto", [str(target)], seed, flags)
        doc, code, msg = _kuramoto_one(str(target), args.verify, seed, args.symmetric)
        _emit(doc, man)
        _say(msg)
        return code
    files = sorted(p for p in target.iterdir() if p.is_file() and p.suffix != ".json" and not p.name.startswith("."))
    if not files:
        raise InputError(f"{target}: no graph files")
    out_dir = Path(args.out) if args.out else target
    out_dir.mkdir(parents=True, exist_ok=True)
    man = RunManifest("kuramoto", [str(p) for p in files], seed, {**flags, "out": str(out_dir)})
    jobs = [(str(p), args.verify, seed, args.symmetric) for p in files]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_kuramoto_safe, *zip(*jobs)))
    else:
        results = [_kuramoto_safe(*j) for j in jobs]
    summary = []
    worst = EXIT_OK
    for p, (doc, code, msg) in zip(files, results):
        dest = out_dir / f"{p.stem}.certificate.json"
        doc = dict(doc)
        doc["manifest"] = {**man.to_json(), "inputs": [str(p)]}
        dest.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        summary.append({"graph": str(p), "certificate": str(dest), "status": doc.get("status"), "value": doc.get("value"), "exitCode": code})
        _say(msg)
        worst = max(worst, code)
    _emit({"results": summary}, man)
    return worst


def _kuramoto_safe(path, verify, seed, symmetric):
    try:
        return _kuramoto_one(path, verify, seed, symmetric)
    except (NetworkError, InputError, OSError) as exc:
        return {"status": "error", "error": str(exc)}, EXIT_INPUT, f"{path}: input error: {exc}"
    except ConsistencyError as exc:
        return {"status": "error", "error": str(exc)}, EXIT_INTERNAL, f"{path}: INTERNAL: {exc}"


def _load_config(path: str | None) -> PathTrackerConfig:
    if not path:
        return PathTrackerConfig()
    try:
        data = json.loads(Path(path).read_text())
        return PathTrackerConfig.from_dict(data)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad tracker config: {exc}") from None


def cmd_solve(args) -> int:
    spaces = read_system(args.system)
    _square(spaces)
    n = spaces[0].n
    if n > MAX_SOLVE_N:
        raise InputError(f"solve supports n <= {MAX_SOLVE_N}, got n = {n}")
    seed = resolve_seed(args.seed)
    cfg = _load_config(args.config)
    method = args.method
    if method == "auto":
        method = "resultant" if n <= 2 else "homotopy"
    if method == "resultant" and n > 2:
        raise InputError("the resultant oracle handles n <= 2 only")
    man = RunManifest("solve", [args.system] + ([args.config] if args.config else []), seed, {"method": method})
    system, sampled = concrete_system(spaces, seed)
    if method == "resultant":
        rep = count_torus_roots_univariate(system[0]) if n == 1 else count_torus_roots_bivariate(*system)
        rep.seed = seed
    else:
        rep = count_torus_roots_homotopy(system, seed, cfg)
        rep.diagnostics["config"] = cfg.to_json()
    doc = rep.to_json()
    doc["sampledCoefficients"] = sampled
    _emit(doc, man)
    if rep.count is None:
        _say(f"{rep.method}: indeterminate ({rep.diagnostics})")
        return EXIT_MISMATCH
    _say(f"{rep.method}: {rep.count} torus roots ({rep.paths} paths, {rep.failures} failures)")
    return EXIT_OK


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kuramoto-bkk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker processes for batch work")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("newton", parents=[common], help="Newton polytopes of each space and generator")
    p.add_argument("system")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("mv", parents=[common], help="mixed volume of the spaces' Newton polytopes")
    p.add_argument("system")
    p.add_argument("--method", choices=("cells", "interp", "both"), default="both")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_mv)

    p = sub.add_parser("check", parents=[common], help="check the face condition")
    p.add_argument("system")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("index", parents=[common], help="certified intersection index")
    p.add_argument("system")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("kuramoto", parents=[common], help="certify a Kuramoto network (file or directory)")
    p.add_argument("--graph", required=True)
    p.add_argument("--verify", action="store_true", help="root-count a random instance (n <= 4)")
    p.add_argument("--seed", type=int)
    p.add_argument("--symmetric", action="store_true", help="sample a_ij = a_ji")
    p.add_argument("--out", help="certificate directory for batch mode")
    p.set_defaults(func=cmd_kuramoto)

    p = sub.add_parser("solve", parents=[common], help="count torus roots of a concrete system")
    p.add_argument("system")
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="path-tracker config JSON")
    p.add_argument("--method", choices=("auto", "resultant", "homotopy"), default="auto")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.threads < 1:
        _say("error: --threads must be at least 1")
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, NetworkError, NonFiniteRootSet) as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT
    except ConsistencyError as exc:
        _say(f"INTERNAL: {exc}")
        return EXIT_INTERNAL
    except DegenerateLifting as exc:
        _say(f"INTERNAL: {exc}")
        return EXIT_INTERNAL
    except ValueError as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
