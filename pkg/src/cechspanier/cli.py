"""Command-line front end.  Every subcommand prints one JSON report with
sorted keys.

Exit codes: 0 all checks pass, 1 a property was violated, 2 some verdict is
Unknown, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .complex import ComplexError, EdgePath, edge_path
from .corpus import UnresolvedReference, WorkspaceManifest, load_manifest
from .cover import CoverError, build_nerve, canonical_vertex_map
from .groups.cosets import todd_coxeter
from .groups.covering import build_covering_complex
from .groups.membership import IN, NOT_IN, UNKNOWN, Budget
from .groups.presentation import BasepointError, edge_path_group
from .groups.words import MalformedWordError, Word
from .spanier import (SpanierError, exactness_report, lift_nerve_loop, nerve_group,
                      spanier_generators, thick_spanier_generators, trivial_subgroup,
                      working_group)
from .tower import (build_star_tower, is_open_subgroup, ker_psi_probe, psi_image,
                    shape_injectivity_probe)
from .uhomotopy import null_u_homotopic_bounded, nu_membership, step_equivalent

PASS, FAIL, UNK = 0, 1, 2
INPUT_ERROR = 3


class InputError(ValueError):
    pass


def _json_default(x):
    if isinstance(x, Word):
        return list(x.letters)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, EdgePath):
        return list(x.vertices)
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".csw-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _code(statuses: Sequence[str]) -> int:
    st = set(statuses)
    if NOT_IN in st or "fail" in st:
        return FAIL
    if UNKNOWN in st or "unknown" in st:
        return UNK
    return PASS


def _need(args, name: str):
    v = getattr(args, name)
    if v is None:
        raise InputError(f"--{name.replace('_', '-')} is required")
    return v


def _budget(ws: WorkspaceManifest, args) -> Budget:
    return ws.budget(max_cosets=args.budget_cosets, search_depth=args.budget_depth)


def _cover(ws, args):
    return ws.cover(_need(args, "cover"), args.working_level)


def _tower(ws, args):
    if args.tower:
        return ws.tower(args.tower, args.working_level)
    K = ws.complex(_need(args, "complex"))
    return build_star_tower(K, 2, budget=_budget(ws, args))


def _subgroup_words(G, text: Optional[str]) -> List[Word]:
    if not text:
        return []
    return [G.presentation.word(t) for t in text.split(",") if t.strip()]


# -- subcommands -----------------------------------------------------------------

def cmd_nerve(ws, args) -> Tuple[dict, int]:
    c = _cover(ws, args)
    N = build_nerve(c)
    f = canonical_vertex_map(c)
    ok = N.verify() and f.checks["simplicial"] and f.checks["canonical"]
    rep = {"cover": c.to_json(), "nerve": N.complex.to_json(),
           "witness": [{"simplex": list(t), "base_simplex": list(s)}
                       for t, s in sorted(N.witness.items())],
           "canonical_map": {"assignment": dict(f.assignment), "checks": f.checks}}
    return rep, PASS if ok else FAIL


def cmd_pi1(ws, args) -> Tuple[dict, int]:
    if args.complex:
        K = ws.complex(args.complex)
    else:
        K = _cover(ws, args).working
    G = edge_path_group(K)
    T = trivial_subgroup(G).tietze(_budget(ws, args))
    P = G.presentation
    rep = {"complex": K.name, "presentation": P.to_json(), "text": str(P),
           "simplified": {"generators": [P.generators[i - 1] for i in T.alive],
                          "relators": [P.format(Word(r)) for r in T.relators],
                          "free": T.is_free}}
    return rep, PASS


def _system_cmd(builder):
    def run(ws, args):
        c = _cover(ws, args)
        sysm = builder(c, _budget(ws, args))
        return sysm.to_json(), PASS
    return run


def cmd_exactness(ws, args) -> Tuple[dict, int]:
    rep = exactness_report(_cover(ws, args), _budget(ws, args))
    return rep, _code([rep["overall"]])


def cmd_uhomotopy(ws, args) -> Tuple[dict, int]:
    c = _cover(ws, args)
    alpha = ws.loop(_need(args, "loop"), c.working)
    if args.path:
        beta = ws.loop(args.path, c.working)
        chain = step_equivalent(alpha, beta, c)
        rep = {"alpha": list(alpha.vertices), "beta": list(beta.vertices),
               "step_equivalent": chain is not None,
               "chain": chain.to_json() if chain else None}
        return rep, PASS
    budget = ws.budgets.get("move_budget", 200)
    res = null_u_homotopic_bounded(alpha, c, budget)
    rep = {"loop": list(alpha.vertices), "move_budget": budget, **res.to_json()}
    return rep, _code([res.status])


def cmd_nu(ws, args) -> Tuple[dict, int]:
    c = _cover(ws, args)
    loop = ws.loop(_need(args, "loop"), c.working)
    G = working_group(c)
    v = nu_membership(loop, c, _budget(ws, args))
    rep = {"cover": c.name, "loop": list(loop.vertices),
           "word": G.presentation.format(G.word_of_loop(loop)), "verdict": v.to_json()}
    return rep, UNK if v.status == UNKNOWN else PASS


def cmd_lift(ws, args) -> Tuple[dict, int]:
    c = _cover(ws, args)
    NG = nerve_group(c)
    budget = _budget(ws, args)
    if args.path:
        verts = json.loads(args.path) if args.path.strip().startswith("[") else args.path.split()
        loops = [edge_path(NG.complex, verts)]
    else:
        loops = [NG.generator_loop(i) for i in range(NG.presentation.ngens)]
    rows = []
    for E in loops:
        L = lift_nerve_loop(E, c, budget)
        rows.append({"nerve_loop": list(E.vertices), "lift": list(L.loop.vertices),
                     "word": working_group(c).presentation.format(L.word),
                     "round_trip": L.verdict.to_json()})
    return {"cover": c.name, "lifts": rows}, _code([r["round_trip"]["status"] for r in rows])


def cmd_tower(ws, args) -> Tuple[dict, int]:
    T = _tower(ws, args)
    coh = T.coherence_report()
    rep = {"tower": T.to_json(), "coherence": coh}
    statuses = [s for p in coh["pairs"] for s in p["statuses"]]
    if args.loop:
        loop = ws.loop(args.loop, T.domain)
        psi = psi_image(loop, T)
        probe = ker_psi_probe(loop, T)
        rep["psi"] = {"formatted": psi["formatted"], "coherent": psi["coherent"]}
        rep["kernel_probe"] = probe
        statuses += [v.status for v in psi["coherence"]]
        if not probe["agree"]:
            statuses.append(NOT_IN)
    return rep, _code(statuses)


def cmd_probe(ws, args) -> Tuple[dict, int]:
    T = _tower(ws, args)
    cap = args.word_cap or ws.budgets.get("word_cap", 4)
    rep = shape_injectivity_probe(T.levels[0].base.root, T, cap)
    if rep["candidates"]:
        return rep, FAIL
    return rep, UNK if rep["unknown"] else PASS


def cmd_open_subgroup(ws, args) -> Tuple[dict, int]:
    T = _tower(ws, args)
    GK = edge_path_group(T.levels[0].base.root, T.basepoint)
    H = _subgroup_words(GK, _need(args, "subgroup"))
    rep = is_open_subgroup(H, T, _budget(ws, args))
    rep["subgroup"] = [GK.presentation.format(w) for w in H]
    return rep, _code([rep["status"]])


def cmd_covering(ws, args) -> Tuple[dict, int]:
    K = ws.complex(_need(args, "complex"))
    G = edge_path_group(K)
    H = _subgroup_words(G, args.subgroup)
    table = todd_coxeter(G.presentation.ngens, G.presentation.relators, H,
                         _budget(ws, args).max_cosets)
    rep = {"complex": K.name, "subgroup": [G.presentation.format(w) for w in H],
           "coset_table": table.to_json()}
    if not table.complete:
        rep["reason"] = "coset enumeration did not complete: index infinite or over budget"
        return rep, UNK
    cov = build_covering_complex(K, table, G)
    rep["covering"] = {**cov.to_json(), "complex": cov.complex.to_json(),
                       "projection": dict(cov.projection.assignment)}
    ok = all(v for k, v in cov.checks.items() if isinstance(v, bool))
    return rep, PASS if ok else FAIL


COMMANDS: Dict[str, Callable] = {
    "nerve": cmd_nerve,
    "pi1": cmd_pi1,
    "spanier": _system_cmd(spanier_generators),
    "thick-spanier": _system_cmd(thick_spanier_generators),
    "exactness": cmd_exactness,
    "uhomotopy": cmd_uhomotopy,
    "nu": cmd_nu,
    "lift": cmd_lift,
    "tower": cmd_tower,
    "probe-injectivity": cmd_probe,
    "open-subgroup": cmd_open_subgroup,
    "covering": cmd_covering,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cechspanier",
                                description="Nerves, Spanier groups and shape probes on finite complexes.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--complex")
    p.add_argument("--cover")
    p.add_argument("--tower")
    p.add_argument("--loop", help="named loop, JSON vertex list, or whitespace separated vertices")
    p.add_argument("--path", help="second path (uhomotopy) or nerve loop (lift)")
    p.add_argument("--subgroup", help="comma separated subgroup generators, e.g. 'a^2'")
    p.add_argument("--budget-cosets", type=int)
    p.add_argument("--budget-depth", type=int)
    p.add_argument("--word-cap", type=int)
    p.add_argument("--working-level", type=int)
    p.add_argument("--manifest", help="corpus.json to use instead of the bundled one")
    p.add_argument("--out")
    return p


def run(command: str, manifest: WorkspaceManifest, args) -> Tuple[dict, int]:
    if command not in COMMANDS:
        return {"error": f"unknown command {command!r}"}, INPUT_ERROR
    for flag in ("budget_cosets", "budget_depth", "word_cap", "working_level"):
        v = getattr(args, flag, None)
        if v is not None and v <= 0 and not (flag == "working_level" and v == 0):
            return {"error": f"--{flag.replace('_', '-')} must be positive"}, INPUT_ERROR
    try:
        return COMMANDS[command](manifest, args)
    except (InputError, UnresolvedReference, CoverError, ComplexError, SpanierError,
            MalformedWordError, BasepointError, json.JSONDecodeError, KeyError) as e:
        return {"error": str(e), "error_type": type(e).__name__}, INPUT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else 0
    try:
        ws = load_manifest(args.manifest)
    except (OSError, ValueError, LookupError) as e:
        report, code = {"error": f"cannot load manifest: {e}"}, INPUT_ERROR
    else:
        report, code = run(args.command, ws, args)
    report = {"command": args.command, "exit_code": code, "report": report}
    text = dumps(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
