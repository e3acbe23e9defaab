"""Command-line front-end: generation, gadgets, packing, verification.

Subcommands
-----------
gen gnp|gnd         seeded random graphs, written as edge lists
gadget ...          anti-edge | fake-edge | nabla | transformer | absorber
density             exact rooted density / 2-density of an edge-list graph
fixer ...           build | select | apply
pack gnp|gnd        the full packing pipeline on one random graph
fractional ...      gadget | boost | verify | sample
verify ...          packing | decomposition | transformer | absorber | omni
bench               repeated pack trials, aggregate JSON

Every subcommand is a thin wrapper over one library call.  Exit codes:
0 success, 1 domain failure (verification false, infeasible instance,
malformed input file), 2 usage error.  Randomized subcommands (gen,
pack, fractional sample, bench) take --seed or CLIQUEFORGE_SEED and
echo the seed to stderr, so stdout stays a clean artifact.

Graph artifacts use the edge-list format ("n m" header, one "u v" line
per edge); bundles written with -o get a JSON sidecar at <out>.json
holding roots and certificates, which the verify subcommands read back.
"""

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .density import max_2_density, max_rooted_density, rooted_2_density
from .fixers import EmbeddedFixer, FixerBlueprint, apply_fixer, inductive_select, realize_fixer
from .fractional import (
    edge_gadget,
    fractional_kq_decomposition,
    fractional_problems,
    parse_weighting,
    sample_regular_cliques,
    serialize_weighting,
)
from .gadgets import (
    AbsorberBundle,
    TransformerBundle,
    anti_clique_absorber,
    anti_edge,
    fake_edge,
    load_bundle,
    nabla,
    nabla_absorber,
    serialize_bundle,
    star_transformer,
    tilde_nabla,
    verify_omni_absorber,
)
from .graphs import (
    leave_lower_bound_check,
    parse_graph,
    parse_packing,
    serialize_graph,
    serialize_packing,
    verify_packing,
)
from .pipeline import PackOptions, bench, pack_gnd, pack_gnp
from .randgraphs import gnd, gnp, stream
from .solver import verify_absorber, verify_transformer


# ===================================================================
# Shared plumbing
# ===================================================================


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from None


def _read_graph(path: str):
    return parse_graph(_read_text(path))


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text)


def _emit_json(args, doc) -> None:
    _write(getattr(args, "out", None), json.dumps(doc, indent=2, sort_keys=True))


def _print_json(doc) -> None:
    # for subcommands whose -o is a graph/packing/weighting artifact,
    # not the report target
    _write(None, json.dumps(doc, indent=2, sort_keys=True))


def _graph_doc(g) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def _resolve_seed(args) -> int:
    if args.seed is not None:
        s = args.seed
    else:
        env = os.environ.get("CLIQUEFORGE_SEED")
        if env is None:
            args.parser.error("--seed is required (or set CLIQUEFORGE_SEED)")
        try:
            s = int(env)
        except ValueError:
            args.parser.error(f"CLIQUEFORGE_SEED must be an integer, got {env!r}")
    print(f"seed {s}", file=sys.stderr)
    return s


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}") from None


def _write_bundle(args, obj) -> int:
    graph, sidecar = serialize_bundle(obj)
    if args.json:
        _emit_json(args, {"graph": _graph_doc(graph), **sidecar})
    else:
        _write(args.out, serialize_graph(graph))
        if args.out is not None:
            Path(args.out + ".json").write_text(
                json.dumps(sidecar, indent=2, sort_keys=True)
            )
    return 0


def _load_bundle_files(path: str):
    graph = _read_graph(path)
    sidecar_path = path + ".json"
    try:
        sidecar = json.loads(_read_text(sidecar_path))
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad sidecar {sidecar_path}: {exc}") from None
    return load_bundle(graph, sidecar)


# ===================================================================
# gen
# ===================================================================


def cmd_gen_gnp(args) -> int:
    seed = _resolve_seed(args)
    g = gnp(args.n, args.p, seed)
    if args.json:
        _emit_json(args, {"kind": "gnp", "p": str(args.p), "seed": seed, **_graph_doc(g)})
    else:
        _write(args.out, serialize_graph(g))
    return 0


def cmd_gen_gnd(args) -> int:
    seed = _resolve_seed(args)
    g = gnd(args.n, args.d, seed)
    if args.json:
        _emit_json(args, {"kind": "gnd", "d": args.d, "seed": seed, **_graph_doc(g)})
    else:
        _write(args.out, serialize_graph(g))
    return 0


# ===================================================================
# gadget
# ===================================================================


def cmd_gadget_anti_edge(args) -> int:
    return _write_bundle(args, anti_edge(args.q))


def cmd_gadget_fake_edge(args) -> int:
    return _write_bundle(args, fake_edge(args.q))


def cmd_gadget_nabla(args) -> int:
    base = _read_graph(args.base)
    g = tilde_nabla(args.q, base) if args.tilde else nabla(args.q, base)
    if args.json:
        _emit_json(args, {"kind": "tilde_nabla" if args.tilde else "nabla", "q": args.q, **_graph_doc(g)})
    else:
        _write(args.out, serialize_graph(g))
    return 0


def cmd_gadget_transformer(args) -> int:
    return _write_bundle(args, star_transformer(args.q, args.k))


def cmd_gadget_absorber(args) -> int:
    booster = anti_clique_absorber(args.q, args.k)
    if args.l is None:
        bundle = booster
    else:
        l = _read_graph(args.l)
        # the booster doubles as the base when L is its own leftover
        base = booster if l.edges == booster.l.edges else None
        bundle = nabla_absorber(l, booster, base=base)
    return _write_bundle(args, bundle)


# ===================================================================
# density
# ===================================================================


def cmd_density(args) -> int:
    g = _read_graph(args.input)
    if args.limit > 24:
        print(f"warning: enumeration limit {args.limit} above the default 24, this can take hours", file=sys.stderr)
    roots = args.roots if args.roots is not None else []
    if args.plain:
        val = max_rooted_density(g, roots, args.limit)
    elif args.roots is not None:
        val = rooted_2_density(g, roots, args.limit)
    else:
        val = max_2_density(g, args.limit)
    text = f"{val.value.numerator}/{val.value.denominator}"
    if args.json:
        _emit_json(args, {"value": text, "witness": list(val.witness), "kind": val.kind})
    else:
        print(text)
    return 0


# ===================================================================
# fixer
# ===================================================================


def cmd_fixer_build(args) -> int:
    if not args.json and args.out is None:
        args.parser.error("-o is required (or use --json)")
    host, emb = realize_fixer(args.q, args.n_core)
    if args.json:
        _emit_json(args, {"host": _graph_doc(host), "embedding": json.loads(emb.to_json())})
        return 0
    _write(args.out, serialize_graph(host))
    emb_path = args.emb if args.emb is not None else args.out + ".json"
    Path(emb_path).write_text(emb.to_json())
    return 0


def cmd_fixer_select(args) -> int:
    if len(args.degrees) != args.n:
        args.parser.error(f"--degrees needs exactly {args.n} values, got {len(args.degrees)}")
    bp = FixerBlueprint(args.q, args.n)
    counts = inductive_select(bp, args.m, args.degrees)
    if args.json:
        _emit_json(args, {"counts": [[u, v, c] for (u, v), c in sorted(counts.items())]})
    else:
        for (u, v), c in sorted(counts.items()):
            print(f"{u} {v} {c}")
    return 0


def cmd_fixer_apply(args) -> int:
    g = _read_graph(args.graph)
    emb = EmbeddedFixer.from_json(_read_text(args.emb))
    res = apply_fixer(g, emb)
    if args.out is not None:
        Path(args.out).write_text(serialize_graph(res.graph))
    if args.json:
        _print_json(
            {
                "deleted": [list(e) for e in res.deleted],
                "m": res.graph.m,
                "edge_target": res.edge_target,
                "degree_targets": list(res.degree_targets),
            }
        )
    else:
        print(f"deleted {len(res.deleted)} edges, {res.graph.m} remain")
    return 0


# ===================================================================
# pack
# ===================================================================


def _pack_options(args) -> PackOptions:
    opts = PackOptions()
    opts.absorb = args.absorb
    return opts


def _finish_pack(args, rep) -> int:
    if args.out is not None:
        Path(args.out).write_text(serialize_packing(rep.packing))
    if args.json:
        _print_json(rep.to_json())
    else:
        par = rep.to_json()["params"]
        kind = "gnp" if par["p"] is not None else "gnd"
        knob = f"p={par['p']}" if par["p"] is not None else f"d={par['d']}"
        print(f"pack {kind}: n={par['n']} {knob} q={par['q']} seed={par['seed']}")
        st = rep.stages
        print(
            f"stages: fixer_deleted={st['fixer_deleted']} nibble={st['nibble']} "
            f"reserve={st['reserve']} absorbed={st['absorbed']}"
        )
        print(f"leave: {rep.leave} (optimal {rep.optimal_leave})")
        print(f"valid: {'yes' if rep.valid else 'no'}")
    return 0 if rep.valid else 1


def cmd_pack_gnp(args) -> int:
    seed = _resolve_seed(args)
    return _finish_pack(args, pack_gnp(args.n, args.p, args.q, seed, _pack_options(args)))


def cmd_pack_gnd(args) -> int:
    seed = _resolve_seed(args)
    return _finish_pack(args, pack_gnd(args.n, args.d, args.q, seed, _pack_options(args)))


# ===================================================================
# fractional
# ===================================================================


def cmd_fractional_gadget(args) -> int:
    eg = edge_gadget(args.q, args.r)
    if args.json:
        _emit_json(
            args,
            {
                "q": eg.q,
                "r": eg.r,
                "max_abs": str(eg.max_abs),
                "bound_ok": eg.bound_ok,
                "psi": [[list(c), str(v)] for c, v in sorted(eg.psi.items())],
            },
        )
    else:
        print(f"q={eg.q} r={eg.r} max_abs={eg.max_abs} bound_ok={'yes' if eg.bound_ok else 'no'}")
        for c, v in sorted(eg.psi.items()):
            print(" ".join(str(x) for x in c) + f"  {v}")
    return 0


def cmd_fractional_boost(args) -> int:
    g = _read_graph(args.input)
    res = fractional_kq_decomposition(g, args.q)
    if args.out is not None:
        Path(args.out).write_text(serialize_weighting(res.weighting))
    if args.json:
        _print_json(
            {
                "cliques": len(res.weighting),
                "in_range": res.in_range,
                "max_deviation": str(res.max_deviation),
            }
        )
    else:
        print(
            f"cliques={len(res.weighting)} in_range={'yes' if res.in_range else 'no'} "
            f"max_deviation={res.max_deviation}"
        )
    return 0 if res.max_deviation == 0 else 1


def cmd_fractional_verify(args) -> int:
    g = _read_graph(args.graph)
    w = parse_weighting(_read_text(args.weights))
    problems = fractional_problems(g, w, args.mode)
    if args.json:
        _emit_json(args, {"ok": not problems, "problems": problems})
    else:
        for p in problems:
            print(p)
        print("ok" if not problems else f"{len(problems)} problems")
    return 0 if not problems else 1


def cmd_fractional_sample(args) -> int:
    seed = _resolve_seed(args)
    w = parse_weighting(_read_text(args.weights))
    res = sample_regular_cliques(w, args.big_d, stream(seed, "sample"))
    if args.json:
        _emit_json(
            args,
            {
                "seed": seed,
                "selected": [list(c) for c in res.selected],
                "max_deviation": str(res.max_deviation),
            },
        )
    else:
        print(f"selected={len(res.selected)} max_deviation={res.max_deviation}")
    return 0


# ===================================================================
# verify
# ===================================================================


def cmd_verify_packing(args) -> int:
    g = _read_graph(args.graph)
    p = parse_packing(_read_text(args.packing))
    rep = verify_packing(g, p)
    bound_ok = rep.valid and leave_lower_bound_check(g, p)
    if args.json:
        _emit_json(
            args,
            {
                "valid": rep.valid,
                "covered": rep.covered,
                "leave": rep.leave.m,
                "bound_ok": bound_ok,
                "problems": list(rep.problems),
            },
        )
    else:
        for line in rep.problems:
            print(line)
        if rep.valid:
            print(f"valid: covered={rep.covered} leave={rep.leave.m} bound_ok={'yes' if bound_ok else 'no'}")
        else:
            print(f"invalid: {len(rep.problems)} problems")
    return 0 if rep.valid else 1


def cmd_verify_decomposition(args) -> int:
    g = _read_graph(args.graph)
    p = parse_packing(_read_text(args.packing))
    rep = verify_packing(g, p)
    ok = rep.valid and rep.leave.m == 0
    if args.json:
        _emit_json(args, {"ok": ok, "leave": rep.leave.m, "problems": list(rep.problems)})
    else:
        for line in rep.problems:
            print(line)
        if ok:
            print(f"decomposition: {rep.covered} edges in {len(p.cliques)} cliques")
        elif rep.valid:
            print(f"not a decomposition: leave has {rep.leave.m} edges")
        else:
            print(f"invalid packing: {len(rep.problems)} problems")
    return 0 if ok else 1


def _verify_bundle(args, want, checker, label) -> int:
    bundle = _load_bundle_files(args.input)
    if not isinstance(bundle, want):
        raise ValueError(f"{args.input} holds a {type(bundle).__name__}, not a {label}")
    problems = checker(bundle)
    if args.json:
        _emit_json(args, {"ok": not problems, "problems": problems})
    else:
        for p in problems:
            print(p)
        print("ok" if not problems else f"{len(problems)} problems")
    return 0 if not problems else 1


def cmd_verify_transformer(args) -> int:
    return _verify_bundle(args, TransformerBundle, verify_transformer, "transformer")


def cmd_verify_absorber(args) -> int:
    return _verify_bundle(args, AbsorberBundle, verify_absorber, "absorber")


def cmd_verify_omni(args) -> int:
    x = _read_graph(args.x)
    a = _read_graph(args.absorber)
    rep = verify_omni_absorber(x, a, args.q, cap=args.cap, budget_nodes=args.budget)
    if args.json:
        _emit_json(
            args,
            {
                "ok": rep.ok,
                "checked": rep.checked,
                "failures": len(rep.failures),
                "unknown": len(rep.unknown),
                "refinement": rep.refinement,
            },
        )
    else:
        print(
            f"checked={rep.checked} failures={len(rep.failures)} "
            f"unknown={len(rep.unknown)} refinement={rep.refinement}"
        )
    return 0 if rep.ok else 1


# ===================================================================
# bench
# ===================================================================


def cmd_bench(args) -> int:
    if args.kind == "gnp" and args.p is None:
        args.parser.error("bench --kind gnp needs --p")
    if args.kind == "gnd" and args.d is None:
        args.parser.error("bench --kind gnd needs --d")
    seed = _resolve_seed(args)
    doc, _ = bench(
        args.kind,
        args.n,
        args.q,
        args.trials,
        seed,
        threads=args.threads,
        p=args.p,
        d=args.d,
    )
    _emit_json(args, doc)
    return 0 if doc["aggregate"]["all_valid"] else 1


# ===================================================================
# Parser
# ===================================================================


def _add_json(sp) -> None:
    sp.add_argument("--json", action="store_true", help="machine-readable JSON output")


def _add_out(sp, help_text="output file (default stdout)") -> None:
    sp.add_argument("-o", "--out", metavar="FILE", help=help_text)


def _add_seed(sp) -> None:
    sp.add_argument("--seed", type=int, help="RNG seed (or CLIQUEFORGE_SEED)")


def _leaf(subparsers, name, func, help_text):
    sp = subparsers.add_parser(name, help=help_text)
    sp.set_defaults(func=func)
    sp.set_defaults(parser=sp)
    return sp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliqueforge",
        description="Clique packings, decompositions, and divisibility gadgets.",
    )
    top = parser.add_subparsers(dest="command", required=True)

    # ----- gen ------------------------------------------------------
    gen = top.add_parser("gen", help="seeded random graphs").add_subparsers(
        dest="model", required=True
    )
    sp = _leaf(gen, "gnp", cmd_gen_gnp, "binomial random graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=_fraction, required=True, help="edge probability (rational)")
    _add_seed(sp)
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(gen, "gnd", cmd_gen_gnd, "random d-regular graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    _add_seed(sp)
    _add_out(sp)
    _add_json(sp)

    # ----- gadget ---------------------------------------------------
    gad = top.add_parser("gadget", help="divisibility gadget constructions").add_subparsers(
        dest="which", required=True
    )
    sp = _leaf(gad, "anti-edge", cmd_gadget_anti_edge, "edge-parity flip gadget")
    sp.add_argument("--q", type=int, required=True)
    _add_out(sp, "graph file; sidecar goes to FILE.json")
    _add_json(sp)
    sp = _leaf(gad, "fake-edge", cmd_gadget_fake_edge, "removable edge copy gadget")
    sp.add_argument("--q", type=int, required=True)
    _add_out(sp, "graph file; sidecar goes to FILE.json")
    _add_json(sp)
    sp = _leaf(gad, "nabla", cmd_gadget_nabla, "anti-edge expansion of a base graph")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--base", required=True, metavar="FILE", help="base graph edge list")
    sp.add_argument("--tilde", action="store_true", help="keep the base edges too")
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(gad, "transformer", cmd_gadget_transformer, "star-to-star transformer")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", type=int, default=2, help="interior path length (q=3 only)")
    _add_out(sp, "graph file; sidecar goes to FILE.json")
    _add_json(sp)
    sp = _leaf(gad, "absorber", cmd_gadget_absorber, "absorber bundle with certificates")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", type=int, default=2, help="anti-clique parameter")
    sp.add_argument("--l", metavar="FILE", help="absorb this graph instead of the anti-clique")
    _add_out(sp, "graph file; sidecar goes to FILE.json")
    _add_json(sp)

    # ----- density --------------------------------------------------
    sp = _leaf(top, "density", cmd_density, "exact density maxima with witnesses")
    sp.add_argument("--in", dest="input", required=True, metavar="FILE")
    sp.add_argument("--roots", type=_csv_ints, metavar="CSV", help="rooted 2-density at these roots (plain 2-density without)")
    sp.add_argument("--plain", action="store_true", help="edges-per-nonroot ratio instead of the 2-density")
    sp.add_argument("--limit", type=int, default=24, help="enumeration size cap")
    _add_out(sp)
    _add_json(sp)

    # ----- fixer ----------------------------------------------------
    fix = top.add_parser("fixer", help="divisibility fixers").add_subparsers(
        dest="step", required=True
    )
    sp = _leaf(fix, "build", cmd_fixer_build, "host graph that is exactly one fixer")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n-core", type=int, default=10, help="path core size")
    sp.add_argument("-o", "--out", metavar="FILE", help="host graph file (required without --json)")
    sp.add_argument("--emb", metavar="FILE", help="embedding JSON (default OUT.json)")
    _add_json(sp)
    sp = _leaf(fix, "select", cmd_fixer_select, "copy counts for given residue targets")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True, help="blueprint vertex count")
    sp.add_argument("--m", type=int, required=True, help="edge count target")
    sp.add_argument("--degrees", type=_csv_ints, required=True, metavar="CSV")
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(fix, "apply", cmd_fixer_apply, "delete copies to reach divisibility")
    sp.add_argument("--graph", required=True, metavar="FILE")
    sp.add_argument("--emb", required=True, metavar="FILE", help="embedding JSON")
    sp.add_argument("-o", "--out", metavar="FILE", help="write the divisible remainder here")
    _add_json(sp)

    # ----- pack -----------------------------------------------------
    pack = top.add_parser("pack", help="full packing pipeline").add_subparsers(
        dest="model", required=True
    )
    for model, func in (("gnp", cmd_pack_gnp), ("gnd", cmd_pack_gnd)):
        sp = _leaf(pack, model, func, f"pack a {model} sample")
        sp.add_argument("--n", type=int, required=True)
        if model == "gnp":
            sp.add_argument("--p", type=_fraction, required=True)
        else:
            sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--absorb", action="store_true", help="arm the reserve absorber")
        _add_seed(sp)
        sp.add_argument("-o", "--out", metavar="FILE", help="write the packing here")
        _add_json(sp)

    # ----- fractional -----------------------------------------------
    fra = top.add_parser("fractional", help="fractional decomposition tools").add_subparsers(
        dest="tool", required=True
    )
    sp = _leaf(fra, "gadget", cmd_fractional_gadget, "signed edge gadget weights")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--r", type=int, default=2, help="root set size")
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(fra, "boost", cmd_fractional_boost, "exact fractional decomposition")
    sp.add_argument("--in", dest="input", required=True, metavar="FILE")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("-o", "--out", metavar="FILE", help="write the weighting here")
    _add_json(sp)
    sp = _leaf(fra, "verify", cmd_fractional_verify, "check a clique weighting")
    sp.add_argument("--graph", required=True, metavar="FILE")
    sp.add_argument("--weights", required=True, metavar="FILE")
    sp.add_argument("--mode", choices=("packing", "decomposition"), required=True)
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(fra, "sample", cmd_fractional_sample, "Bernoulli draw from a weighting")
    sp.add_argument("--weights", required=True, metavar="FILE")
    sp.add_argument("--big-d", type=_fraction, required=True, help="regularity scale D")
    _add_seed(sp)
    _add_out(sp)
    _add_json(sp)

    # ----- verify ---------------------------------------------------
    ver = top.add_parser("verify", help="check artifacts").add_subparsers(
        dest="what", required=True
    )
    sp = _leaf(ver, "packing", cmd_verify_packing, "edge-disjointness and leave bound")
    sp.add_argument("--graph", required=True, metavar="FILE")
    sp.add_argument("--packing", required=True, metavar="FILE")
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(ver, "decomposition", cmd_verify_decomposition, "packing with empty leave")
    sp.add_argument("--graph", required=True, metavar="FILE")
    sp.add_argument("--packing", required=True, metavar="FILE")
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(ver, "transformer", cmd_verify_transformer, "transformer certificates")
    sp.add_argument("--in", dest="input", required=True, metavar="FILE", help="graph; sidecar at FILE.json")
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(ver, "absorber", cmd_verify_absorber, "absorber certificates")
    sp.add_argument("--in", dest="input", required=True, metavar="FILE", help="graph; sidecar at FILE.json")
    _add_out(sp)
    _add_json(sp)
    sp = _leaf(ver, "omni", cmd_verify_omni, "exhaustive omni-absorber check")
    sp.add_argument("--x", required=True, metavar="FILE", help="the absorbed zone")
    sp.add_argument("--absorber", required=True, metavar="FILE")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--cap", type=int, default=10, help="max e(X) for exhaustion")
    sp.add_argument("--budget", type=int, default=200_000, help="search node budget per subset")
    _add_out(sp)
    _add_json(sp)

    # ----- bench ----------------------------------------------------
    sp = _leaf(top, "bench", cmd_bench, "repeated pack trials, JSON summary")
    sp.add_argument("--kind", choices=("gnp", "gnd"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--p", type=_fraction, help="edge probability (gnp)")
    sp.add_argument("--d", type=int, help="degree (gnd)")
    sp.add_argument("--threads", type=int, default=1)
    _add_seed(sp)
    _add_out(sp, "JSON file (default stdout)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
