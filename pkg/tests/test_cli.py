"""Golden tests for the command line.

Each subcommand wraps exactly one library call, so every check here
compares the CLI surface (stdout, stderr, files, exit code) against
the result of making that call directly.  Exit code conventions:
0 success, 1 domain failure, 2 usage error (argparse SystemExit).
"""

import json
from fractions import Fraction

import pytest

from cliqueforge import cli
from cliqueforge.density import max_2_density, max_rooted_density, rooted_2_density
from cliqueforge.fixers import FixerBlueprint, apply_fixer, inductive_select, realize_fixer
from cliqueforge.fractional import (
    edge_gadget,
    fractional_kq_decomposition,
    parse_weighting,
    sample_regular_cliques,
    serialize_weighting,
)
from cliqueforge.gadgets import (
    anti_clique_absorber,
    anti_edge,
    fake_edge,
    nabla,
    nabla_absorber,
    naive_omni_absorber,
    serialize_bundle,
    star_transformer,
    tilde_nabla,
    verify_omni_absorber,
)
from cliqueforge.graphs import (
    Graph,
    Packing,
    serialize_graph,
    serialize_packing,
)
from cliqueforge.pipeline import bench, pack_gnd, pack_gnp
from cliqueforge.randgraphs import gnd, gnp, stream
from cliqueforge.solver import min_leave_packing

from oracles import complete_graph, cycle_graph


def run(argv, capsys):
    rc = cli.main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def usage_error(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    return capsys.readouterr().err


def fraction_text(value) -> str:
    return f"{value.numerator}/{value.denominator}"


# ===================================================================
# gen
# ===================================================================


def test_gen_gnp_writes_the_library_graph(tmp_path, capsys):
    out = tmp_path / "g.txt"
    rc, stdout, stderr = run(
        ["gen", "gnp", "--n", "20", "--p", "1/2", "--seed", "7", "-o", str(out)], capsys
    )
    assert rc == 0
    assert stderr == "seed 7\n"
    assert stdout == ""
    assert out.read_text() == serialize_graph(gnp(20, Fraction(1, 2), 7))


def test_gen_gnp_defaults_to_stdout(capsys):
    rc, stdout, _ = run(["gen", "gnp", "--n", "9", "--p", "1/3", "--seed", "1"], capsys)
    assert rc == 0
    assert stdout == serialize_graph(gnp(9, Fraction(1, 3), 1))


def test_gen_gnp_json_document(capsys):
    rc, stdout, _ = run(["gen", "gnp", "--n", "8", "--p", "2/5", "--seed", "3", "--json"], capsys)
    assert rc == 0
    g = gnp(8, Fraction(2, 5), 3)
    assert json.loads(stdout) == {
        "kind": "gnp",
        "p": "2/5",
        "seed": 3,
        "n": 8,
        "edges": [list(e) for e in g.sorted_edges()],
    }


def test_gen_gnd_writes_the_library_graph(tmp_path, capsys):
    out = tmp_path / "g.txt"
    rc, _, stderr = run(["gen", "gnd", "--n", "12", "--d", "5", "--seed", "4", "-o", str(out)], capsys)
    assert rc == 0
    assert stderr == "seed 4\n"
    assert out.read_text() == serialize_graph(gnd(12, 5, 4))


def test_seed_comes_from_the_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CLIQUEFORGE_SEED", "11")
    out = tmp_path / "g.txt"
    rc, _, stderr = run(["gen", "gnp", "--n", "10", "--p", "1/2", "-o", str(out)], capsys)
    assert rc == 0
    assert stderr == "seed 11\n"
    assert out.read_text() == serialize_graph(gnp(10, Fraction(1, 2), 11))


def test_missing_seed_is_a_usage_error(capsys, monkeypatch):
    monkeypatch.delenv("CLIQUEFORGE_SEED", raising=False)
    err = usage_error(["gen", "gnp", "--n", "5", "--p", "1/2"], capsys)
    assert "--seed" in err


def test_garbage_environment_seed_is_a_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("CLIQUEFORGE_SEED", "eleven")
    usage_error(["gen", "gnp", "--n", "5", "--p", "1/2"], capsys)


def test_unknown_subcommand_is_a_usage_error(capsys):
    usage_error(["frobnicate"], capsys)


def test_malformed_probability_is_a_usage_error(capsys):
    usage_error(["gen", "gnp", "--n", "5", "--p", "half", "--seed", "1"], capsys)


# ===================================================================
# density
# ===================================================================


def test_density_rooted_prints_the_exact_value(tmp_path, capsys):
    gad = fake_edge(3)
    f = tmp_path / "fe.txt"
    f.write_text(serialize_graph(gad.graph))
    rc, stdout, _ = run(["density", "--in", str(f), "--roots", "0,1"], capsys)
    assert rc == 0
    assert stdout == "4/3\n"


def test_density_modes_match_the_library(tmp_path, capsys):
    g = cycle_graph(6)
    f = tmp_path / "c6.txt"
    f.write_text(serialize_graph(g))
    for extra, want in [
        ([], max_2_density(g)),
        (["--roots", "0,3"], rooted_2_density(g, [0, 3])),
        (["--plain", "--roots", "0"], max_rooted_density(g, [0])),
        (["--plain"], max_rooted_density(g, [])),
    ]:
        rc, stdout, _ = run(["density", "--in", str(f)] + extra, capsys)
        assert rc == 0
        assert stdout == fraction_text(want.value) + "\n"


def test_density_json_reports_the_witness(tmp_path, capsys):
    g = cycle_graph(6)
    f = tmp_path / "c6.txt"
    f.write_text(serialize_graph(g))
    rc, stdout, _ = run(["density", "--in", str(f), "--json"], capsys)
    assert rc == 0
    want = max_2_density(g)
    assert json.loads(stdout) == {
        "value": fraction_text(want.value),
        "witness": list(want.witness),
        "kind": want.kind,
    }


def test_density_limit_above_default_warns(tmp_path, capsys):
    f = tmp_path / "k4.txt"
    f.write_text(serialize_graph(complete_graph(4)))
    rc, _, stderr = run(["density", "--in", str(f), "--limit", "25"], capsys)
    assert rc == 0
    assert "warning" in stderr


# ===================================================================
# gadget bundles
# ===================================================================


def test_gadget_transformer_roundtrips_through_verify(tmp_path, capsys):
    out = tmp_path / "t.txt"
    rc, _, _ = run(["gadget", "transformer", "--q", "3", "--k", "2", "-o", str(out)], capsys)
    assert rc == 0
    graph, sidecar = serialize_bundle(star_transformer(3, 2))
    assert out.read_text() == serialize_graph(graph)
    assert json.loads((tmp_path / "t.txt.json").read_text()) == json.loads(json.dumps(sidecar))

    rc, stdout, _ = run(["verify", "transformer", "--in", str(out)], capsys)
    assert rc == 0
    assert stdout == "ok\n"

    rc, _, stderr = run(["verify", "absorber", "--in", str(out)], capsys)
    assert rc == 1
    assert "not a absorber" in stderr


def test_gadget_absorber_roundtrips_through_verify(tmp_path, capsys):
    out = tmp_path / "a.txt"
    rc, _, _ = run(["gadget", "absorber", "--q", "3", "-o", str(out)], capsys)
    assert rc == 0
    graph, _ = serialize_bundle(anti_clique_absorber(3, 2))
    assert out.read_text() == serialize_graph(graph)
    rc, stdout, _ = run(["verify", "absorber", "--in", str(out)], capsys)
    assert rc == 0
    assert stdout == "ok\n"


def test_gadget_absorber_takes_a_leftover_file(tmp_path, capsys):
    # the booster's own leftover forces the base fallback path
    booster = anti_clique_absorber(3, 2)
    lf = tmp_path / "l.txt"
    lf.write_text(serialize_graph(booster.l))
    out = tmp_path / "a.txt"
    rc, _, _ = run(["gadget", "absorber", "--q", "3", "--l", str(lf), "-o", str(out)], capsys)
    assert rc == 0
    graph, _ = serialize_bundle(nabla_absorber(booster.l, booster, base=booster))
    assert out.read_text() == serialize_graph(graph)


def test_gadget_absorber_leftover_with_its_own_decomposition(tmp_path, capsys):
    lf = tmp_path / "k3.txt"
    lf.write_text(serialize_graph(complete_graph(3)))
    out = tmp_path / "a.txt"
    rc, _, _ = run(["gadget", "absorber", "--q", "3", "--l", str(lf), "-o", str(out)], capsys)
    assert rc == 0
    graph, _ = serialize_bundle(nabla_absorber(complete_graph(3), anti_clique_absorber(3, 2)))
    assert out.read_text() == serialize_graph(graph)


def test_gadget_anti_edge_json_combines_graph_and_sidecar(capsys):
    rc, stdout, _ = run(["gadget", "anti-edge", "--q", "4", "--json"], capsys)
    assert rc == 0
    graph, sidecar = serialize_bundle(anti_edge(4))
    want = {"graph": {"n": graph.n, "edges": [list(e) for e in graph.sorted_edges()]}, **sidecar}
    assert json.loads(stdout) == json.loads(json.dumps(want))


def test_gadget_nabla_and_tilde_write_plain_graphs(tmp_path, capsys):
    base = tmp_path / "c5.txt"
    base.write_text(serialize_graph(cycle_graph(5)))
    rc, stdout, _ = run(["gadget", "nabla", "--q", "3", "--base", str(base)], capsys)
    assert rc == 0
    assert stdout == serialize_graph(nabla(3, cycle_graph(5)))
    rc, stdout, _ = run(["gadget", "nabla", "--q", "3", "--base", str(base), "--tilde"], capsys)
    assert rc == 0
    assert stdout == serialize_graph(tilde_nabla(3, cycle_graph(5)))


# ===================================================================
# fixer
# ===================================================================


def test_fixer_build_writes_host_and_embedding(tmp_path, capsys):
    out = tmp_path / "host.txt"
    rc, _, _ = run(["fixer", "build", "--q", "3", "-o", str(out)], capsys)
    assert rc == 0
    host, emb = realize_fixer(3, 10)
    assert out.read_text() == serialize_graph(host)
    assert (tmp_path / "host.txt.json").read_text() == emb.to_json()


def test_fixer_build_without_output_is_a_usage_error(capsys):
    usage_error(["fixer", "build", "--q", "3"], capsys)


def test_fixer_select_prints_the_copy_counts(capsys):
    rc, stdout, _ = run(
        ["fixer", "select", "--q", "3", "--n", "6", "--m", "2", "--degrees", "0,1,1,0,0,0"],
        capsys,
    )
    assert rc == 0
    counts = inductive_select(FixerBlueprint(3, 6), 2, [0, 1, 1, 0, 0, 0])
    assert stdout == "".join(f"{u} {v} {c}\n" for (u, v), c in sorted(counts.items()))


def test_fixer_select_infeasible_target_fails_cleanly(capsys):
    rc, _, stderr = run(
        ["fixer", "select", "--q", "3", "--n", "6", "--m", "1", "--degrees", "1,0,0,0,0,0"],
        capsys,
    )
    assert rc == 1
    assert stderr.startswith("error:")


def test_fixer_select_wrong_degree_count_is_a_usage_error(capsys):
    usage_error(["fixer", "select", "--q", "3", "--n", "6", "--m", "2", "--degrees", "0,1"], capsys)


def test_fixer_apply_reports_and_writes_the_remainder(tmp_path, capsys):
    host_f = tmp_path / "host.txt"
    run(["fixer", "build", "--q", "3", "-o", str(host_f)], capsys)
    host, emb = realize_fixer(3, 10)
    res = apply_fixer(host, emb)

    rem_f = tmp_path / "rem.txt"
    rc, stdout, _ = run(
        ["fixer", "apply", "--graph", str(host_f), "--emb", str(host_f) + ".json", "-o", str(rem_f)],
        capsys,
    )
    assert rc == 0
    assert stdout == f"deleted {len(res.deleted)} edges, {res.graph.m} remain\n"
    assert rem_f.read_text() == serialize_graph(res.graph)

    rc, stdout, _ = run(
        ["fixer", "apply", "--graph", str(host_f), "--emb", str(host_f) + ".json", "--json"],
        capsys,
    )
    assert rc == 0
    assert json.loads(stdout) == {
        "deleted": [list(e) for e in res.deleted],
        "m": res.graph.m,
        "edge_target": res.edge_target,
        "degree_targets": list(res.degree_targets),
    }


# ===================================================================
# pack
# ===================================================================


def test_pack_gnp_text_report_matches_the_library(tmp_path, capsys):
    out = tmp_path / "pk.txt"
    rc, stdout, stderr = run(
        ["pack", "gnp", "--n", "24", "--p", "1/2", "--q", "3", "--seed", "5", "-o", str(out)],
        capsys,
    )
    rep = pack_gnp(24, Fraction(1, 2), 3, 5)
    assert rc == (0 if rep.valid else 1)
    assert stderr == "seed 5\n"
    st = rep.stages
    assert stdout == (
        f"pack gnp: n=24 p=1/2 q=3 seed=5\n"
        f"stages: fixer_deleted={st['fixer_deleted']} nibble={st['nibble']} "
        f"reserve={st['reserve']} absorbed={st['absorbed']}\n"
        f"leave: {rep.leave} (optimal {rep.optimal_leave})\n"
        f"valid: {'yes' if rep.valid else 'no'}\n"
    )
    assert out.read_text() == serialize_packing(rep.packing)


def test_pack_gnd_json_report_matches_the_library(capsys):
    rc, stdout, _ = run(["pack", "gnd", "--n", "18", "--d", "8", "--q", "3", "--seed", "2", "--json"], capsys)
    rep = pack_gnd(18, 8, 3, 2)
    assert rc == (0 if rep.valid else 1)
    doc = json.loads(stdout)
    want = rep.to_json()
    # wall time is the one nondeterministic field
    doc.pop("ms")
    want.pop("ms")
    assert doc == want


# ===================================================================
# fractional
# ===================================================================


def test_fractional_gadget_text_lists_the_weights(capsys):
    rc, stdout, _ = run(["fractional", "gadget", "--q", "3", "--r", "2"], capsys)
    assert rc == 0
    eg = edge_gadget(3, 2)
    lines = [f"q=3 r=2 max_abs={eg.max_abs} bound_ok={'yes' if eg.bound_ok else 'no'}"]
    for c, v in sorted(eg.psi.items()):
        lines.append(" ".join(str(x) for x in c) + f"  {v}")
    assert stdout == "\n".join(lines) + "\n"


def test_fractional_boost_verify_sample_flow(tmp_path, capsys):
    gfile = tmp_path / "k7.txt"
    gfile.write_text(serialize_graph(complete_graph(7)))
    wfile = tmp_path / "w.txt"
    rc, stdout, _ = run(
        ["fractional", "boost", "--in", str(gfile), "--q", "3", "-o", str(wfile), "--json"],
        capsys,
    )
    assert rc == 0
    res = fractional_kq_decomposition(complete_graph(7), 3)
    assert json.loads(stdout) == {"cliques": 35, "in_range": True, "max_deviation": "0"}
    assert wfile.read_text() == serialize_weighting(res.weighting)

    rc, stdout, _ = run(
        ["fractional", "verify", "--graph", str(gfile), "--weights", str(wfile), "--mode", "decomposition"],
        capsys,
    )
    assert rc == 0
    assert stdout == "ok\n"

    rc, stdout, stderr = run(
        ["fractional", "sample", "--weights", str(wfile), "--big-d", "5", "--seed", "3"], capsys
    )
    assert rc == 0
    assert stderr == "seed 3\n"
    # mirror the exact path: parse the file back, then draw from the stream
    w = parse_weighting(wfile.read_text())
    want = sample_regular_cliques(w, Fraction(5), stream(3, "sample"))
    assert stdout == f"selected={len(want.selected)} max_deviation={want.max_deviation}\n"


def test_fractional_boost_reports_domain_failure(tmp_path, capsys):
    gfile = tmp_path / "k4.txt"
    gfile.write_text(serialize_graph(complete_graph(4)))
    rc, _, stderr = run(["fractional", "boost", "--in", str(gfile), "--q", "3"], capsys)
    assert rc == 1
    assert stderr.startswith("error:")


# ===================================================================
# verify
# ===================================================================


def test_verify_packing_and_decomposition_on_k7(tmp_path, capsys):
    g = complete_graph(7)
    gfile = tmp_path / "k7.txt"
    gfile.write_text(serialize_graph(g))
    full = min_leave_packing(g, 3).packing
    pfile = tmp_path / "p.txt"
    pfile.write_text(serialize_packing(full))

    rc, stdout, _ = run(["verify", "packing", "--graph", str(gfile), "--packing", str(pfile)], capsys)
    assert rc == 0
    assert stdout == "valid: covered=21 leave=0 bound_ok=yes\n"

    rc, stdout, _ = run(["verify", "decomposition", "--graph", str(gfile), "--packing", str(pfile)], capsys)
    assert rc == 0
    assert stdout == "decomposition: 21 edges in 7 cliques\n"

    partial = Packing(3, full.cliques[1:])
    pfile.write_text(serialize_packing(partial))
    rc, stdout, _ = run(["verify", "decomposition", "--graph", str(gfile), "--packing", str(pfile)], capsys)
    assert rc == 1
    assert stdout == "not a decomposition: leave has 3 edges\n"

    rc, stdout, _ = run(
        ["verify", "packing", "--graph", str(gfile), "--packing", str(pfile), "--json"], capsys
    )
    assert rc == 0
    assert json.loads(stdout) == {
        "valid": True,
        "covered": 18,
        "leave": 3,
        "bound_ok": True,
        "problems": [],
    }

    overlapping = Packing(3, [(0, 1, 2), (0, 1, 3)])
    pfile.write_text(serialize_packing(overlapping))
    rc, stdout, _ = run(["verify", "packing", "--graph", str(gfile), "--packing", str(pfile)], capsys)
    assert rc == 1
    assert stdout.endswith("problems\n")


def test_verify_omni_cli_matches_the_library(tmp_path, capsys):
    x = cycle_graph(6)
    oa = naive_omni_absorber(x)
    xfile = tmp_path / "x.txt"
    xfile.write_text(serialize_graph(x))
    afile = tmp_path / "a.txt"
    afile.write_text(serialize_graph(oa.a))
    rc, stdout, _ = run(
        ["verify", "omni", "--x", str(xfile), "--absorber", str(afile), "--q", "3"], capsys
    )
    assert rc == 0
    rep = verify_omni_absorber(x, oa.a, 3)
    assert stdout == f"checked=2 failures=0 unknown=0 refinement={rep.refinement}\n"

    afile.write_text(serialize_graph(Graph(x.n, [])))
    rc, _, _ = run(["verify", "omni", "--x", str(xfile), "--absorber", str(afile), "--q", "3"], capsys)
    assert rc == 1


# ===================================================================
# bench
# ===================================================================


def test_bench_json_is_thread_count_invariant(tmp_path, capsys):
    argv = ["bench", "--kind", "gnp", "--n", "20", "--q", "3", "--trials", "2", "--p", "2/5", "--seed", "11"]
    blobs = []
    for threads in ("1", "2"):
        out = tmp_path / f"b{threads}.json"
        rc, _, stderr = run(argv + ["--threads", threads, "-o", str(out)], capsys)
        assert rc == 0
        assert stderr == "seed 11\n"
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]
    doc, _ = bench("gnp", 20, 3, 2, 11, threads=1, p=Fraction(2, 5), d=None)
    assert json.loads(blobs[0]) == doc


def test_bench_gnp_without_p_is_a_usage_error(capsys):
    usage_error(["bench", "--kind", "gnp", "--n", "10", "--q", "3", "--trials", "1", "--seed", "1"], capsys)


# ===================================================================
# error plumbing
# ===================================================================


def test_unreadable_input_is_a_domain_error(capsys):
    rc, _, stderr = run(["density", "--in", "/nonexistent/graph.txt"], capsys)
    assert rc == 1
    assert stderr.startswith("error: cannot read")


def test_malformed_graph_file_is_a_domain_error(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("3 1\n0 3\n")
    rc, _, stderr = run(["density", "--in", str(f)], capsys)
    assert rc == 1
    assert stderr.startswith("error:")
