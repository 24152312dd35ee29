from pathlib import Path

import pytest

from app.main import main
from app.services import relations as rel
from app.utils.structure_io import StructureKind, parse, parse_text

DATA = Path(__file__).parent / "data" / "structures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_accepts_fork(capsys):
    code, out, _ = run(capsys, "validate", DATA / "fork.txt")
    assert code == 0
    assert out == "OK\n"


def test_validate_reports_associativity_witness(capsys):
    code, out, _ = run(capsys, "validate", DATA / "nonassociative.txt")
    assert code == 1
    assert out.startswith("FAIL associativity at (0, 1, 2):")


def test_parse_errors_exit_with_two(capsys, tmp_path):
    broken = tmp_path / "broken.txt"
    broken.write_text("semilattice 2\njoin:\n0 1\n1 x\n")
    code, _, err = run(capsys, "congruences", broken)
    assert code == 2
    assert "line 4, column 3" in err


def test_missing_file_and_bad_usage_exit_with_two(capsys, tmp_path):
    assert run(capsys, "congruences", tmp_path / "missing.txt")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "--theorem", "9.9")[0] == 2
    assert run(capsys, "check", "--theorem", "2.1")[0] == 2


def test_wrong_file_kind_is_a_usage_error(capsys):
    code, _, err = run(capsys, "congruences", DATA / "unary.txt")
    assert code == 2
    assert "expected a semilattice" in err


def test_congruence_count(capsys):
    assert run(capsys, "congruences", DATA / "antichain_top.txt", "--count")[1] == "4\n"
    assert run(capsys, "preorders", DATA / "antichain_top.txt", "--count")[1] == "4\n"


def test_congruences_are_listed_as_partitions(capsys):
    code, out, _ = run(capsys, "congruences", DATA / "antichain_top.txt")
    assert code == 0
    assert sorted(out.splitlines()) == ["{0,1,2}", "{0,2}{1}", "{0}{1,2}", "{0}{1}{2}"]


def test_preorders_cross_check_and_poset(capsys):
    assert run(capsys, "preorders", DATA / "fork.txt", "--count", "--cross-check")[0] == 0
    code, out, _ = run(capsys, "preorders", DATA / "antichain.txt", "--count")
    assert (code, out) == (0, "4\n")
    assert run(capsys, "preorders", DATA / "antichain.txt", "--cross-check")[0] == 2


def test_omega_then_psi_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "omega", DATA / "fork.txt", DATA / "fork_theta.txt")
    assert code == 0
    spec = parse_text(out).relation
    assert spec == parse(DATA / "fork_spec.txt").spec

    spec_file = tmp_path / "spec.txt"
    spec_file.write_text(out)
    code, out, _ = run(capsys, "psi", DATA / "fork.txt", spec_file)
    assert code == 0
    assert parse_text(out).relation == parse(DATA / "fork_theta.txt").relation


def test_psi_rejects_incompatible_relation(capsys, tmp_path):
    identity = tmp_path / "identity.txt"
    identity.write_text("relation 5\npairs:\n0 0\n1 1\n2 2\n3 3\n4 4\nend\n")
    assert run(capsys, "psi", DATA / "fork.txt", identity)[0] == 1


def test_relation_size_must_match(capsys):
    assert run(capsys, "omega", DATA / "antichain_top.txt", DATA / "fork_theta.txt")[0] == 2


def test_quotient_by_partition(capsys):
    code, out, _ = run(capsys, "quotient", DATA / "fork.txt", "--by", "{0,1}{2}{3}{4}")
    assert code == 0
    body, projection = out.rstrip("\n").rsplit("\n", 1)
    assert projection == "# projection: 0 0 1 2 3"
    target = parse_text(body + "\n")
    assert target.semilattice.size == 4
    assert target.carrier.names == ("{a1,a2}", "{b1}", "{b2}", "{c}")


def test_quotient_rejects_bad_partitions(capsys):
    assert run(capsys, "quotient", DATA / "fork.txt", "--by", "{0,1}{2}")[0] == 2
    # b1 ~ c would force b2 = b1 v b2 ~ c v b2 = c
    assert run(capsys, "quotient", DATA / "fork.txt", "--by", "{0}{1}{2,4}{3}")[0] == 1


def test_represent_recovers_spec(capsys):
    code, out, _ = run(capsys, "represent", DATA / "fork_spec.txt")
    assert code == 0
    assert "# projection: 0 0 1 2 3" in out
    assert out.endswith("# recovers spec: YES\n")
    code, out, _ = run(capsys, "represent", DATA / "antichain.txt")
    assert code == 0
    assert "# recovered: {(0,1)}" in out


def test_enumerate_counts(capsys):
    code, out, _ = run(capsys, "enumerate", "--semilattices", 3)
    assert code == 0
    assert out.count("semilattice 3") == 9
    assert run(capsys, "enumerate", "--semilattices", 4, "--up-to-iso")[1].count("semilattice 4") == 5
    assert run(capsys, "enumerate", "--posets", 3)[1].count("poset 3") == 19
    assert run(capsys, "enumerate", "--semilattices", 0)[0] == 2


def test_enumerated_blocks_parse_back(capsys):
    _, out, _ = run(capsys, "enumerate", "--posets", 2)
    blocks = out.split("\n\n")
    assert len(blocks) == 3
    assert all(parse_text(b.strip() + "\n").kind is StructureKind.POSET for b in blocks)


def test_fixtures_command(capsys):
    code, out, _ = run(capsys, "fixtures")
    assert code == 0
    assert "actual: quotient-isomorphic: NO / arrow-isomorphic: YES" in out
    assert "actual: classes: 4 / equivalences: 2 / preorders: 4 / bijection: YES" in out
    assert "MISMATCH" not in out
    assert run(capsys, "fixtures", "--remark", "3.3")[1].startswith("remark 3.3\n")


@pytest.mark.parametrize(
    "argv",
    [
        ("check", DATA / "fork.txt", "--theorem", "2.1"),
        ("check", DATA / "antichain_top.txt", "--theorem", "2.3"),
        ("check", DATA / "fork.txt", "--theorem", "2.4"),
        ("check", DATA / "fork.txt", "--theorem", "3.5"),
        ("check", DATA / "antichain.txt", "--theorem", "3.1"),
        ("check", DATA / "antichain.txt", "--theorem", "3.2"),
        ("check", DATA / "antichain.txt", "--theorem", "3.5"),
        ("check", DATA / "unary.txt", "--theorem", "3.5"),
        ("check", "--theorem", "2.5", "--max-size", 2),
        ("check", "--theorem", "2.6", "--max-size", 2),
        ("check", "--theorem", "2.7", "--max-size", 2),
    ],
)
def test_checks_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert out.startswith(f"theorem {argv[argv.index('--theorem') + 1]}\n")
    assert "status: passed" in out


def test_check_needs_matching_kind(capsys):
    assert run(capsys, "check", DATA / "unary.txt", "--theorem", "2.1")[0] == 2


def test_sweep_command_writes_csv(capsys, tmp_path):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "--theorem", "2.1", "--max-size", 2, "--csv", target)
    assert code == 0
    assert out.splitlines()[-1] == "sweep 2.1: 3 instances, 0 failed"
    assert target.read_text().splitlines()[0] == "theorem,size,index,subject,status,detail"


def test_expand_and_collapse(capsys, tmp_path):
    code, out, _ = run(capsys, "expand", DATA / "unary.txt", DATA / "unary_hom.txt")
    assert code == 0
    expansion = parse_text(out)
    assert expansion.theta == rel.identity(expansion.carrier)
    assert expansion.starred == (frozenset({(0,), (1,)}),)

    code, out, _ = run(capsys, "collapse", DATA / "unary_expansion.txt")
    assert code == 0
    image = parse_text(out)
    assert image.carrier.size == 1
    assert image.mapping == (0, 0)
    assert image.structure.relations == (frozenset({(0,)}),)


def test_expand_needs_map_and_collapse_needs_theta(capsys):
    assert run(capsys, "expand", DATA / "unary.txt", DATA / "unary.txt")[0] == 2
    assert run(capsys, "collapse", DATA / "unary.txt")[0] == 2


def test_expand_rejects_non_homomorphism(capsys, tmp_path):
    hom = tmp_path / "hom.txt"
    hom.write_text("relational 2\nrel R 1\n1\nend\nmap: 0 1\n")
    assert run(capsys, "expand", DATA / "unary.txt", hom)[0] == 1


def test_dot_output(capsys):
    code, out, _ = run(capsys, "dot", DATA / "antichain_top.txt")
    assert code == 0
    assert out.startswith("digraph hasse {")
    assert "n0 -> n2" in out and "n1 -> n2" in out
    code, out, _ = run(capsys, "dot", DATA / "antichain_top.txt", "--congruence-lattice")
    assert code == 0
    assert out.count("->") == 4
    assert run(capsys, "dot", DATA / "antichain.txt", "--congruence-lattice")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("validate", DATA / "fork.txt"),
        ("congruences", DATA / "fork.txt"),
        ("preorders", DATA / "fork.txt"),
        ("psi", DATA / "fork.txt", DATA / "fork_spec_relation.txt"),
        ("omega", DATA / "fork.txt", DATA / "fork_theta.txt"),
        ("quotient", DATA / "fork.txt", "--by", "{0,1}{2}{3}{4}"),
        ("represent", DATA / "fork_spec.txt"),
        ("represent", DATA / "antichain.txt"),
        ("enumerate", "--semilattices", 3),
        ("enumerate", "--posets", 3),
        ("check", DATA / "fork.txt", "--theorem", "2.1"),
        ("check", "--theorem", "2.5", "--max-size", 2),
        ("fixtures",),
        ("sweep", "--theorem", "2.1", "--max-size", 2),
        ("expand", DATA / "unary.txt", DATA / "unary_hom.txt"),
        ("collapse", DATA / "unary_expansion.txt"),
        ("dot", DATA / "fork.txt"),
        ("dot", DATA / "antichain_top.txt", "--congruence-lattice"),
    ],
)
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0, first[2]
    assert first[:2] == second[:2]


def test_whole_corpus_checks_are_size_guarded(capsys):
    code, _, err = run(capsys, "check", DATA / "fork.txt", "--theorem", "2.5")
    assert code == 2
    assert "MAX_GLOBAL_SIZE" in err
    assert run(capsys, "check", "--theorem", "2.7", "--max-size", 4)[0] == 2
    assert run(capsys, "check", DATA / "unary.txt", "--theorem", "2.6", "--allow-large")[0] == 0


def test_psi_of_shipped_preorder(capsys):
    code, out, _ = run(capsys, "psi", DATA / "fork.txt", DATA / "fork_spec_relation.txt")
    assert code == 0
    assert parse_text(out).relation == parse(DATA / "fork_theta.txt").relation
