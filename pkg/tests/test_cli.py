import json

import pytest

from liftlab import cover, sortnet
from liftlab.cli import main
from liftlab.exactnum import RatMatrix
from liftlab.slack import slack_perm


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_factorize_quadratic_verifies(capsys):
    code, out, _ = run(capsys, "factorize", "--polytope", "perm", "--n", "4",
                       "--gen", "quadratic", "--verify")
    assert code == 0
    assert "size=12" in out and "verified" in out


def test_broken_network_is_reported(tmp_path, capsys):
    seq = sortnet.quadratic(4).without((2,))
    bad = tmp_path / "bad.net"
    bad.write_text(sortnet.format_network(seq))
    code, out, _ = run(capsys, "sortnet", "check", "--file", str(bad))
    assert code == 1 and "\nFAIL: 0/1 input" in out


def test_size_guard(capsys):
    code, _, err = run(capsys, "slack", "--polytope", "perm", "--n", "99")
    assert code == 2 and "error" in err


def test_usage_errors():
    for argv in (["slack"], ["slack", "--polytope", "cube", "--n", "3"],
                 ["fooling", "--n", "3", "--bogus"], ["nope"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_missing_file(capsys):
    code, _, err = run(capsys, "sortnet", "check", "--file", "/nonexistent/x.net")
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize("argv", [
    ("simulate", "--protocol", "perm", "--n", "3", "--trials", "2000", "--seed", "7"),
    ("goemans", "verify", "--n", "3", "--samples", "20", "--seed", "3"),
    ("report", "--format", "json", "--n-max", "3"),
])
def test_output_is_deterministic(capsys, argv):
    outs = {run(capsys, *argv)[1] for _ in range(3)}
    assert len(outs) == 1


def test_slack_json_roundtrip(tmp_path, capsys):
    path = tmp_path / "s.json"
    assert run(capsys, "slack", "--polytope", "perm", "--n", "3", "--format", "json",
               "--out", str(path))[0] == 0
    assert RatMatrix.from_json(path.read_text()) == slack_perm(3).matrix


def test_tk_file_feeds_factorize(tmp_path, capsys):
    files = []
    for k in (1, 2):
        path = tmp_path / f"t{k}.json"
        assert run(capsys, "cover", "tk", "--n", "5", "--k", str(k), "--out", str(path))[0] == 0
        n, kk, fam = cover.tk_from_json(path.read_text())
        assert (n, kk) == (5, k) and fam == cover.build_Tk(5, k)
        files += ["--tk", str(path)]
    code, out, _ = run(capsys, "factorize", "--polytope", "match", "--n", "5", *files, "--verify")
    assert code == 0 and "verified" in out


def test_truncated_tk_fails_with_label(tmp_path, capsys):
    path = tmp_path / "t1.json"
    path.write_text(cover.tk_to_json(4, 1, cover.build_Tk(4, 1)[:1]))
    t2 = tmp_path / "t2.json"
    t2.write_text(cover.tk_to_json(4, 2, cover.build_Tk(4, 2)))
    code, _, err = run(capsys, "factorize", "--polytope", "match", "--n", "4",
                       "--tk", str(path), "--tk", str(t2))
    assert code == 2 and "T_1 does not cover" in err


def test_other_commands(capsys):
    assert run(capsys, "verify", "--protocol", "spt", "--n", "4")[0] == 0
    assert run(capsys, "verify", "--protocol", "perm2", "--n", "3")[0] == 0
    assert run(capsys, "fooling", "--n", "5")[0] == 0
    code, out, _ = run(capsys, "sortnet", "generate", "--kind", "batcher", "--n", "4")
    assert code == 0 and sortnet.parse_network(out) == sortnet.batcher(4)
    code, out, _ = run(capsys, "sortnet", "minimality", "--n", "4", "--mode", "exhaustive")
    assert code == 0
    code, out, _ = run(capsys, "report", "--format", "json", "--n-max", "3")
    rows = json.loads(out)
    assert rows and all(r["pass"] for r in rows)
