from __future__ import annotations

import json

import pytest

from seqcalc import oeis
from seqcalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_examples(capsys):
    code, out, _ = run(capsys, "gen", "dual:bell", "--terms", "12", "--format", "plain")
    assert code == 0
    assert out.strip() == "1, 2, 7, 34, 209, 1546, 13327, 130922, 1441729, 17572114, 234662231, 3405357682"
    assert run(capsys, "gen", "trig:cos:right", "--terms", "12")[1].strip() == \
        "1, 1, 0, -2, -4, -4, 0, 8, 16, 16, 0, -32"
    assert run(capsys, "gen", "const:a=0", "--terms", "3")[1].strip() == "0, 0, 0"


def test_formats(capsys):
    _, out, _ = run(capsys, "gen", "trig:cos:periodic", "--terms", "3", "--format", "json")
    assert json.loads(out) == {"key": "trig:cos:periodic", "terms": ["1", "1/sqrt2", "0"]}
    _, out, _ = run(capsys, "gen", "hyp:cosh:standard", "--terms", "2", "--format", "csv")
    assert out == "index,value\n0,1\n1,5/4\n"


def test_bfile_roundtrip_is_bit_exact(capsys, tmp_path):
    path = tmp_path / "b.txt"
    assert run(capsys, "gen", "dual:factorial", "--terms", "30", "--format", "bfile", "--out", str(path))[0] == 0
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    _, terms = oeis.parse_bfile(raw.decode())
    assert oeis.format_bfile(terms, comments=["seqcalc dual:factorial"]).encode() == raw
    code, out, _ = run(capsys, "read-bfile", str(path), "--format", "bfile")
    assert code == 0 and out.encode() == oeis.format_bfile(terms, comments=[f"seqcalc {path}"]).encode()


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "gen", "nope")[0] == 2
    assert run(capsys, "gen", "x", "--terms", "0")[0] == 2
    assert run(capsys, "gen", "trig:tan:right", "--format", "bfile")[0] == 3
    assert run(capsys, "gen", "exp:left:alpha=-1", "--format", "bfile")[0] == 3
    assert run(capsys, "verify", "no-such-key")[0] == 2
    assert run(capsys, "verify", "euler-right", "euler-left", "euler-product")[0] == 0
    assert run(capsys, "bogus-command")[0] == 2
    assert run(capsys, "oeis-match", "fib", "--snapshot", str(tmp_path))[0] == 4
    assert run(capsys, "oeis-match", "trig:cos:left", "--snapshot", str(tmp_path))[0] == 3


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "cassini", "--json")
    assert code == 0
    (report,) = json.loads(out)
    assert report["key"] == "cassini" and report["status"] == "pass"


def test_oeis_match_fixture(capsys, snapshot_dir):
    code, out, _ = run(capsys, "oeis-match", "fib", "--terms", "20", "--snapshot", str(snapshot_dir))
    assert code == 0 and "A000045" in out
    code, out, _ = run(capsys, "oeis-match", "dual:factorial", "--terms", "5", "--json",
                       "--snapshot", str(snapshot_dir))
    assert code == 0
    assert [m["anum"] for m in json.loads(out)["matches"]] == ["A999670"]


def test_oeis_env_snapshot(capsys, snapshot_dir, monkeypatch):
    monkeypatch.setenv(oeis.CACHE_ENV, str(snapshot_dir))
    assert run(capsys, "oeis-match", "power:k=2", "--terms", "10")[0] == 0


def test_list(capsys):
    code, out, _ = run(capsys, "list", "--markdown")
    assert code == 0 and "| `cassini` |" in out


def test_failure_exit_code(capsys, monkeypatch):
    from seqcalc import identities as ids
    from seqcalc.catalog import const_seq

    spec = ids.IdentitySpec("always-off", "{0} = {1}", "exact_prefix",
                            lambda p: ids.compare(const_seq(0), const_seq(1), p["N"]), {"N": 4})
    monkeypatch.setitem(ids.REGISTRY, "always-off", spec)
    code, out, _ = run(capsys, "verify", "always-off")
    assert code == 1 and "FAIL" in out
    assert run(capsys, "verify", "cassini")[0] == 0
