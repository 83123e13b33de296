"""End-to-end tests for the ``diffam`` command line interface.

Every test drives ``diffam.cli.main`` in process and asserts on the exact
exit code and output text, so the CLI surface is pinned down as strictly
as the library underneath it.
"""

import contextlib
import io
import json

import pytest

from diffam.algebra import abelian_iso, build_ring, cyclic_group
from diffam.cli import main
from diffam.constructions import dds_from_ds, singer_ds, units_hdm
from diffam.designs import hdm_to_dm, verify_df
from diffam.fileformat import DesignFile, load_design, save_design


def run(argv):
    """Invoke the CLI once, capturing (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            rc = main([str(a) for a in argv])
        except SystemExit as exc:
            rc = exc.code
    return rc, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# top-level parser
# ---------------------------------------------------------------------------


def test_no_arguments_is_a_usage_error():
    rc, out, err = run([])
    assert rc == 2
    assert "usage:" in err


def test_help_exits_zero():
    rc, out, err = run(["--help"])
    assert rc == 0
    assert "construct" in out and "verify" in out and "check" in out


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def test_construct_furino_cyclic(tmp_path):
    path = tmp_path / "f7.json"
    rc, out, err = run(["construct", "furino", "--v", 7, "--k", 3, "--out", path])
    assert rc == 0
    assert out == f"wrote ddf over Z7 [k=3 lambda=2 v=7] (2 blocks) to {path}\n"
    design = load_design(path)
    assert design.kind == "ddf"
    assert design.params == {"v": 7, "k": 3, "lambda": 2}
    assert design.blocks == (((1,), (2,), (4,)), ((3,), (5,), (6,)))


def test_construct_furino_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["construct", "furino", "--v", 49, "--k", 3, "--out", a])[0] == 0
    assert run(["construct", "furino", "--v", 49, "--k", 3, "--out", b])[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_construct_furino_ring_half(tmp_path):
    path = tmp_path / "f91h.json"
    rc, out, err = run(
        ["construct", "furino", "--factors", "7,13", "--k", 3, "--half", "--out", path]
    )
    assert rc == 0
    assert out.startswith("wrote ddf over GF(7) x GF(13) [k=3 lambda=1 v=91] (15 blocks)")
    design = load_design(path)
    assert len(design.blocks) == 15


def test_construct_furino_needs_a_group():
    rc, out, err = run(["construct", "furino", "--k", 3, "--out", "/tmp/never.json"])
    assert rc == 2
    assert "error: furino needs --v or --factors" in err


def test_construct_furino_rejects_bad_modulus(tmp_path):
    rc, out, err = run(
        ["construct", "furino", "--v", 10, "--k", 3, "--out", tmp_path / "x.json"]
    )
    assert rc == 1
    assert "prime divisor 2 of 10 is not congruent to 1 mod 3" in err
    assert not (tmp_path / "x.json").exists()


def test_construct_bad_factors_value(tmp_path):
    rc, out, err = run(
        ["construct", "furino", "--factors", "7,x", "--k", 3, "--out", tmp_path / "x.json"]
    )
    assert rc == 2
    assert "error: bad --factors value '7,x'" in err


def test_construct_orbit_and_split(tmp_path):
    whole = tmp_path / "w.json"
    rc, out, err = run(["construct", "orbit", "--v", 13, "--mult", 3, "--out", whole])
    assert rc == 0
    assert out == f"wrote ddf over Z13 [k=3 lambda=2 v=13] (4 blocks) to {whole}\n"

    halved = tmp_path / "h.json"
    rc, out, err = run(["construct", "orbit-split", "--v", 13, "--mult", 3, "--out", halved])
    assert rc == 0
    assert out == f"wrote ddf over Z13 [k=3 lambda=1 v=13] (2 blocks) to {halved}\n"
    assert len(load_design(halved).blocks) == 2


def test_construct_orbit_not_semiregular(tmp_path):
    rc, out, err = run(["construct", "orbit", "--v", 8, "--mult", 3, "--out", tmp_path / "x.json"])
    assert rc == 1
    assert err == (
        "error: action is not semiregular: nonzero element (4,) is fixed"
        " (automorphism index 1)\n"
    )


def test_construct_orbit_requires_mult(tmp_path):
    rc, out, err = run(["construct", "orbit", "--v", 13, "--out", tmp_path / "x.json"])
    assert rc == 2
    assert "error: construction 'orbit' requires --mult" in err


def test_construct_orbit_respects_exhaustive_cap(tmp_path):
    rc, out, err = run(
        ["construct", "orbit", "--v", 1000003, "--mult", 2, "--out", tmp_path / "x.json"]
    )
    assert rc == 2
    assert "exceeds the exhaustive-verification cap 1000000" in err


def test_construct_cyclotomic_with_sigma_override(tmp_path):
    path = tmp_path / "c91.json"
    rc, out, err = run(
        [
            "construct", "cyclotomic-half", "--factors", "7,13", "--k", 3,
            "--sigma-choice", "2:1", "--out", path,
        ]
    )
    assert rc == 0
    assert out.startswith("wrote ddf over GF(7) x GF(13) [k=3 lambda=1 v=91] (15 blocks)")


def test_construct_cyclotomic_sigma_errors(tmp_path):
    rc, out, err = run(
        [
            "construct", "cyclotomic-half", "--factors", "7,13", "--k", 3,
            "--sigma-choice", "zz", "--out", tmp_path / "x.json",
        ]
    )
    assert rc == 2
    assert "error: bad --sigma-choice entry 'zz', expected CLASS:FACTOR" in err

    rc, out, err = run(
        [
            "construct", "cyclotomic-half", "--factors", "7,13", "--k", 3,
            "--sigma-choice", "2:9", "--out", tmp_path / "x.json",
        ]
    )
    assert rc == 1
    assert "error: class 2 has support (0, 1); cannot replace factor 9" in err


def test_construct_trivial_ds_singular_block(tmp_path):
    path = tmp_path / "t4.json"
    rc, out, err = run(["construct", "trivial-ds", "--v", 4, "--k", 3, "--out", path])
    assert rc == 0
    assert out == f"wrote ds over Z4 [k=3 lambda=2 v=4] (1 block) to {path}\n"


def test_construct_units_hdm(tmp_path):
    path = tmp_path / "h7.json"
    rc, out, err = run(["construct", "units-hdm", "--factors", "7", "--k", 3, "--out", path])
    assert rc == 0
    assert out == f"wrote hdm over GF(7) [k=3 lambda=1 v=7] (3 rows) to {path}\n"
    design = load_design(path)
    assert design.kind == "hdm"
    assert len(design.rows) == 3 and len(design.rows[0]) == 7


def test_construct_product_from_hdm_or_dm_file(tmp_path):
    base = DesignFile(
        kind="ddf",
        group=cyclic_group(4),
        params={"v": 4, "k": 3, "lambda": 2},
        blocks=(((1,), (2,), (3,)),),
    )
    save_design(tmp_path / "t4.json", base)
    run(["construct", "furino", "--v", 7, "--k", 3, "--out", tmp_path / "f7.json"])
    run(["construct", "units-hdm", "--factors", "7", "--k", 3, "--out", tmp_path / "h7.json"])

    out_a = tmp_path / "p28a.json"
    rc, out, err = run(
        [
            "construct", "product", "--ddf-g", tmp_path / "t4.json",
            "--ddf-h", tmp_path / "f7.json", "--dm", tmp_path / "h7.json",
            "--out", out_a,
        ]
    )
    assert rc == 0
    assert out == f"wrote ddf over Z4 x Z7 [k=3 lambda=2 v=28] (9 blocks) to {out_a}\n"

    # a dm-kind matrix file (zero row included) works just as well
    dm = hdm_to_dm(units_hdm(build_ring([7]), 3))
    save_design(
        tmp_path / "d7.json",
        DesignFile(kind="dm", group=dm.group, params={"v": 7, "k": 4, "lambda": 1}, rows=dm.rows),
    )
    out_b = tmp_path / "p28b.json"
    rc, out, err = run(
        [
            "construct", "product", "--ddf-g", tmp_path / "t4.json",
            "--ddf-h", tmp_path / "f7.json", "--dm", tmp_path / "d7.json",
            "--out", out_b,
        ]
    )
    assert rc == 0
    assert out_a.read_bytes() == out_b.read_bytes()

    fam = load_design(out_a)
    assert fam.params == {"v": 28, "k": 3, "lambda": 2}
    assert len(fam.blocks) == 9


def test_construct_result1(tmp_path):
    path = tmp_path / "r28.json"
    rc, out, err = run(["construct", "result1", "--k", 3, "--factors", "7", "--out", path])
    assert rc == 0
    assert out == f"wrote ddf over Z4 x GF(7) [k=3 lambda=2 v=28] (9 blocks) to {path}\n"


def test_construct_singer(tmp_path):
    path = tmp_path / "s13.json"
    rc, out, err = run(["construct", "singer", "--q", 3, "--m", 3, "--out", path])
    assert rc == 0
    assert out == f"wrote ds over Z13 [k=4 lambda=1 v=13] (1 block) to {path}\n"
    assert load_design(path).blocks == (((0,), (2,), (5,), (6,)),)

    rc, out, err = run(["construct", "singer", "--q", 6, "--m", 3, "--out", tmp_path / "x.json"])
    assert rc == 1
    assert "error: 6 is not a prime power" in err


def test_construct_dds_product_chain(tmp_path):
    ds_path = tmp_path / "s85.json"
    rc, out, err = run(["construct", "singer", "--q", 4, "--m", 4, "--out", ds_path])
    assert rc == 0
    assert out == f"wrote ds over Z85 [k=21 lambda=5 v=85] (1 block) to {ds_path}\n"

    dds_path = tmp_path / "dds85.json"
    rc, out, err = run(["construct", "dds-product", "--ds", ds_path, "--h", 2, "--out", dds_path])
    assert rc == 0
    assert out == (
        f"wrote dds over Z85 x Z2 [k=42 lambda1=42 lambda2=10 m=85 n=2] (1 block) to {dds_path}\n"
    )

    rc, out, err = run(["verify", dds_path])
    assert rc == 0
    assert out == "PASS: dds over Z85 x Z2 [k=42 lambda1=42 lambda2=10 m=85 n=2]\n"


def test_construct_result3star(tmp_path):
    path = tmp_path / "dds13.json"
    rc, out, err = run(
        ["construct", "result3star", "--q", 3, "--d", 3, "--e", 2, "--h", 2, "--out", path]
    )
    assert rc == 0
    assert out == (
        f"wrote dds over Z13 x Z2 [k=8 lambda1=8 lambda2=2 m=13 n=2] (1 block) to {path}\n"
    )
    design = load_design(path)
    assert design.kind == "dds"
    assert design.subgroup == ((0, 0), (0, 1))


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_pass_line_and_expectations(tmp_path):
    path = tmp_path / "p28.json"
    base = DesignFile(
        kind="ddf",
        group=cyclic_group(4),
        params={"v": 4, "k": 3, "lambda": 2},
        blocks=(((1,), (2,), (3,)),),
    )
    save_design(tmp_path / "t4.json", base)
    run(["construct", "furino", "--v", 7, "--k", 3, "--out", tmp_path / "f7.json"])
    run(["construct", "units-hdm", "--factors", "7", "--k", 3, "--out", tmp_path / "h7.json"])
    run(
        [
            "construct", "product", "--ddf-g", tmp_path / "t4.json",
            "--ddf-h", tmp_path / "f7.json", "--dm", tmp_path / "h7.json", "--out", path,
        ]
    )

    rc, out, err = run(["verify", path])
    assert rc == 0
    assert out == "PASS: ddf over Z4 x Z7 [k=3 lambda=2 v=28]\n"

    rc, out, err = run(
        ["verify", path, "--expect-kind", "ddf", "--expect-params", "28,3,2"]
    )
    assert rc == 0

    rc, out, err = run(["verify", path, "--expect-params", "28,3,1"])
    assert rc == 1
    assert out == "FAIL: declared parameters [28, 3, 2] do not match expected [28, 3, 1]\n"

    rc, out, err = run(["verify", path, "--expect-kind", "pdf"])
    assert rc == 1
    assert out == "FAIL: file declares kind 'ddf', expected 'pdf'\n"

    rc, out, err = run(["verify", path, "--expect-params", "28,3"])
    assert rc == 2
    assert "error: --expect-params for kind 'ddf' needs 3 integers ('v', 'k', 'lambda')" in err


def test_verify_catches_a_tampered_block(tmp_path):
    path = tmp_path / "f7.json"
    run(["construct", "furino", "--v", 7, "--k", 3, "--out", path])
    obj = json.loads(path.read_text())
    assert obj["blocks"][0][0] == [1]
    obj["blocks"][0][0] = [5]
    path.write_text(json.dumps(obj))

    rc, out, err = run(["verify", path])
    assert rc == 1
    assert out.startswith("FAIL: ddf over Z7 [k=3 lambda=2 v=7]\n")
    assert "blocks are not pairwise disjoint" in out


def test_verify_catches_a_wrong_difference_count(tmp_path):
    path = tmp_path / "s13.json"
    run(["construct", "singer", "--q", 3, "--m", 3, "--out", path])
    obj = json.loads(path.read_text())
    obj["blocks"][0][-1] = [7]  # {0,2,5,6} -> {0,2,5,7}
    path.write_text(json.dumps(obj))

    rc, out, err = run(["verify", path])
    assert rc == 1
    assert "FAIL: ds over Z13" in out
    assert "deviate from lambda=1" in out


def test_verify_kind_strictness_for_duplicates_and_partitions(tmp_path):
    # the same block twice is fine for a plain df with doubled lambda ...
    dup = DesignFile(
        kind="df",
        group=cyclic_group(7),
        params={"v": 7, "k": 3, "lambda": 2},
        blocks=(((1,), (2,), (4,)), ((1,), (2,), (4,))),
    )
    save_design(tmp_path / "dup.json", dup)
    rc, out, err = run(["verify", tmp_path / "dup.json"])
    assert rc == 0
    assert out == "PASS: df over Z7 [k=3 lambda=2 v=7]\n"

    # ... but a ddf with the same blocks must fail on disjointness
    save_design(
        tmp_path / "dupd.json",
        DesignFile(
            kind="ddf",
            group=cyclic_group(7),
            params={"v": 7, "k": 3, "lambda": 2},
            blocks=(((1,), (2,), (4,)), ((1,), (2,), (4,))),
        ),
    )
    rc, out, err = run(["verify", tmp_path / "dupd.json"])
    assert rc == 1
    assert "blocks are not pairwise disjoint" in out

    # a disjoint family that misses elements is not a pdf
    save_design(
        tmp_path / "notpdf.json",
        DesignFile(
            kind="pdf",
            group=cyclic_group(7),
            params={"v": 7, "K": [3, 3], "lambda": 2},
            blocks=(((1,), (2,), (4,)), ((3,), (5,), (6,))),
        ),
    )
    rc, out, err = run(["verify", tmp_path / "notpdf.json"])
    assert rc == 1
    assert "blocks form a disjoint family, not a partition" in out


def test_verify_transported_dds_twins(tmp_path):
    # A (85,21,5) difference set lifted to Z85 x Z2 and transported to Z170:
    # as a dds it passes, while the same 42 elements declared as a plain ds
    # fail with exactly one deviating difference.
    dset, group = singer_ds(4, 4)
    built = dds_from_ds(dset, group, 2)
    iso = abelian_iso(built.group, cyclic_group(170))
    assert iso is not None
    moved = tuple(sorted(iso.apply(x) for x in built.elements))
    sub = tuple(sorted(iso.apply(s) for s in built.subgroup))

    save_design(
        tmp_path / "ds170.json",
        DesignFile(
            kind="ds",
            group=cyclic_group(170),
            params={"v": 170, "k": 42, "lambda": 10},
            blocks=(moved,),
        ),
    )
    rc, out, err = run(["verify", tmp_path / "ds170.json"])
    assert rc == 1
    assert out == (
        "FAIL: ds over Z170 [k=42 lambda=10 v=170]\n"
        "  1 of 169 nonzero elements deviate from lambda=10\n"
        "  element 85: count 42\n"
    )

    save_design(
        tmp_path / "dds170.json",
        DesignFile(
            kind="dds",
            group=cyclic_group(170),
            params={"m": 85, "n": 2, "k": 42, "lambda1": 42, "lambda2": 10},
            blocks=(moved,),
            subgroup=sub,
        ),
    )
    rc, out, err = run(["verify", tmp_path / "dds170.json"])
    assert rc == 0
    assert out == "PASS: dds over Z170 [k=42 lambda1=42 lambda2=10 m=85 n=2]\n"


def test_verify_matrix_files(tmp_path):
    dm = hdm_to_dm(units_hdm(build_ring([7]), 3))
    save_design(
        tmp_path / "dm7.json",
        DesignFile(kind="dm", group=dm.group, params={"v": 7, "k": 4, "lambda": 1}, rows=dm.rows),
    )
    rc, out, err = run(["verify", tmp_path / "dm7.json"])
    assert rc == 0
    assert out == "PASS: dm over GF(7) [k=4 lambda=1 v=7]\n"

    # the same rows declared homogeneous must fail on the zero row
    save_design(
        tmp_path / "badh.json",
        DesignFile(kind="hdm", group=dm.group, params={"v": 7, "k": 4, "lambda": 1}, rows=dm.rows),
    )
    rc, out, err = run(["verify", tmp_path / "badh.json"])
    assert rc == 1
    assert out.startswith("FAIL: hdm over GF(7) [k=4 lambda=1 v=7]\n")
    assert "7 (row, element) occurrence counts != 1" in out
    assert "  row 0, element 0: count 7\n" in out


def test_verify_missing_and_malformed_files(tmp_path):
    rc, out, err = run(["verify", tmp_path / "absent.json"])
    assert rc == 2
    assert "error: [Errno 2] No such file or directory" in err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc, out, err = run(["verify", bad])
    assert rc == 2
    assert "error: design file is not valid JSON:" in err


def test_verified_constructions_round_trip_through_files(tmp_path):
    path = tmp_path / "c91.json"
    run(["construct", "cyclotomic-half", "--factors", "7,13", "--k", 3, "--out", path])
    design = load_design(path)
    assert verify_df(design.family(), 1).ok
    rc, out, err = run(["verify", path])
    assert rc == 0


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def test_check_ds_admissible_and_not():
    rc, out, err = run(["check", "ds", 7, 3, 1])
    assert rc == 0
    assert out == ("ds (7,3,1): ADMISSIBLE\n  lambda*(v-1) vs k*(k-1): 6 = 6\n")

    rc, out, err = run(["check", "ds", 170, 42, 10])
    assert rc == 1
    assert out == ("ds (170,42,10): INADMISSIBLE\n  lambda*(v-1) vs k*(k-1): 1690 != 1722\n")


def test_check_proportional():
    rc, out, err = run(["check", "proportional", 85, 21, 5, 2])
    assert rc == 1
    assert out == (
        "proportional (85,21,5) scaled by 2 -> (170,42,10): INADMISSIBLE\n"
        "  (v-k)*(mu-1) vs 0: 64 != 0\n"
        "  scaled triple (170,42,10)\n"
    )


def test_check_result3():
    rc, out, err = run(["check", "result3", 4, 4, 3, 2])
    assert rc == 1
    assert out == (
        "result3 (q,m,e,h)=(4,4,3,2): REFUTED\n"
        "  base triple (85,21,5) scaled by mu=2 claims (170,42,10)\n"
        "  lambda*(v-1) vs k*(k-1): 1690 != 1722\n"
        "  (v-k)*(mu-1) vs 0: 64 != 0\n"
        "  scaled triple (170,42,10)\n"
    )

    rc, out, err = run(["check", "result3", 4, 4, 3, 1])
    assert rc == 0
    assert out == (
        "result3 (q,m,e,h)=(4,4,3,1): VALID (hyperplane case e=q-1, h=1),"
        " triple (85,21,5)\n"
    )


def test_check_dds():
    rc, out, err = run(["check", "dds", 85, 2, 42, 42, 10])
    assert rc == 0
    assert out == (
        "dds (85,2,42,42,10): CONSISTENT\n"
        "  k*(k-1) vs lambda1*(n-1) + lambda2*n*(m-1): 1722 = 1722\n"
    )

    rc, out, err = run(["check", "dds", 7, 2, 6, 6, 3])
    assert rc == 1
    assert "INCONSISTENT" in out
    assert "30 != 42" in out


def test_check_missing_arguments_is_usage_error():
    rc, out, err = run(["check", "ds", 7, 3])
    assert rc == 2
    assert "usage:" in err
