import csv
import json

from burstfec.cli import EXIT_INVALID, EXIT_OPEN_CAPACITY, EXIT_VERIFY_FAIL, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_output(capsys):
    code, out, _ = run(capsys, "classify", "--b1", "1", "--t1", "2", "--b2", "2", "--t2", "4")
    assert code == 0
    assert "region: b" in out


def test_classify_a_prime(capsys):
    code, out, _ = run(capsys, "classify", "--b1", "1", "--t1", "2", "--b2", "2", "--t2", "6")
    assert code == 0
    assert "region: a'" in out and "interference-avoidance" in out


def test_capacity_point_csv(capsys):
    code, out, _ = run(capsys, "capacity", "--b1", "4", "--t1", "5", "--b2", "7", "--t2", "10")
    assert code == 0
    row = list(csv.DictReader(out.splitlines()))[0]
    assert row["capacity"] == "5/11"
    assert row["pec_bound"] == "6/13"
    assert row["best_bound"] == "5/11"


def test_capacity_open_point_json(capsys):
    code, out, _ = run(
        capsys, "capacity", "--b1", "3", "--t1", "4", "--b2", "5", "--t2", "6",
        "--format", "json",
    )
    assert code == 0
    (row,) = json.loads(out)
    assert row["capacity"] == "UNKNOWN"
    assert row["region"] == "f"
    assert row["best_bound"] == "3/7"  # the region-f bound, tighter than C^U here


def test_capacity_sweep_bounds_dominate(capsys):
    from fractions import Fraction

    code, out, _ = run(capsys, "capacity", "--b1", "1", "--t1", "1", "--sweep", "4")
    assert code == 0

    def frac(s):
        if s == "UNKNOWN":
            return None
        num, _, den = s.partition("/")
        return Fraction(int(num), int(den or 1))

    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) > 30
    for row in rows:
        cap = frac(row["capacity"])
        if cap is None:
            continue
        assert cap <= frac(row["pec_bound"])
        assert cap <= frac(row["cu_bound"])


def test_build_single_user(capsys):
    code, out, _ = run(capsys, "build", "--b1", "2", "--t1", "3")
    assert code == 0
    assert "parity s0[i-3] + s2[i-1]" in out


def test_build_open_region_refused(capsys):
    code, _, err = run(capsys, "build", "--b1", "3", "--t1", "4", "--b2", "5", "--t2", "6")
    assert code == EXIT_OPEN_CAPACITY
    assert "open" in err


def test_build_non_integer_alpha(capsys):
    code, _, err = run(capsys, "build", "--b1", "2", "--t1", "4", "--b2", "3", "--t2", "9")
    assert code == EXIT_INVALID


def test_build_infeasible_params(capsys):
    code, _, err = run(capsys, "build", "--b1", "3", "--t1", "2")
    assert code == EXIT_INVALID


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--b1", "1", "--t1", "2", "--b2", "2", "--t2", "4",
                       "--window", "40")
    assert code == 0
    assert out.count("PASS") == 2


def test_verify_fail_exit_code(capsys, monkeypatch):
    # sabotage the built code: the CLI must report FAIL and exit 2
    import burstfec.cli as cli_mod
    from burstfec.code_model import StreamingCodeSpec

    real = cli_mod._build_spec

    def sabotaged(args):
        spec = real(args)
        return StreamingCodeSpec(spec.field, spec.n_source, spec.parity_rows[:-1], "cut")

    monkeypatch.setattr(cli_mod, "_build_spec", sabotaged)
    code, out, _ = run(capsys, "verify", "--b1", "2", "--t1", "3", "--window", "12")
    assert code == EXIT_VERIFY_FAIL
    assert "FAIL at burst start" in out


def test_pec_counting_single_user(capsys):
    code, out, _ = run(capsys, "pec", "--b1", "2", "--t1", "3")
    assert code == 0
    assert "ratio 3/5" in out


def test_pec_region_f_double_count(capsys):
    code, out, _ = run(capsys, "pec", "--b1", "2", "--t1", "3", "--b2", "4", "--t2", "4")
    assert code == 0
    assert "(+1 double)" in out
    assert "ratio 3/8" in out


def test_pec_csv_out(tmp_path, capsys):
    out_file = tmp_path / "sched.csv"
    code, _, _ = run(capsys, "pec", "--b1", "1", "--t1", "2", "--b2", "2", "--t2", "4",
                     "--out", str(out_file))
    assert code == 0
    rows = list(csv.DictReader(out_file.read_text().splitlines()))
    assert {"t", "row", "erased", "recovery_time"} == set(rows[0])
