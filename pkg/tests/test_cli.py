import json
import subprocess
import sys

import pytest

from circbcast.cli import main
from golden import P16_B, P16_ROUND0_SEND, P17_B, P17_RECV, P17_SEND


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _parse_table(text):
    rows = {}
    for line in text.strip().splitlines():
        label, _, rest = line.partition(":")
        rows[label.strip()] = [int(v) for v in rest.split()]
    return rows


def test_schedule_text_matches_golden_p17(capsys):
    code, out, _ = run_cli(capsys, "schedule", "--p", "17")
    assert code == 0
    rows = _parse_table(out)
    assert rows["r"] == list(range(17))
    assert rows["b"] == P17_B
    for k in range(5):
        assert rows[f"recv[{k}]"] == P17_RECV[k], k
        assert rows[f"send[{k}]"] == P17_SEND[k], k


def test_schedule_text_p16_first_rows(capsys):
    code, out, _ = run_cli(capsys, "schedule", "--p", "16")
    assert code == 0
    rows = _parse_table(out)
    assert rows["b"] == P16_B
    assert [v + 4 for v in rows["send[0]"]] == P16_ROUND0_SEND


def test_schedule_json_single_rank(capsys):
    code, out, _ = run_cli(capsys, "schedule", "--p", "17", "--r", "9", "--format", "json")
    assert code == 0
    assert json.loads(out) == {
        "r": 9,
        "b": 4,
        "recv": [-3, -4, -2, -5, 4],
        "send": [-1, -1, -1, -1, -1],
    }


def test_schedule_json_all_ranks(capsys):
    code, out, _ = run_cli(capsys, "schedule", "--p", "5", "--format", "json")
    obj = json.loads(out)
    assert obj["p"] == 5 and obj["q"] == 3
    assert len(obj["schedules"]) == 5


def test_schedule_csv(capsys):
    code, out, _ = run_cli(capsys, "schedule", "--p", "17", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "r,b,recv0,recv1,recv2,recv3,recv4,send0,send1,send2,send3,send4"
    row9 = lines[1 + 9].split(",")
    assert row9 == ["9", "4", "-3", "-4", "-2", "-5", "4", "-1", "-1", "-1", "-1", "-1"]


def test_schedule_bad_rank_exits_2(capsys):
    code, _, err = run_cli(capsys, "schedule", "--p", "17", "--r", "17")
    assert code == 2
    assert "out of range" in err


def test_schedule_p1_degenerate(capsys):
    code, out, _ = run_cli(capsys, "schedule", "--p", "1")
    assert code == 0
    rows = _parse_table(out)
    assert rows["r"] == [0] and rows["b"] == [0]
    code, out, _ = run_cli(capsys, "schedule", "--p", "1", "--format", "csv")
    assert out.strip().splitlines() == ["r,b", "0,0"]


def test_output_is_deterministic(capsys):
    _, first, _ = run_cli(capsys, "schedule", "--p", "100", "--format", "json")
    _, second, _ = run_cli(capsys, "schedule", "--p", "100", "--format", "json")
    assert first == second
    _, first, _ = run_cli(capsys, "schedule", "--p", "100", "--format", "csv")
    _, second, _ = run_cli(capsys, "schedule", "--p", "100", "--format", "csv")
    assert first == second


def test_skips_formats(capsys):
    code, out, _ = run_cli(capsys, "skips", "--p", "17", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"p": 17, "q": 5, "skips": [1, 2, 3, 5, 9, 17]}
    code, out, _ = run_cli(capsys, "skips", "--p", "16")
    assert "skips=[1, 2, 4, 8, 16]" in out


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["schedule"])  # missing --p
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["schedule", "--p", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--range", "5"])  # malformed range
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_verify_single_p(capsys):
    code, out, _ = run_cli(capsys, "verify", "--p", "17")
    assert code == 0
    assert "p=17 pass" in out
    assert "summary:" in out


def test_verify_range_text(capsys):
    code, out, _ = run_cli(capsys, "verify", "--range", "1:40", "--quiet")
    assert code == 0
    assert "pass=True" in out


def test_verify_range_json(capsys):
    code, out, _ = run_cli(capsys, "verify", "--range", "1:12", "--format", "json")
    assert code == 0
    lines = out.strip().splitlines()
    objs = [json.loads(line) for line in lines]
    per_p = [o for o in objs if "p" in o]
    assert [o["p"] for o in per_p] == list(range(1, 13))
    assert all(o["pass"] for o in per_p)
    assert "summary" in objs[-1]
    assert objs[-1]["summary"]["pass"] is True


def test_verify_missing_target_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify")
    assert code == 2
    assert "needs --range or --p" in err


def test_verify_inject_fault_exits_1(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--p", "17", "--format", "json",
        "--inject-fault", "9:1:recv:1",
    )
    assert code == 1
    objs = [json.loads(line) for line in out.strip().splitlines()]
    rep = objs[0]
    assert rep["pass"] is False
    cex = rep["counterexamples"][0]
    assert cex["condition"] == 1 and cex["r"] == 9 and cex["k"] == 1
    assert objs[-1]["summary"]["pass"] is False


def test_verify_inject_fault_bad_spec():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--p", "17", "--inject-fault", "1:1:both:1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--p", "17", "--inject-fault", "1:1:recv:0"])
    assert exc.value.code == 2


def test_verify_checkpoint_cli(tmp_path, capsys):
    ckpt = tmp_path / "ck.txt"
    code, _, _ = run_cli(capsys, "verify", "--range", "1:25", "--quiet",
                         "--checkpoint", str(ckpt))
    assert code == 0
    assert ckpt.read_text().strip() == "25"
    code, out, _ = run_cli(capsys, "verify", "--range", "1:25", "--quiet",
                           "--checkpoint", str(ckpt))
    assert code == 0
    assert "checked=0" in out


def test_simulate_json(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--p", "17", "--n", "3", "--root", "4")
    assert code == 0
    obj = json.loads(out)
    assert obj["rounds"] == 7 and obj["correct"] is True


def test_simulate_p1(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--p", "1", "--n", "1")
    assert code == 0
    obj = json.loads(out)
    assert obj["rounds"] == 0 and obj["correct"] is True


def test_simulate_full_log(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--p", "5", "--n", "2", "--full-log")
    obj = json.loads(out)
    assert code == 0 and len(obj["message_log"]) == obj["messages_total"]


def test_simulate_bad_root_exits_2(capsys):
    code, _, err = run_cli(capsys, "simulate", "--p", "5", "--n", "2", "--root", "5")
    assert code == 2
    assert "out of range" in err


def test_verify_jobs_flag(capsys):
    code, out, _ = run_cli(capsys, "verify", "--range", "1:48", "--jobs", "2", "--quiet")
    assert code == 0
    assert "checked=48 pass=True" in out


def test_allgather_cli(capsys):
    for shape in ("uniform", "mod3", "degenerate"):
        code, out, _ = run_cli(capsys, "allgather", "--p", "8", "--n", "4",
                               "--sizes", shape)
        assert code == 0
        obj = json.loads(out)
        assert obj["correct"] is True and obj["rounds"] == 6


def test_bench_csv(capsys):
    code, out, _ = run_cli(capsys, "bench", "--p", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "p,q,total_s,per_proc_us"
    p, q, total_s, per_us = lines[1].split(",")
    assert p == "1" and q == "0"
    assert float(total_s) < 1.0


def test_bench_pset_and_json(capsys):
    code, out, _ = run_cli(capsys, "bench", "--p", "16,30:32", "--format", "json",
                           "--engine", "pure")
    assert code == 0
    rows = json.loads(out)
    assert [r["p"] for r in rows] == [16, 30, 31, 32]
    assert all(r["engine"] == "pure" for r in rows)


def test_bench_jobs(capsys):
    code, out, _ = run_cli(capsys, "bench", "--p", "8,9,10", "--jobs", "2",
                           "--engine", "pure")
    assert code == 0
    lines = out.strip().splitlines()
    assert [ln.split(",")[0] for ln in lines[1:]] == ["8", "9", "10"]


def test_console_script_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "circbcast.cli", "schedule", "--p", "17", "--r", "9",
         "--format", "json"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["b"] == 4


def test_cb_log_env_verbosity():
    proc = subprocess.run(
        [sys.executable, "-m", "circbcast.cli", "bench", "--p", "4", "--engine", "pure"],
        capture_output=True, text=True, timeout=60,
        env={"CB_LOG": "info", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode == 0
    assert "INFO circbcast" in proc.stderr
