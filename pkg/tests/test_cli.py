import json

import numpy as np
import pytest

from latticemix.cli import main


def run(*argv) -> int:
    return main(list(argv))


def read(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


class TestDeterminism:
    @pytest.mark.parametrize("job", [
        ("fig1", "--dims", "19,5", "--t-max", "30", "--out", "{out}.csv"),
        ("lemma2", "--n", "19", "--T", "100", "--offset", "0", "--out", "{out}.json"),
        ("conjecture", "--range", "10,60", "--pairs", "2", "--seed", "3",
         "--T-max", "100", "--out", "{out}.csv"),
        ("mix-repeated", "--dims", "19,5", "--T", "24", "--rounds", "3",
         "--out", "{out}.csv"),
        ("mix-repeated", "--dims", "7,5", "--T", "9", "--rounds", "2", "--mode",
         "sampled", "--trajectories", "2000", "--seed", "11", "--out", "{out}.json"),
        ("mix-coordinate", "--dims", "19,5", "--out", "{out}.json"),
        ("spectrum", "--dims", "5,3", "--out", "{out}.csv"),
        ("theorem3", "--n1", "19", "--n2", "5", "--relaxed", "--tier", "slow",
         "--out", "{out}.json"),
    ])
    def test_byte_identical_reruns(self, tmp_path, job):
        out = str(tmp_path / "artifact")
        argv = [part.format(out=out) for part in job]
        target = argv[argv.index("--out") + 1]
        assert run(*argv) == 0
        first = read(target)
        first_manifest = read(target + ".manifest.json")
        assert run(*argv) == 0
        assert read(target) == first
        assert read(target + ".manifest.json") == first_manifest


class TestExitCodes:
    def test_usage_error_is_one(self):
        with pytest.raises(SystemExit) as err:
            run("no-such-command", "--out", "x.csv")
        assert err.value.code == 1

    def test_missing_required_flag_is_one(self, tmp_path):
        assert run("lemma2", "--out", str(tmp_path / "r.json")) == 1

    def test_slow_tier_refusal(self, tmp_path):
        assert run("theorem3", "--out", str(tmp_path / "t.json")) == 1
        assert run("conjecture", "--range", "10,20", "--out", str(tmp_path / "c.csv")) == 1

    def test_bound_violation_is_two_with_report_written(self, tmp_path):
        out = str(tmp_path / "coord.json")
        code = run("mix-coordinate", "--dims", "19,5", "--rounds", "0",
                   "--epsilon", "0.1", "--out", out)
        assert code == 2
        payload = json.loads(read(out))
        assert payload["verdicts"]["joint_within_epsilon"] is False

    def test_unwritable_output_is_one(self, tmp_path):
        assert run("lemma2", "--n", "19", "--T", "10",
                   "--out", str(tmp_path / "missing_dir" / "r.json")) == 1


class TestOutputs:
    def test_fig1_schema_and_uniform_level(self, tmp_path):
        out = str(tmp_path / "fig1.csv")
        assert run("fig1", "--dims", "19,5", "--t-max", "25", "--out", out) == 0
        lines = read(out).decode().splitlines()
        assert lines[0] == "T,quantum_return,classical_return,uniform_level"
        first = lines[1].split(",")
        assert float(first[3]) == 1.0 / 95.0
        assert len(lines) == 27

    def test_lemma2_payload(self, tmp_path):
        out = str(tmp_path / "r.json")
        assert run("lemma2", "--n", "19", "--T", "100", "--offset", "0",
                   "--out", out) == 0
        payload = json.loads(read(out))
        assert payload["satisfied"] is True
        assert abs(payload["rhs"] - 100152.61586030496) < 1e-6
        assert payload["lhs"] <= payload["rhs"]

    def test_conjecture_schema(self, tmp_path):
        out = str(tmp_path / "c.csv")
        assert run("conjecture", "--range", "10,40", "--pairs", "2", "--seed", "5",
                   "--T-max", "100", "--out", out) == 0
        lines = read(out).decode().splitlines()
        assert lines[0] == "n1,n2,T,lhs,rhs,satisfied"
        assert all(line.endswith("true") for line in lines[1:])
        manifest = json.loads(read(out + ".manifest.json"))
        assert manifest["command"] == "conjecture"
        assert manifest["config"]["seed"] == 5

    def test_kernel_csv_roundtrip(self, tmp_path):
        out = str(tmp_path / "k.csv")
        assert run("kernel", "--dims", "19,5", "--kind", "averaged", "--T", "24",
                   "--out", out) == 0
        rows = read(out).decode().splitlines()[1:]
        probs = np.array([float(r.split(",")[-1]) for r in rows])
        assert probs.size == 95
        assert abs(probs.sum() - 1.0) < 1e-9

    def test_svg_output(self, tmp_path):
        out = str(tmp_path / "fig1.svg")
        assert run("fig1", "--dims", "19,5", "--t-max", "25", "--format", "svg",
                   "--out", out) == 0
        body = read(out).decode()
        assert body.startswith("<svg")
        assert body.count("<polyline") == 3

    def test_mix_classical_verdict(self, tmp_path):
        out = str(tmp_path / "mc.csv")
        assert run("mix-classical", "--dims", "9,5", "--epsilon", "0.25",
                   "--t-max", "60", "--out", out) == 0
        manifest = json.loads(read(out + ".manifest.json"))
        assert manifest["config"]["epsilon"] == 0.25

    def test_theorem3_relaxed_json(self, tmp_path):
        out = str(tmp_path / "t3.json")
        assert run("theorem3", "--n1", "19", "--n2", "5", "--relaxed",
                   "--tier", "slow", "--out", out) == 0
        payload = json.loads(read(out))
        assert payload["mode"] == "relaxed"
        assert len(payload["reports"]) == 6


class TestConfigResolution:
    def test_config_file_fills_unset_flags(self, tmp_path):
        config = tmp_path / "job.cfg"
        config.write_text("n=19\nT=100\noffset=0\n")
        out = str(tmp_path / "r.json")
        assert run("lemma2", "--config", str(config), "--out", out) == 0
        payload = json.loads(read(out))
        assert payload["n"] == 19 and payload["T"] == 100.0

    def test_flags_beat_config_file(self, tmp_path):
        config = tmp_path / "job.cfg"
        config.write_text("n=19\nT=100\n")
        out = str(tmp_path / "r.json")
        assert run("lemma2", "--config", str(config), "--T", "10", "--out", out) == 0
        payload = json.loads(read(out))
        assert payload["T"] == 10.0

    def test_worker_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LATTICEMIX_PARALLEL", "1")
        out = str(tmp_path / "c.csv")
        assert run("conjecture", "--range", "10,30", "--pairs", "1", "--seed", "1",
                   "--T-max", "50", "--out", out) == 0
