import pytest
from click.testing import CliRunner

from app import __version__
from app.cli import main
from app.services.cluster_service import cluster_service

BELL = "# bell pair\nwires 2\nprep 1 1 0 0 0\ncnot 0 1\n"
ROTATIONS = "wires 1\nrot 0 0.3 1.1 2.0\nrot 0 -0.4 0.2 0.9\nrot 0 1.5 -2.5 0.1\n"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def circuit_file(tmp_path):
    def write(text: str, name: str = "circuit.circ"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def rows(stdout: str) -> list[str]:
    return [line for line in stdout.splitlines() if not line.startswith("#")]


class TestSimulate:
    def test_bell_histogram(self, runner, circuit_file):
        args = ["simulate", circuit_file(BELL), "--seed", "7", "--shots", "40"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[:6] == [
            "# seed=7",
            "# shots=40",
            "# strategy=once",
            "# readout_basis=Z",
            "# qubits=18",
            "# bits\tcount",
        ]
        counts = dict(row.split("\t") for row in rows(result.stdout))
        assert set(counts) <= {"00", "11"}
        assert sum(int(c) for c in counts.values()) == 40

    def test_identical_runs_are_byte_identical(self, runner, circuit_file):
        args = ["simulate", circuit_file(ROTATIONS), "--seed", "3", "--shots", "30"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == 0
        assert first.stdout == second.stdout

    def test_staged_matches_once(self, runner, circuit_file):
        path = circuit_file(ROTATIONS)
        base = ["simulate", path, "--seed", "5", "--shots", "30"]
        once = runner.invoke(main, base)
        staged = runner.invoke(main, base + ["--strategy", "staged", "--segments", "4,8"])
        assert staged.exit_code == 0, staged.output
        assert "# strategy=staged" in staged.stdout
        assert rows(once.stdout) == rows(staged.stdout)

    def test_trace(self, runner, circuit_file):
        result = runner.invoke(
            main, ["simulate", circuit_file(ROTATIONS), "--shots", "2", "--trace"]
        )
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "step 0 site=(0,0) basis=X sign_dep=0"
        assert "round 0 steps=0,4,8" in lines
        assert "shot 1" in lines
        assert any(line.startswith("frame 0 x=") for line in lines)

    def test_output_file(self, runner, circuit_file, tmp_path):
        target = tmp_path / "histogram.tsv"
        result = runner.invoke(
            main, ["simulate", circuit_file(BELL), "--shots", "5", "--output", str(target)]
        )
        assert result.exit_code == 0
        assert result.stdout == ""
        assert target.read_text().startswith("# seed=7\n")

    def test_parse_error_is_a_usage_error(self, runner, circuit_file):
        result = runner.invoke(main, ["simulate", circuit_file("wires 1\ncnot 0 1\n")])
        assert result.exit_code == 2
        assert "line 2" in result.output

    def test_bad_cut(self, runner, circuit_file):
        result = runner.invoke(
            main,
            ["simulate", circuit_file(ROTATIONS), "--strategy", "staged", "--segments", "5"],
        )
        assert result.exit_code == 2

    def test_untrimmed_bell_is_too_large_to_entangle_at_once(self, runner, circuit_file):
        result = runner.invoke(main, ["simulate", circuit_file(BELL), "--no-trim", "--shots", "1"])
        assert result.exit_code == 2
        assert "--strategy staged" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(main, ["simulate", str(tmp_path / "absent.circ")])
        assert result.exit_code == 2


class TestVerify:
    def test_small_shapes_pass(self, runner):
        result = runner.invoke(main, ["verify", "--max-qubits", "6", "--random-shapes", "3"])
        assert result.exit_code == 0, result.output
        assert "# failures=0" in result.stdout.splitlines()
        assert any(line.startswith("rule\t") for line in rows(result.stdout))

    def test_failure_exits_with_one(self, runner, mocker):
        mocker.patch.object(cluster_service, "verify_cluster", return_value=False)
        result = runner.invoke(
            main, ["verify", "--max-qubits", "2", "--random-shapes", "0", "--no-frame-rules"]
        )
        assert result.exit_code == 1
        assert "FAIL" in result.stdout

    def test_max_qubits_range(self, runner):
        assert runner.invoke(main, ["verify", "--max-qubits", "0"]).exit_code == 2


class TestGadgetTest:
    def test_rotation(self, runner):
        result = runner.invoke(main, ["gadget-test", "rot", "0.3", "1.1", "2.0", "--inputs", "2"])
        assert result.exit_code == 0, result.output
        row = rows(result.stdout)[0].split("\t")
        assert row[0] == "rot"
        assert row[1] == "16"
        assert row[-1] == "pass"

    def test_negative_angles(self, runner):
        result = runner.invoke(main, ["gadget-test", "rot", "-0.3", "1.1", "-2.0", "--inputs", "1"])
        assert result.exit_code == 0, result.output

    def test_wire_and_prep(self, runner):
        assert runner.invoke(main, ["gadget-test", "wire", "4", "--inputs", "2"]).exit_code == 0
        prep = ["gadget-test", "prep", "0.6", "0", "0", "0.8"]
        assert runner.invoke(main, prep).exit_code == 0

    def test_composable_cnot_samples_branches(self, runner):
        result = runner.invoke(
            main,
            ["gadget-test", "cnot", "--composable", "--branches", "2", "--inputs", "1"],
        )
        assert result.exit_code == 0, result.output
        assert rows(result.stdout)[0].split("\t")[1] == "2"

    def test_wrong_parameter_count(self, runner):
        assert runner.invoke(main, ["gadget-test", "rot", "0.3"]).exit_code == 2

    def test_failure_exits_with_one(self, runner, mocker):
        mocker.patch("app.commands.gadget_test.sweep_branches", return_value=0.5)
        result = runner.invoke(main, ["gadget-test", "cnot"])
        assert result.exit_code == 1
        assert rows(result.stdout)[0].endswith("FAIL")


class TestPercolate:
    def test_curve(self, runner):
        args = ["percolate", "--d", "2", "--L", "8", "--p", "0.3", "--p", "0.9"]
        result = runner.invoke(main, args + ["--trials", "20", "--seed", "3"])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == "# seed=3"
        assert lines[1] == "# d\tL\tp\ttrials\tspanning_fraction\tstderr"
        assert [line.split("\t")[2] for line in lines[2:]] == ["0.300000", "0.900000"]

    def test_threshold(self, runner):
        args = ["percolate", "--threshold", "--d", "2", "--sizes", "8,12", "--trials", "20"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        assert any(line.startswith("# estimate=") for line in result.stdout.splitlines())
        assert len(rows(result.stdout)) == 2

    def test_threshold_needs_two_sizes(self, runner):
        result = runner.invoke(main, ["percolate", "--threshold", "--sizes", "8"])
        assert result.exit_code == 2

    def test_bad_sizes(self, runner):
        result = runner.invoke(main, ["percolate", "--threshold", "--sizes", "eight"])
        assert result.exit_code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--max-qubits", "2"],
        ["gadget-test", "wire", "3"],
        ["percolate", "--L", "4", "--trials", "2"],
    ],
    ids=["verify", "gadget-test", "percolate"],
)
def test_negative_seed_is_a_usage_error(runner, args):
    result = runner.invoke(main, args + ["--seed", "-1"])
    assert result.exit_code == 2
    assert "--seed" in result.output


def test_negative_seed_on_simulate(runner, circuit_file):
    result = runner.invoke(main, ["simulate", circuit_file(ROTATIONS), "--seed", "-1"])
    assert result.exit_code == 2
    assert "--seed" in result.output


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "oneway" in result.stdout
    assert __version__ in result.stdout
