import csv
import io
import json

import numpy as np
import pytest

from permcap.channel import JOINT_OMEGA_5X5
from permcap.cli import main, parse_sizes
from permcap.errors import ScenarioError
from permcap.experiments import HEADERS, format_value, run_complexity, run_experiment, to_csv
from permcap.permanents import ALGORITHMS
from permcap.scenario import DEFAULT_GRID, load_scenario, parse_scenario

JOINT = {
    "nt": 5, "nr": 5, "renormalize": True,
    "omega": (JOINT_OMEGA_5X5 * 5.7 / 25).tolist(),
}
KRON = {"nt": 5, "nr": 5, "kronecker": {"alpha_t": 0.4, "alpha_r": 0.6}}


def doc(experiment, channel=None, **kw):
    out = {"experiment": experiment, **(channel or {}), **kw}
    return out


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestScenario:
    def test_defaults(self):
        sc = parse_scenario(doc("bound_vs_mc", KRON))
        assert sc.snr_db_grid == DEFAULT_GRID == (2, 4, 6, 8, 10, 12, 14, 16)
        assert (sc.mc_samples, sc.seed) == (20000, 42)
        assert sc.channel.kronecker is not None

    def test_joint_renormalized(self):
        sc = parse_scenario(doc("iwfa_trace", JOINT))
        np.testing.assert_allclose(sc.channel.coupling.omega, JOINT_OMEGA_5X5, rtol=1e-12)

    def test_stats_channel(self):
        st = {"nt": 2, "nr": 2, "stats": {"d": [[1, 0], [0, 0]], "m": [[1, 1], [1, 0]]}}
        sc = parse_scenario(doc("bound_vs_mc", st))
        np.testing.assert_array_equal(sc.channel.coupling.omega, [[2, 1], [1, 0]])

    def test_kronecker_eigenvalues(self):
        ch = {"nt": 2, "nr": 1, "kronecker": {"lambda_t": [1.5, 0.5], "lambda_r": [1.0]}}
        sc = parse_scenario(doc("bound_vs_mc", ch))
        np.testing.assert_array_equal(sc.channel.coupling.omega, [[1.5, 0.5]])

    def test_complexity_needs_no_channel(self):
        sc = parse_scenario(doc("complexity", n_grid=[2, 3]))
        assert sc.channel is None and sc.n_grid == (2, 3)

    @pytest.mark.parametrize(
        "bad,field",
        [
            (doc("nope", KRON), "experiment"),
            (doc("bound_vs_mc"), "channel"),
            (doc("bound_vs_mc", {**KRON, "omega": [[1]]}), "channel"),
            (doc("bound_vs_mc", {**JOINT, "nr": 4}), "omega"),
            (doc("bound_vs_mc", {**JOINT, "renormalize": False}), "omega"),
            (doc("bound_vs_mc", {**JOINT, "renormalize": "yes"}), "renormalize"),
            (doc("bound_vs_mc", {**KRON, "kronecker": {"alpha_t": 2, "alpha_r": 0}}), "kronecker.alpha_t"),
            (doc("bound_vs_mc", {**KRON, "kronecker": {"alpha_t": 0.1}}), "kronecker"),
            (doc("bound_vs_mc", {"nr": 2, "kronecker": {"alpha_t": 0, "alpha_r": 0}}), "nt"),
            (doc("bound_vs_mc", {**KRON, "nt": 0}), "nt"),
            (doc("bound_vs_mc", KRON, snr_db_grid=[2, 2]), "snr_db_grid"),
            (doc("bound_vs_mc", KRON, snr_db_grid=[]), "snr_db_grid"),
            (doc("bound_vs_mc", KRON, snr_db_grid=[1, "a"]), "snr_db_grid[1]"),
            (doc("bound_vs_mc", KRON, mc_samples=99), "mc_samples"),
            (doc("bound_vs_mc", KRON, mc_samples=1.5), "mc_samples"),
            (doc("bound_vs_mc", KRON, seed=-1), "seed"),
            (doc("bound_vs_mc", KRON, seed=2**64), "seed"),
            (doc("bound_vs_mc", KRON, colour="red"), "colour"),
            (doc("complexity", n_grid=[1, 2]), "n_grid"),
            (doc("lemma4_check", lemma4={"dim": 0}), "lemma4.dim"),
            (
                doc("bound_vs_mc", {"nt": 2, "nr": 2, "stats": {"d": [[0, 1], [0, 0]], "m": [[1, 0], [1, 1]]}}),
                "stats",
            ),
            ([1, 2], "$"),
        ],
    )
    def test_errors_name_the_field(self, bad, field):
        with pytest.raises(ScenarioError) as err:
            parse_scenario(bad)
        assert err.value.field == field

    def test_overrides(self):
        sc = parse_scenario(doc("bound_vs_mc", KRON)).with_overrides(seed=7, samples=500)
        assert (sc.seed, sc.mc_samples) == (7, 500)
        with pytest.raises(ScenarioError):
            sc.with_overrides(samples=10)

    def test_load_errors(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text("{not json")
        with pytest.raises(ScenarioError):
            load_scenario(p)
        with pytest.raises(ScenarioError):
            load_scenario(tmp_path / "missing.json")


class TestExperiments:
    def test_format(self):
        assert format_value(1 / 3) == "0.333333333333"
        assert format_value(12) == "12"
        assert format_value(True) == "1"
        assert format_value(None) == ""

    def test_complexity_table(self):
        header, rows = run_complexity(range(2, 9))
        assert header == HEADERS["complexity"]
        by_n = {r[0]: dict(zip(header, r)) for r in rows}
        assert by_n[2]["poly_ryser"] == 7
        for n in range(2, 7):
            for a in ALGORITHMS:
                assert by_n[n][a] == by_n[n]["counted_" + a]
        assert by_n[7]["counted_ryser"] is None
        for n in range(3, 9):
            for m in ("definition", "laplace", "ryser"):
                assert by_n[n]["poly_" + m] <= by_n[n][m]
            assert (by_n[n]["poly_laplace"] < by_n[n]["poly_ryser"]) == (n <= 5)

    def test_bound_vs_mc(self):
        sc = parse_scenario(doc("bound_vs_mc", JOINT, snr_db_grid=[0, 8], mc_samples=2000))
        header, rows = run_experiment(sc)
        assert header == HEADERS["bound_vs_mc"]
        for snr, b, mean, se in rows:
            assert mean - 3 * se <= b

    def test_iwfa_trace_layout(self):
        sc = parse_scenario(doc("iwfa_trace", JOINT, snr_db_grid=[10]))
        header, rows = run_experiment(sc)
        iters = sorted({r[1] for r in rows})
        assert all(len([r for r in rows if r[1] == k]) == 5 for k in iters)
        bounds = [next(r[2] for r in rows if r[1] == k) for k in iters]
        deltas = np.diff(bounds)
        assert np.all(deltas >= 0)
        # iteration rows before the increment drops below 1e-10
        assert np.flatnonzero(deltas < 1e-10)[0] + 1 <= 6

    def test_lemma4(self):
        sc = parse_scenario(doc("lemma4_check", mc_samples=20000, lemma4={"profiles": 2, "dim": 2}))
        header, rows = run_experiment(sc)
        assert len(rows) == 2 and header == HEADERS["lemma4_check"]

    def test_deterministic_and_worker_independent(self):
        sc = parse_scenario(doc("iwfa_vs_policies", KRON, snr_db_grid=[0, 6], mc_samples=300))
        a = to_csv(*run_experiment(sc))
        b = to_csv(*run_experiment(sc, workers=2))
        assert a == b
        assert a.splitlines()[0] == ",".join(HEADERS["iwfa_vs_policies"])


class TestCli:
    def test_parse_sizes(self):
        assert parse_sizes("2..4") == (2, 3, 4)
        assert parse_sizes("2,5,7") == (2, 5, 7)
        for bad in ("1..3", "4..2", "x", "2,2"):
            with pytest.raises(ScenarioError):
                parse_sizes(bad)

    def test_complexity_stdout(self, capsys):
        assert main(["complexity", "--n", "2..4", "--out", "-"]) == 0
        header, rows = read_csv(capsys.readouterr().out)
        assert header == HEADERS["complexity"]
        assert [r[0] for r in rows] == ["2", "3", "4"]

    def test_run_to_file_is_byte_identical(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(json.dumps(doc("bound_vs_mc", KRON, snr_db_grid=[4], mc_samples=200)))
        outs = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for out in outs:
            assert main(["run", str(p), "--out", str(out)]) == 0
        assert outs[0].read_bytes() == outs[1].read_bytes()
        assert main(["run", str(p), "--out", str(outs[1]), "--seed", "43"]) == 0
        assert outs[0].read_bytes() != outs[1].read_bytes()

    def test_samples_override(self, tmp_path, capsys):
        p = tmp_path / "s.json"
        p.write_text(json.dumps(doc("bound_vs_mc", KRON, snr_db_grid=[4])))
        assert main(["run", str(p), "--out", "-", "--samples", "150"]) == 0
        capsys.readouterr()
        assert main(["run", str(p), "--out", "-", "--samples", "5"]) == 1
        assert "mc_samples" in capsys.readouterr().err

    def test_validation_exit_code(self, tmp_path, capsys):
        p = tmp_path / "s.json"
        p.write_text(json.dumps(doc("bound_vs_mc", {**KRON, "nt": "five"})))
        assert main(["run", str(p), "--out", "-"]) == 1
        assert "nt" in capsys.readouterr().err

    def test_usage_errors(self, capsys):
        assert main(["run"]) == 1
        assert main(["frobnicate"]) == 1
        assert main(["complexity", "--n", "0..3", "--out", "-"]) == 1

    def test_help(self, capsys):
        assert main(["--help"]) == 0
        assert "complexity" in capsys.readouterr().out

    def test_numeric_error_exit_code(self, tmp_path, capsys):
        # gamma so large that the extended permanent overflows
        p = tmp_path / "s.json"
        p.write_text(json.dumps(doc("iwfa_trace", JOINT, snr_db_grid=[3000])))
        assert main(["run", str(p), "--out", "-"]) == 2
        assert "numeric" in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        assert main(["complexity", "--n", "2", "--out", str(tmp_path / "no" / "x.csv")]) == 1
