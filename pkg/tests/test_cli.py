import json

import pytest

from orliczops import cli
from orliczops.errors import ConfigError

MINIMAL = """
[young]
p2 = { kind = "power", p = 2 }

[space]
atoms = [{ id = "a", mass = 4 }]

[functions]
one = { atoms = { a = 1 } }

[[run]]
name = "n"
request = "norm"
function = "one"
phi = "p2"
"""

SAMPLED = """
[young]
p4 = { kind = "power", p = 4 }
p2 = { kind = "power", p = 2 }

[space]
atoms = [{ id = 1, mass = 0.5 }, { id = 2, mass = 2 }, { id = 3, mass = 1 }]

[functions]
u = { atoms = [1.0, -2.0, 0.5] }

[transform]
t = { map = [2, 2, 1] }

[[run]]
request = "check-mult"
symbol = "u"
phi1 = "p2"
phi2 = "p4"
samples = 50

[[run]]
request = "check-comp"
transform = "t"
phi1 = "p2"
phi2 = "p4"
samples = 50

[budget]
seed = 7
"""


def issues(text):
    with pytest.raises(ConfigError) as exc:
        cli.parse_config(text)
    return [str(i) for i in exc.value.errors]


class TestParse:
    def test_minimal_config(self):
        cfg = cli.parse_config(MINIMAL)
        assert set(cfg.young) == {"p2"} and cfg.runs[0]["request"] == "norm"

    def test_undefined_function_named(self):
        errs = issues(MINIMAL.replace('function = "one"', 'function = "missing"'))
        assert len(errs) == 1 and "'missing'" in errs[0] and errs[0].startswith("line 14")

    def test_all_errors_reported(self):
        text = MINIMAL.replace('"power"', '"powr"').replace('phi = "p2"', 'phi = "p3"')
        text += '\n[[run]]\nrequest = "transpose"\n'
        errs = issues(text)
        assert any("unknown catalog name 'powr'" in e and e.startswith("line 3") for e in errs)
        assert any("'transpose'" in e for e in errs)
        assert len(errs) >= 3

    def test_malformed_generator_formula(self):
        errs = issues(MINIMAL.replace('atoms = [{ id = "a", mass = 4 }]', 'generator = { mass = "n^(" }'))
        assert any("malformed generator formula" in e and e.startswith("line 6") for e in errs)

    def test_generator_rejects_code(self):
        errs = issues(MINIMAL.replace('atoms = [{ id = "a", mass = 4 }]', 'generator = { mass = "__import__(\'os\')" }'))
        assert any("unknown function" in e for e in errs)

    def test_malformed_toml(self):
        errs = issues("[young\n")
        assert errs[0].startswith("line 1") and "malformed config" in errs[0]

    def test_unknown_section_and_budget(self):
        errs = issues(MINIMAL + "\n[budget]\nn = -1\n\n[extras]\nx = 1\n")
        assert any("unknown section 'extras'" in e for e in errs)
        assert any("invalid budget" in e for e in errs)

    def test_empty_requests(self):
        assert any("no [[run]]" in e for e in issues('[young]\np = { kind = "power", p = 2 }\n'))

    def test_example_3_10_fixture(self):
        cfg = cli.parse_config(cli.fixture_texts("3.10")["example_3_10.toml"])
        names = {k: str(v) for k, v in cfg.young.items()}
        assert names["phi1"].startswith("exp_power") and names["phi2"].startswith("power")
        assert names["phi3"].startswith("l_log_l")
        assert cfg.space["continuum"]["a"] == 2 and cfg.space["continuum"]["b"] == 3

    def test_custom_young_function(self):
        text = MINIMAL.replace('p2 = { kind = "power", p = 2 }', 'p2 = { kind = "custom", formula = "x^2/2" }')
        report = cli.run(cli.parse_config(text))
        assert report.entries[0]["norm"] == pytest.approx(2**0.5, rel=1e-8)


class TestRun:
    def test_norm_closed_form(self):
        report = cli.run(cli.parse_config(MINIMAL))
        # 4 * (1/k)^2 / 2 = 1
        assert report.entries[0]["outcome"] == "finite"
        assert report.entries[0]["norm"] == pytest.approx(2**0.5, rel=1e-8)

    def test_refusal_becomes_entry(self):
        text = MINIMAL + '\n[[run]]\nrequest = "classify-range"\noperator = "mult"\nsymbol = "one"\n'
        text += 'phi1 = "p2"\nphi2 = "p2"\nphi3 = "p2"\n'
        report = cli.run(cli.parse_config(text))
        assert report.entries[1]["outcome"] == cli.REFUSED and report.entries[1]["error"]

    def test_deterministic_bytes(self):
        first = cli.run(cli.parse_config(SAMPLED)).to_machine()
        second = cli.run(cli.parse_config(SAMPLED)).to_machine()
        assert first == second
        doc = json.loads(first)
        assert all("seconds" not in e for e in doc["entries"])
        for entry in doc["entries"]:
            assert entry["outcome"] == "Certified"
            assert entry["empirical_norm"] <= entry["bound"] * (1 + 1e-6)

    def test_timing_opt_in(self):
        report = cli.run(cli.parse_config(MINIMAL), timing=True)
        assert report.entries[0]["seconds"] >= 0

    def test_request_filter(self):
        report = cli.run(cli.parse_config(SAMPLED), {"check-comp"})
        assert [e["request"] for e in report.entries] == ["check-comp"]

    def test_text_report_lists_criteria(self):
        text = cli.run(cli.parse_config(SAMPLED)).to_text()
        assert "mult_sufficient_atomic" in text and "comp_necessary" in text


class TestExpectations:
    def test_float_tolerance(self):
        report = cli.run(cli.parse_config(MINIMAL))
        assert cli.check_expectations(report, {"n": {"norm": 2**0.5 * (1 + 1e-12)}}) == []
        assert cli.check_expectations(report, {"n": {"norm": 1.5}})

    def test_outcome_string(self):
        report = cli.run(cli.parse_config(MINIMAL))
        assert cli.check_expectations(report, {"n": "finite"}) == []
        assert cli.check_expectations(report, {"n": "diverged"})[0]["got"] == "finite"


@pytest.mark.parametrize("name", cli.EXAMPLES)
def test_fixture_expectations(name):
    report, mismatches = cli.reproduce_example(name)
    assert mismatches == []
    assert report.entries


class TestMain:
    def write(self, tmp_path, text):
        path = tmp_path / "c.toml"
        path.write_text(text)
        return str(path)

    def test_ok(self, tmp_path, capsys):
        assert cli.main(["norm", "--config", self.write(tmp_path, MINIMAL)]) == 0
        assert "norm: 1.41421356" in capsys.readouterr().out

    def test_config_error_exit(self, tmp_path, capsys):
        path = self.write(tmp_path, MINIMAL.replace('"p2"\n', '"p9"\n'))
        assert cli.main(["run", "--config", path]) == 1
        assert "undefined young function 'p9'" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert cli.main(["run", "--config", str(tmp_path / "nope.toml")]) == 1

    def test_mismatch_exit(self, tmp_path, capsys):
        path = self.write(tmp_path, MINIMAL + '\n[expect]\nn = "diverged"\n')
        assert cli.main(["run", "--config", path]) == 2
        assert "mismatch: n.outcome" in capsys.readouterr().err

    def test_subcommand_without_requests(self, tmp_path):
        assert cli.main(["check-comp", "--config", self.write(tmp_path, MINIMAL)]) == 1

    def test_out_and_overrides(self, tmp_path):
        out = tmp_path / "r.json"
        args = ["run", "--config", self.write(tmp_path, SAMPLED), "--format", "machine", "--out", str(out),
                "--seed", "3", "--budget-n", "500", "--tol", "1e-8", "--threshold", "1e10"]
        assert cli.main(args) == 0
        budget = json.loads(out.read_text())["budget"]
        assert (budget["seed"], budget["n"], budget["tol"], budget["threshold"]) == (3, 500, 1e-8, 1e10)

    def test_reproduce_example(self, capsys):
        assert cli.main(["reproduce-example", "3.11"]) == 0
        assert "Refuted" in capsys.readouterr().out
