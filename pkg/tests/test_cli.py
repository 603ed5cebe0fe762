import json
import math

import pytest

from sgordon.cli import ConfigError, main, parse_config, run
from sgordon.potential import QuasiperiodicPotential, evaluate

FREE_BANDS = """\
command: bands
potential: {type: free}
params:
  lambda_grid: {start: 0, stop: 10, num: 6}
"""


def _write(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_free():
    cfg = parse_config(FREE_BANDS)
    assert cfg.potential.sigma == () and cfg.potential.tau == ()
    assert cfg.params["lambda_grid"][-1] == 10.0


def test_parse_delta_comb():
    cfg = parse_config("command: bands\npotential: {type: delta_comb, g: 1}\n"
                       "params: {lambda_grid: [1.0]}\n")
    assert evaluate(cfg.potential.sigma, 0.25) == pytest.approx(-0.25)
    assert evaluate(cfg.potential.tau, 0.5) == 1.0


def test_reject_sigma_exponent():
    text = """\
command: decay
potential:
  type: sigma_tau
  sigma: [{type: power, center: 0.0, exponent: 0.7}]
"""
    with pytest.raises(ConfigError, match="1/2") as info:
        parse_config(text)
    assert info.value.line in (3, 4)


def test_malformed_position():
    with pytest.raises(ConfigError) as info:
        parse_config("command: bands\nparams: {lambda_grid: [1, 2}\n")
    assert info.value.line == 2 and info.value.col is not None


def test_unknown_keys():
    with pytest.raises(ConfigError, match="unknown key 'lamda'"):
        parse_config(FREE_BANDS + "  lamda: 3\n")
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(FREE_BANDS + "extra: 1\n")


def test_named_field_errors():
    with pytest.raises(ConfigError, match="params.tol"):
        parse_config(FREE_BANDS + "  tol: -1\n")
    with pytest.raises(ConfigError, match="lambda_grid"):
        parse_config("command: bands\npotential: {type: free}\n")


def test_quasiperiodic_alpha_forms():
    base = "command: decay\npotential:\n  type: quasiperiodic\n  alpha: {}\n"
    cfg = parse_config(base.format("{liouville: {base: 10, n: 3}}"))
    assert isinstance(cfg.potential, QuasiperiodicPotential)
    assert float(cfg.potential.alpha) == 0.110001
    cfg = parse_config(base.format("{cf: [2, 1, 2]}"))
    assert cfg.potential.alpha == pytest.approx(3 / 8)
    cfg = parse_config(base.format("'1/3'"))
    assert cfg.potential.alpha == pytest.approx(1 / 3)


def test_bands_csv(tmp_path, capsys):
    assert main([_write(tmp_path, FREE_BANDS)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "lambda,discriminant,in_band"
    lam, disc, band = out[2].split(",")
    assert float(disc) == pytest.approx(2 * math.cos(math.sqrt(float(lam))), abs=1e-12)
    assert band == "true"


def test_verify_bounds_json(tmp_path, capsys):
    text = ("command: verify-bounds\npotential: {type: delta_comb, g: 2}\n"
            "params: {lambda_grid: [-2, 5], samples: 3}\noutput: {format: json}\n")
    assert main([_write(tmp_path, text)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pass"] is True and all(r["passed"] for r in doc["rows"])


def test_gordon_overflow_exit(tmp_path, capsys):
    text = """\
command: gordon
potential:
  type: quasiperiodic
  sigma2: [{type: fourier, index: 1, sin: 1.0}]
  alpha: {liouville: {base: 10, n: 4}}
params: {m_max: 9, C: 1.0}
"""
    assert main([_write(tmp_path, text)]) == 2
    assert "desk-scale" in capsys.readouterr().err


def test_input_errors_exit_2(tmp_path):
    assert main([str(tmp_path / "missing.yaml")]) == 2
    assert main([_write(tmp_path, "command: nope\n")]) == 2


def test_failed_certificate_exit_1(tmp_path):
    text = """\
command: gordon
potential:
  type: quasiperiodic
  sigma2: [{type: fourier, index: 1, sin: 1.0}]
  alpha: {liouville: {base: 10, n: 3}}
params: {m_max: 2, C: 1.0}
"""
    assert main([_write(tmp_path, text)]) == 1


def test_determinism_and_threads(tmp_path, monkeypatch):
    text = ("command: eigen-scan\npotential: {type: delta_comb, g: 1}\n"
            "params: {lambda_grid: {start: -1, stop: 20, num: 12}, angles: 60}\n")
    cfg = _write(tmp_path, text)
    outs = []
    for threads in ("", "1", "4"):
        monkeypatch.setenv("SGORDON_THREADS", threads)
        path = tmp_path / f"r{threads or 'x'}.csv"
        assert main([cfg, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_flag_overrides(tmp_path, capsys):
    cfg = _write(tmp_path, FREE_BANDS)
    assert main([cfg, "--format", "json", "--tol", "1e-8", "--command", "monodromy"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["command"] == "monodromy"


def test_every_command_runs(tmp_path):
    configs = {
        "monodromy": "potential: {type: delta_comb}\nparams: {lambda: 2.0}\n",
        "three-periods": "potential: {type: delta_comb}\nparams: {lambda_grid: [0, 9]}\n",
        "decay": "potential: {type: free}\nparams: {lambda: 1, T_max: 2, n_samples: 4}\n",
        "norms": "potential: {type: delta_comb, g: 3}\n",
        "sobolev-check": "params: {sobolev: {modes: [[1, 0, 1]], n: 128}}\n",
    }
    for cmd, body in configs.items():
        code, text = run(parse_config(f"command: {cmd}\n{body}"))
        assert code == 0, cmd
        assert text.count("\n") >= 2
