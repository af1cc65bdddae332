"""Config parsing, merging, and object construction."""

import numpy as np
import pytest

from qhlab.config import (build_domain, build_grid, load_config,
                          merge_overrides, parse_config_text, parse_point)
from qhlab.errors import ConfigError
from qhlab.geom.domains import GraphDomain


def test_parse_point_separators():
    assert np.allclose(parse_point("1.5, -2"), [1.5, -2.0])
    assert np.allclose(parse_point("0;1;2"), [0.0, 1.0, 2.0])
    with pytest.raises(ConfigError):
        parse_point("1, x")


def test_parse_config_text_full_example():
    text = """
# an experiment
domain.kind = paraboloid
domain.params.kappa = 2.0

window.lo = -1
window.hi = 1
grid.spacing = 0.015625
experiment.mode = tangential-pair
experiment.rungs = 8
experiment.c_values = 1.01, 1.2
experiment.zeta = 0, 0
output.format = csv
"""
    cfg = parse_config_text(text)
    assert cfg["domain.kind"] == "paraboloid"
    assert cfg["domain.params.kappa"] == 2.0
    assert cfg["grid.spacing"] == 0.015625
    assert cfg["experiment.rungs"] == 8
    assert cfg["experiment.c_values"] == [1.01, 1.2]
    assert np.allclose(cfg["experiment.zeta"], [0.0, 0.0])
    assert cfg["output.format"] == "csv"


def test_parse_config_text_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 2: unknown key"):
        parse_config_text("domain.kind = disc\nboundary.kind = round\n")
    with pytest.raises(ConfigError, match="line 1: expected 'key = value'"):
        parse_config_text("domain.kind disc\n")
    with pytest.raises(ConfigError, match="line 3: duplicate key"):
        parse_config_text("domain.kind = disc\n\ndomain.kind = ball\n")
    with pytest.raises(ConfigError, match="line 1: bad value for grid.spacing"):
        parse_config_text("grid.spacing = tiny\n")
    with pytest.raises(ConfigError, match="line 1: bad value"):
        parse_config_text("output.format = yaml\n")
    with pytest.raises(ConfigError, match="needs a number"):
        parse_config_text("domain.params.kappa = soft\n")


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("domain.kind = disc\n")
    assert load_config(path) == {"domain.kind": "disc"}
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


def test_merge_overrides_none_does_not_shadow():
    base = {"domain.kind": "disc", "experiment.rungs": 8}
    merged = merge_overrides(base, {"experiment.rungs": 4,
                                    "domain.kind": None,
                                    "grid.spacing": 0.1})
    assert merged == {"domain.kind": "disc", "experiment.rungs": 4,
                      "grid.spacing": 0.1}
    assert base["experiment.rungs"] == 8  # input untouched


def test_build_domain():
    dom = build_domain({"domain.kind": "paraboloid",
                        "domain.params.kappa": 2.0,
                        "window.lo": -1.0, "window.hi": 1.0})
    assert isinstance(dom, GraphDomain)
    assert dom.profile.fpp(0.0) == 2.0
    assert dom.window == (-1.0, 1.0)

    with pytest.raises(ConfigError, match="domain.kind is required"):
        build_domain({})
    with pytest.raises(ConfigError, match="together"):
        build_domain({"domain.kind": "paraboloid", "window.lo": -1.0})
    with pytest.raises(ConfigError):
        build_domain({"domain.kind": "torus"})
    with pytest.raises(ConfigError):
        build_domain({"domain.kind": "disc", "domain.params.radius": -1.0})


def test_build_domain_dim_passthrough():
    dom = build_domain({"domain.kind": "ball", "domain.dim": 2})
    assert dom.dim == 2


def test_build_grid():
    assert build_grid({"domain.kind": "disc"}) is None
    spec = build_grid({"grid.spacing": 0.05, "grid.margin": 3.0,
                       "grid.stencil": 8})
    assert spec.spacing == 0.05
    assert spec.margin == 3.0
    assert spec.stencil == 8
    with pytest.raises(ConfigError, match="grid.spacing is required"):
        build_grid({"grid.margin": 3.0})
    with pytest.raises(ConfigError):
        build_grid({"grid.spacing": -0.1})
